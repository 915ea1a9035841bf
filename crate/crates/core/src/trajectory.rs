//! Piecewise polynomials in time with spatial-vector coefficients.
//!
//! On each interval `J_n = (t_n, t_{n+1}]` a trajectory is stored by its
//! nodal values: at the Radau points `t_n + c_i k` for the discontinuous
//! degree `q-1` space, and at `t_n` plus the Radau points for the
//! continuous degree `q` space. Evaluation at a node `t_{n+1}` belongs to
//! interval `n`.

use alloc::vec;
use alloc::vec::Vec;

// Needed without std; redundant when std is linked elsewhere in the graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::BandMatrix;
use crate::radau::{gauss_rule, legendre_shifted, radau_tableau, LagrangeBasis};
use crate::{Error, Result};

/// Uniform partition of `[0, T]` into `N` intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePartition {
    end: f64,
    intervals: usize,
}

impl TimePartition {
    pub fn new(end: f64, intervals: usize) -> Result<Self> {
        if !(end > 0.0) || !end.is_finite() {
            return Err(Error::InvalidGrid(alloc::format!("final time {end} must be positive")));
        }
        if intervals == 0 {
            return Err(Error::InvalidGrid("interval count must be at least 1".into()));
        }
        Ok(Self { end, intervals })
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn step(&self) -> f64 {
        self.end / self.intervals as f64
    }

    /// `t_n`, with `t_N = T` exactly.
    pub fn node(&self, n: usize) -> f64 {
        if n == self.intervals {
            self.end
        } else {
            n as f64 * self.step()
        }
    }

    /// `t_n + tau k`.
    pub fn local_time(&self, n: usize, tau: f64) -> f64 {
        self.node(n) + tau * self.step()
    }

    /// Owning interval and local coordinate of `t` under `(t_n, t_{n+1}]`
    /// ownership; `t = 0` maps to `(0, 0.0)`.
    pub fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let k = self.step();
        if !(t >= -1e-14 * self.end) || t > self.end * (1.0 + 1e-14) {
            return Err(Error::TimeOutOfRange { t, end: self.end });
        }
        if t <= 0.0 {
            return Ok((0, 0.0));
        }
        let s = t / k;
        let nearest = s.round();
        if (s - nearest).abs() <= 1e-12 * s.max(1.0) && nearest >= 1.0 {
            // t coincides with the node t_j, owned by interval j-1
            return Ok(((nearest as usize - 1).min(self.intervals - 1), 1.0));
        }
        let idx = (s.ceil() as usize).saturating_sub(1).min(self.intervals - 1);
        Ok((idx, (t - self.node(idx)) / k))
    }
}

/// Continuity class of a piecewise trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Continuity {
    /// Degree `q-1`, nodal values at the Radau points.
    Discontinuous,
    /// Degree `q`, nodal values at `t_n` and the Radau points.
    Continuous,
}

/// A field evaluable interval by interval in local coordinates.
pub trait TimeField {
    fn dim(&self) -> usize;
    /// Value at `t_n + tau k` as seen from interval `n`.
    fn eval_local(&self, n: usize, tau: f64, out: &mut [f64]);
}

/// Piecewise polynomial in time with values in `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseTrajectory {
    partition: TimePartition,
    radau: Vec<f64>,
    continuity: Continuity,
    basis: LagrangeBasis,
    dim: usize,
    /// Flat `[interval][local node][component]`.
    values: Vec<f64>,
    initial: Option<Vec<f64>>,
}

impl PiecewiseTrajectory {
    /// Discontinuous trajectory from stage values `values[n][i]` at `t_n + c_i k`.
    pub fn discontinuous(partition: TimePartition, radau: &[f64], values: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let basis = LagrangeBasis::new(radau)?;
        Self::build(partition, radau, Continuity::Discontinuous, basis, values)
    }

    /// Continuous trajectory from values `values[n][j]` at `t_n` (`j = 0`)
    /// and `t_n + c_j k` (`j >= 1`).
    pub fn continuous(partition: TimePartition, radau: &[f64], values: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let mut nodes = Vec::with_capacity(radau.len() + 1);
        nodes.push(0.0);
        nodes.extend_from_slice(radau);
        let basis = LagrangeBasis::new(&nodes)?;
        let traj = Self::build(partition, radau, Continuity::Continuous, basis, values)?;
        let q = radau.len();
        for n in 1..partition.intervals() {
            let left = traj.nodal(n - 1, q);
            let right = traj.nodal(n, 0);
            for (a, b) in left.iter().zip(right) {
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::Internal(alloc::format!("continuity violated at node {n}")));
                }
            }
        }
        Ok(traj)
    }

    fn build(
        partition: TimePartition,
        radau: &[f64],
        continuity: Continuity,
        basis: LagrangeBasis,
        values: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        if values.len() != partition.intervals() {
            return Err(Error::DimensionMismatch { expected: partition.intervals(), found: values.len() });
        }
        let local = basis.len();
        let dim = values.first().and_then(|v| v.first()).map_or(0, |v| v.len());
        let mut flat = Vec::with_capacity(values.len() * local * dim);
        for interval in values {
            if interval.len() != local {
                return Err(Error::DegreeMismatch { expected: local - 1, found: interval.len().wrapping_sub(1) });
            }
            for v in interval {
                if v.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
                }
                flat.extend(v);
            }
        }
        Ok(Self { partition, radau: radau.to_vec(), continuity, basis, dim, values: flat, initial: None })
    }

    /// Attaches the value owned by `t = 0` (the initial datum `U_0`).
    pub fn with_initial(mut self, initial: Vec<f64>) -> Result<Self> {
        if initial.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: initial.len() });
        }
        self.initial = Some(initial);
        Ok(self)
    }

    pub fn partition(&self) -> &TimePartition {
        &self.partition
    }

    pub fn radau_nodes(&self) -> &[f64] {
        &self.radau
    }

    pub fn stages(&self) -> usize {
        self.radau.len()
    }

    pub fn continuity(&self) -> Continuity {
        self.continuity
    }

    pub fn degree(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn local_nodes(&self) -> &[f64] {
        self.basis.nodes()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn intervals(&self) -> usize {
        self.partition.intervals()
    }

    pub fn initial_value(&self) -> Option<&[f64]> {
        self.initial.as_deref()
    }

    /// Stored value at local node `j` of interval `n`.
    pub fn nodal(&self, n: usize, j: usize) -> &[f64] {
        let start = (n * self.basis.len() + j) * self.dim;
        &self.values[start..start + self.dim]
    }

    /// Value at the Radau point `t_n + c_i k`.
    pub fn radau_value(&self, n: usize, i: usize) -> &[f64] {
        match self.continuity {
            Continuity::Discontinuous => self.nodal(n, i),
            Continuity::Continuous => self.nodal(n, i + 1),
        }
    }

    /// `v(t_{n+1})`, the nodal value owned by interval `n`.
    pub fn end_value(&self, n: usize) -> &[f64] {
        self.radau_value(n, self.stages() - 1)
    }

    /// `v(t_n)` in the left-limit sense: the stored initial value for `n = 0`.
    pub fn left_value(&self, n: usize) -> Option<&[f64]> {
        if n == 0 {
            match self.continuity {
                Continuity::Continuous => Some(self.nodal(0, 0)),
                Continuity::Discontinuous => self.initial_value(),
            }
        } else {
            Some(self.end_value(n - 1))
        }
    }

    pub fn eval_local_into(&self, n: usize, tau: f64, out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for j in 0..self.basis.len() {
            let w = self.basis.value(j, tau);
            if w != 0.0 {
                for (o, v) in out.iter_mut().zip(self.nodal(n, j)) {
                    *o += w * v;
                }
            }
        }
    }

    /// Time derivative on interval `n` at local coordinate `tau`.
    pub fn derivative_local_into(&self, n: usize, tau: f64, out: &mut [f64]) {
        let inv_k = 1.0 / self.partition.step();
        out.iter_mut().for_each(|o| *o = 0.0);
        for j in 0..self.basis.len() {
            let w = self.basis.derivative(j, tau) * inv_k;
            for (o, v) in out.iter_mut().zip(self.nodal(n, j)) {
                *o += w * v;
            }
        }
    }

    /// `v(t)` with `(t_n, t_{n+1}]` ownership.
    ///
    /// At `t = 0` a continuous trajectory returns its value; a discontinuous
    /// one returns [`Error::AmbiguousInitialValue`].
    pub fn evaluate(&self, t: f64) -> Result<Vec<f64>> {
        let (n, tau) = self.partition.locate(t)?;
        if tau == 0.0 && self.continuity == Continuity::Discontinuous {
            return Err(Error::AmbiguousInitialValue);
        }
        let mut out = vec![0.0; self.dim];
        self.eval_local_into(n, tau, &mut out);
        Ok(out)
    }

    /// `v_n^+`, the right limit at `t_n`.
    pub fn right_limit(&self, n: usize) -> Result<Vec<f64>> {
        if n >= self.intervals() {
            return Err(Error::TimeOutOfRange { t: self.partition.node(n), end: self.partition.end() });
        }
        let mut out = vec![0.0; self.dim];
        self.eval_local_into(n, 0.0, &mut out);
        Ok(out)
    }

    /// Time derivative at `t`, taken from the owning interval.
    pub fn derivative(&self, t: f64) -> Result<Vec<f64>> {
        let (n, tau) = self.partition.locate(t)?;
        let mut out = vec![0.0; self.dim];
        self.derivative_local_into(n, tau, &mut out);
        Ok(out)
    }

    /// Maximum jump `|v(t_n^-) - v(t_n^+)|` over interior nodes.
    pub fn max_interior_jump(&self) -> f64 {
        let mut worst = 0.0f64;
        let mut right = vec![0.0; self.dim];
        for n in 1..self.intervals() {
            self.eval_local_into(n, 0.0, &mut right);
            for (a, b) in self.end_value(n - 1).iter().zip(&right) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }
}

impl TimeField for PiecewiseTrajectory {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval_local(&self, n: usize, tau: f64, out: &mut [f64]) {
        self.eval_local_into(n, tau, out);
    }
}

/// Time derivative of a trajectory as a [`TimeField`].
#[derive(Debug, Clone, Copy)]
pub struct Derivative<'a>(pub &'a PiecewiseTrajectory);

impl TimeField for Derivative<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval_local(&self, n: usize, tau: f64, out: &mut [f64]) {
        self.0.derivative_local_into(n, tau, out);
    }
}

/// Pointwise difference `a - b` of two fields on the same partition.
#[derive(Debug, Clone, Copy)]
pub struct Difference<'a, A: ?Sized, B: ?Sized>(pub &'a A, pub &'a B);

impl<A: TimeField + ?Sized, B: TimeField + ?Sized> TimeField for Difference<'_, A, B> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval_local(&self, n: usize, tau: f64, out: &mut [f64]) {
        let mut tmp = vec![0.0; out.len()];
        self.0.eval_local(n, tau, out);
        self.1.eval_local(n, tau, &mut tmp);
        for (o, s) in out.iter_mut().zip(tmp) {
            *o -= s;
        }
    }
}

/// A field given by a closure of absolute time.
pub struct FnField<F> {
    partition: TimePartition,
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &mut [f64])> FnField<F> {
    pub fn new(partition: TimePartition, dim: usize, f: F) -> Self {
        Self { partition, dim, f }
    }
}

impl<F: Fn(f64, &mut [f64])> TimeField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval_local(&self, n: usize, tau: f64, out: &mut [f64]) {
        (self.f)(self.partition.local_time(n, tau), out);
    }
}

/// Radau reconstruction of a discontinuous degree `q-1` trajectory: on `J_n`
/// the degree `q` interpolant of `w` at the Radau points with value `w_n`
/// at `t_n` (`w_0 = u0`).
pub fn reconstruct(traj: &PiecewiseTrajectory, u0: &[f64]) -> Result<PiecewiseTrajectory> {
    if traj.continuity() != Continuity::Discontinuous {
        return Err(Error::DegreeMismatch { expected: traj.stages() - 1, found: traj.degree() });
    }
    if traj.radau_nodes().last() != Some(&1.0) || traj.degree() + 1 != traj.stages() {
        return Err(Error::DegreeMismatch { expected: traj.stages() - 1, found: traj.degree() });
    }
    if u0.len() != traj.dim() {
        return Err(Error::DimensionMismatch { expected: traj.dim(), found: u0.len() });
    }
    let q = traj.stages();
    let values = (0..traj.intervals())
        .map(|n| {
            let mut local = Vec::with_capacity(q + 1);
            local.push(if n == 0 { u0.to_vec() } else { traj.end_value(n - 1).to_vec() });
            local.extend((0..q).map(|i| traj.nodal(n, i).to_vec()));
            local
        })
        .collect();
    PiecewiseTrajectory::continuous(*traj.partition(), traj.radau_nodes(), values)?.with_initial(u0.to_vec())
}

/// Interval-wise L2 projection onto polynomials of degree `q-1`, returned in
/// the Radau nodal representation. Integrals use a Gauss rule of `q+2` points.
pub fn project<F: Fn(f64, &mut [f64])>(
    partition: TimePartition,
    q: usize,
    dim: usize,
    fun: F,
) -> Result<PiecewiseTrajectory> {
    let tableau = radau_tableau(q)?;
    let basis = tableau.stage_basis();
    let rule = gauss_rule(q + 2)?;
    // With the Radau points as nodes the local mass matrix is diag(b_i k),
    // since the Radau rule integrates degree 2q-2 exactly.
    let weights: Vec<Vec<f64>> = (0..q)
        .map(|i| rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| w * basis.value(i, x) / tableau.weights()[i]).collect())
        .collect();
    let mut sample = vec![0.0; dim];
    let values = (0..partition.intervals())
        .map(|n| {
            let samples: Vec<Vec<f64>> = rule
                .nodes
                .iter()
                .map(|&x| {
                    fun(partition.local_time(n, x), &mut sample);
                    sample.clone()
                })
                .collect();
            (0..q)
                .map(|i| {
                    let mut v = vec![0.0; dim];
                    for (g, s) in samples.iter().enumerate() {
                        for (vc, sc) in v.iter_mut().zip(s) {
                            *vc += weights[i][g] * sc;
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    PiecewiseTrajectory::discontinuous(partition, tableau.nodes(), values)
}

/// The interpolant `u~` of degree `q-1`: `u~(t_{n+1}) = u(t_{n+1})` and
/// `u - u~` orthogonal on `J_n` to polynomials of degree `q-2`. Moments use a
/// Gauss rule of `q+3` points. The initial value `u(0)` is attached.
pub fn interpolate_tilde<F: Fn(f64, &mut [f64])>(
    partition: TimePartition,
    q: usize,
    dim: usize,
    u: F,
) -> Result<PiecewiseTrajectory> {
    let tableau = radau_tableau(q)?;
    let basis = tableau.stage_basis();
    let rule = gauss_rule(q + 3)?;
    // Row 0: endpoint condition; rows 1..q: moments against shifted Legendre P_j, j <= q-2.
    let mut rows = vec![vec![0.0; q]; q];
    rows[0][q - 1] = 1.0;
    for j in 0..q.saturating_sub(1) {
        for (l, entry) in rows[j + 1].iter_mut().enumerate() {
            *entry = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&x, &w)| w * basis.value(l, x) * legendre_shifted(j, x))
                .sum();
        }
    }
    let lu = BandMatrix::from_rows(&rows)
        .factor()
        .map_err(|_| Error::Internal("singular interpolation system".into()))?;
    let mut sample = vec![0.0; dim];
    let mut values = Vec::with_capacity(partition.intervals());
    for n in 0..partition.intervals() {
        let mut rhs = vec![vec![0.0; q]; dim];
        u(partition.node(n + 1), &mut sample);
        for (c, s) in sample.iter().enumerate() {
            rhs[c][0] = *s;
        }
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            u(partition.local_time(n, x), &mut sample);
            for j in 0..q - 1 {
                let p = w * legendre_shifted(j, x);
                for (c, s) in sample.iter().enumerate() {
                    rhs[c][j + 1] += p * s;
                }
            }
        }
        let solved: Vec<Vec<f64>> = rhs.iter().map(|r| lu.solve(r)).collect();
        values.push((0..q).map(|i| solved.iter().map(|col| col[i]).collect()).collect());
    }
    u(0.0, &mut sample);
    PiecewiseTrajectory::discontinuous(partition, tableau.nodes(), values)?.with_initial(sample)
}

/// `(V(t) - V(t-k)) / k` on interval `n` at local coordinate `tau`, with the
/// reconstruction extended by zero on `[-k, 0)`.
pub fn backward_difference_local(recon: &PiecewiseTrajectory, n: usize, tau: f64, out: &mut [f64]) {
    let k = recon.partition().step();
    recon.eval_local_into(n, tau, out);
    let mut prev = vec![0.0; out.len()];
    if n > 0 {
        recon.eval_local_into(n - 1, tau, &mut prev);
    } else if tau == 1.0 {
        // t - k = 0 exactly
        recon.eval_local_into(0, 0.0, &mut prev);
    }
    for (o, p) in out.iter_mut().zip(prev) {
        *o = (*o - p) / k;
    }
}

/// Backward difference quotient `d_k V(t)` for `t` in `(0, T]`.
pub fn backward_difference(recon: &PiecewiseTrajectory, t: f64) -> Result<Vec<f64>> {
    if recon.continuity() != Continuity::Continuous {
        return Err(Error::DegreeMismatch { expected: recon.stages(), found: recon.degree() });
    }
    if !(t > 0.0) {
        return Err(Error::TimeOutOfRange { t, end: recon.partition().end() });
    }
    let (n, tau) = recon.partition().locate(t)?;
    let mut out = vec![0.0; recon.dim()];
    backward_difference_local(recon, n, tau, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(partition: TimePartition, q: usize, c: f64) -> PiecewiseTrajectory {
        let nodes = crate::radau_nodes(q).unwrap();
        let values = (0..partition.intervals()).map(|_| vec![vec![c]; q]).collect();
        PiecewiseTrajectory::discontinuous(partition, &nodes, values).unwrap()
    }

    #[test]
    fn partition_ownership() {
        let p = TimePartition::new(1.0, 4).unwrap();
        assert_eq!(p.locate(0.25).unwrap(), (0, 1.0));
        assert_eq!(p.locate(0.5).unwrap(), (1, 1.0));
        let (n, tau) = p.locate(0.6).unwrap();
        assert_eq!(n, 2);
        assert!((tau - 0.4).abs() < 1e-12);
        assert_eq!(p.locate(1.0).unwrap(), (3, 1.0));
        assert!(p.locate(1.5).is_err());
        assert!(p.locate(-0.1).is_err());
        assert_eq!(p.node(4), 1.0);
    }

    #[test]
    fn constant_evaluates_everywhere() {
        let p = TimePartition::new(2.0, 3).unwrap();
        let c = constant(p, 3, 4.5);
        for &t in &[0.1, 0.66, 1.0, 2.0] {
            let v = c.evaluate(t).unwrap()[0];
            assert!((v - 4.5).abs() < 1e-13);
        }
        assert_eq!(c.evaluate(0.0), Err(Error::AmbiguousInitialValue));
        assert!((c.right_limit(0).unwrap()[0] - 4.5).abs() < 1e-13);
    }

    #[test]
    fn linear_interpolates_midpoint() {
        let p = TimePartition::new(1.0, 2).unwrap();
        let nodes = [0.0, 1.0];
        // continuous degree-1 with radau = [1]: values at t_n and t_{n+1}
        let traj = PiecewiseTrajectory::continuous(p, &nodes[1..], vec![vec![vec![0.0], vec![1.0]], vec![vec![1.0], vec![3.0]]]).unwrap();
        assert!((traj.evaluate(0.25).unwrap()[0] - 0.5).abs() < 1e-15);
        assert_eq!(traj.evaluate(0.0).unwrap()[0], 0.0);
    }

    #[test]
    fn jump_ownership_uses_left_interval() {
        let p = TimePartition::new(1.0, 2).unwrap();
        let traj = PiecewiseTrajectory::discontinuous(p, &[1.0], vec![vec![vec![2.0]], vec![vec![7.0]]]).unwrap();
        assert_eq!(traj.evaluate(0.5).unwrap()[0], 2.0);
        assert_eq!(traj.right_limit(1).unwrap()[0], 7.0);
        assert_eq!(traj.max_interior_jump(), 5.0);
    }

    #[test]
    fn continuous_constructor_rejects_jumps() {
        let p = TimePartition::new(1.0, 2).unwrap();
        let bad = PiecewiseTrajectory::continuous(p, &[1.0], vec![vec![vec![0.0], vec![1.0]], vec![vec![2.0], vec![3.0]]]);
        assert!(matches!(bad, Err(Error::Internal(_))));
    }

    #[test]
    fn reconstruct_rejects_continuous_input() {
        let p = TimePartition::new(1.0, 1).unwrap();
        let traj = PiecewiseTrajectory::continuous(p, &[1.0], vec![vec![vec![0.0], vec![1.0]]]).unwrap();
        assert!(matches!(reconstruct(&traj, &[0.0]), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn projection_of_identity_is_mean_for_q1() {
        let p = TimePartition::new(1.0, 4).unwrap();
        let pr = project(p, 1, 1, |t, out| out[0] = t).unwrap();
        for n in 0..4 {
            let mid = 0.5 * (p.node(n) + p.node(n + 1));
            assert!((pr.nodal(n, 0)[0] - mid).abs() < 1e-15);
        }
    }

    #[test]
    fn tilde_for_q1_is_endpoint_value() {
        let p = TimePartition::new(1.0, 5).unwrap();
        let ut = interpolate_tilde(p, 1, 1, |t, out| out[0] = t.sin()).unwrap();
        for n in 0..5 {
            assert!((ut.nodal(n, 0)[0] - p.node(n + 1).sin()).abs() < 1e-15);
        }
        assert_eq!(ut.initial_value(), Some(&[0.0][..]));
    }

    #[test]
    fn backward_difference_cases() {
        let p = TimePartition::new(1.0, 4).unwrap();
        let nodes = crate::radau_nodes(2).unwrap();
        // constant 3 including t = 0
        let cst = PiecewiseTrajectory::continuous(p, &nodes, (0..4).map(|_| vec![vec![3.0]; 3]).collect()).unwrap();
        assert!((backward_difference(&cst, 0.1).unwrap()[0] - 12.0).abs() < 1e-12);
        assert!(backward_difference(&cst, 0.6).unwrap()[0].abs() < 1e-12);
        assert!(backward_difference(&cst, 0.25).unwrap()[0].abs() < 1e-12);
        // linear t
        let lin = PiecewiseTrajectory::continuous(
            p,
            &nodes,
            (0..4)
                .map(|n| {
                    let mut local = vec![vec![p.node(n)]];
                    local.extend(nodes.iter().map(|&c| vec![p.local_time(n, c)]));
                    local
                })
                .collect(),
        )
        .unwrap();
        for &t in &[0.3, 0.5, 0.77, 1.0] {
            assert!((backward_difference(&lin, t).unwrap()[0] - 1.0).abs() < 1e-12);
        }
        assert!(backward_difference(&lin, 0.0).is_err());
    }
}
