//! Space-time norms `L^p((0,t_n); X)` and their discrete `l^p` analogues.
//!
//! The continuous norm integrates `|v(t)|_X^p` interval by interval with a
//! Gauss rule; the discrete norm samples only the Radau points,
//!
//! ```text
//! |v|_{l^p((0,t_n);X)} = (sum_{l<n} k sum_i |v(t_{li})|_X^p)^{1/p}.
//! ```

use alloc::vec;
use alloc::vec::Vec;

// Needed without std; redundant when std is linked elsewhere in the graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::radau::{gauss_rule, radau_tableau};
use crate::spatial::{Grid1D, SpatialNorm};
use crate::sum::CompensatedSum;
use crate::trajectory::{backward_difference_local, Continuity, PiecewiseTrajectory, TimeField, TimePartition};
use crate::{Error, Result};

/// Time exponent, spatial norm and window `(0, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimeNormSpec {
    pub p: f64,
    pub spatial: SpatialNorm,
    /// Number of intervals in the window; `None` means the whole partition.
    pub window_end: Option<usize>,
}

impl SpaceTimeNormSpec {
    pub fn new(p: f64, spatial: SpatialNorm) -> Self {
        Self { p, spatial, window_end: None }
    }

    pub fn with_window(self, end: usize) -> Self {
        Self { window_end: Some(end), ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::InvalidExponent(self.p));
        }
        self.spatial.validate()
    }

    /// Intervals covered by the window.
    pub fn window(&self, partition: &TimePartition) -> Result<usize> {
        let n = partition.intervals();
        match self.window_end {
            None => Ok(n),
            Some(end) if end >= 1 && end <= n => Ok(end),
            Some(end) => Err(Error::InvalidWindow { end, intervals: n }),
        }
    }

    /// `t_n` at the window end.
    pub fn window_time(&self, partition: &TimePartition) -> Result<f64> {
        Ok(partition.node(self.window(partition)?))
    }
}

/// Continuous and discrete values with the per-interval `p`-th powers of
/// the continuous norm.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub continuous: f64,
    pub discrete: f64,
    pub contributions: Vec<f64>,
}

fn finish(total: f64, p: f64) -> f64 {
    total.max(0.0).powf(1.0 / p)
}

/// `int_{J_n} |v|_X^p dt` for every interval of the window, using
/// `points` Gauss points per interval.
pub fn continuous_contributions<F: TimeField + ?Sized>(
    field: &F,
    partition: &TimePartition,
    spec: &SpaceTimeNormSpec,
    grid: Option<&Grid1D>,
    points: usize,
) -> Result<Vec<f64>> {
    spec.validate()?;
    let end = spec.window(partition)?;
    let rule = gauss_rule(points)?;
    let k = partition.step();
    let mut buf = vec![0.0; field.dim()];
    (0..end)
        .map(|n| {
            let mut acc = CompensatedSum::new();
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                field.eval_local(n, x, &mut buf);
                acc.add(w * spec.spatial.eval(grid, &buf)?.powf(spec.p));
            }
            Ok(k * acc.value())
        })
        .collect()
}

/// `(sum_n int_{J_n} |v|_X^p dt)^{1/p}` with `q + 3` Gauss points per interval.
pub fn continuous_norm<F: TimeField + ?Sized>(
    field: &F,
    partition: &TimePartition,
    q: usize,
    spec: &SpaceTimeNormSpec,
    grid: Option<&Grid1D>,
) -> Result<f64> {
    continuous_norm_with(field, partition, spec, grid, q + 3)
}

/// [`continuous_norm`] with an explicit number of Gauss points.
pub fn continuous_norm_with<F: TimeField + ?Sized>(
    field: &F,
    partition: &TimePartition,
    spec: &SpaceTimeNormSpec,
    grid: Option<&Grid1D>,
    points: usize,
) -> Result<f64> {
    let parts = continuous_contributions(field, partition, spec, grid, points)?;
    Ok(finish(parts.into_iter().collect::<CompensatedSum>().value(), spec.p))
}

/// Discrete `l^p` norm of a field sampled at `t_n + c_i k`.
pub fn discrete_norm_field<F: TimeField + ?Sized>(
    field: &F,
    partition: &TimePartition,
    radau: &[f64],
    spec: &SpaceTimeNormSpec,
    grid: Option<&Grid1D>,
) -> Result<f64> {
    spec.validate()?;
    let end = spec.window(partition)?;
    let k = partition.step();
    let mut buf = vec![0.0; field.dim()];
    let mut acc = CompensatedSum::new();
    for n in 0..end {
        for &c in radau {
            field.eval_local(n, c, &mut buf);
            acc.add(k * spec.spatial.eval(grid, &buf)?.powf(spec.p));
        }
    }
    Ok(finish(acc.value(), spec.p))
}

/// Discrete `l^p` norm reading the stored Radau nodal values directly.
pub fn discrete_norm(traj: &PiecewiseTrajectory, spec: &SpaceTimeNormSpec, grid: Option<&Grid1D>) -> Result<f64> {
    spec.validate()?;
    let partition = traj.partition();
    let end = spec.window(partition)?;
    let k = partition.step();
    let mut acc = CompensatedSum::new();
    for n in 0..end {
        for i in 0..traj.stages() {
            acc.add(k * spec.spatial.eval(grid, traj.radau_value(n, i))?.powf(spec.p));
        }
    }
    Ok(finish(acc.value(), spec.p))
}

/// The backward difference quotient of a continuous trajectory as a field.
#[derive(Debug, Clone, Copy)]
pub struct BackwardDifference<'a>(pub &'a PiecewiseTrajectory);

impl TimeField for BackwardDifference<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval_local(&self, n: usize, tau: f64, out: &mut [f64]) {
        backward_difference_local(self.0, n, tau, out);
    }
}

/// `|d_k V|_{l^p}` of a continuous reconstruction extended by zero below 0.
pub fn discrete_bd_seminorm(recon: &PiecewiseTrajectory, spec: &SpaceTimeNormSpec, grid: Option<&Grid1D>) -> Result<f64> {
    if recon.continuity() != Continuity::Continuous {
        return Err(Error::DegreeMismatch { expected: recon.stages(), found: recon.degree() });
    }
    discrete_norm_field(&BackwardDifference(recon), recon.partition(), recon.radau_nodes(), spec, grid)
}

/// Continuous and discrete norms of a trajectory side by side.
pub fn norm_report(traj: &PiecewiseTrajectory, spec: &SpaceTimeNormSpec, grid: Option<&Grid1D>) -> Result<NormReport> {
    let contributions = continuous_contributions(traj, traj.partition(), spec, grid, traj.stages() + 3)?;
    let continuous = finish(contributions.iter().copied().collect::<CompensatedSum>().value(), spec.p);
    let discrete = discrete_norm(traj, spec, grid)?;
    Ok(NormReport { continuous, discrete, contributions })
}

/// `sup_t |v(t)|_X` over `samples` equispaced points per interval plus the
/// interval endpoints, seen from inside each interval.
pub fn sampled_sup_norm<F: TimeField + ?Sized>(
    field: &F,
    partition: &TimePartition,
    spatial: SpatialNorm,
    grid: Option<&Grid1D>,
    samples: usize,
) -> Result<f64> {
    let s = samples.max(1);
    let mut buf = vec![0.0; field.dim()];
    let mut sup = 0.0f64;
    for n in 0..partition.intervals() {
        for j in 0..=s {
            field.eval_local(n, j as f64 / s as f64, &mut buf);
            sup = sup.max(spatial.eval(grid, &buf)?);
        }
    }
    Ok(sup)
}

/// Constant `c` in `|v|_{L^p} <= c |v|_{l^p}` for degree `q-1` trajectories,
/// `c = (sum_i |l_i|_{L^inf(0,1)}^{p'})^{1/p'}`.
///
/// The sup norms of the Lagrange basis are taken over 4096 equispaced points.
pub fn domination_constant(q: usize, p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    let basis = radau_tableau(q)?.stage_basis();
    let conj = p / (p - 1.0);
    let samples = 4096;
    let total: f64 = (0..q)
        .map(|i| {
            let sup = (0..=samples).map(|j| basis.value(i, j as f64 / samples as f64).abs()).fold(0.0, f64::max);
            sup.powf(conj)
        })
        .sum();
    Ok(total.powf(1.0 / conj))
}
