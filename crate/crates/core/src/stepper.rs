//! dG(q-1) time stepping.
//!
//! On `J_n` the discrete solution has stage values `Y_i = U(t_n + c_i k)`.
//! Testing the Galerkin equation with the Lagrange basis at the Radau points
//! and using the reconstruction turns it into the collocation-type system
//!
//! ```text
//! Y_i = U_n + k sum_j a_ij Fbar_j,
//! Fbar_j = (1 / (b_j k)) int_{J_n} l_nj(s) (F(U(s)) + g(s)) ds,
//! ```
//!
//! where the time integrals use a Gauss rule with `q + 2` points. For an
//! autonomous linear `F` the averages of `F(U)` collapse to `F(Y_j)` and the
//! scheme is exactly Radau IIA with averaged forcing.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{BandMatrix, Tridiagonal};
use crate::radau::{gauss_rule, RadauTableau};
use crate::spatial::{apply_divergence, assemble_coefficient, divergence_jacobian, face_gradients, second_difference_operator, Flux, Grid1D};
use crate::trajectory::{reconstruct, PiecewiseTrajectory, TimePartition};
use crate::{Error, Result};

/// Scalar function of `(x, t)`.
pub type SpaceTimeFn<'a> = &'a dyn Fn(f64, f64) -> f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Damping {
    None,
    /// Halve the Newton step while the residual increases.
    LineHalving,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    /// Residual tolerance, relative to `max(1, |U_n|_inf)`.
    pub tol: f64,
    pub max_iter: usize,
    pub damping: Damping,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self { tol: 1e-11, max_iter: 25, damping: Damping::LineHalving }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::Internal(alloc::format!("invalid Newton settings {self:?}")));
        }
        Ok(())
    }
}

/// Newton history of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDiagnostics {
    pub interval: usize,
    pub iterations: usize,
    /// Max-norm residuals, starting with the initial guess.
    pub residuals: Vec<f64>,
}

impl StepDiagnostics {
    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(0.0)
    }
}

/// Quadrature data shared by all steps of a Galerkin solve.
#[derive(Debug, Clone)]
struct GalerkinQuadrature {
    q: usize,
    /// Gauss nodes on `[0, 1]`.
    tau: Vec<f64>,
    /// `basis[g][l] = l_l(tau_g)`.
    basis: Vec<Vec<f64>>,
    /// `mix[i][g] = sum_j a_ij w_g l_j(tau_g) / b_j`.
    mix: Vec<Vec<f64>>,
    /// `avg[j][g] = w_g l_j(tau_g) / b_j`.
    avg: Vec<Vec<f64>>,
}

impl GalerkinQuadrature {
    fn new(tableau: &RadauTableau) -> Result<Self> {
        let q = tableau.stages();
        let rule = gauss_rule(q + 2)?;
        let lagrange = tableau.stage_basis();
        let basis: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| lagrange.values(x)).collect();
        let avg: Vec<Vec<f64>> = (0..q)
            .map(|j| (0..rule.len()).map(|g| rule.weights[g] * basis[g][j] / tableau.weights()[j]).collect())
            .collect();
        let mix = (0..q)
            .map(|i| (0..rule.len()).map(|g| (0..q).map(|j| tableau.a(i, j) * avg[j][g]).sum()).collect())
            .collect();
        Ok(Self { q, tau: rule.nodes, basis, mix, avg })
    }

    fn points(&self) -> usize {
        self.tau.len()
    }

    /// `U(t_n + tau_g k)` from stage values.
    fn interpolate(&self, g: usize, stages: &[Vec<f64>]) -> Vec<f64> {
        let m = stages[0].len();
        let mut out = vec![0.0; m];
        for (l, stage) in stages.iter().enumerate() {
            let w = self.basis[g][l];
            for (o, s) in out.iter_mut().zip(stage) {
                *o += w * s;
            }
        }
        out
    }
}

#[inline]
fn idx(q: usize, x: usize, i: usize) -> usize {
    x * q + i
}

/// Adds `scale * op` to block `(i, l)` of the interleaved stage matrix.
fn add_block(mat: &mut BandMatrix, q: usize, i: usize, l: usize, scale: f64, op: &Tridiagonal) {
    let m = op.size();
    for x in 0..m {
        let row = idx(q, x, i);
        mat.add(row, idx(q, x, l), scale * op.diag[x]);
        if x > 0 {
            mat.add(row, idx(q, x - 1, l), scale * op.lower[x]);
        }
        if x + 1 < m {
            mat.add(row, idx(q, x + 1, l), scale * op.upper[x]);
        }
    }
}

fn identity_stage_matrix(q: usize, m: usize) -> BandMatrix {
    let bw = 2 * q - 1;
    let mut mat = BandMatrix::zeros(q * m, bw, bw);
    for r in 0..q * m {
        mat.set(r, r, 1.0);
    }
    mat
}

fn flatten(q: usize, stages: &[Vec<f64>]) -> Vec<f64> {
    let m = stages[0].len();
    let mut flat = vec![0.0; q * m];
    for (i, s) in stages.iter().enumerate() {
        for (x, v) in s.iter().enumerate() {
            flat[idx(q, x, i)] = *v;
        }
    }
    flat
}

fn unflatten(q: usize, m: usize, flat: &[f64]) -> Vec<Vec<f64>> {
    (0..q).map(|i| (0..m).map(|x| flat[idx(q, x, i)]).collect()).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Nonlinear dG stepper for `u_t = (f(u_x))_x + g`.
pub struct NonlinearStepper<'a, F: Flux + ?Sized> {
    flux: &'a F,
    grid: Grid1D,
    source: Option<SpaceTimeFn<'a>>,
    newton: NewtonConfig,
    quad: GalerkinQuadrature,
    radau: Vec<f64>,
}

/// Residual of the stage system with a roundoff magnitude estimate.
struct StageResidual {
    values: Vec<Vec<f64>>,
    norm: f64,
    magnitude: f64,
}

impl<'a, F: Flux + ?Sized> NonlinearStepper<'a, F> {
    pub fn new(
        flux: &'a F,
        grid: Grid1D,
        tableau: &RadauTableau,
        source: Option<SpaceTimeFn<'a>>,
        newton: NewtonConfig,
    ) -> Result<Self> {
        newton.validate()?;
        Ok(Self { flux, grid, source, newton, quad: GalerkinQuadrature::new(tableau)?, radau: tableau.nodes().to_vec() })
    }

    fn forcing(&self, t: f64, u: &[f64]) -> Result<Vec<f64>> {
        let mut out = apply_divergence(self.flux, &self.grid, u)?;
        if let Some(g) = self.source {
            for (j, o) in out.iter_mut().enumerate() {
                *o += g(self.grid.x(j), t);
            }
        }
        Ok(out)
    }

    /// Size of the terms cancelling inside the flux divergence, which sets
    /// the roundoff floor of the residual.
    fn divergence_scale(&self, u: &[f64]) -> f64 {
        let h = self.grid.spacing();
        let faces = face_gradients(&self.grid, u);
        let flux = faces.iter().fold(0.0f64, |m, &p| m.max(self.flux.flux(p).abs()));
        let slope = faces.iter().fold(0.0f64, |m, &p| m.max(self.flux.slope(p).abs()));
        2.0 * flux / h + 4.0 * slope * max_abs(u) / (h * h)
    }

    fn residual(&self, k: f64, t_n: f64, u_n: &[f64], stages: &[Vec<f64>]) -> Result<StageResidual> {
        let q = self.quad.q;
        let m = u_n.len();
        let mut values: Vec<Vec<f64>> = stages
            .iter()
            .map(|y| y.iter().zip(u_n).map(|(a, b)| a - b).collect())
            .collect();
        let mut mags: Vec<f64> = (0..q).map(|i| max_abs(&stages[i]) + max_abs(u_n)).collect();
        for g in 0..self.quad.points() {
            let u_g = self.quad.interpolate(g, stages);
            let f_g = self.forcing(t_n + self.quad.tau[g] * k, &u_g)?;
            let f_mag = max_abs(&f_g) + self.divergence_scale(&u_g);
            for i in 0..q {
                let w = k * self.quad.mix[i][g];
                for x in 0..m {
                    values[i][x] -= w * f_g[x];
                }
                mags[i] += w.abs() * f_mag;
            }
        }
        let norm = values.iter().map(|v| max_abs(v)).fold(0.0, f64::max);
        let magnitude = mags.into_iter().fold(0.0, f64::max);
        Ok(StageResidual { values, norm, magnitude })
    }

    fn jacobian(&self, k: f64, stages: &[Vec<f64>]) -> Result<BandMatrix> {
        let q = self.quad.q;
        let m = self.grid.points();
        let mut mat = identity_stage_matrix(q, m);
        for g in 0..self.quad.points() {
            let u_g = self.quad.interpolate(g, stages);
            let jac = divergence_jacobian(self.flux, &self.grid, &u_g)?;
            for i in 0..q {
                for l in 0..q {
                    let w = -k * self.quad.mix[i][g] * self.quad.basis[g][l];
                    add_block(&mut mat, q, i, l, w, &jac);
                }
            }
        }
        Ok(mat)
    }

    /// Stage values on `(t_n, t_n + k]` from the left value `U_n`.
    pub fn step(&self, k: f64, t_n: f64, u_n: &[f64]) -> Result<(Vec<Vec<f64>>, StepDiagnostics)> {
        let q = self.quad.q;
        let m = self.grid.points();
        if u_n.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: u_n.len() });
        }
        let tol = self.newton.tol * max_abs(u_n).max(1.0);
        let converged = |r: &StageResidual| r.norm <= tol.max(8.0 * f64::EPSILON * r.magnitude);

        let mut stages: Vec<Vec<f64>> = vec![u_n.to_vec(); q];
        let mut res = self.residual(k, t_n, u_n, &stages)?;
        let mut history = vec![res.norm];
        let mut iterations = 0;
        while !converged(&res) {
            if iterations == self.newton.max_iter {
                return Err(Error::NewtonDivergence { iterations, residual: res.norm });
            }
            iterations += 1;
            let lu = self.jacobian(k, &stages)?.factor()?;
            let mut delta = flatten(q, &res.values);
            lu.solve_in_place(&mut delta);
            let delta = unflatten(q, m, &delta);
            let mut lambda = 1.0;
            loop {
                let trial: Vec<Vec<f64>> = stages
                    .iter()
                    .zip(&delta)
                    .map(|(s, d)| s.iter().zip(d).map(|(a, b)| a - lambda * b).collect())
                    .collect();
                let trial_res = self.residual(k, t_n, u_n, &trial);
                let accept = match (&trial_res, self.newton.damping) {
                    (Ok(_), Damping::None) => true,
                    (Ok(r), Damping::LineHalving) => r.norm < res.norm || lambda < 1.0 / 1024.0,
                    (Err(_), Damping::LineHalving) if lambda >= 1.0 / 1024.0 => false,
                    (Err(_), _) => true,
                };
                if accept {
                    stages = trial;
                    res = trial_res?;
                    break;
                }
                lambda *= 0.5;
            }
            history.push(res.norm);
        }
        Ok((stages, StepDiagnostics { interval: 0, iterations, residuals: history }))
    }

    /// Solves over the whole partition from `u0`.
    pub fn solve(&self, partition: &TimePartition, u0: &[f64]) -> Result<DgSolution> {
        let k = partition.step();
        let mut u_n = u0.to_vec();
        let mut values = Vec::with_capacity(partition.intervals());
        let mut diagnostics = Vec::with_capacity(partition.intervals());
        for n in 0..partition.intervals() {
            let (stages, mut diag) = self
                .step(k, partition.node(n), &u_n)
                .map_err(|e| Error::StepFailed { interval: n, source: Box::new(e) })?;
            diag.interval = n;
            u_n.clone_from(stages.last().expect("at least one stage"));
            values.push(stages);
            diagnostics.push(diag);
        }
        let trajectory = PiecewiseTrajectory::discontinuous(*partition, &self.radau, values)?.with_initial(u0.to_vec())?;
        let reconstruction = reconstruct(&trajectory, u0)?;
        Ok(DgSolution { trajectory, reconstruction, diagnostics })
    }
}

/// Discrete solution with its reconstruction and Newton history.
#[derive(Debug, Clone)]
pub struct DgSolution {
    pub trajectory: PiecewiseTrajectory,
    pub reconstruction: PiecewiseTrajectory,
    pub diagnostics: Vec<StepDiagnostics>,
}

/// One nonlinear dG step; returns the `q` stage fields at `t_n + c_i k`.
#[allow(clippy::too_many_arguments)]
pub fn dg_step_nonlinear<F: Flux + ?Sized>(
    flux: &F,
    grid: &Grid1D,
    tableau: &RadauTableau,
    k: f64,
    t_n: f64,
    u_n: &[f64],
    source: Option<SpaceTimeFn<'_>>,
    newton: &NewtonConfig,
) -> Result<(Vec<Vec<f64>>, StepDiagnostics)> {
    NonlinearStepper::new(flux, *grid, tableau, source, *newton)?.step(k, t_n, u_n)
}

/// Nonlinear dG solve over `partition` with `U_0 = u0`.
pub fn dg_solve_nonlinear<F: Flux + ?Sized>(
    flux: &F,
    grid: &Grid1D,
    source: Option<SpaceTimeFn<'_>>,
    u0: &[f64],
    partition: &TimePartition,
    tableau: &RadauTableau,
    newton: &NewtonConfig,
) -> Result<DgSolution> {
    if u0.len() != grid.points() {
        return Err(Error::DimensionMismatch { expected: grid.points(), found: u0.len() });
    }
    NonlinearStepper::new(flux, *grid, tableau, source, *newton)?.solve(partition, u0)
}

/// How the forcing enters the linear dG system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhsMode {
    /// Gauss quadrature of `int l_ni f` inside the Galerkin system.
    Quadrature,
    /// Precomputed averages `f_ni` fed to the modified Radau IIA form.
    Averages,
}

/// Linear dG solution with `V(0) = 0`.
#[derive(Debug, Clone)]
pub struct LinearDgSolution {
    pub trajectory: PiecewiseTrajectory,
    pub reconstruction: PiecewiseTrajectory,
}

/// dG(q-1) for `v_t = alpha(x, t) v_xx + f(x, t)`, `v(0) = 0`.
pub fn dg_solve_linear_nonautonomous(
    coeff: SpaceTimeFn<'_>,
    grid: &Grid1D,
    f_rhs: SpaceTimeFn<'_>,
    partition: &TimePartition,
    tableau: &RadauTableau,
    mode: RhsMode,
) -> Result<LinearDgSolution> {
    let q = tableau.stages();
    let m = grid.points();
    let k = partition.step();
    let quad = GalerkinQuadrature::new(tableau)?;
    let mut v_n = vec![0.0; m];
    let mut values = Vec::with_capacity(partition.intervals());
    for n in 0..partition.intervals() {
        let t_n = partition.node(n);
        let mut mat = identity_stage_matrix(q, m);
        let mut rhs: Vec<Vec<f64>> = vec![v_n.clone(); q];
        let averages = match mode {
            RhsMode::Averages => Some(stage_rhs_averages(f_rhs, grid, partition, tableau, n)?),
            RhsMode::Quadrature => None,
        };
        for g in 0..quad.points() {
            let t_g = t_n + quad.tau[g] * k;
            let op = assemble_coefficient(coeff, grid, t_g)
                .map_err(|e| Error::StepFailed { interval: n, source: Box::new(e) })?;
            let f_g: Option<Vec<f64>> = averages.is_none().then(|| grid.sample(|x| f_rhs(x, t_g)));
            for i in 0..q {
                let w = k * quad.mix[i][g];
                for l in 0..q {
                    add_block(&mut mat, q, i, l, -w * quad.basis[g][l], &op);
                }
                if let Some(f_g) = &f_g {
                    for (r, f) in rhs[i].iter_mut().zip(f_g) {
                        *r += w * f;
                    }
                }
            }
        }
        if let Some(avg) = &averages {
            for (i, r) in rhs.iter_mut().enumerate() {
                for (j, a) in avg.iter().enumerate() {
                    let w = k * tableau.a(i, j);
                    for (rv, av) in r.iter_mut().zip(a) {
                        *rv += w * av;
                    }
                }
            }
        }
        let lu = mat.factor().map_err(|e| Error::StepFailed { interval: n, source: Box::new(e) })?;
        let mut flat = flatten(q, &rhs);
        lu.solve_in_place(&mut flat);
        let stages = unflatten(q, m, &flat);
        v_n.clone_from(&stages[q - 1]);
        values.push(stages);
    }
    let zero = vec![0.0; m];
    let trajectory = PiecewiseTrajectory::discontinuous(*partition, tableau.nodes(), values)?.with_initial(zero.clone())?;
    let reconstruction = reconstruct(&trajectory, &zero)?;
    Ok(LinearDgSolution { trajectory, reconstruction })
}

/// Stage forcing for the plain Radau IIA scheme.
#[derive(Clone, Copy)]
pub enum StageForcing<'a> {
    /// `f(t_ni)`
    Pointwise(SpaceTimeFn<'a>),
    /// Weighted averages `f_ni` over `J_n`.
    Averaged(SpaceTimeFn<'a>),
}

/// Nodal values `V_n` (`n = 0..=N`) and stage values `V_ni` of Radau IIA.
#[derive(Debug, Clone, PartialEq)]
pub struct RadauSolution {
    pub nodal: Vec<Vec<f64>>,
    pub stages: Vec<Vec<Vec<f64>>>,
}

/// Like [`assemble_coefficient`] but admits `alpha = 0`, where the scheme
/// degenerates to quadrature of the forcing.
fn nonnegative_coefficient(coeff: SpaceTimeFn<'_>, grid: &Grid1D, t: f64) -> Result<Tridiagonal> {
    let alpha: Vec<f64> = (0..grid.points())
        .map(|j| {
            let a = coeff(grid.x(j), t);
            if a >= 0.0 && a.is_finite() {
                Ok(a)
            } else {
                Err(Error::Coercivity { location: j, t, value: a })
            }
        })
        .collect::<Result<_>>()?;
    Ok(second_difference_operator(grid, &alpha))
}

/// The q-stage Radau IIA method for `v_t = alpha(x, t) v_xx + f`, `V_0 = 0`, `alpha >= 0`.
pub fn radau_solve_linear(
    coeff: SpaceTimeFn<'_>,
    grid: &Grid1D,
    forcing: StageForcing<'_>,
    partition: &TimePartition,
    tableau: &RadauTableau,
) -> Result<RadauSolution> {
    let q = tableau.stages();
    let m = grid.points();
    let k = partition.step();
    let mut nodal = vec![vec![0.0; m]];
    let mut all_stages = Vec::with_capacity(partition.intervals());
    for n in 0..partition.intervals() {
        let v_n = nodal[n].clone();
        let ops: Vec<Tridiagonal> = (0..q)
            .map(|j| nonnegative_coefficient(coeff, grid, partition.local_time(n, tableau.nodes()[j])))
            .collect::<Result<_>>()
            .map_err(|e| Error::StepFailed { interval: n, source: Box::new(e) })?;
        let f_stage: Vec<Vec<f64>> = match forcing {
            StageForcing::Pointwise(f) => (0..q)
                .map(|j| {
                    let t = partition.local_time(n, tableau.nodes()[j]);
                    grid.sample(|x| f(x, t))
                })
                .collect(),
            StageForcing::Averaged(f) => stage_rhs_averages(f, grid, partition, tableau, n)?,
        };
        let mut mat = identity_stage_matrix(q, m);
        let mut rhs = vec![v_n.clone(); q];
        for i in 0..q {
            for l in 0..q {
                let w = k * tableau.a(i, l);
                add_block(&mut mat, q, i, l, -w, &ops[l]);
                for (r, f) in rhs[i].iter_mut().zip(&f_stage[l]) {
                    *r += w * f;
                }
            }
        }
        let lu = mat.factor().map_err(|e| Error::StepFailed { interval: n, source: Box::new(e) })?;
        let mut flat = flatten(q, &rhs);
        lu.solve_in_place(&mut flat);
        let stages = unflatten(q, m, &flat);
        // V_{n+1} from the weights must equal the last stage (c_q = 1).
        let mut via_weights = v_n.clone();
        let mut magnitude = max_abs(&v_n);
        for i in 0..q {
            let av = ops[i].apply(&stages[i]);
            let w = k * tableau.weights()[i];
            for x in 0..m {
                let term = w * (av[x] + f_stage[i][x]);
                via_weights[x] += term;
                magnitude = magnitude.max(term.abs());
            }
        }
        let gap = via_weights.iter().zip(&stages[q - 1]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if gap > 1e-9 * magnitude.max(1e-300) {
            return Err(Error::Internal(alloc::format!("V_(n+1) != V_nq at step {n} (gap {gap:e})")));
        }
        nodal.push(stages[q - 1].clone());
        all_stages.push(stages);
    }
    Ok(RadauSolution { nodal, stages: all_stages })
}

/// Averages `f_ni = (1 / (b_i k)) int_{J_n} l_ni(s) f(s) ds` by Gauss
/// quadrature with `q + 2` points.
pub fn stage_rhs_averages(
    f_rhs: SpaceTimeFn<'_>,
    grid: &Grid1D,
    partition: &TimePartition,
    tableau: &RadauTableau,
    n: usize,
) -> Result<Vec<Vec<f64>>> {
    let quad = GalerkinQuadrature::new(tableau)?;
    let q = tableau.stages();
    let mut out = vec![vec![0.0; grid.points()]; q];
    for g in 0..quad.points() {
        let t = partition.local_time(n, quad.tau[g]);
        let f = grid.sample(|x| f_rhs(x, t));
        for (j, o) in out.iter_mut().enumerate() {
            let w = quad.avg[j][g];
            for (ov, fv) in o.iter_mut().zip(&f) {
                *ov += w * fv;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radau::radau_tableau;
    use crate::spatial::FluxFunction;

    #[test]
    fn averages_of_constant_are_constant() {
        let grid = Grid1D::new(1.0, 5).unwrap();
        let p = TimePartition::new(1.0, 4).unwrap();
        for q in 1..=4 {
            let tab = radau_tableau(q).unwrap();
            let avg = stage_rhs_averages(&|_, _| 2.5, &grid, &p, &tab, 2).unwrap();
            for a in avg.iter().flatten() {
                assert!((a - 2.5).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let grid = Grid1D::new(1.0, 8).unwrap();
        let p = TimePartition::new(1.0, 3).unwrap();
        let tab = radau_tableau(2).unwrap();
        let flux = FluxFunction::Cubic { strength: 1.0 };
        let sol = dg_solve_nonlinear(&flux, &grid, None, &[0.0; 8], &p, &tab, &NewtonConfig::default()).unwrap();
        for n in 0..3 {
            for i in 0..2 {
                assert!(sol.trajectory.nodal(n, i).iter().all(|&v| v == 0.0));
            }
        }
        assert!(sol.diagnostics.iter().all(|d| d.iterations == 0));
    }

    #[test]
    fn newton_failure_is_reported() {
        let grid = Grid1D::new(1.0, 8).unwrap();
        let tab = radau_tableau(2).unwrap();
        let flux = FluxFunction::Cubic { strength: 1.0 };
        let cfg = NewtonConfig { tol: 1e-14, max_iter: 1, damping: Damping::None };
        let u0 = grid.sample(|x| (core::f64::consts::PI * x).sin());
        let err = dg_step_nonlinear(&flux, &grid, &tab, 0.1, 0.0, &u0, None, &cfg).unwrap_err();
        assert!(matches!(err, Error::NewtonDivergence { iterations: 1, .. }));
    }

    #[test]
    fn coercivity_violation_is_reported() {
        let grid = Grid1D::new(1.0, 5).unwrap();
        let p = TimePartition::new(1.0, 2).unwrap();
        let tab = radau_tableau(1).unwrap();
        let res = dg_solve_linear_nonautonomous(&|_, t| 0.5 - t, &grid, &|_, _| 1.0, &p, &tab, RhsMode::Quadrature);
        assert!(matches!(res, Err(Error::StepFailed { interval: 1, .. })));
    }
}
