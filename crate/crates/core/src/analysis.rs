//! Numerical experiments: convergence studies with manufactured solutions,
//! the residual a posteriori estimator, the maximal-regularity ratio probe and
//! interpolant studies.
//!
//! Errors are measured against a temporal reference: the same spatial grid
//! and order on a partition `factor` times finer than the finest study run,
//! so spatial discretization errors cancel and only the temporal rate is
//! observed. An exact reference (the sampled manufactured solution) is also
//! available for problems whose source is the discrete one.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

// Needed without std; redundant when std is linked elsewhere in the graph.
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::norms::{continuous_norm, discrete_bd_seminorm, sampled_sup_norm, SpaceTimeNormSpec};
use crate::radau::gauss_rule;
use crate::spatial::{apply_divergence, check_ellipticity, Flux, FluxFunction, Grid1D, SpatialNorm};
use crate::stepper::{dg_solve_linear_nonautonomous, dg_solve_nonlinear, DgSolution, NewtonConfig, RhsMode, SpaceTimeFn};
use crate::trajectory::{interpolate_tilde, reconstruct, Derivative, Difference, FnField, PiecewiseTrajectory, TimeField, TimePartition};
use crate::{radau_tableau, Error, Result};

/// Time factor of a separable manufactured solution `u = phi(t) psi(x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeProfile {
    /// `e^{-t}`
    Decay,
    /// `1 / (1 + t)`
    Rational,
    /// `sum_j c_j t^j`
    Polynomial(Vec<f64>),
}

impl TimeProfile {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Self::Decay => (-t).exp(),
            Self::Rational => 1.0 / (1.0 + t),
            Self::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &a| acc * t + a),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Self::Decay => -(-t).exp(),
            Self::Rational => -1.0 / ((1.0 + t) * (1.0 + t)),
            Self::Polynomial(c) => c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (j, &a)| acc * t + j as f64 * a),
        }
    }
}

/// Space factor of a separable manufactured solution, vanishing at `0` and `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceProfile {
    /// `sin(pi x / X)`
    Sine,
    /// `x (X - x) sin(pi x / X)`
    WeightedSine,
}

impl SpaceProfile {
    /// Value and first two derivatives at `x` on `(0, len)`.
    pub fn jet(&self, x: f64, len: f64) -> [f64; 3] {
        let w = PI / len;
        let (s, c) = (w * x).sin_cos();
        let sine = [s, w * c, -w * w * s];
        match self {
            Self::Sine => sine,
            Self::WeightedSine => {
                let b = [x * (len - x), len - 2.0 * x, -2.0];
                [
                    b[0] * sine[0],
                    b[1] * sine[0] + b[0] * sine[1],
                    b[2] * sine[0] + 2.0 * b[1] * sine[1] + b[0] * sine[2],
                ]
            }
        }
    }
}

/// How the source of a manufactured problem is derived from `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceMode {
    /// `g = u_t - (f(u_x))_x` with exact derivatives.
    Continuous,
    /// `g = u_t - D^-(f(D^+ u))` with the grid differences, so that the sampled
    /// `u` solves the spatially discrete system exactly.
    Discrete,
}

/// `u_t = (f(u_x))_x + g` with a closed-form solution `u = phi(t) psi(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedProblem {
    pub time: TimeProfile,
    pub space: SpaceProfile,
    pub flux: FluxFunction,
    pub grid: Grid1D,
    pub horizon: f64,
    pub source_mode: SourceMode,
}

impl ManufacturedProblem {
    /// `u = e^{-t} sin(pi x / X)` on `(0, 1]` with the discrete source.
    pub fn decaying_sine(flux: FluxFunction, grid: Grid1D) -> Self {
        Self {
            time: TimeProfile::Decay,
            space: SpaceProfile::Sine,
            flux,
            grid,
            horizon: 1.0,
            source_mode: SourceMode::Discrete,
        }
    }

    pub fn with_horizon(self, horizon: f64) -> Self {
        Self { horizon, ..self }
    }

    pub fn with_source_mode(self, source_mode: SourceMode) -> Self {
        Self { source_mode, ..self }
    }

    pub fn exact(&self, x: f64, t: f64) -> f64 {
        self.time.value(t) * self.space.jet(x, self.grid.length())[0]
    }

    pub fn exact_t(&self, x: f64, t: f64) -> f64 {
        self.time.derivative(t) * self.space.jet(x, self.grid.length())[0]
    }

    pub fn exact_x(&self, x: f64, t: f64) -> f64 {
        self.time.value(t) * self.space.jet(x, self.grid.length())[1]
    }

    pub fn exact_xx(&self, x: f64, t: f64) -> f64 {
        self.time.value(t) * self.space.jet(x, self.grid.length())[2]
    }

    pub fn source(&self, x: f64, t: f64) -> f64 {
        match self.source_mode {
            SourceMode::Continuous => self.exact_t(x, t) - self.flux.slope(self.exact_x(x, t)) * self.exact_xx(x, t),
            SourceMode::Discrete => {
                let h = self.grid.spacing();
                let (l, c, r) = (self.exact(x - h, t), self.exact(x, t), self.exact(x + h, t));
                let div = (self.flux.flux((r - c) / h) - self.flux.flux((c - l) / h)) / h;
                self.exact_t(x, t) - div
            }
        }
    }

    /// Exact solution sampled on the grid.
    pub fn exact_field(&self, t: f64) -> Vec<f64> {
        self.grid.sample(|x| self.exact(x, t))
    }

    pub fn initial(&self) -> Vec<f64> {
        self.exact_field(0.0)
    }

    pub fn partition(&self, intervals: usize) -> Result<TimePartition> {
        TimePartition::new(self.horizon, intervals)
    }

    /// Range of `u_x` over `[0, X] x [0, T]` from `samples^2` points.
    pub fn gradient_range(&self, samples: usize) -> (f64, f64) {
        let s = samples.max(2);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..s {
            let x = self.grid.length() * i as f64 / (s - 1) as f64;
            for j in 0..s {
                let g = self.exact_x(x, self.horizon * j as f64 / (s - 1) as f64);
                lo = lo.min(g);
                hi = hi.max(g);
            }
        }
        (lo, hi)
    }

    /// Ellipticity of the flux on the realized gradient range.
    pub fn check(&self) -> Result<()> {
        let range = self.gradient_range(64);
        let slope = check_ellipticity(&self.flux, range, 256);
        if slope > 0.0 {
            Ok(())
        } else {
            Err(Error::Ellipticity { location: 0, gradient: range.1, slope })
        }
    }

    /// Nonlinear dG solution with `N = intervals`.
    pub fn solve(&self, q: usize, intervals: usize, newton: &NewtonConfig) -> Result<DgSolution> {
        let tableau = radau_tableau(q)?;
        let source = |x: f64, t: f64| self.source(x, t);
        dg_solve_nonlinear(&self.flux, &self.grid, Some(&source), &self.initial(), &self.partition(intervals)?, &tableau, newton)
    }
}

/// What the errors of a study are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// dG solution with `factor * max(N_list)` intervals.
    Temporal { factor: usize },
    /// The sampled manufactured solution.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyConfig {
    pub p: f64,
    pub r: f64,
    pub newton: NewtonConfig,
    pub reference: Reference,
    /// Equispaced samples per interval for `L^inf` in time.
    pub sup_samples: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            p: 8.0,
            r: 4.0,
            newton: NewtonConfig { tol: 1e-13, ..NewtonConfig::default() },
            reference: Reference::Temporal { factor: 16 },
            sup_samples: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyMetadata {
    pub q: usize,
    pub p: f64,
    pub r: f64,
    pub flux: String,
    pub points: usize,
    pub length: f64,
    pub horizon: f64,
    pub reference_intervals: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub intervals: usize,
    pub step: f64,
    /// One entry per report column; `NaN` for failed rows.
    pub values: Vec<f64>,
    pub newton_iterations: usize,
    pub failure: Option<String>,
}

/// Table of per-`N` measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub kind: &'static str,
    pub metadata: StudyMetadata,
    pub columns: Vec<String>,
    pub rows: Vec<StudyRow>,
}

/// `log(e_coarse / e_fine) / log(N_fine / N_coarse)`.
pub fn observed_order(coarse: f64, fine: f64, n_coarse: usize, n_fine: usize) -> f64 {
    (coarse / fine).ln() / (n_fine as f64 / n_coarse as f64).ln()
}

impl StudyReport {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn values(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.column(name)?;
        Some(self.rows.iter().map(|r| r.values[c]).collect())
    }

    /// Orders between consecutive rows.
    pub fn orders(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.column(name)?;
        Some(
            self.rows
                .windows(2)
                .map(|w| observed_order(w[0].values[c], w[1].values[c], w[0].intervals, w[1].intervals))
                .collect(),
        )
    }

    /// Order between the two finest rows.
    pub fn final_order(&self, name: &str) -> Option<f64> {
        self.orders(name)?.last().copied()
    }

    /// `max / min` of a column over all rows.
    pub fn spread(&self, name: &str) -> Option<f64> {
        let v = self.values(name)?;
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        Some(max / min)
    }
}

fn check_list(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() || n_list[0] == 0 {
        return Err(Error::InvalidGrid("N_list must be non-empty and positive".into()));
    }
    if n_list.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::InvalidGrid(format!("N_list must double at every entry, got {n_list:?}")));
    }
    Ok(())
}

/// The exact solution (or its time derivative) seen on a study partition.
enum ReferenceSource<'a> {
    Trajectory(&'a PiecewiseTrajectory),
    Exact(&'a ManufacturedProblem),
}

struct ReferenceField<'a> {
    source: &'a ReferenceSource<'a>,
    coarse: TimePartition,
    derivative: bool,
    dim: usize,
}

impl TimeField for ReferenceField<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval_local(&self, n: usize, tau: f64, out: &mut [f64]) {
        let t = self.coarse.local_time(n, tau);
        match self.source {
            ReferenceSource::Trajectory(fine) => {
                let (m, sigma) = match fine.partition().locate(t) {
                    Ok(loc) => loc,
                    Err(_) => {
                        out.iter_mut().for_each(|o| *o = f64::NAN);
                        return;
                    }
                };
                if self.derivative {
                    fine.derivative_local_into(m, sigma, out);
                } else {
                    fine.eval_local_into(m, sigma, out);
                }
            }
            ReferenceSource::Exact(problem) => {
                for (j, o) in out.iter_mut().enumerate() {
                    let x = problem.grid.x(j);
                    *o = if self.derivative { problem.exact_t(x, t) } else { problem.exact(x, t) };
                }
            }
        }
    }
}

/// `R(t) = d/dt V(t) - D(f(D V(t))) - g(t)` for a continuous trajectory `V`.
pub struct ResidualField<'a> {
    problem: &'a ManufacturedProblem,
    recon: &'a PiecewiseTrajectory,
}

/// Residual of `recon` in the equation of `problem`.
pub fn residual_field<'a>(problem: &'a ManufacturedProblem, recon: &'a PiecewiseTrajectory) -> ResidualField<'a> {
    ResidualField { problem, recon }
}

impl TimeField for ResidualField<'_> {
    fn dim(&self) -> usize {
        self.recon.dim()
    }

    fn eval_local(&self, n: usize, tau: f64, out: &mut [f64]) {
        let t = self.recon.partition().local_time(n, tau);
        let mut value = vec![0.0; out.len()];
        self.recon.eval_local_into(n, tau, &mut value);
        self.recon.derivative_local_into(n, tau, out);
        match apply_divergence(&self.problem.flux, &self.problem.grid, &value) {
            Ok(div) => {
                for (j, (o, d)) in out.iter_mut().zip(div).enumerate() {
                    *o -= d + self.problem.source(self.problem.grid.x(j), t);
                }
            }
            Err(_) => out.iter_mut().for_each(|o| *o = f64::NAN),
        }
    }
}

fn metadata(problem: &ManufacturedProblem, q: usize, cfg: &StudyConfig, reference: Option<usize>) -> StudyMetadata {
    StudyMetadata {
        q,
        p: cfg.p,
        r: cfg.r,
        flux: problem.flux.name(),
        points: problem.grid.points(),
        length: problem.grid.length(),
        horizon: problem.horizon,
        reference_intervals: reference,
    }
}

/// Shared driver: solves every row and hands the solution with the reference
/// to `measure`.
fn run_rows<M>(
    problem: &ManufacturedProblem,
    q: usize,
    n_list: &[usize],
    cfg: &StudyConfig,
    kind: &'static str,
    columns: &[&str],
    mut measure: M,
) -> Result<StudyReport>
where
    M: FnMut(&DgSolution, &ReferenceField<'_>, &ReferenceField<'_>) -> Result<Vec<f64>>,
{
    check_list(n_list)?;
    SpatialNorm::W2r(cfg.r).validate()?;
    problem.check()?;
    let max_n = *n_list.last().expect("non-empty");
    let (reference, n_ref) = match cfg.reference {
        Reference::Temporal { factor } => {
            let n_ref = factor.max(1) * max_n;
            let sol = problem.solve(q, n_ref, &cfg.newton)?;
            (Some(sol), Some(n_ref))
        }
        Reference::Exact => (None, None),
    };
    let source = match &reference {
        Some(sol) => ReferenceSource::Trajectory(&sol.reconstruction),
        None => ReferenceSource::Exact(problem),
    };
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let partition = problem.partition(n)?;
        let row = match problem.solve(q, n, &cfg.newton) {
            Ok(sol) => {
                let dim = problem.grid.points();
                let value = ReferenceField { source: &source, coarse: partition, derivative: false, dim };
                let deriv = ReferenceField { source: &source, coarse: partition, derivative: true, dim };
                let iterations = sol.diagnostics.iter().map(|d| d.iterations).sum();
                match measure(&sol, &value, &deriv) {
                    Ok(values) => StudyRow { intervals: n, step: partition.step(), values, newton_iterations: iterations, failure: None },
                    Err(e) => failed_row(n, partition.step(), columns.len(), e),
                }
            }
            Err(e) => failed_row(n, partition.step(), columns.len(), e),
        };
        rows.push(row);
    }
    Ok(StudyReport {
        kind,
        metadata: metadata(problem, q, cfg, n_ref),
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
    })
}

fn failed_row(n: usize, step: f64, width: usize, e: Error) -> StudyRow {
    StudyRow { intervals: n, step, values: vec![f64::NAN; width], newton_iterations: 0, failure: Some(e.to_string()) }
}

/// Column names of [`convergence_study`].
pub const CONVERGENCE_COLUMNS: [&str; 5] = ["e_U_W2r", "e_dUhat_Lr", "e_Uhat_W2r", "e_Uhat_sum", "e_Uhat_W1inf"];

/// A priori error study: for each `N`, `|u - U|_{L^p(W^{2,r})}`,
/// `|u_t - Uhat_t|_{L^p(L^r)}`, `|u - Uhat|_{L^p(W^{2,r})}`, the sum of
/// the previous two, and `|u - Uhat|_{L^inf(W^{1,inf})}`.
pub fn convergence_study(problem: &ManufacturedProblem, q: usize, n_list: &[usize], cfg: &StudyConfig) -> Result<StudyReport> {
    let grid = problem.grid;
    let w2 = SpaceTimeNormSpec::new(cfg.p, SpatialNorm::W2r(cfg.r));
    let lr = SpaceTimeNormSpec::new(cfg.p, SpatialNorm::Lr(cfg.r));
    run_rows(problem, q, n_list, cfg, "converge", &CONVERGENCE_COLUMNS, |sol, u, u_t| {
        let partition = *sol.trajectory.partition();
        let recon = &sol.reconstruction;
        let e_u = continuous_norm(&Difference(u, &sol.trajectory), &partition, q, &w2, Some(&grid))?;
        let e_dt = continuous_norm(&Difference(u_t, &Derivative(recon)), &partition, q, &lr, Some(&grid))?;
        let e_hat = continuous_norm(&Difference(u, recon), &partition, q, &w2, Some(&grid))?;
        let e_sup = sampled_sup_norm(&Difference(u, recon), &partition, SpatialNorm::W1Inf, Some(&grid), cfg.sup_samples)?;
        Ok(vec![e_u, e_dt, e_hat, e_dt + e_hat, e_sup])
    })
}

/// Column names of [`aposteriori_study`].
pub const APOSTERIORI_COLUMNS: [&str; 6] = ["estimator", "e_dUhat_Lr", "e_Uhat_W2r", "error_sum", "effectivity", "e_Uhat_W1inf"];

/// Residual estimator study: `|R|_{L^p(L^r)}` of the reconstruction, the
/// error sum `|e_t|_{L^p(L^r)} + |e|_{L^p(W^{2,r})}` with `e = u - Uhat`, their
/// ratio, and `|e|_{L^inf(W^{1,inf})}` for the smallness condition.
pub fn aposteriori_study(problem: &ManufacturedProblem, q: usize, n_list: &[usize], cfg: &StudyConfig) -> Result<StudyReport> {
    let grid = problem.grid;
    let w2 = SpaceTimeNormSpec::new(cfg.p, SpatialNorm::W2r(cfg.r));
    let lr = SpaceTimeNormSpec::new(cfg.p, SpatialNorm::Lr(cfg.r));
    run_rows(problem, q, n_list, cfg, "estimate", &APOSTERIORI_COLUMNS, |sol, u, u_t| {
        let partition = *sol.trajectory.partition();
        let recon = &sol.reconstruction;
        let est = continuous_norm(&residual_field(problem, recon), &partition, q, &lr, Some(&grid))?;
        let e_dt = continuous_norm(&Difference(u_t, &Derivative(recon)), &partition, q, &lr, Some(&grid))?;
        let e_hat = continuous_norm(&Difference(u, recon), &partition, q, &w2, Some(&grid))?;
        let e_sup = sampled_sup_norm(&Difference(u, recon), &partition, SpatialNorm::W1Inf, Some(&grid), cfg.sup_samples)?;
        let sum = e_dt + e_hat;
        Ok(vec![est, e_dt, e_hat, sum, sum / est, e_sup])
    })
}

/// `sum_j c_j sin(a_j pi x / X) sin(b_j pi t / T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierForcing {
    pub modes: Vec<(f64, u32, u32)>,
    pub length: f64,
    pub horizon: f64,
}

impl FourierForcing {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.modes
            .iter()
            .map(|&(c, a, b)| c * (a as f64 * PI * x / self.length).sin() * (b as f64 * PI * t / self.horizon).sin())
            .sum()
    }
}

/// Seeded forcings with `modes` terms each: coefficients uniform in
/// `[-1, 1]`, spatial and temporal wave numbers in `1..=4`.
pub fn rhs_family(seed: u64, samples: usize, modes: usize, length: f64, horizon: f64) -> Vec<FourierForcing> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| FourierForcing {
            modes: (0..modes).map(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(1..=4), rng.gen_range(1..=4))).collect(),
            length,
            horizon,
        })
        .collect()
}

/// Sampled hypotheses on a coefficient `alpha(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientProbe {
    pub min: f64,
    pub max: f64,
    /// Largest `|alpha(x, t) - alpha(x, s)| / |t - s|` between neighboring samples.
    pub lipschitz: f64,
}

/// Probes positivity, boundedness and the time-Lipschitz constant on a
/// `samples x samples` lattice of `[0, X] x [0, T]`.
pub fn probe_coefficient(coeff: SpaceTimeFn<'_>, grid: &Grid1D, horizon: f64, samples: usize) -> CoefficientProbe {
    let s = samples.max(2);
    let dt = horizon / (s - 1) as f64;
    let mut probe = CoefficientProbe { min: f64::INFINITY, max: f64::NEG_INFINITY, lipschitz: 0.0 };
    for i in 0..s {
        let x = grid.length() * i as f64 / (s - 1) as f64;
        let mut prev: Option<f64> = None;
        for j in 0..s {
            let a = coeff(x, dt * j as f64);
            probe.min = probe.min.min(a);
            probe.max = probe.max.max(a);
            if let Some(b) = prev {
                probe.lipschitz = probe.lipschitz.max((a - b).abs() / dt);
            }
            prev = Some(a);
        }
    }
    probe
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxregRow {
    pub intervals: usize,
    /// `None` for forcings with zero norm.
    pub ratios: Vec<Option<f64>>,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxregReport {
    pub q: usize,
    pub p: f64,
    pub r: f64,
    pub coefficient: CoefficientProbe,
    pub rows: Vec<MaxregRow>,
}

impl MaxregReport {
    /// `max / min - 1` of the per-`N` maxima.
    pub fn variation(&self) -> f64 {
        let max = self.rows.iter().map(|r| r.max).fold(f64::NEG_INFINITY, f64::max);
        let min = self.rows.iter().map(|r| r.max).fold(f64::INFINITY, f64::min);
        max / min - 1.0
    }
}

/// Components of the maximal-regularity ratio for one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxregTerms {
    pub backward_difference: f64,
    pub reconstruction_dt: f64,
    pub reconstruction_w2: f64,
    pub solution_w2: f64,
    pub forcing: f64,
}

impl MaxregTerms {
    pub fn ratio(&self) -> Option<f64> {
        (self.forcing > 0.0).then(|| {
            (self.backward_difference + self.reconstruction_dt + self.reconstruction_w2 + self.solution_w2) / self.forcing
        })
    }
}

/// Solves `v_t = alpha v_xx + f`, `v(0) = 0`, and measures the terms of the ratio.
#[allow(clippy::too_many_arguments)]
pub fn maxreg_terms(
    coeff: SpaceTimeFn<'_>,
    forcing: SpaceTimeFn<'_>,
    grid: &Grid1D,
    partition: &TimePartition,
    q: usize,
    p: f64,
    r: f64,
) -> Result<MaxregTerms> {
    let tableau = radau_tableau(q)?;
    let sol = dg_solve_linear_nonautonomous(coeff, grid, forcing, partition, &tableau, RhsMode::Quadrature)?;
    let lr = SpaceTimeNormSpec::new(p, SpatialNorm::Lr(r));
    let w2 = SpaceTimeNormSpec::new(p, SpatialNorm::W2r(r));
    let f_field = FnField::new(*partition, grid.points(), |t, out: &mut [f64]| {
        for (j, o) in out.iter_mut().enumerate() {
            *o = forcing(grid.x(j), t);
        }
    });
    Ok(MaxregTerms {
        backward_difference: discrete_bd_seminorm(&sol.reconstruction, &lr, Some(grid))?,
        reconstruction_dt: continuous_norm(&Derivative(&sol.reconstruction), partition, q, &lr, Some(grid))?,
        reconstruction_w2: continuous_norm(&sol.reconstruction, partition, q, &w2, Some(grid))?,
        solution_w2: continuous_norm(&sol.trajectory, partition, q, &w2, Some(grid))?,
        forcing: continuous_norm(&f_field, partition, q, &lr, Some(grid))?,
    })
}

/// Maximal-regularity ratio over a forcing family for every `N`.
#[allow(clippy::too_many_arguments)]
pub fn maxreg_probe(
    coeff: SpaceTimeFn<'_>,
    family: &[FourierForcing],
    grid: &Grid1D,
    horizon: f64,
    q: usize,
    p: f64,
    r: f64,
    n_list: &[usize],
) -> Result<MaxregReport> {
    check_list(n_list)?;
    let coefficient = probe_coefficient(coeff, grid, horizon, 33);
    if !(coefficient.min > 0.0) {
        return Err(Error::Coercivity { location: 0, t: 0.0, value: coefficient.min });
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let partition = TimePartition::new(horizon, n)?;
        let ratios = family
            .iter()
            .map(|f| {
                let forcing = |x: f64, t: f64| f.eval(x, t);
                Ok(maxreg_terms(coeff, &forcing, grid, &partition, q, p, r)?.ratio())
            })
            .collect::<Result<Vec<_>>>()?;
        let max = ratios.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        rows.push(MaxregRow { intervals: n, ratios, max });
    }
    Ok(MaxregReport { q, p, r, coefficient, rows })
}

/// Column names of [`interpolant_study`].
pub const INTERPOLANT_COLUMNS: [&str; 4] = ["tilde_Lp", "tilde_Linf", "recon_tilde_Lp", "recon_tilde_dt_Lp"];

/// Sup samples per interval in [`interpolant_study`].
const INTERPOLANT_SUP_SAMPLES: usize = 64;

/// Approximation errors of the interpolant `u~` and of its reconstruction
/// for a scalar function `u` with derivative `du` on `(0, horizon)`.
pub fn interpolant_study(
    u: &dyn Fn(f64) -> f64,
    du: &dyn Fn(f64) -> f64,
    q: usize,
    n_list: &[usize],
    p: f64,
    horizon: f64,
) -> Result<StudyReport> {
    check_list(n_list)?;
    let spec = SpaceTimeNormSpec::new(p, SpatialNorm::LInf);
    let rows = n_list
        .iter()
        .map(|&n| {
            let partition = TimePartition::new(horizon, n)?;
            let tilde = interpolate_tilde(partition, q, 1, |t, out| out[0] = u(t))?;
            let recon = reconstruct(&tilde, &[u(0.0)])?;
            let exact = FnField::new(partition, 1, |t, out: &mut [f64]| out[0] = u(t));
            let exact_dt = FnField::new(partition, 1, |t, out: &mut [f64]| out[0] = du(t));
            let values = vec![
                continuous_norm(&Difference(&exact, &tilde), &partition, q, &spec, None)?,
                sampled_sup_norm(&Difference(&exact, &tilde), &partition, SpatialNorm::LInf, None, INTERPOLANT_SUP_SAMPLES)?,
                continuous_norm(&Difference(&exact, &recon), &partition, q, &spec, None)?,
                continuous_norm(&Difference(&exact_dt, &Derivative(&recon)), &partition, q, &spec, None)?,
            ];
            Ok(StudyRow { intervals: n, step: partition.step(), values, newton_iterations: 0, failure: None })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StudyReport {
        kind: "interp-study",
        metadata: StudyMetadata {
            q,
            p,
            r: f64::NAN,
            flux: "none".into(),
            points: 1,
            length: 0.0,
            horizon,
            reference_intervals: None,
        },
        columns: INTERPOLANT_COLUMNS.iter().map(|c| c.to_string()).collect(),
        rows,
    })
}

/// Gauss points per interval in [`orthogonality_check`].
pub const ORTHOGONALITY_POINTS: usize = 24;

/// Largest `|int_{J_n} rho_t v dt + (rho_n^+ - rho_n) v_n^+|` over intervals
/// and the Lagrange basis `v` of degree `q - 1`, where `rho = u - u~`.
///
/// Integrals use a Gauss rule with [`ORTHOGONALITY_POINTS`] points, so the
/// check resolves the identity well below the interpolant's own quadrature.
pub fn orthogonality_check(
    u: &dyn Fn(f64) -> f64,
    du: &dyn Fn(f64) -> f64,
    partition: &TimePartition,
    q: usize,
) -> Result<f64> {
    let tableau = radau_tableau(q)?;
    let basis = tableau.stage_basis();
    let rule = gauss_rule(ORTHOGONALITY_POINTS)?;
    let tilde = interpolate_tilde(*partition, q, 1, |t, out| out[0] = u(t))?;
    let k = partition.step();
    let mut worst = 0.0f64;
    let mut val = [0.0];
    for n in 0..partition.intervals() {
        let t_n = partition.node(n);
        // rho at t_n from the left; the initial value of u~ is u(0).
        let rho_left = match n {
            0 => u(0.0) - tilde.initial_value().ok_or(Error::AmbiguousInitialValue)?[0],
            _ => u(t_n) - tilde.end_value(n - 1)[0],
        };
        tilde.eval_local_into(n, 0.0, &mut val);
        let rho_right = u(t_n) - val[0];
        for i in 0..q {
            let mut integral = 0.0;
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                tilde.derivative_local_into(n, x, &mut val);
                integral += w * k * (du(partition.local_time(n, x)) - val[0]) * basis.value(i, x);
            }
            let r = integral + (rho_right - rho_left) * basis.value(i, 0.0);
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_match_finite_differences() {
        let h = 1e-5;
        for profile in [TimeProfile::Decay, TimeProfile::Rational, TimeProfile::Polynomial(vec![1.0, -2.0, 0.5])] {
            let fd = (profile.value(0.3 + h) - profile.value(0.3 - h)) / (2.0 * h);
            assert!((fd - profile.derivative(0.3)).abs() < 1e-8);
        }
        for space in [SpaceProfile::Sine, SpaceProfile::WeightedSine] {
            let [_, d1, d2] = space.jet(0.4, 1.3);
            let v = |x| space.jet(x, 1.3)[0];
            assert!(((v(0.4 + h) - v(0.4 - h)) / (2.0 * h) - d1).abs() < 1e-8);
            assert!(((v(0.4 + h) - 2.0 * v(0.4) + v(0.4 - h)) / (h * h) - d2).abs() < 1e-4);
            assert!(space.jet(0.0, 1.3)[0].abs() < 1e-15 && space.jet(1.3, 1.3)[0].abs() < 1e-14);
        }
    }

    #[test]
    fn discrete_source_makes_sampled_solution_stationary_in_space() {
        let grid = Grid1D::new(1.0, 9).unwrap();
        let prob = ManufacturedProblem::decaying_sine(FluxFunction::Cubic { strength: 1.0 }, grid).with_source_mode(SourceMode::Discrete);
        let t = 0.4;
        let u = prob.exact_field(t);
        let div = apply_divergence(&prob.flux, &grid, &u).unwrap();
        for (j, d) in div.iter().enumerate() {
            let x = grid.x(j);
            assert!((prob.exact_t(x, t) - d - prob.source(x, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn orders_and_spread() {
        let report = StudyReport {
            kind: "t",
            metadata: StudyMetadata { q: 1, p: 2.0, r: 2.0, flux: "x".into(), points: 3, length: 1.0, horizon: 1.0, reference_intervals: None },
            columns: vec!["e".into()],
            rows: [4usize, 8, 16]
                .iter()
                .map(|&n| StudyRow { intervals: n, step: 1.0 / n as f64, values: vec![1.0 / (n * n) as f64], newton_iterations: 0, failure: None })
                .collect(),
        };
        for o in report.orders("e").unwrap() {
            assert!((o - 2.0).abs() < 1e-14);
        }
        assert!((report.spread("e").unwrap() - 16.0).abs() < 1e-12);
        assert!(report.orders("missing").is_none());
    }

    #[test]
    fn n_list_must_double() {
        assert!(check_list(&[8, 16, 32]).is_ok());
        assert!(check_list(&[8, 24]).is_err());
        assert!(check_list(&[]).is_err());
    }

    #[test]
    fn rhs_family_is_reproducible() {
        let a = rhs_family(7, 3, 5, 1.0, 1.0);
        assert_eq!(a, rhs_family(7, 3, 5, 1.0, 1.0));
        assert_ne!(a, rhs_family(8, 3, 5, 1.0, 1.0));
        for f in &a {
            assert_eq!(f.modes.len(), 5);
            assert!(f.modes.iter().all(|&(c, a, b)| (-1.0..=1.0).contains(&c) && (1..=4).contains(&a) && (1..=4).contains(&b)));
        }
    }

    #[test]
    fn coefficient_probe_sees_bounds() {
        let grid = Grid1D::new(1.0, 5).unwrap();
        let probe = probe_coefficient(&|x, t| 1.0 + 0.4 * t.sin() * (1.0 + x), &grid, 1.0, 33);
        assert!((probe.min - 1.0).abs() < 1e-15);
        assert!(probe.max <= 1.0 + 0.8 * 1.0f64.sin() + 1e-15);
        assert!(probe.lipschitz <= 0.8 + 1e-12);
    }
}
