//! Finite differences on `(0, X)` with homogeneous Dirichlet boundary values.
//!
//! Fields hold the `m` interior values; the boundary values are zero.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

// Needed without std; redundant when std is linked elsewhere in the graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::Tridiagonal;
use crate::{Error, Result};

/// Uniform interior grid `x_j = (j + 1) h`, `h = X / (m + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    length: f64,
    points: usize,
}

impl Grid1D {
    pub fn new(length: f64, points: usize) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid(alloc::format!("domain length {length} must be positive")));
        }
        if points < 3 {
            return Err(Error::InvalidGrid(alloc::format!("need at least 3 interior points, got {points}")));
        }
        Ok(Self { length, points })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.length / (self.points + 1) as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        (j + 1) as f64 * self.spacing()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.x(j)).collect()
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.points).map(|j| f(self.x(j))).collect()
    }

    fn check(&self, u: &[f64]) -> Result<()> {
        if u.len() == self.points {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.points, found: u.len() })
        }
    }
}

/// Scalar flux `f(p)` of the gradient together with its slope `f'(p)`.
pub trait Flux {
    fn flux(&self, p: f64) -> f64;
    fn slope(&self, p: f64) -> f64;
    fn name(&self) -> String {
        "custom".into()
    }
}

/// The named fluxes available from configuration files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxFunction {
    /// `f(p) = a p`
    Linear { scale: f64 },
    /// `f(p) = p + g p^3 / 3`
    Cubic { strength: f64 },
    /// `f(p) = p + b p / (1 + p^2)`
    BoundedSlope { strength: f64 },
}

impl FluxFunction {
    pub const NAMES: [&'static str; 3] = ["linear", "cubic", "bounded-slope"];

    /// Looks up a flux by name; `param` overrides the default parameter 1.
    pub fn from_name(name: &str, param: Option<f64>) -> Option<Self> {
        let p = param.unwrap_or(1.0);
        match name {
            "linear" => Some(Self::Linear { scale: p }),
            "cubic" => Some(Self::Cubic { strength: p }),
            "bounded-slope" => Some(Self::BoundedSlope { strength: p }),
            _ => None,
        }
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            Self::Linear { scale } => scale,
            Self::Cubic { strength } | Self::BoundedSlope { strength } => strength,
        }
    }

    /// `f''(p)`, used for Lipschitz bounds of the linearized coefficient.
    pub fn curvature(&self, p: f64) -> f64 {
        match *self {
            Self::Linear { .. } => 0.0,
            Self::Cubic { strength } => 2.0 * strength * p,
            Self::BoundedSlope { strength } => {
                let d = 1.0 + p * p;
                strength * 2.0 * p * (p * p - 3.0) / (d * d * d)
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Linear { .. } => "linear",
            Self::Cubic { .. } => "cubic",
            Self::BoundedSlope { .. } => "bounded-slope",
        }
    }
}

impl Flux for FluxFunction {
    fn flux(&self, p: f64) -> f64 {
        match *self {
            Self::Linear { scale } => scale * p,
            Self::Cubic { strength } => p + strength * p * p * p / 3.0,
            Self::BoundedSlope { strength } => p + strength * p / (1.0 + p * p),
        }
    }

    fn slope(&self, p: f64) -> f64 {
        match *self {
            Self::Linear { scale } => scale,
            Self::Cubic { strength } => 1.0 + strength * p * p,
            Self::BoundedSlope { strength } => {
                let d = 1.0 + p * p;
                1.0 + strength * (1.0 - p * p) / (d * d)
            }
        }
    }

    fn name(&self) -> String {
        self.label().into()
    }
}

/// A flux built from two closures.
pub struct CustomFlux<F, D> {
    pub name: &'static str,
    pub f: F,
    pub df: D,
}

impl<F: Fn(f64) -> f64, D: Fn(f64) -> f64> Flux for CustomFlux<F, D> {
    fn flux(&self, p: f64) -> f64 {
        (self.f)(p)
    }

    fn slope(&self, p: f64) -> f64 {
        (self.df)(p)
    }

    fn name(&self) -> String {
        self.name.into()
    }
}

/// One-sided gradients at the `m + 1` cell faces, with zero boundary values.
pub fn face_gradients(grid: &Grid1D, u: &[f64]) -> Vec<f64> {
    let m = grid.points();
    let h = grid.spacing();
    (0..=m)
        .map(|j| {
            let right = if j < m { u[j] } else { 0.0 };
            let left = if j > 0 { u[j - 1] } else { 0.0 };
            (right - left) / h
        })
        .collect()
}

/// Conservative discretization of `(f(u_x))_x`:
/// `[f((u_{j+1}-u_j)/h) - f((u_j-u_{j-1})/h)] / h`.
pub fn apply_divergence<F: Flux + ?Sized>(flux: &F, grid: &Grid1D, u: &[f64]) -> Result<Vec<f64>> {
    grid.check(u)?;
    let h = grid.spacing();
    let faces: Vec<f64> = face_gradients(grid, u)
        .into_iter()
        .enumerate()
        .map(|(j, p)| {
            let v = flux.flux(p);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinite { location: j, value: p })
            }
        })
        .collect::<Result<_>>()?;
    Ok(faces.windows(2).map(|w| (w[1] - w[0]) / h).collect())
}

/// Jacobian of [`apply_divergence`] with respect to `u`; reports the first
/// face where `f'` is not positive.
pub fn divergence_jacobian<F: Flux + ?Sized>(flux: &F, grid: &Grid1D, u: &[f64]) -> Result<Tridiagonal> {
    grid.check(u)?;
    let m = grid.points();
    let h2 = grid.spacing() * grid.spacing();
    let slopes: Vec<f64> = face_gradients(grid, u)
        .into_iter()
        .enumerate()
        .map(|(j, p)| {
            let s = flux.slope(p);
            if s > 0.0 {
                Ok(s)
            } else {
                Err(Error::Ellipticity { location: j, gradient: p, slope: s })
            }
        })
        .collect::<Result<_>>()?;
    let mut op = Tridiagonal::zeros(m);
    for j in 0..m {
        op.diag[j] = -(slopes[j] + slopes[j + 1]) / h2;
        if j > 0 {
            op.lower[j] = slopes[j] / h2;
        }
        if j + 1 < m {
            op.upper[j] = slopes[j + 1] / h2;
        }
    }
    Ok(op)
}

/// Discrete `A(v) w = f'(v_x) w_xx` with the centered gradient
/// `(v_{j+1} - v_{j-1}) / (2h)` in the coefficient.
pub fn assemble_linearized<F: Flux + ?Sized>(flux: &F, grid: &Grid1D, v: &[f64]) -> Result<Tridiagonal> {
    grid.check(v)?;
    let m = grid.points();
    let h = grid.spacing();
    let alpha: Vec<f64> = (0..m)
        .map(|j| {
            let right = if j + 1 < m { v[j + 1] } else { 0.0 };
            let left = if j > 0 { v[j - 1] } else { 0.0 };
            let g = (right - left) / (2.0 * h);
            let a = flux.slope(g);
            if a > 0.0 {
                Ok(a)
            } else {
                Err(Error::Ellipticity { location: j, gradient: g, slope: a })
            }
        })
        .collect::<Result<_>>()?;
    Ok(second_difference_operator(grid, &alpha))
}

/// Rows `alpha_j [1, -2, 1] / h^2` with Dirichlet rows truncated.
pub fn second_difference_operator(grid: &Grid1D, alpha: &[f64]) -> Tridiagonal {
    let m = grid.points();
    let h2 = grid.spacing() * grid.spacing();
    let mut op = Tridiagonal::zeros(m);
    for j in 0..m {
        let a = alpha[j] / h2;
        op.diag[j] = -2.0 * a;
        if j > 0 {
            op.lower[j] = a;
        }
        if j + 1 < m {
            op.upper[j] = a;
        }
    }
    op
}

/// Operator `w -> alpha(x, t) w_xx` at time `t`; fails if the coefficient is
/// not positive at some grid point.
pub fn assemble_coefficient<C: Fn(f64, f64) -> f64 + ?Sized>(coeff: &C, grid: &Grid1D, t: f64) -> Result<Tridiagonal> {
    let alpha: Vec<f64> = (0..grid.points())
        .map(|j| {
            let a = coeff(grid.x(j), t);
            if a > 0.0 && a.is_finite() {
                Ok(a)
            } else {
                Err(Error::Coercivity { location: j, t, value: a })
            }
        })
        .collect::<Result<_>>()?;
    Ok(second_difference_operator(grid, &alpha))
}

/// Discrete spatial norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpatialNorm {
    /// `(h sum |u_j|^r)^{1/r}`
    Lr(f64),
    /// `max |u_j|`; for one-component fields this is the absolute value.
    LInf,
    /// `max(|u_j|, |first differences|)`, boundary differences included.
    W1Inf,
    /// `(h sum |u_j|^r + |D+ u_j|^r + |D2 u_j|^r)^{1/r}`
    W2r(f64),
}

impl SpatialNorm {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Lr(r) | Self::W2r(r) if !(r > 1.0 && r.is_finite()) => Err(Error::InvalidExponent(r)),
            _ => Ok(()),
        }
    }

    pub fn needs_grid(&self) -> bool {
        !matches!(self, Self::LInf)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Lr(_) => "Lr",
            Self::LInf => "Linf",
            Self::W1Inf => "W1inf",
            Self::W2r(_) => "W2r",
        }
    }

    pub fn exponent(&self) -> Option<f64> {
        match *self {
            Self::Lr(r) | Self::W2r(r) => Some(r),
            _ => None,
        }
    }

    /// Norm of `u`; `grid` may be `None` only for [`SpatialNorm::LInf`].
    pub fn eval(&self, grid: Option<&Grid1D>, u: &[f64]) -> Result<f64> {
        self.validate()?;
        if let Self::LInf = self {
            return Ok(u.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        }
        let grid = grid.ok_or(Error::MissingGrid)?;
        grid.check(u)?;
        let h = grid.spacing();
        let m = u.len();
        let at = |j: isize| -> f64 {
            if j < 0 || j as usize >= m {
                0.0
            } else {
                u[j as usize]
            }
        };
        Ok(match *self {
            Self::Lr(r) => (h * u.iter().map(|v| v.abs().powf(r)).sum::<f64>()).powf(1.0 / r),
            Self::W1Inf => {
                let vals = u.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
                let grads = face_gradients(grid, u).into_iter().fold(0.0f64, |acc, g| acc.max(g.abs()));
                vals.max(grads)
            }
            Self::W2r(r) => {
                let total: f64 = (0..m as isize)
                    .map(|j| {
                        let d1 = (at(j + 1) - at(j)) / h;
                        let d2 = (at(j + 1) - 2.0 * at(j) + at(j - 1)) / (h * h);
                        at(j).abs().powf(r) + d1.abs().powf(r) + d2.abs().powf(r)
                    })
                    .sum();
                (h * total).powf(1.0 / r)
            }
            Self::LInf => unreachable!(),
        })
    }
}

/// Norm of an interior field on `grid`.
pub fn spatial_norm(spec: SpatialNorm, grid: &Grid1D, u: &[f64]) -> Result<f64> {
    spec.eval(Some(grid), u)
}

/// Minimum of `f'` over `samples` equispaced points of `[lo, hi]`.
pub fn check_ellipticity<F: Flux + ?Sized>(flux: &F, range: (f64, f64), samples: usize) -> f64 {
    let n = samples.max(2);
    let (lo, hi) = range;
    (0..n)
        .map(|i| flux.slope(lo + (hi - lo) * i as f64 / (n - 1) as f64))
        .fold(f64::INFINITY, f64::min)
}

/// Interior field of zeros.
pub fn zeros(grid: &Grid1D) -> Vec<f64> {
    vec![0.0; grid.points()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(1.0, 2).is_err());
        assert!(Grid1D::new(-1.0, 5).is_err());
        let g = Grid1D::new(2.0, 9).unwrap();
        assert_eq!(g.spacing(), 0.2);
    }

    #[test]
    fn sine_mode_is_discrete_eigenvector() {
        let grid = Grid1D::new(1.0, 49).unwrap();
        let h = grid.spacing();
        let u = grid.sample(|x| (PI * x).sin());
        let out = apply_divergence(&FluxFunction::Linear { scale: 1.0 }, &grid, &u).unwrap();
        let s = (PI * h / 2.0).sin();
        let lam = -4.0 / (h * h) * s * s;
        for (o, v) in out.iter().zip(&u) {
            assert!((o - lam * v).abs() < 1e-12 * lam.abs());
        }
    }

    #[test]
    fn zero_field_and_constant_flux_shift() {
        let grid = Grid1D::new(1.0, 20).unwrap();
        let z = zeros(&grid);
        let cubic = FluxFunction::Cubic { strength: 1.0 };
        assert!(apply_divergence(&cubic, &grid, &z).unwrap().iter().all(|&v| v == 0.0));
        let u = grid.sample(|x| x * (1.0 - x) * (3.0 * x).cos());
        let base = apply_divergence(&FluxFunction::Linear { scale: 1.0 }, &grid, &u).unwrap();
        let shifted = CustomFlux { name: "shifted", f: |p: f64| p + 2.5, df: |_| 1.0 };
        let other = apply_divergence(&shifted, &grid, &u).unwrap();
        for (a, b) in base.iter().zip(other) {
            assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
        }
    }

    #[test]
    fn linearized_is_scaled_laplacian() {
        let grid = Grid1D::new(1.0, 10).unwrap();
        let h2 = grid.spacing().powi(2);
        let v = grid.sample(|x| x.sin());
        let op = assemble_linearized(&FluxFunction::Linear { scale: 1.0 }, &grid, &v).unwrap();
        for j in 0..10 {
            assert_eq!(op.diag[j], -2.0 / h2);
        }
        let cubic = FluxFunction::Cubic { strength: 1.0 };
        let zero = assemble_linearized(&cubic, &grid, &zeros(&grid)).unwrap();
        assert_eq!(zero, op);
    }

    #[test]
    fn ellipticity_violation_reports_location() {
        let grid = Grid1D::new(1.0, 5).unwrap();
        let bad = CustomFlux { name: "sin", f: f64::sin, df: f64::cos };
        let v = grid.sample(|x| 4.0 * x);
        // centered gradient 4 -> cos(4) < 0
        match assemble_linearized(&bad, &grid, &v) {
            Err(Error::Ellipticity { location, .. }) => assert_eq!(location, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn norms_of_constant_and_zero() {
        let grid = Grid1D::new(1.0, 99).unwrap();
        let ones = vec![1.0; 99];
        for r in [2.0, 4.0, 7.5] {
            let v = spatial_norm(SpatialNorm::Lr(r), &grid, &ones).unwrap();
            assert!((v - 0.99f64.powf(1.0 / r)).abs() < 1e-14);
        }
        let z = zeros(&grid);
        for spec in [SpatialNorm::Lr(3.0), SpatialNorm::LInf, SpatialNorm::W1Inf, SpatialNorm::W2r(4.0)] {
            assert_eq!(spatial_norm(spec, &grid, &z).unwrap(), 0.0);
        }
        assert_eq!(spatial_norm(SpatialNorm::Lr(1.0), &grid, &z), Err(Error::InvalidExponent(1.0)));
        assert_eq!(SpatialNorm::W2r(4.0).eval(None, &z), Err(Error::MissingGrid));
    }

    #[test]
    fn ellipticity_probe() {
        assert_eq!(check_ellipticity(&FluxFunction::Linear { scale: 1.0 }, (-10.0, 10.0), 101), 1.0);
        assert_eq!(check_ellipticity(&FluxFunction::Cubic { strength: 1.0 }, (-2.0, 2.0), 101), 1.0);
        let s = CustomFlux { name: "sin", f: f64::sin, df: f64::cos };
        assert!(check_ellipticity(&s, (0.0, PI), 11) <= 0.0);
    }

    #[test]
    fn bounded_slope_stays_elliptic() {
        let f = FluxFunction::BoundedSlope { strength: 1.0 };
        let min = check_ellipticity(&f, (-20.0, 20.0), 40001);
        assert!((min - 0.875).abs() < 1e-6, "{min}");
    }
}
