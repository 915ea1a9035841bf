//! Discontinuous Galerkin dG(q-1) time stepping for quasilinear parabolic
//! problems `u_t = (f(u_x))_x` on a 1D Dirichlet interval.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! * [`radau`]: right-Radau nodes, Radau IIA tableaux, Lagrange bases and
//!   Gauss-Legendre rules.
//! * [`trajectory`]: piecewise polynomials in time with spatial-vector
//!   coefficients, the Radau reconstruction, the L2 projection and the
//!   endpoint/moment interpolant.
//! * [`spatial`]: the finite-difference flux divergence, its linearization
//!   and discrete spatial norms.
//! * [`stepper`]: nonlinear dG stepping by Newton's method, linear
//!   non-autonomous dG and a plain Radau IIA solver.
//! * [`norms`]: Bochner-type `L^p((0,t);X)` norms and the discrete
//!   `l^p` norms sampled at Radau points.
//! * [`analysis`]: convergence studies with manufactured solutions, the
//!   residual estimator, the maximal-regularity probe and interpolant
//!   studies.
#![no_std]

extern crate alloc;

pub mod analysis;
mod error;
pub mod linalg;
pub mod norms;
pub mod radau;
pub mod spatial;
pub mod stepper;
pub mod sum;
pub mod trajectory;

pub use error::{Error, Result};
pub use radau::{gauss_rule, lagrange_eval, radau_nodes, radau_tableau, QuadratureRule, RadauTableau};
pub use spatial::{Flux, FluxFunction, Grid1D, SpatialNorm};
pub use trajectory::{PiecewiseTrajectory, TimePartition};
