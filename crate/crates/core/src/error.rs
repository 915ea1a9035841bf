use alloc::string::String;
use core::fmt;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Stage count outside the supported range `1..=12`.
    UnsupportedOrder(usize),
    /// Gauss rule point count outside `1..=32`.
    UnsupportedPointCount(usize),
    /// Interpolation nodes are not pairwise distinct.
    DegenerateBasis,
    /// A basis index is out of range for the node set.
    IndexOutOfRange { index: usize, len: usize },
    /// Time outside the partition's interval `[0, T]`.
    TimeOutOfRange { t: f64, end: f64 },
    /// Discontinuous trajectories are ambiguous at `t = 0`; ask for the
    /// initial value or the right limit explicitly.
    AmbiguousInitialValue,
    /// Polynomial degree or representation does not match the operation.
    DegreeMismatch { expected: usize, found: usize },
    /// Field lengths differ.
    DimensionMismatch { expected: usize, found: usize },
    /// Invalid grid or partition parameters.
    InvalidGrid(String),
    /// Invalid norm exponent.
    InvalidExponent(f64),
    /// The norm needs a spatial grid but none was supplied.
    MissingGrid,
    /// Window end beyond the partition.
    InvalidWindow { end: usize, intervals: usize },
    /// The flux slope is not positive at a probed gradient.
    Ellipticity { location: usize, gradient: f64, slope: f64 },
    /// The coefficient of a linear operator is not positive.
    Coercivity { location: usize, t: f64, value: f64 },
    /// A flux or field evaluation produced a non-finite value.
    NonFinite { location: usize, value: f64 },
    /// A linear system could not be factored.
    SingularMatrix { pivot: usize },
    /// Newton's method did not reach the tolerance.
    NewtonDivergence { iterations: usize, residual: f64 },
    /// A step failed inside a trajectory solve.
    StepFailed { interval: usize, source: alloc::boxed::Box<Error> },
    /// An internal consistency check failed.
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedOrder(q) => write!(f, "unsupported stage count {q} (supported: 1..=12)"),
            Error::UnsupportedPointCount(m) => write!(f, "unsupported Gauss point count {m} (supported: 1..=32)"),
            Error::DegenerateBasis => write!(f, "interpolation nodes are not pairwise distinct"),
            Error::IndexOutOfRange { index, len } => write!(f, "basis index {index} out of range for {len} nodes"),
            Error::TimeOutOfRange { t, end } => write!(f, "time {t} outside [0, {end}]"),
            Error::AmbiguousInitialValue => {
                write!(f, "discontinuous trajectory at t = 0: use initial_value or right_limit")
            }
            Error::DegreeMismatch { expected, found } => {
                write!(f, "degree mismatch: expected {expected}, found {found}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::InvalidExponent(r) => write!(f, "invalid exponent {r}: must be finite and > 1"),
            Error::MissingGrid => write!(f, "spatial norm requires a grid"),
            Error::InvalidWindow { end, intervals } => {
                write!(f, "window end {end} exceeds interval count {intervals}")
            }
            Error::Ellipticity { location, gradient, slope } => write!(
                f,
                "ellipticity violated at location {location}: f'({gradient}) = {slope} <= 0"
            ),
            Error::Coercivity { location, t, value } => write!(
                f,
                "coercivity violated at location {location}, t = {t}: coefficient {value} <= 0"
            ),
            Error::NonFinite { location, value } => write!(f, "non-finite value {value} at location {location}"),
            Error::SingularMatrix { pivot } => write!(f, "singular matrix at pivot {pivot}"),
            Error::NewtonDivergence { iterations, residual } => write!(
                f,
                "Newton iteration failed after {iterations} iterations (residual {residual:e})"
            ),
            Error::StepFailed { interval, source } => write!(f, "step {interval} failed: {source}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
