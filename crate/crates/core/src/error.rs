//! Crate-wide error type.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by tensor construction, algebra, estimation, and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A dimension of zero was supplied where every mode must be non-empty.
    #[error("shape {dims:?} contains a zero dimension")]
    ZeroDimension { dims: Vec<usize> },

    /// The element count of a shape overflows the address space.
    #[error("shape {dims:?} has more elements than fit in usize")]
    SizeOverflow { dims: Vec<usize> },

    /// A data buffer does not match the element count of its shape.
    #[error("data length {found} does not match shape element count {expected}")]
    DataLength { expected: usize, found: usize },

    /// Two tensors (or a tensor and a factor) have incompatible dimensions.
    #[error("dimension mismatch in {context}: {left:?} vs {right:?}")]
    DimMismatch {
        context: &'static str,
        left: Vec<usize>,
        right: Vec<usize>,
    },

    /// A mode split does not partition the tensor order.
    #[error("split ({row_modes}|{col_modes}) does not partition order {order}")]
    InvalidSplit {
        row_modes: usize,
        col_modes: usize,
        order: usize,
    },

    /// A mode index is out of range or repeated.
    #[error("invalid mode list for order-{order} tensor: {detail}")]
    InvalidModes { order: usize, detail: String },

    /// An operation that requires a square split (pairwise equal row and
    /// column dimensions) was applied to a non-square tensor.
    #[error("operation requires a square split: row dims {rows:?}, column dims {cols:?}")]
    NotSquare { rows: Vec<usize>, cols: Vec<usize> },

    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A tensor expected to be Hermitian under its split is not.
    #[error("tensor is not Hermitian: max deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    /// A correlation or covariance has an eigenvalue below the clamping
    /// threshold and cannot be treated as positive semidefinite.
    #[error(
        "matrix is not positive semidefinite: eigenvalue {min_eigenvalue:.6e} \
         below threshold {threshold:.6e}"
    )]
    NotPositiveSemidefinite {
        min_eigenvalue: f64,
        threshold: f64,
    },

    /// A covariance required to be invertible is numerically singular.
    #[error("singular covariance: condition estimate {condition:.3e}")]
    SingularCovariance { condition: f64 },

    /// A linear map required to be invertible is numerically singular.
    #[error("matricized tensor is singular and cannot be inverted")]
    Singular,

    /// An iterative solver exhausted its iteration budget.
    #[error("{what} did not converge within {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// An iteration produced a numerically zero iterate and cannot proceed.
    #[error("{what} hit a vanishing iterate")]
    DegenerateIterate { what: &'static str },

    /// An evaluation point lies outside the domain of a transform or of the
    /// existence set of a fixed-point system.
    #[error("{what}: point {point} is outside the valid domain")]
    OutsideDomain { what: &'static str, point: f64 },

    /// An estimator was called with too few samples.
    #[error("{what} requires at least {min} samples, got {found}")]
    NotEnoughSamples {
        what: &'static str,
        min: usize,
        found: usize,
    },

    /// Underlying I/O failure while reading or writing tensor files.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A tensor file does not conform to the documented format.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
