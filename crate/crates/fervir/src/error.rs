use thiserror::Error;

/// Errors surfaced by the library. Every failure carries enough context to
/// diagnose it without a backtrace.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in K")]
    DivisionByZero,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("elements belong to different algebras: {0} and {1}")]
    MixedAlgebras(String, String),
    #[error("symbol {symbol} is not admissible in {algebra}")]
    InadmissibleSymbol { symbol: String, algebra: String },
    #[error("index {index} does not lie on the delta={delta} grid")]
    IndexParity { index: String, delta: String },
    #[error("index {index} is outside the generator range |index| <= {bound}")]
    IndexRange { index: String, bound: String },
    #[error("twist parameter must be nonzero")]
    ZeroTwist,
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("operator is not defined on this module: {0}")]
    UnsupportedModule(String),
    #[error("vectors belong to different modules")]
    ModuleMismatch,
    #[error("the zero vector has no eigenvalue data")]
    ZeroVector,
    #[error("vector is not parity-homogeneous")]
    NotHomogeneous,
    #[error("z acts as zero; the construction requires a nonzero level")]
    ZeroLevel,
    #[error("invalid bound: {0}")]
    InvalidBound(String),
    #[error("table window too small: missing indices {missing}")]
    WindowTooSmall { missing: String },
    #[error("invalid input data: {0}")]
    InvalidData(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("parse error at column {col}: {msg}")]
    Parse { msg: String, col: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
