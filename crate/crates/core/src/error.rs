use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must have dimension at least 1")]
    EmptyMatrix,

    #[error("matrix is not Hermitian: max |M - M^*| = {residual:e} exceeds {tolerance:e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("matrix is not unitary: max |U U^* - I| = {residual:e} exceeds {tolerance:e}")]
    NotUnitary { residual: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid Schatten exponent {0}: p must satisfy p >= 1")]
    InvalidExponent(f64),

    #[error("cluster tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("direct sum of an empty block list")]
    EmptyBlockList,

    #[error("unsupported polynomial dimension d = {0}")]
    InvalidPolyDimension(usize),

    #[error("coefficient index {index:?} lies outside {region}")]
    IndexOutOfSupport { index: Vec<i64>, region: String },

    #[error("grid function has no value at {0}")]
    MissingGridValue(String),

    #[error("operator norm {norm} violates the bound ||A|| < pi required by the Fourier calculus")]
    NormPrecondition { norm: f64 },

    #[error("zero denominator in Lipschitz ratio ({0})")]
    ZeroDenominator(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported for this instance: {0}")]
    Unsupported(String),

    #[error("witness block {k} rejected: {reason}")]
    InvalidBlock { k: usize, reason: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
