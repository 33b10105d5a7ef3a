use thiserror::Error;

/// Errors raised by matrix construction and the spectral routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix must have positive dimension")]
    Empty,
    #[error("expected {} entries for a {n}x{n} matrix, got {len}", n * n)]
    BadLength { n: usize, len: usize },
    #[error("row {row} has {len} entries, expected {n}")]
    RaggedRow { row: usize, len: usize, n: usize },
    #[error("imaginary part must have the same {n}x{n} shape as the real part")]
    ImagShape { n: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian: ||H - H*||_F = {residual:.3e}")]
    NotHermitian { residual: f64 },
    #[error("matrix is not PSD: eigenvalue {eigenvalue:.3e} below threshold {threshold:.3e}")]
    NotPsd { eigenvalue: f64, threshold: f64 },
    #[error("exponent {0} outside [0, 1]")]
    BadExponent(f64),
}

/// Top-level error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("unknown inequality id `{0}`")]
    UnknownInequality(String),
    #[error("{id} takes {expected} matrix input(s), got {got}")]
    Arity {
        id: String,
        expected: usize,
        got: usize,
    },
    #[error("unknown implication id `{0}` (expected one of C2.2, C2.4, C3.4, P2.5)")]
    UnknownImplication(String),
    #[error("unknown ensemble family `{0}`")]
    UnknownFamily(String),
    #[error("unknown example `{0}` (expected remark22 or remark_ex)")]
    UnknownExample(String),
    #[error("family {family} needs n >= {min}, got {n}")]
    FamilyDimension {
        family: &'static str,
        min: usize,
        n: usize,
    },
    #[error("invalid parameter `{name}` for family {family}: {reason}")]
    FamilyParam {
        family: &'static str,
        name: String,
        reason: String,
    },
    #[error("entry {id} takes {entry_arity} input(s) but family {family} produces {family_arity}")]
    FamilyArity {
        id: String,
        entry_arity: usize,
        family: String,
        family_arity: usize,
    },
    #[error("matrix JSON parse error: {0}")]
    Parse(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
