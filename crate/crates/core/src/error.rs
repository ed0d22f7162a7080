use thiserror::Error;

/// Errors raised by the numerical kernels, constructors and verifiers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPd { min_eigenvalue: f64 },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dimension {n} is too small (need at least {min})")]
    DimensionTooSmall { n: usize, min: usize },
    #[error("Schatten exponent must be >= 1, got {0}")]
    BadExponent(f64),
    #[error("function is undefined or non-finite at eigenvalue {0}")]
    FunctionDomain(f64),
    #[error("theta grid of {0} points is too small (need at least 16)")]
    GridTooSmall(usize),
    #[error("frame is not orthonormal (defect {0:.3e})")]
    BadFrame(f64),
    #[error("alpha must lie in (0, 1), got {0}")]
    BadAlpha(f64),
    #[error("negative input: {0}")]
    NegativeInput(String),
    #[error("matrix is not a contraction (norm {0})")]
    NotContraction(f64),
    #[error("bad sampling kind: {0}")]
    BadKind(String),
    #[error("off-diagonal block is not normal (defect {0:.3e})")]
    NotNormal(f64),
    #[error("spectrum leaves the disc: eigenvalue at distance {distance} > radius {radius}")]
    SpectrumOutsideDisc { distance: f64, radius: f64 },
    #[error("X is singular (min |eigenvalue| {0:.3e})")]
    SingularX(f64),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("index j={j} out of range for n={n}")]
    BadJ { j: usize, n: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid search budget: {0}")]
    BadBudget(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
