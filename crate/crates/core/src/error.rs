use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("non-positive weight {weight} on edge ({i}, {j})")]
    NonPositiveWeight { i: usize, j: usize, weight: f64 },
    #[error("index {index} out of range for size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid range [{low}, {high}]")]
    InvalidRange { low: f64, high: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("every eigenvalue is structurally zero")]
    AllZero,
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("matrix dimension {dim} exceeds limit {limit}")]
    SizeLimitExceeded { dim: usize, limit: usize },
    #[error("sampler failed after {0} rounds")]
    SamplerFailure(usize),
    #[error("root not bracketed on [{0}, {1}]")]
    BracketFailure(f64, f64),
    #[error("numerical divergence at step {0}")]
    NumericalDivergence(usize),
    #[error("malformed line {line}: {msg}")]
    MalformedLine { line: usize, msg: String },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("unsupported document version {0}")]
    VersionMismatch(u64),
    #[error("every trial of {label:?} failed ({errors} errors, {diverged} diverged)")]
    AllTrialsFailed { label: String, errors: usize, diverged: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable identifier of the variant, used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicateEdge(..) => "DuplicateEdge",
            Error::SelfLoop(_) => "SelfLoop",
            Error::NonPositiveWeight { .. } => "NonPositiveWeight",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::InvalidRange { .. } => "InvalidRange",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::InsufficientData(_) => "InsufficientData",
            Error::InvalidParams(_) => "InvalidParams",
            Error::Disconnected => "Disconnected",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::AllZero => "AllZero",
            Error::NotSymmetric(_) => "NotSymmetric",
            Error::SizeLimitExceeded { .. } => "SizeLimitExceeded",
            Error::SamplerFailure(_) => "SamplerFailure",
            Error::BracketFailure(..) => "BracketFailure",
            Error::NumericalDivergence(_) => "NumericalDivergence",
            Error::MalformedLine { .. } => "MalformedLine",
            Error::EmptyGraph => "EmptyGraph",
            Error::ParseError(_) => "ParseError",
            Error::VersionMismatch(_) => "VersionMismatch",
            Error::AllTrialsFailed { .. } => "AllTrialsFailed",
            Error::Io(_) => "Io",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::ParseError(e.to_string())
    }
}
