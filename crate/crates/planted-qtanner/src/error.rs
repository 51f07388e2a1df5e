use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("enumeration budget exceeded: {what} needs {needed} steps, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: String,
        budget: u64,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("matrix is not in the congruence kernel: {0}")]
    NotInKernel(String),
    #[error("generator search failed: {0}")]
    GenerationFailure(String),
    #[error("eigenvalue iteration did not converge after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("search exhausted after {0} candidates")]
    SearchExhausted(u64),
    #[error("beta is not admissible: {0}")]
    BetaNotAdmissible(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("precondition violated: {what} (norm {norm:e})")]
    PreconditionViolated { what: String, norm: f64 },
    #[error("state dimension mismatch: expected {expected}, got {got}")]
    StateDimensionMismatch { expected: usize, got: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("missing artifact: {0}")]
    MissingArtifact(String),
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, needed: impl ToString, budget: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed: needed.to_string(),
            budget,
        }
    }

    /// True when the root cause is an exhausted enumeration budget.
    pub fn is_budget(&self) -> bool {
        match self {
            Error::BudgetExceeded { .. } => true,
            Error::Stage { source, .. } => source.is_budget(),
            _ => false,
        }
    }

    /// True when the root cause is a violated input precondition rather than
    /// an internal or I/O failure.
    pub fn is_precondition(&self) -> bool {
        match self {
            Error::Stage { source, .. } => source.is_precondition(),
            Error::Io(_) | Error::BudgetExceeded { .. } | Error::ConvergenceFailure { .. } => false,
            _ => true,
        }
    }
}
