use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A physical or structural constraint on state parameters is violated.
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// A criterion is undefined for the given distribution (zero denominator).
    #[error("criterion undefined: {0}")]
    UndefinedCriterion(String),

    /// A hypergeometric series hits a non-positive integer denominator
    /// parameter before it terminates.
    #[error("degenerate series parameters: {0}")]
    DegenerateSeries(String),

    /// A series failed to converge within its term cap, or produced a
    /// non-finite value.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Constraint(_) | Error::UndefinedCriterion(_) => 2,
            Error::DegenerateSeries(_) | Error::Numerical(_) => 3,
            Error::Config(_) => 1,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
        }
    }
}
