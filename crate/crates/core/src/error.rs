use thiserror::Error;

/// Errors surfaced by every layer of the crate.
///
/// The variants map one-to-one onto the CLI exit codes: input errors exit 1,
/// exhausted budgets exit 2, and consistency violations (a proved theorem
/// contradicted by a computation, i.e. a bug) exit 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("internal consistency violation: {0}")]
    Inconsistency(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Precondition(_) | Error::Io(_) | Error::Json(_) => 1,
            Error::BudgetExceeded(_) => 2,
            Error::Inconsistency(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
