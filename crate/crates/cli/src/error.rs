use std::fmt;

/// Failures, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input, or a rejected term: exit 2.
    Invalid(String),
    /// The subject disagreed with its oracle: exit 3.
    Mismatch(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Mismatch(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "error: {m}"),
            CliError::Mismatch(m) => write!(f, "mismatch: {m}"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Lifts any displayable error into [`CliError::Invalid`].
pub fn invalid<E: fmt::Display>(context: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Invalid(format!("{context}: {e}"))
}
