use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module.
///
/// The variants fall into two families that callers (the CLI in particular)
/// treat differently: input/data problems (`Parse`, `Validation`, `Io`,
/// `InvalidGroup`) and violated numeric contracts (everything else).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty profile: cap X = {0} is below 2, no group element qualifies")]
    EmptyProfile(f64),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("gamma function pole at s = {0}")]
    Pole(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("search failed: {0}")]
    SearchFailure(String),

    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed or inconsistent input data.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Validation(_) | Error::Io(_) | Error::InvalidGroup(_)
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
