use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A literal did not match its grammar.
    #[error("parse error in rule `{rule}` at offset {offset}: {message} (found {token:?})")]
    Parse {
        rule: &'static str,
        offset: usize,
        token: String,
        message: String,
    },
    /// A precondition of an operation was violated.
    #[error("{0}")]
    Domain(String),
    /// An exact decision could not be reached within the configured budget.
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(
        rule: &'static str,
        offset: usize,
        token: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            rule,
            offset,
            token: token.into(),
            message: message.into(),
        }
    }
}
