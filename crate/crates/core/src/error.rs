use thiserror::Error;

/// Errors surfaced by parsing, validation and the evaluation pipeline.
///
/// Arithmetic overflow is not represented here: exponents and weights are
/// capped at parse time so that checked arithmetic cannot overflow at desk
/// scale, and an overflow beyond those caps is a hard (panicking) error.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text. `line` is 1-based; 0 means "no line context".
    #[error("{}{msg}", if *line > 0 { format!("input:{line}: ") } else { String::new() })]
    Parse { line: usize, msg: String },

    /// A precondition on a library call was violated (unit ideal where a
    /// proper one is required, containment failures, bad parameters, ...).
    #[error("{0}")]
    Invalid(String),

    /// The requested prime is not an associated prime of the module.
    /// Deliberately distinct from an infinite v-number.
    #[error("prime {prime} is not associated to the module")]
    NotAssociated { prime: String },

    /// A configured resource cap was exceeded; partial results may exist.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn cap(msg: impl Into<String>) -> Self {
        Error::ResourceCap(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
