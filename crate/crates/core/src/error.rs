use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter failed validation. `field` is a dotted path such as
    /// `mu[1]` or `alpha[0][1]`.
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error("class index {index} out of range for {classes} classes")]
    ClassIndex { index: usize, classes: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The threshold scan ran out of room in the key pool.
    #[error("no ring size K1 <= {max_k1} satisfies n*Lambda_m > log n (n = {n})")]
    NoSolution { n: usize, max_k1: u64 },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
