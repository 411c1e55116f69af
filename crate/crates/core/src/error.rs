use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A table, descriptor or argument does not have the declared shape.
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid parameters for `{name}`: {detail}")]
    InvalidParameter { name: String, detail: String },

    /// A structure was well-formed but broke one of its algebraic laws.
    #[error("`{label}` violates {law}: {detail}")]
    LawViolation {
        label: String,
        law: String,
        detail: String,
    },

    #[error("semiring `{label}` is not idempotent: {element} + {element} = {sum}")]
    NotIdempotent {
        label: String,
        element: String,
        sum: String,
    },

    #[error("level {requested} exceeds certified depth {certified}")]
    DepthExhausted { requested: usize, certified: usize },

    #[error("mismatched {0}")]
    Mismatch(String),

    #[error("enumeration needs {needed} items but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

impl Error {
    pub(crate) fn malformed(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Malformed {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn depth(requested: usize, certified: usize) -> Self {
        Error::DepthExhausted {
            requested,
            certified,
        }
    }
}
