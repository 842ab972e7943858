use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A negative-order rising factorial hit a zero factor in its denominator.
    #[error("pole: rising factorial ({x})^({n}) has a zero factor")]
    Pole { x: String, n: i64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("mixed quadratic fields: sqrt({0}) and sqrt({1})")]
    MixedField(i64, i64),

    #[error("{0} is not a squarefree integer other than 0 and 1")]
    BadRadicand(i64),

    #[error("no value assigned to variable {0}")]
    MissingVariable(String),

    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}
