use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid denominator: {0}")]
    InvalidDenominator(String),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("cannot derive: {0}")]
    CannotDerive(String),
    #[error("incompatible majors: {0}")]
    IncompatibleMajors(String),
    #[error("resource limit exceeded: requested {requested}, cap {cap}")]
    ResourceLimit { cap: usize, requested: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
