use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not a supported prime")]
    NonPrimeModulus(u64),
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("Inc-extension of a morphism with empty source")]
    EmptySource,
    #[error("variable scheme mismatch")]
    SchemeMismatch,
    #[error("module signature mismatch")]
    SignatureMismatch,
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("operation requires a nonzero input")]
    ZeroInput,
    #[error("element must be nonzero")]
    ZeroElement,
    #[error("input is not homogeneous")]
    NonHomogeneous,
    #[error("width {width} exceeds the certified width {certified}")]
    UncertifiedWidth { width: usize, certified: usize },
    #[error("width cap {0} exceeded before stabilization")]
    WidthCapExceeded(usize),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("width {0} is too large for exhaustive enumeration")]
    WidthTooLarge(usize),
    #[error("unknown monomial order `{0}`")]
    UnknownOrder(String),
    #[error("monomial order `{order}` violates axiom {axiom}")]
    OrderAxiomViolation { order: String, axiom: String },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
