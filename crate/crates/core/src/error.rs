use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("slope snapping is ambiguous between {0} and {1}")]
    SnapAmbiguity(String, String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("no reference class matches: {0}")]
    UnclassifiableInput(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no splitting vector within extension degree {0}")]
    ExtensionBoundExceeded(usize),
    #[error("module is not mu-ordinary (class {0})")]
    NotMuOrdinary(usize),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("divisor vectors are not dual up to a constant: {0}")]
    DualityViolation(String),
    #[error("similitude constants differ: {0} vs {1}")]
    IncomparableConstants(i64, i64),
    #[error("polygon endpoints differ: {0}")]
    IncomparableEndpoints(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("schema error: {0}")]
    Schema(String),
}

impl Error {
    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InsufficientPrecision(_) => "insufficient_precision",
            Error::SnapAmbiguity(..) => "snap_ambiguity",
            Error::CapExceeded(_) => "cap_exceeded",
            Error::UnclassifiableInput(_) => "unclassifiable_input",
            Error::InvalidParams(_) => "invalid_params",
            Error::ExtensionBoundExceeded(_) => "extension_bound_exceeded",
            Error::NotMuOrdinary(_) => "not_mu_ordinary",
            Error::InvariantViolation(_) => "invariant_violation",
            Error::DualityViolation(_) => "duality_violation",
            Error::IncomparableConstants(..) => "incomparable_constants",
            Error::IncomparableEndpoints(_) => "incomparable_endpoints",
            Error::NotInvertible(_) => "not_invertible",
            Error::Schema(_) => "schema",
        }
    }
}
