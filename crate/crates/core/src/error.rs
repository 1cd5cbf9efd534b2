use thiserror::Error;

/// Failure while evaluating an operation on concrete elements.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{what} is not a member of the carrier: {value}")]
    NonMember { what: String, value: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("sampling exhausted: {0}")]
    SamplingExhausted(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CarrierError {
    #[error("shape mismatch between element {element} and carrier {carrier}")]
    ShapeMismatch { element: String, carrier: String },
    #[error("carrier {0} is infinite and cannot be enumerated")]
    NotEnumerable(String),
    #[error("restricted carrier {0} rejected 10000 consecutive candidates")]
    SamplingExhausted(String),
}

impl From<CarrierError> for EvalError {
    fn from(err: CarrierError) -> Self {
        match err {
            CarrierError::ShapeMismatch { element, carrier } => {
                EvalError::Shape(format!("{element} does not fit {carrier}"))
            }
            CarrierError::NotEnumerable(c) => EvalError::Unsupported(format!("enumerate {c}")),
            CarrierError::SamplingExhausted(c) => EvalError::SamplingExhausted(c),
        }
    }
}
