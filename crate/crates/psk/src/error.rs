use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PskError {
    #[error("frame mismatch: dimension {left} vs {right}")]
    FrameMismatch { left: usize, right: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("curvature is not of type (1,1) or does not commute with I (residual {0:e})")]
    NotKahlerCurvature(f64),
    #[error("frame is not adapted to the complex structure and cannot be reordered")]
    FrameNotAdapted,
    #[error("operation requires complex dimension {expected}, got {got}")]
    UnsupportedDimension { expected: usize, got: usize },
    #[error("parameter out of domain: {0}")]
    OutOfDomain(String),
    #[error("value {0} is not representable as an exact quadratic surd")]
    NotExact(f64),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, PskError>;
