use thiserror::Error;

/// Input rejected by one of the analysis operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("sequence window is empty")]
    EmptySequence,
    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("start index must be at least 1")]
    BadStartIndex,
    #[error("tail window too short: {available} elements, need at least 2")]
    TailTooShort { available: usize },
    #[error("{name} must be {expected}, got {value}")]
    BadParameter {
        name: &'static str,
        expected: &'static str,
        value: f64,
    },
    #[error("sequences differ in shape: {0}")]
    ShapeMismatch(String),
    #[error("point {x} lies outside the domain {domain}")]
    OutsideDomain { x: f64, domain: String },
    #[error("approach mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("{mode} quotients are unavailable at x = {x}")]
    ModeUnavailable { mode: &'static str, x: f64 },
    #[error("unknown gallery function `{0}`")]
    UnknownGallery(String),
    #[error("invalid gallery parameters for `{name}`: {reason}")]
    BadGalleryParams { name: String, reason: String },
    #[error("invalid sample data: {0}")]
    BadSamples(String),
}

pub type Result<T> = std::result::Result<T, AnalysisError>;
