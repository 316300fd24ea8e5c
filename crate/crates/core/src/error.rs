use thiserror::Error;

/// Failures raised by the model, statics and design layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "no link count up to {cap} reaches the required latch clearance at d_c = {diameter} m"
    )]
    NoSolution { diameter: f64, cap: u32 },

    #[error("singular configuration: {what} denominator is {value:e}")]
    SingularConfiguration { what: &'static str, value: f64 },

    #[error("invalid diameter range: {0}")]
    InvalidRange(String),
}

impl ModelError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        ModelError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
