use thiserror::Error;

/// Errors raised across the LFMO toolkit.
///
/// Variant names are stable: the CLI prints them as the originating error kind.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LfmoError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precision loss: {what} (error bound {bound:.3e} exceeds {limit:.3e})")]
    PrecisionLoss { what: String, bound: f64, limit: f64 },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    #[error("jump budget exceeded: more than {0} jumps simulated")]
    BudgetExceeded(u64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl LfmoError {
    /// Short machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            LfmoError::Domain(_) => "DomainError",
            LfmoError::InvalidParameter(_) => "InvalidParameter",
            LfmoError::PrecisionLoss { .. } => "PrecisionLoss",
            LfmoError::UnsupportedRegime(_) => "UnsupportedRegime",
            LfmoError::InvalidRegime(_) => "InvalidRegime",
            LfmoError::BudgetExceeded(_) => "BudgetExceeded",
            LfmoError::Config(_) => "ConfigError",
            LfmoError::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for LfmoError {
    fn from(e: std::io::Error) -> Self {
        LfmoError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for LfmoError {
    fn from(e: serde_json::Error) -> Self {
        LfmoError::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, LfmoError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(LfmoError::Domain(msg.into()))
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(LfmoError::InvalidParameter(msg.into()))
}
