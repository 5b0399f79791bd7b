use thiserror::Error;

/// A configuration value was rejected. `field` is the config key at fault.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid config field `{field}`: {reason}")]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("price must be positive and finite, got {0}")]
    NonPositivePrice(f64),
    #[error("price left the representable range at tick {tick}: {price}")]
    PriceOutOfRange { tick: u64, price: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("series too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("non-positive or non-finite price {value} at index {index}")]
    NonPositivePrice { index: usize, value: f64 },
    #[error("degenerate series: {0}")]
    Degenerate(&'static str),
}
