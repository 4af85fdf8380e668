use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsaiError {
    #[error("valuation of zero")]
    ValuationOfZero,
    #[error("precision exhausted: {needed} p-adic digits needed, {available} available")]
    Precision { needed: i64, available: u32 },
    #[error("pole at s = {0}")]
    Pole(String),
    #[error("empty evaluation grid")]
    EmptyGrid,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("quadrature did not converge (estimated error {0:e})")]
    Quadrature(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, AsaiError>;
