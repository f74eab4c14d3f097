use thiserror::Error;

/// Errors produced while parsing or combining core domain values.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    /// A text encoding did not match the canonical form for the named field.
    #[error("invalid {field}: {reason}")]
    Parse { field: &'static str, reason: String },

    /// Arithmetic produced a value outside the 256-bit unsigned range.
    #[error("amount overflow: result exceeds 2^256-1")]
    AmountOverflow,

    /// Subtraction would have produced a negative amount.
    #[error("amount underflow: result would be negative")]
    AmountUnderflow,
}

impl CoreError {
    pub fn parse(field: &'static str, reason: impl Into<String>) -> Self {
        CoreError::Parse { field, reason: reason.into() }
    }
}
