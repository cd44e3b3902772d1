use thiserror::Error;

use crate::domain::Mode;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("courier speed {courier} must exceed convoy speed {convoy}, otherwise the couriers never catch the convoy")]
    SpeedOrder { convoy: f64, courier: f64 },
    #[error("{what} {beta} is not below the speed of light")]
    Superluminal { what: &'static str, beta: f64 },
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("operation requires a {expected} config, got {found}")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error("{what} exceeds double-precision range")]
    Overflow { what: &'static str },
    #[error("tour numbers start at 1, got {0}")]
    InvalidTour(u32),
    #[error("{0}")]
    InvalidArgument(String),
}
