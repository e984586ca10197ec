use thiserror::Error;

use crate::fieldlang::{FieldError, ParseError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("degenerate principal symbol at {x:?}: |det e| = {det:e}")]
    Degenerate { x: [f64; 4], det: f64 },
    #[error("{what} is not Hermitian (residual {residual:e})")]
    NotHermitian { what: String, residual: f64 },
    #[error("density must be a positive real: {0}")]
    Density(String),
    #[error("invalid gauge field: {0}")]
    Gauge(String),
    #[error("mass must be non-negative, got {0}")]
    NegativeMass(f64),
    #[error("singular linear system: {0}")]
    Singular(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
