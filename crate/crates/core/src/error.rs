use thiserror::Error;

use crate::poly::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: expected length {expected}, found {found}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    #[error("point not on zero locus: generator {generator} evaluates to {value}")]
    PointNotOnLocus { generator: usize, value: String },
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
