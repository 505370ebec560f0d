use thiserror::Error;

use crate::topology::VertexId;

pub type Result<T, E = ArwError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArwError {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("vertex {vertex:?} is not valid for topology {topology}")]
    InvalidVertex { topology: String, vertex: VertexId },

    #[error("vertex coordinates out of encodable range for {0}")]
    OutOfRange(String),

    #[error("invalid particle law: {0}")]
    InvalidLaw(String),

    #[error("invalid phase point (lambda={lambda}, mu={mu}): {reason}")]
    InvalidPhasePoint { lambda: f64, mu: f64, reason: String },

    #[error("uniform variate {0} is outside (0, 1]")]
    UniformOutOfRange(f64),

    #[error("explicit instruction array at {vertex:?} exhausted at slot {slot}")]
    ExplicitExhausted { vertex: VertexId, slot: u64 },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("inputs are not comparable: {0}")]
    Incomparable(String),

    #[error("comparison window is empty")]
    WindowUnspecified,

    #[error("state space of {states} realizations exceeds the limit of {limit}")]
    StateSpaceTooLarge { states: u128, limit: u128 },

    #[error("event cannot be enumerated: {0}")]
    NotEnumerable(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("configuration error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for ArwError {
    fn from(e: std::io::Error) -> Self {
        ArwError::Io(e.to_string())
    }
}
