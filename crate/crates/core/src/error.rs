use thiserror::Error;

use crate::trace::Trace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("topology must have at least one node")]
    EmptyTopology,

    #[error("invalid topology parameters: {0}")]
    InvalidTopology(String),

    #[error("topology is not {}connected", if *.directed { "strongly " } else { "" })]
    Disconnected { directed: bool },

    #[error("invalid bit string: {0}")]
    InvalidBitstring(String),

    #[error("action {action} at node {node} is illegal under {model} semantics")]
    IllegalAction { node: usize, action: &'static str, model: &'static str },

    #[error("action map has {got} entries, topology has {expected} nodes")]
    ActionCount { got: usize, expected: usize },

    #[error("{0}")]
    ModelMismatch(String),

    #[error("round cap of {cap} exceeded")]
    RoundCap { cap: u64, trace: Box<Trace> },

    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),

    #[error("trace line {line}: {msg}")]
    TraceParse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
