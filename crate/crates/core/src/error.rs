use std::path::PathBuf;

use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("density is undefined for a graph with {0} node(s)")]
    UndefinedDensity(usize),

    #[error("node {node} is not in a graph of {n} nodes")]
    InvalidNode { node: NodeId, n: usize },

    #[error("unknown node label `{0}`")]
    UnknownLabel(String),

    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),

    #[error("cannot reach {target} communities: {reason}")]
    InvalidTarget { target: usize, reason: String },

    #[error("modularity is undefined for a graph without edges")]
    UndefinedModularity,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("seed node {node} is outside a graph of {n} nodes")]
    InvalidSeed { node: NodeId, n: usize },

    #[error("invalid seed set: {0}")]
    EmptySeeds(&'static str),

    #[error("influenced count {count} exceeds node count {n}")]
    InvalidCount { count: usize, n: usize },

    #[error("seed budget must be positive, got {0}")]
    InvalidBudget(usize),

    #[error("percent must be in 1..=100, got {0}")]
    InvalidPercent(u32),

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("community-scoped method {0} needs a partition")]
    MissingPartition(String),

    #[error("unknown {kind} `{value}`")]
    UnknownName { kind: &'static str, value: String },

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl AsRef<std::path::Path>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.as_ref().display().to_string(),
            line,
            msg: msg.into(),
        }
    }
}
