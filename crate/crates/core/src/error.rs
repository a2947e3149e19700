use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {reason}: {content:?}")]
    Parse {
        line: usize,
        content: String,
        reason: String,
    },

    /// Input data that is well-formed but violates a semantic constraint.
    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("resource limit exceeded: {active} active partial paths (cap {cap})")]
    ResourceLimit { active: usize, cap: usize },

    #[error("position of vertex {vertex:?} became non-finite at iteration {iteration}")]
    NonFinite { iteration: usize, vertex: String },

    #[error("degenerate layout: {0}")]
    DegenerateLayout(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("order {order}, repetition {repetition}: {source}")]
    Experiment {
        order: usize,
        repetition: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Process exit status classes used by the command line tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    Usage = 1,
    Data = 2,
    Resource = 3,
}

impl Error {
    pub(crate) fn invalid(msg: impl fmt::Display) -> Self {
        Error::InvalidArgument(msg.to_string())
    }

    pub(crate) fn parse(line: usize, content: &str, reason: impl fmt::Display) -> Self {
        Error::Parse {
            line,
            content: content.to_string(),
            reason: reason.to_string(),
        }
    }

    pub fn exit_class(&self) -> ExitClass {
        match self {
            Error::InvalidArgument(_) => ExitClass::Usage,
            Error::ResourceLimit { .. } => ExitClass::Resource,
            Error::Experiment { source, .. } => source.exit_class(),
            _ => ExitClass::Data,
        }
    }
}
