use std::path::PathBuf;

use thiserror::Error;

use crate::graph::NodeId;
use crate::io::smiles::SmilesError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({u}, {v}) references a node outside 0..{node_count}")]
    EndpointOutOfRange {
        u: NodeId,
        v: NodeId,
        node_count: usize,
    },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("expected {expected} items, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("hypernode {0} appears in more than one group")]
    OverlappingGroups(usize),
    #[error("group {0} has fewer than two members")]
    GroupTooSmall(usize),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("node set is empty")]
    EmptySet,
    #[error("hypernode identity must be a non-empty string")]
    EmptyIdentity,
    #[error("({0}, {1}) is not an edge of the tokenized graph")]
    NotAnEdge(usize, usize),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("unsupported format_version {found} (this build reads version {expected})")]
    VersionMismatch { found: u64, expected: u64 },
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },

    #[error("missing input file {}", .0.display())]
    MissingFile(PathBuf),
    #[error("{}:{line}: {message}", .path.display())]
    MalformedLine {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}:{line}: edge references node {node}, which is absent from the graph indicator", .path.display())]
    DanglingEdge {
        path: PathBuf,
        line: usize,
        node: usize,
    },
    #[error("{}:{line}: edge ({u}, {v}) spans graphs {graph_u} and {graph_v}", .path.display())]
    CrossGraphEdge {
        path: PathBuf,
        line: usize,
        u: usize,
        v: usize,
        graph_u: i64,
        graph_v: i64,
    },
    #[error("{}:{line}: {source}", .path.display())]
    Smiles {
        path: PathBuf,
        line: usize,
        #[source]
        source: SmilesError,
    },
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", .path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile(path)
        } else {
            Error::Io { path, source }
        }
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::SchemaViolation {
            path: path.into(),
            message: message.into(),
        }
    }
}
