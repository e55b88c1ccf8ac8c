use core::fmt;

use crate::{LogicalNode, Qubit};

/// Errors raised by graph construction and the embedding procedures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A graph dimension or generator parameter is out of range.
    InvalidParameter(&'static str),
    /// A node index is not below the node count.
    NodeOutOfRange { node: usize, node_count: usize },
    SelfLoop(usize),
    DuplicateEdge(usize, usize),
    /// Text input could not be parsed; `line` is 1-based.
    Parse { line: usize, message: alloc::string::String },
    /// No chain can grow any further and the pending node is still isolated.
    HardwareExhausted,
    /// A logical node was expected to be unembedded.
    AlreadyEmbedded(LogicalNode),
    /// A qubit was expected to be free.
    QubitOccupied(Qubit),
    /// An order is not a permutation of the logical nodes.
    InvalidOrder,
    /// The brute-force oracle refuses graphs above this node count.
    TooLarge { nodes: usize, limit: usize },
    /// The action is out of range or already embedded.
    IllegalAction(LogicalNode),
    /// Every logical node is already embedded.
    EpisodeDone,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::NodeOutOfRange { node, node_count } => {
                write!(f, "node {node} out of range (node count {node_count})")
            }
            Error::SelfLoop(u) => write!(f, "self-loop on node {u}"),
            Error::DuplicateEdge(u, v) => write!(f, "duplicate edge ({u}, {v})"),
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
            Error::HardwareExhausted => write!(f, "hardware exhausted"),
            Error::AlreadyEmbedded(v) => write!(f, "logical node {v} is already embedded"),
            Error::QubitOccupied(q) => write!(f, "qubit {q} is occupied"),
            Error::InvalidOrder => write!(f, "order is not a permutation of the logical nodes"),
            Error::TooLarge { nodes, limit } => {
                write!(f, "graph has {nodes} nodes, exhaustive search is limited to {limit}")
            }
            Error::IllegalAction(a) => write!(f, "illegal action {a}"),
            Error::EpisodeDone => write!(f, "episode already finished"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
