//! Chain-based minor embedding of logical (QUBO) graphs into Chimera
//! hardware graphs.
//!
//! Every logical node is mapped to a connected chain of hardware qubits, one
//! node per step, so the embedding stays feasible after each step. On top of
//! the step function sit an order search with lower-bound pruning
//! ([`exploration`]) and a Markov decision process view of the same process
//! ([`env`]) for learning order-selection policies.
//!
//! The crate is `no_std` and only needs `alloc`. File IO, the wire protocol
//! and the command line live in the `chainembed` crate.
#![no_std]

extern crate alloc;

mod error;
pub use error::*;

pub mod embedding;
pub mod env;
pub mod exploration;
pub mod graph;
pub mod text;

pub use embedding::{Embedding, ValidationReport, Violation};
pub use graph::{HardwareGraph, LogicalGraph};

/// Index of a node in a [`LogicalGraph`].
pub type LogicalNode = usize;

/// Index of a qubit (node) in a [`HardwareGraph`].
pub type Qubit = usize;
