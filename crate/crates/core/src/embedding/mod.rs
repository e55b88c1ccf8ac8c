//! Chain embeddings and the per-node embedding procedure.
//!
//! An [`Embedding`] maps each logical node to a chain of hardware qubits.
//! [`state_transition`] embeds one more logical node while keeping the whole
//! embedding feasible, expanding the occupied grid via [`topology_adapting`]
//! whenever the node cannot be reached through free qubits.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, LogicalNode, Qubit, Result};

mod adapt;
mod paths;
mod transition;
mod validate;

pub use adapt::{insert_cut, topology_adapting, Cut};
pub use paths::{qubit_gain, shortest_clean_path, CleanPath, CleanPathIndex, Gain};
pub use transition::{embed_with_order, node_embedding, state_transition, EmbedOutcome, Transition};
pub(crate) use transition::check_permutation;
pub use validate::{validate, validate_full, Constraint, ValidationReport, Violation};

const FREE: u32 = u32::MAX;

fn node_id(v: LogicalNode) -> Result<u32> {
    u32::try_from(v)
        .ok()
        .filter(|&id| id != FREE)
        .ok_or(Error::InvalidParameter("logical node id does not fit in 32 bits"))
}

/// One-to-many map from logical nodes to chains of qubits.
///
/// Chains keep insertion order. The reverse map records the owner of every
/// occupied qubit; it is the exact inverse of the chains for embeddings
/// built through [`Embedding::assign`]. [`Embedding::from_chains`] accepts
/// overlapping chains so that broken inputs can be loaded and reported by
/// [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    chains: Vec<Vec<Qubit>>,
    /// Owner per qubit, [`FREE`] when unoccupied.
    owner: Vec<u32>,
    occupied: usize,
}

impl Embedding {
    /// The empty embedding for `logical_nodes` nodes into `qubits` qubits.
    pub fn new(logical_nodes: usize, qubits: usize) -> Self {
        Self {
            chains: vec![Vec::new(); logical_nodes],
            owner: vec![FREE; qubits],
            occupied: 0,
        }
    }

    /// Builds an embedding from raw chains without checking disjointness.
    /// A qubit listed in several chains is owned by the first of them.
    pub fn from_chains(qubits: usize, chains: Vec<Vec<Qubit>>) -> Result<Self> {
        let mut owner = vec![FREE; qubits];
        let mut occupied = 0;
        for (v, chain) in chains.iter().enumerate() {
            for &q in chain {
                if q >= qubits {
                    return Err(Error::NodeOutOfRange { node: q, node_count: qubits });
                }
                if owner[q] == FREE {
                    owner[q] = node_id(v)?;
                    occupied += 1;
                }
            }
        }
        Ok(Self { chains, owner, occupied })
    }

    /// Adds the free qubit `q` to the chain of `v`.
    pub fn assign(&mut self, v: LogicalNode, q: Qubit) -> Result<()> {
        if q >= self.owner.len() {
            return Err(Error::NodeOutOfRange { node: q, node_count: self.owner.len() });
        }
        if self.owner[q] != FREE {
            return Err(Error::QubitOccupied(q));
        }
        self.owner[q] = node_id(v)?;
        self.chains[v].push(q);
        self.occupied += 1;
        Ok(())
    }

    pub fn logical_count(&self) -> usize {
        self.chains.len()
    }

    pub fn hardware_count(&self) -> usize {
        self.owner.len()
    }

    pub fn chain(&self, v: LogicalNode) -> &[Qubit] {
        &self.chains[v]
    }

    pub fn chains(&self) -> &[Vec<Qubit>] {
        &self.chains
    }

    pub fn owner(&self, q: Qubit) -> Option<LogicalNode> {
        (self.owner[q] != FREE).then(|| self.owner[q] as LogicalNode)
    }

    pub fn is_free(&self, q: Qubit) -> bool {
        self.owner[q] == FREE
    }

    pub fn is_embedded(&self, v: LogicalNode) -> bool {
        !self.chains[v].is_empty()
    }

    /// Total chain size `Σ_v |φ(v)|`.
    pub fn qubit_count(&self) -> usize {
        self.chains.iter().map(Vec::len).sum()
    }

    /// Number of distinct occupied qubits.
    pub fn occupied_count(&self) -> usize {
        self.occupied
    }

    pub fn embedded_nodes(&self) -> impl Iterator<Item = LogicalNode> + '_ {
        self.chains
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .map(|(v, _)| v)
    }

    pub fn embedded_count(&self) -> usize {
        self.chains.iter().filter(|c| !c.is_empty()).count()
    }

    /// Per-qubit owner ids with `-1` for free qubits.
    pub fn hardware_features(&self) -> Vec<i64> {
        self.owner
            .iter()
            .map(|&o| if o == FREE { -1 } else { i64::from(o) })
            .collect()
    }

    /// Number of free neighbors of `q`.
    pub(crate) fn free_degree(&self, neighbors: &[Qubit]) -> usize {
        neighbors.iter().filter(|&&w| self.owner[w] == FREE).count()
    }
}
