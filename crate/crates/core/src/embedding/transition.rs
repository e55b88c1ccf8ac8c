use alloc::vec::Vec;

use super::{topology_adapting, CleanPathIndex, Embedding};
use crate::{Error, HardwareGraph, LogicalGraph, LogicalNode, Qubit, Result};

/// Chain for `a` built from the minimizing root of its qubit gain, or
/// `None` when `a` is isolated under the current embedding.
pub fn node_embedding(
    logical: &LogicalGraph,
    hardware: &HardwareGraph,
    emb: &Embedding,
    a: LogicalNode,
) -> Result<Option<Vec<Qubit>>> {
    let gain = CleanPathIndex::new(hardware, emb).gain(logical, a)?;
    Ok(gain.map(|g| g.chain()))
}

/// Result of one [`state_transition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub embedding: Embedding,
    /// Rounds of [`topology_adapting`] needed before the node fit.
    pub expansions: usize,
}

/// Embeds the unembedded node `a`, adapting the topology until the node is
/// no longer isolated.
pub fn state_transition(
    logical: &LogicalGraph,
    hardware: &HardwareGraph,
    emb: &Embedding,
    a: LogicalNode,
) -> Result<Transition> {
    if emb.is_embedded(a) {
        return Err(Error::AlreadyEmbedded(a));
    }
    let mut current: Option<Embedding> = None;
    let mut expansions = 0;
    loop {
        let base = current.as_ref().unwrap_or(emb);
        match node_embedding(logical, hardware, base, a)? {
            Some(chain) => {
                let mut next = current.unwrap_or_else(|| emb.clone());
                for q in chain {
                    next.assign(a, q)?;
                }
                return Ok(Transition { embedding: next, expansions });
            }
            None => {
                current = Some(topology_adapting(logical, hardware, base, a)?);
                expansions += 1;
            }
        }
    }
}

/// Final embedding and efficiency score of one order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedOutcome {
    pub embedding: Embedding,
    /// `F(O)`, the total number of qubits used.
    pub score: usize,
    /// Number of transitions that required topology adaptation.
    pub expansion_steps: usize,
}

/// Applies [`state_transition`] once per node of `order`.
pub fn embed_with_order(
    logical: &LogicalGraph,
    hardware: &HardwareGraph,
    order: &[LogicalNode],
) -> Result<EmbedOutcome> {
    check_permutation(order, logical.node_count())?;
    let mut emb = Embedding::new(logical.node_count(), hardware.node_count());
    let mut expansion_steps = 0;
    for &a in order {
        let t = state_transition(logical, hardware, &emb, a)?;
        if t.expansions > 0 {
            expansion_steps += 1;
        }
        emb = t.embedding;
    }
    Ok(EmbedOutcome {
        score: emb.qubit_count(),
        embedding: emb,
        expansion_steps,
    })
}

pub(crate) fn check_permutation(order: &[LogicalNode], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::InvalidOrder);
    }
    let mut seen = alloc::vec![false; n];
    for &v in order {
        if v >= n || core::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidOrder);
        }
    }
    Ok(())
}
