//! Search over embedding orders.
//!
//! The efficiency score `F(O)` of an order is the qubit count of the
//! embedding produced by following it. This module provides the lower bound
//! used for pruning, the randomized branch-and-prune refinement of a single
//! order, the potential-weighted exploration across a set of graphs, a
//! greedy depth-first baseline, fixed heuristic orders and an exhaustive
//! oracle for small graphs.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embedding::{embed_with_order, state_transition, CleanPathIndex, Embedding};
use crate::{Error, HardwareGraph, LogicalGraph, LogicalNode, Result};

mod greedy;
mod refine;

pub use greedy::greedy_refine;
pub use refine::{order_exploration, order_refining, OrderExplorer, Refinement, RoundOutcome};

/// A permutation of the logical nodes, with its efficiency score once
/// evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingOrder {
    pub sequence: Vec<LogicalNode>,
    pub score: Option<usize>,
}

impl EmbeddingOrder {
    pub fn new(sequence: Vec<LogicalNode>) -> Self {
        Self { sequence, score: None }
    }

    /// Embeds along the sequence and records the score.
    pub fn evaluate(mut self, logical: &LogicalGraph, hardware: &HardwareGraph) -> Result<Self> {
        self.score = Some(embed_with_order(logical, hardware, &self.sequence)?.score);
        Ok(self)
    }
}

/// Fixed ordering heuristics used as baselines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderStrategy {
    /// Uniformly random permutation from the given seed.
    Random,
    /// Descending degree, smallest id first on ties.
    Degree,
}

pub fn baseline_order(logical: &LogicalGraph, strategy: OrderStrategy, seed: u64) -> EmbeddingOrder {
    let mut seq: Vec<LogicalNode> = (0..logical.node_count()).collect();
    match strategy {
        OrderStrategy::Random => seq.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
        OrderStrategy::Degree => seq.sort_by_key(|&v| (core::cmp::Reverse(logical.degree(v)), v)),
    }
    EmbeddingOrder::new(seq)
}

/// Lower bound `F̄` on the score of every completion of the current prefix:
/// the current qubit count plus, for each unembedded node, the qubits a
/// [`state_transition`] on the current embedding would add.
///
/// Returns `usize::MAX` if some node cannot be embedded at all.
pub fn lower_bound(logical: &LogicalGraph, hardware: &HardwareGraph, emb: &Embedding) -> usize {
    let base = emb.qubit_count();
    let mut index = CleanPathIndex::new(hardware, emb);
    let mut total = base;
    for v in (0..logical.node_count()).filter(|&v| !emb.is_embedded(v)) {
        let added = match index.gain(logical, v) {
            Ok(Some(g)) => g.new_qubits(),
            Ok(None) => match state_transition(logical, hardware, emb, v) {
                Ok(t) => t.embedding.qubit_count() - base,
                Err(_) => return usize::MAX,
            },
            Err(_) => return usize::MAX,
        };
        total = total.saturating_add(added);
    }
    total
}

/// Upper node count accepted by [`oracle_min_qubits`].
pub const ORACLE_LIMIT: usize = 8;

/// Exhaustive minimum of `F(O)` over every order, first minimum in
/// lexicographic order. Orders that exhaust the hardware are skipped.
pub fn oracle_min_qubits(
    logical: &LogicalGraph,
    hardware: &HardwareGraph,
) -> Result<(Vec<LogicalNode>, usize)> {
    let n = logical.node_count();
    if n > ORACLE_LIMIT {
        return Err(Error::TooLarge { nodes: n, limit: ORACLE_LIMIT });
    }
    let mut perm: Vec<LogicalNode> = (0..n).collect();
    let mut best: Option<(Vec<LogicalNode>, usize)> = None;
    loop {
        if let Ok(out) = embed_with_order(logical, hardware, &perm) {
            if best.as_ref().is_none_or(|(_, s)| out.score < *s) {
                best = Some((perm.clone(), out.score));
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.ok_or(Error::HardwareExhausted)
}

/// Advances to the next lexicographic permutation; `false` after the last.
pub fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm.iter().rposition(|&x| x > perm[i]).unwrap();
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}
