use alloc::vec::Vec;

use super::EmbeddingOrder;
use crate::embedding::{state_transition, CleanPathIndex, Embedding};
use crate::{Error, HardwareGraph, LogicalGraph, LogicalNode, Result};

struct Search<'a> {
    logical: &'a LogicalGraph,
    hardware: &'a HardwareGraph,
    prefix: Vec<LogicalNode>,
    best: Option<(Vec<LogicalNode>, usize)>,
    calls: usize,
    budget: usize,
    /// Still on the first descent, which the budget does not limit.
    first: bool,
    stop: &'a dyn Fn() -> bool,
}

impl Search<'_> {
    fn exhausted(&self) -> bool {
        !self.first && (self.calls >= self.budget || (self.stop)())
    }

    fn descend(&mut self, emb: &Embedding) {
        if self.exhausted() {
            return;
        }
        if !self.first {
            self.calls += 1;
        }
        let count = emb.qubit_count();
        if self.best.as_ref().is_some_and(|(_, b)| count >= *b) {
            return;
        }
        if self.prefix.len() == self.logical.node_count() {
            self.best = Some((self.prefix.clone(), count));
            self.first = false;
            return;
        }

        // Rank children by added qubits. Only transitions that needed
        // adaptation are kept; the others are cheap to redo.
        let mut index = CleanPathIndex::new(self.hardware, emb);
        let mut children: Vec<(usize, LogicalNode, Option<Embedding>)> = Vec::new();
        for v in (0..self.logical.node_count()).filter(|&v| !emb.is_embedded(v)) {
            match index.gain(self.logical, v) {
                Ok(Some(g)) => children.push((g.new_qubits(), v, None)),
                Ok(None) => {
                    if let Ok(t) = state_transition(self.logical, self.hardware, emb, v) {
                        children.push((t.embedding.qubit_count() - count, v, Some(t.embedding)));
                    }
                }
                Err(_) => {}
            }
        }
        children.sort_unstable_by_key(|&(added, v, _)| (added, v));
        for (_, v, cached) in children {
            if self.exhausted() {
                return;
            }
            let next = match cached {
                Some(next) => next,
                None => match state_transition(self.logical, self.hardware, emb, v) {
                    Ok(t) => t.embedding,
                    Err(_) => continue,
                },
            };
            self.prefix.push(v);
            self.descend(&next);
            self.prefix.pop();
        }
        // A dead end also ends the first descent.
        self.first = false;
    }
}

/// Depth-first search over orders, expanding at each step the node that
/// adds the fewest qubits first and pruning prefixes that already use at
/// least as many qubits as the best complete order.
///
/// The first descent (the pure greedy order) runs until it completes or
/// reaches a dead end; after that each visited prefix costs one unit of
/// `budget`. Fails with [`Error::HardwareExhausted`] if no complete order
/// was found within the budget.
pub fn greedy_refine(
    logical: &LogicalGraph,
    hardware: &HardwareGraph,
    budget: usize,
    stop: &dyn Fn() -> bool,
) -> Result<EmbeddingOrder> {
    let mut search = Search {
        logical,
        hardware,
        prefix: Vec::with_capacity(logical.node_count()),
        best: None,
        calls: 0,
        budget,
        first: true,
        stop,
    };
    search.descend(&Embedding::new(logical.node_count(), hardware.node_count()));
    let (sequence, score) = search.best.ok_or(Error::HardwareExhausted)?;
    Ok(EmbeddingOrder { sequence, score: Some(score) })
}
