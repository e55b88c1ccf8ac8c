//! Markov decision process over embedding orders.
//!
//! A state is the pair of graphs plus the current partial embedding; an
//! action picks one unembedded logical node; the transition is
//! [`state_transition`]; the reward charges the qubits the step added and,
//! while `σ < 1`, the squared index distance to a guide order.

use alloc::vec::Vec;

use crate::embedding::{state_transition, Embedding};
use crate::{Error, HardwareGraph, LogicalGraph, LogicalNode, Qubit, Result};

/// `r = −Δ − [1−σ]₊ · (a − ā)²`, the second term only with a guide entry.
pub fn reward(qubit_delta: usize, sigma: f64, action: LogicalNode, guide: Option<LogicalNode>) -> f64 {
    let base = -(qubit_delta as f64);
    match guide {
        Some(g) => {
            let d = action as f64 - g as f64;
            base - (1.0 - sigma).max(0.0) * d * d
        }
        None => base,
    }
}

/// Snapshot of the episode after `t` steps.
///
/// Adjacency of both graphs is fixed for the episode and read from the
/// owning [`Env`]; the snapshot carries the parts that change.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvState {
    pub t: usize,
    pub embedding: Embedding,
}

impl EnvState {
    /// Constant logical features, one `1.0` per logical node.
    pub fn logical_features(&self) -> Vec<f64> {
        alloc::vec![1.0; self.embedding.logical_count()]
    }

    /// Owner id per qubit, `-1` when free.
    pub fn hardware_features(&self) -> Vec<i64> {
        self.embedding.hardware_features()
    }

    /// Nonzero entries `(u, v)` of the chain matrix, `u ∈ φ(v)`, sorted.
    pub fn chain_matrix(&self) -> Vec<(Qubit, LogicalNode)> {
        let mut nz: Vec<_> = (0..self.embedding.hardware_count())
            .filter_map(|u| self.embedding.owner(u).map(|v| (u, v)))
            .collect();
        nz.sort_unstable();
        nz
    }

    /// `true` exactly on unembedded nodes.
    pub fn action_mask(&self) -> Vec<bool> {
        (0..self.embedding.logical_count()).map(|v| !self.embedding.is_embedded(v)).collect()
    }

    pub fn embedded(&self) -> Vec<LogicalNode> {
        self.embedding.embedded_nodes().collect()
    }

    pub fn qubits(&self) -> usize {
        self.embedding.qubit_count()
    }

    pub fn is_done(&self) -> bool {
        self.t == self.embedding.logical_count()
    }
}

/// One `(s, a, r, s')` tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionRecord {
    pub state: EnvState,
    pub action: LogicalNode,
    pub reward: f64,
    pub next_state: EnvState,
    pub done: bool,
}

/// Result of [`Env::step`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOutcome {
    pub reward: f64,
    /// Qubits added by the step.
    pub qubit_delta: usize,
    pub done: bool,
}

/// One episode on a fixed `(P, H)` pair.
#[derive(Clone, Debug)]
pub struct Env {
    logical: LogicalGraph,
    hardware: HardwareGraph,
    guide: Option<Vec<LogicalNode>>,
    sigma: f64,
    state: EnvState,
}

impl Env {
    /// Starts an episode with an empty embedding. A guide order, when given,
    /// must be a permutation of the logical nodes.
    pub fn reset(
        logical: LogicalGraph,
        hardware: HardwareGraph,
        guide: Option<Vec<LogicalNode>>,
        sigma: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&sigma) {
            return Err(Error::InvalidParameter("sigma must lie in [0, 1]"));
        }
        if let Some(g) = &guide {
            crate::embedding::check_permutation(g, logical.node_count())?;
        }
        let state = EnvState {
            t: 0,
            embedding: Embedding::new(logical.node_count(), hardware.node_count()),
        };
        Ok(Self { logical, hardware, guide, sigma, state })
    }

    pub fn logical(&self) -> &LogicalGraph {
        &self.logical
    }

    pub fn hardware(&self) -> &HardwareGraph {
        &self.hardware
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn guide(&self) -> Option<&[LogicalNode]> {
        self.guide.as_deref()
    }

    pub fn state(&self) -> &EnvState {
        &self.state
    }

    pub fn action_mask(&self) -> Vec<bool> {
        self.state.action_mask()
    }

    pub fn is_done(&self) -> bool {
        self.state.is_done()
    }

    /// Embeds `action`. On error the episode is left unchanged.
    pub fn step(&mut self, action: LogicalNode) -> Result<StepOutcome> {
        if self.is_done() {
            return Err(Error::EpisodeDone);
        }
        if action >= self.logical.node_count() || self.state.embedding.is_embedded(action) {
            return Err(Error::IllegalAction(action));
        }
        let before = self.state.qubits();
        let next = state_transition(&self.logical, &self.hardware, &self.state.embedding, action)?;
        let qubit_delta = next.embedding.qubit_count() - before;
        let guide = self.guide.as_ref().map(|g| g[self.state.t]);
        let reward = reward(qubit_delta, self.sigma, action, guide);
        self.state = EnvState { t: self.state.t + 1, embedding: next.embedding };
        Ok(StepOutcome { reward, qubit_delta, done: self.is_done() })
    }

    /// [`Env::step`] returning the full transition tuple.
    pub fn step_record(&mut self, action: LogicalNode) -> Result<TransitionRecord> {
        let state = self.state.clone();
        let out = self.step(action)?;
        Ok(TransitionRecord {
            state,
            action,
            reward: out.reward,
            next_state: self.state.clone(),
            done: out.done,
        })
    }
}
