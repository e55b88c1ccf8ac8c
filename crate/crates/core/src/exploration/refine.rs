use alloc::vec::Vec;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{lower_bound, EmbeddingOrder};
use crate::embedding::{embed_with_order, state_transition, Embedding};
use crate::{Error, HardwareGraph, LogicalGraph, LogicalNode, Result};

/// Result of [`order_refining`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    /// A suffix reaching a score below the threshold was found.
    pub found: bool,
    /// The suffix, empty unless `found`.
    pub suffix: Vec<LogicalNode>,
    /// Recursion budget left over.
    pub remaining: usize,
    /// Score of the completed order when `found`.
    pub score: Option<usize>,
}

impl Refinement {
    fn fail(remaining: usize) -> Self {
        Self { found: false, suffix: Vec::new(), remaining, score: None }
    }
}

struct Refiner<'a, R> {
    logical: &'a LogicalGraph,
    hardware: &'a HardwareGraph,
    threshold: usize,
    rng: &'a mut R,
    stop: &'a dyn Fn() -> bool,
}

impl<R: Rng> Refiner<'_, R> {
    fn refine(&mut self, emb: &Embedding, embedded: usize, budget: usize) -> Refinement {
        if (self.stop)() {
            return Refinement::fail(0);
        }
        if embedded == self.logical.node_count() {
            let score = emb.qubit_count();
            return if score < self.threshold {
                Refinement {
                    found: true,
                    suffix: Vec::new(),
                    remaining: budget.saturating_sub(1),
                    score: Some(score),
                }
            } else {
                Refinement::fail(budget.saturating_sub(1))
            };
        }

        if lower_bound(self.logical, self.hardware, emb) > self.threshold {
            return Refinement::fail(budget.saturating_sub(1));
        }

        // Children are drawn without replacement within this call.
        let mut untried: Vec<LogicalNode> = (0..self.logical.node_count())
            .filter(|&v| !emb.is_embedded(v))
            .collect();
        let mut remaining = budget;
        while remaining > 0 && !untried.is_empty() {
            let v = untried.swap_remove(self.rng.gen_range(0..untried.len()));
            let Ok(next) = state_transition(self.logical, self.hardware, emb, v) else {
                remaining -= 1;
                continue;
            };
            let child = self.refine(&next.embedding, embedded + 1, remaining - 1);
            remaining = child.remaining;
            if child.found {
                let mut suffix = Vec::with_capacity(child.suffix.len() + 1);
                suffix.push(v);
                suffix.extend(child.suffix);
                return Refinement { found: true, suffix, remaining, score: child.score };
            }
        }
        Refinement::fail(remaining)
    }
}

/// Randomized branch-and-prune search for a suffix completing the order
/// already embedded in `emb` with a score strictly below `threshold`.
///
/// Each recursive call costs one unit of `budget`. Branches whose
/// [`lower_bound`] exceeds `threshold` are pruned. `stop` is polled on
/// every call and aborts the search when it returns `true`.
pub fn order_refining<R: Rng>(
    logical: &LogicalGraph,
    hardware: &HardwareGraph,
    emb: &Embedding,
    budget: usize,
    threshold: usize,
    rng: &mut R,
    stop: &dyn Fn() -> bool,
) -> Refinement {
    let embedded = emb.embedded_count();
    Refiner { logical, hardware, threshold, rng, stop }.refine(emb, embedded, budget)
}

/// What happened in one exploration round.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundOutcome {
    pub round: usize,
    pub graph: usize,
    pub improved: bool,
    /// Stored score of `graph` after the round (`None`: never embedded).
    pub score: Option<usize>,
}

/// Potential-weighted order exploration over a set of training graphs.
///
/// Each graph starts from a random order and potential `|V_H|`. A round
/// samples a graph with probability proportional to its potential, tries to
/// refine its order below the stored score, and on success stores the new
/// order and sets the potential to `F(O_i) / F(Ō_i)` for the baseline
/// score `F(Ō_i)`.
pub struct OrderExplorer<'a> {
    graphs: &'a [LogicalGraph],
    hardware: &'a HardwareGraph,
    baselines: Vec<usize>,
    orders: Vec<EmbeddingOrder>,
    potentials: Vec<f64>,
    rng: ChaCha8Rng,
    round: usize,
}

impl<'a> OrderExplorer<'a> {
    pub fn new(
        graphs: &'a [LogicalGraph],
        hardware: &'a HardwareGraph,
        baselines: &[usize],
        seed: u64,
    ) -> Result<Self> {
        if baselines.len() != graphs.len() || baselines.contains(&0) {
            return Err(Error::InvalidParameter("one positive baseline score per graph is required"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let orders = graphs
            .iter()
            .map(|g| {
                let mut seq: Vec<LogicalNode> = (0..g.node_count()).collect();
                seq.shuffle(&mut rng);
                let score = embed_with_order(g, hardware, &seq).ok().map(|o| o.score);
                EmbeddingOrder { sequence: seq, score }
            })
            .collect();
        Ok(Self {
            graphs,
            hardware,
            baselines: baselines.to_vec(),
            orders,
            potentials: alloc::vec![hardware.node_count() as f64; graphs.len()],
            rng,
            round: 0,
        })
    }

    pub fn orders(&self) -> &[EmbeddingOrder] {
        &self.orders
    }

    pub fn into_orders(self) -> Vec<EmbeddingOrder> {
        self.orders
    }

    pub fn potentials(&self) -> &[f64] {
        &self.potentials
    }

    /// `p(P_i | M) = μ_i / Σ_j μ_j`.
    pub fn selection_probabilities(&self) -> Vec<f64> {
        let total: f64 = self.potentials.iter().sum();
        self.potentials.iter().map(|mu| mu / total).collect()
    }

    /// Draws a graph index with probability `μ_i / Σ_j μ_j`.
    pub fn sample(&mut self) -> usize {
        let dist = WeightedIndex::new(&self.potentials).expect("potentials are positive");
        dist.sample(&mut self.rng)
    }

    /// Evaluates `sequence` for graph `i` and stores it if it beats the
    /// stored score, updating the potential. Returns whether it was stored.
    pub fn offer(&mut self, i: usize, sequence: Vec<LogicalNode>) -> bool {
        let current = self.orders[i].score.unwrap_or(usize::MAX);
        let Ok(out) = embed_with_order(&self.graphs[i], self.hardware, &sequence) else {
            return false;
        };
        if out.score >= current {
            return false;
        }
        self.orders[i] = EmbeddingOrder { sequence, score: Some(out.score) };
        self.potentials[i] = out.score as f64 / self.baselines[i] as f64;
        true
    }

    /// Rounds handed out so far.
    pub fn rounds_started(&self) -> usize {
        self.round
    }

    /// Hands out the next round number.
    pub fn next_round(&mut self) -> usize {
        self.round += 1;
        self.round - 1
    }

    /// Runs one sampling round with refinement budget `budget`.
    pub fn step(&mut self, budget: usize, stop: &dyn Fn() -> bool) -> RoundOutcome {
        let round = self.next_round();
        let i = self.sample();
        let graph = &self.graphs[i];
        let threshold = self.orders[i].score.unwrap_or(usize::MAX);
        let empty = Embedding::new(graph.node_count(), self.hardware.node_count());
        let refined = order_refining(graph, self.hardware, &empty, budget, threshold, &mut self.rng, stop);
        let improved = refined.found && self.offer(i, refined.suffix);
        RoundOutcome { round, graph: i, improved, score: self.orders[i].score }
    }

    /// Runs `rounds` rounds, reporting each to `observe`.
    pub fn run(
        &mut self,
        rounds: usize,
        budget: usize,
        stop: &dyn Fn() -> bool,
        mut observe: impl FnMut(&RoundOutcome),
    ) {
        for _ in 0..rounds {
            if stop() {
                break;
            }
            let outcome = self.step(budget, stop);
            observe(&outcome);
        }
    }
}

/// Explores orders for every graph over `rounds` sampling rounds with
/// refinement budget `budget` per round.
pub fn order_exploration(
    graphs: &[LogicalGraph],
    hardware: &HardwareGraph,
    baselines: &[usize],
    rounds: usize,
    budget: usize,
    seed: u64,
) -> Result<Vec<EmbeddingOrder>> {
    let mut explorer = OrderExplorer::new(graphs, hardware, baselines, seed)?;
    explorer.run(rounds, budget, &|| false, |_| {});
    Ok(explorer.into_orders())
}
