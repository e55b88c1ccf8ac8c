//! Multi-threaded order exploration with a progress log.

use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use chainembed_core::exploration::{
    baseline_order, greedy_refine, order_refining, EmbeddingOrder, OrderExplorer, OrderStrategy,
};
use chainembed_core::text::OrderRecord;
use chainembed_core::{Embedding, HardwareGraph, LogicalGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::Result;

#[derive(Clone, Debug)]
pub struct ExploreConfig {
    /// Sampling rounds `D`.
    pub rounds: usize,
    /// Refinement budget `K` per round.
    pub budget: usize,
    pub workers: usize,
    pub seed: u64,
    pub time_limit: Option<Duration>,
}

/// One line of the progress log: the stored score of `graph` after the
/// `round`-th completed round. Round 0 lists the initial orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProgressRow {
    pub round: usize,
    pub graph: usize,
    pub score: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ExploreReport {
    pub baselines: Vec<usize>,
    pub orders: Vec<EmbeddingOrder>,
    pub progress: Vec<ProgressRow>,
}

impl ExploreReport {
    /// `o` records for every graph with a feasible order.
    pub fn records(&self) -> Vec<OrderRecord> {
        records(&self.orders)
    }
}

pub fn records(orders: &[EmbeddingOrder]) -> Vec<OrderRecord> {
    orders
        .iter()
        .enumerate()
        .filter_map(|(graph, o)| {
            o.score.map(|score| OrderRecord { graph, score, sequence: o.sequence.clone() })
        })
        .collect()
}

/// Degree-order scores, the normalizers of the exploration potentials.
/// Fails with the graph id when the degree order does not fit.
pub fn degree_baselines(graphs: &[LogicalGraph], hardware: &HardwareGraph) -> anyhow::Result<Vec<usize>> {
    graphs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            baseline_order(g, OrderStrategy::Degree, 0)
                .evaluate(g, hardware)
                .map(|o| o.score.unwrap())
                .map_err(|e| anyhow::anyhow!("graph {i}: degree order: {e}"))
        })
        .collect()
}

struct Shared<'a> {
    explorer: OrderExplorer<'a>,
    progress: Vec<ProgressRow>,
}

/// Runs order exploration on a pool of `workers` threads.
///
/// Sampling and the stored orders live behind one lock; refinement runs
/// outside it with a per-worker generator seeded from `seed` and the
/// worker index. An improvement is stored only if it still beats the
/// current score when offered, so every per-graph column of the progress
/// log is non-increasing. With one worker the run is reproducible.
pub fn explore(
    graphs: &[LogicalGraph],
    hardware: &HardwareGraph,
    baselines: &[usize],
    config: &ExploreConfig,
) -> Result<ExploreReport> {
    let explorer = OrderExplorer::new(graphs, hardware, baselines, config.seed)?;
    let progress = explorer
        .orders()
        .iter()
        .enumerate()
        .map(|(graph, o)| ProgressRow { round: 0, graph, score: o.score })
        .collect();
    let shared = Mutex::new(Shared { explorer, progress });
    let deadline = config.time_limit.map(|d| Instant::now() + d);
    let stop = || deadline.is_some_and(|d| Instant::now() >= d);

    std::thread::scope(|scope| {
        for worker in 0..config.workers.max(1) {
            let shared = &shared;
            let stop = &stop;
            scope.spawn(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1 + worker as u64));
                loop {
                    if stop() {
                        return;
                    }
                    let (i, threshold) = {
                        let mut s = shared.lock().unwrap();
                        if s.explorer.rounds_started() >= config.rounds {
                            return;
                        }
                        s.explorer.next_round();
                        let i = s.explorer.sample();
                        (i, s.explorer.orders()[i].score.unwrap_or(usize::MAX))
                    };
                    let g = &graphs[i];
                    let empty = Embedding::new(g.node_count(), hardware.node_count());
                    let refined =
                        order_refining(g, hardware, &empty, config.budget, threshold, &mut rng, stop);
                    let mut s = shared.lock().unwrap();
                    if refined.found {
                        s.explorer.offer(i, refined.suffix);
                    }
                    let round = s.progress.len() - graphs.len() + 1;
                    let score = s.explorer.orders()[i].score;
                    s.progress.push(ProgressRow { round, graph: i, score });
                }
            });
        }
    });

    let Shared { explorer, progress } = shared.into_inner().unwrap();
    Ok(ExploreReport { baselines: baselines.to_vec(), orders: explorer.into_orders(), progress })
}

/// [`greedy_refine`] on every graph with `budget` calls each, spread over
/// `workers` threads. Fails with the graph id when no order fits.
pub fn greedy_all(
    graphs: &[LogicalGraph],
    hardware: &HardwareGraph,
    budget: usize,
    workers: usize,
) -> anyhow::Result<Vec<EmbeddingOrder>> {
    let results = parallel_map(graphs.len(), workers, |i| {
        greedy_refine(&graphs[i], hardware, budget, &|| false)
    });
    results
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| anyhow::anyhow!("graph {i}: greedy search: {e}")))
        .collect()
}

/// Evaluates `f(0..len)` on `workers` threads, results in index order.
pub fn parallel_map<T: Send>(len: usize, workers: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = (0..len).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers.clamp(1, len.max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= len {
                    return;
                }
                let out = f(i);
                *slots[i].lock().unwrap() = Some(out);
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().unwrap().unwrap()).collect()
}

/// Writes the progress log as CSV `round,graph,score`; a graph without a
/// feasible order has an empty score.
pub fn write_progress(out: impl Write, rows: &[ProgressRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["round", "graph", "score"])?;
    for r in rows {
        let score = r.score.map(|s| s.to_string()).unwrap_or_default();
        w.write_record([r.round.to_string(), r.graph.to_string(), score])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a progress log written by [`write_progress`].
pub fn read_progress(input: impl std::io::Read) -> csv::Result<Vec<ProgressRow>> {
    let mut rows = Vec::new();
    for rec in csv::Reader::from_reader(input).deserialize() {
        let (round, graph, score): (usize, usize, Option<usize>) = rec?;
        rows.push(ProgressRow { round, graph, score });
    }
    Ok(rows)
}
