//! Strategy benchmarks over random Barabási–Albert instances.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use chainembed_core::exploration::{baseline_order, greedy_refine, OrderStrategy};
use chainembed_core::{HardwareGraph, LogicalGraph};

use crate::explore::parallel_map;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Random,
    Degree,
    /// Depth-first greedy search with the given call budget.
    Greedy(usize),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Random => f.write_str("random"),
            Strategy::Degree => f.write_str("degree"),
            Strategy::Greedy(0) => f.write_str("greedy"),
            Strategy::Greedy(b) => write!(f, "greedy:{b}"),
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    /// `random`, `degree`, `greedy` or `greedy:<budget>`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(Strategy::Random),
            "degree" => Ok(Strategy::Degree),
            "greedy" => Ok(Strategy::Greedy(0)),
            _ => s
                .strip_prefix("greedy:")
                .and_then(|b| b.parse().ok())
                .map(Strategy::Greedy)
                .ok_or_else(|| format!("unknown strategy `{s}`")),
        }
    }
}

/// Outcome of one instance under one strategy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trial {
    /// Qubit count when a feasible embedding was found in time.
    pub qubits: Option<usize>,
    pub elapsed: Duration,
}

/// Embeds `logical` with `strategy`. Running past `time_limit` counts as
/// failure; only the greedy search can stop early.
pub fn run_trial(
    logical: &LogicalGraph,
    hardware: &HardwareGraph,
    strategy: Strategy,
    seed: u64,
    time_limit: Duration,
) -> Trial {
    let start = Instant::now();
    let deadline = start + time_limit;
    let score = match strategy {
        Strategy::Random | Strategy::Degree => {
            let s = if strategy == Strategy::Random { OrderStrategy::Random } else { OrderStrategy::Degree };
            baseline_order(logical, s, seed).evaluate(logical, hardware).ok().and_then(|o| o.score)
        }
        Strategy::Greedy(budget) => greedy_refine(logical, hardware, budget, &|| Instant::now() >= deadline)
            .ok()
            .and_then(|o| o.score),
    };
    let elapsed = start.elapsed();
    Trial { qubits: score.filter(|_| elapsed <= time_limit), elapsed }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub degrees: Vec<usize>,
    pub instances: usize,
    pub strategies: Vec<Strategy>,
    pub time_limit: Duration,
    pub seed: u64,
    pub workers: usize,
}

impl BenchConfig {
    pub fn check(&self) -> Result<(), String> {
        if self.instances == 0 {
            return Err("instances must be at least 1".into());
        }
        if self.time_limit.is_zero() {
            return Err("time limit must be positive".into());
        }
        if self.sizes.is_empty() || self.degrees.is_empty() || self.strategies.is_empty() {
            return Err("sizes, degrees and strategies must be non-empty".into());
        }
        Ok(())
    }
}

/// One row of the results table.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub d: usize,
    pub strategy: Strategy,
    /// Mean over the successful instances; `None` when none succeeded.
    pub mean_qubits: Option<f64>,
    pub mean_time_ms: f64,
    pub success_rate: f64,
}

/// Instance `i` of cell `(n, d)` is `BA(n, d)` seeded with `seed + i`, so
/// runs on different hardware see the same graphs.
pub fn instance(n: usize, d: usize, seed: u64, i: usize) -> chainembed_core::Result<LogicalGraph> {
    LogicalGraph::barabasi_albert(n, d, seed.wrapping_add(i as u64))
}

pub fn run_bench(config: &BenchConfig, hardware: &HardwareGraph) -> anyhow::Result<Vec<BenchRow>> {
    config.check().map_err(anyhow::Error::msg)?;
    let mut rows = Vec::new();
    for &n in &config.sizes {
        for &d in &config.degrees {
            let graphs = (0..config.instances)
                .map(|i| instance(n, d, config.seed, i))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| anyhow::anyhow!("BA({n}, {d}): {e}"))?;
            for &strategy in &config.strategies {
                let trials = parallel_map(graphs.len(), config.workers, |i| {
                    run_trial(&graphs[i], hardware, strategy, config.seed.wrapping_add(i as u64), config.time_limit)
                });
                rows.push(summarize(n, d, strategy, &trials));
            }
        }
    }
    Ok(rows)
}

pub fn summarize(n: usize, d: usize, strategy: Strategy, trials: &[Trial]) -> BenchRow {
    let ok: Vec<usize> = trials.iter().filter_map(|t| t.qubits).collect();
    let count = trials.len().max(1) as f64;
    BenchRow {
        n,
        d,
        strategy,
        mean_qubits: (!ok.is_empty()).then(|| ok.iter().sum::<usize>() as f64 / ok.len() as f64),
        mean_time_ms: trials.iter().map(|t| t.elapsed.as_secs_f64() * 1e3).sum::<f64>() / count,
        success_rate: ok.len() as f64 / count,
    }
}

/// CSV with header `n,d,strategy,mean_qubits,mean_time_ms,success_rate`.
pub fn write_rows(out: impl Write, rows: &[BenchRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "d", "strategy", "mean_qubits", "mean_time_ms", "success_rate"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.d.to_string(),
            r.strategy.to_string(),
            r.mean_qubits.map(|q| format!("{q:.3}")).unwrap_or_default(),
            format!("{:.3}", r.mean_time_ms),
            format!("{:.4}", r.success_rate),
        ])?;
    }
    w.flush()?;
    Ok(())
}
