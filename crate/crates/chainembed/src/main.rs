use std::fs;
use std::io::{stdin, stdout, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use chainembed::bench::{self, BenchConfig, Strategy};
use chainembed::core::embedding::{embed_with_order, validate_full};
use chainembed::core::exploration::{baseline_order, greedy_refine, oracle_min_qubits, OrderStrategy};
use chainembed::core::text::{format_embedding, format_order, OrderRecord};
use chainembed::core::{Error as CoreError, LogicalGraph};
use chainembed::explore::{self, ExploreConfig};
use chainembed::{io, protocol};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Minor embedding of logical graphs into Chimera hardware by chain
/// construction along embedding orders.
///
/// Exit status: 0 on success, 1 when no feasible embedding or search result
/// was found, 2 on usage or input errors.
#[derive(Parser, Debug)]
#[command(name = "chainembed", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Chimera shape as MxNxL
    #[arg(long, global = true, default_value = "16x16x4")]
    hardware: String,
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file or directory (stdout when absent, where allowed)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for explore and bench
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Wall-clock limit in seconds
    #[arg(long, global = true)]
    time_limit_s: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write random logical graphs or a Chimera graph
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Embed a graph along a fixed or searched order
    Embed {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = EmbedStrategy::Degree)]
        strategy: EmbedStrategy,
        /// Greedy search budget
        #[arg(long, default_value_t = 0)]
        budget: usize,
        /// Order file for `--strategy order`; its first record is used
        #[arg(long)]
        order: Option<PathBuf>,
    },
    /// Explore orders for every graph in a directory
    Explore {
        /// Directory of graph files, read in name order
        #[arg(long)]
        graphs: PathBuf,
        /// Sampling rounds
        #[arg(long, default_value_t = 500)]
        rounds: usize,
        /// Refinement budget per round
        #[arg(long, default_value_t = 40)]
        budget: usize,
        /// Greedy budget per graph; defaults to rounds * budget / graphs
        #[arg(long)]
        greedy_budget: Option<usize>,
        /// Skip the greedy comparison
        #[arg(long)]
        no_greedy: bool,
    },
    /// Check an embedding file against a graph
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        embedding: PathBuf,
    },
    /// Benchmark order strategies on random instances
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "20,40")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,5")]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        instances: usize,
        /// random, degree, greedy or greedy:<budget>
        #[arg(long, value_delimiter = ',', default_value = "random,degree,greedy")]
        strategies: Vec<Strategy>,
    },
    /// Exhaustive best order of a small graph
    Oracle {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Serve the environment protocol on stdin/stdout
    ServeEnv,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Barabási–Albert graphs
    Ba {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        degree: usize,
        /// More than one writes `ba_<i>.txt` files into the `--out` directory
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// The `--hardware` Chimera graph
    Chimera,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EmbedStrategy {
    Degree,
    Random,
    Greedy,
    Order,
}

/// Failures sorted by exit status.
enum Failure {
    /// No feasible result: exit 1.
    Search(anyhow::Error),
    /// Bad input or IO: exit 2.
    Input(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn search<T>(r: chainembed::core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        CoreError::HardwareExhausted => Failure::Search(e.into()),
        e => Failure::Input(e.into()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Search(e)) => {
            eprintln!("chainembed: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("chainembed: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn time_limit(c: &Common) -> anyhow::Result<Option<Duration>> {
    c.time_limit_s
        .map(|s| Duration::try_from_secs_f64(s).ok().filter(|d| !d.is_zero()))
        .map(|d| d.context("--time-limit-s must be a positive number of seconds"))
        .transpose()
}

fn run(cli: Cli) -> Outcome {
    let c = &cli.common;
    match cli.command {
        Command::Gen { kind } => gen(c, kind),
        Command::Embed { graph, strategy, budget, order } => embed(c, &graph, strategy, budget, order),
        Command::Explore { graphs, rounds, budget, greedy_budget, no_greedy } => {
            let greedy = (!no_greedy).then_some(greedy_budget);
            cmd_explore(c, &graphs, rounds, budget, greedy)
        }
        Command::Validate { graph, embedding } => {
            let hardware = io::parse_hardware_spec(&c.hardware)?;
            let logical = io::load_graph(&graph)?;
            let emb = io::load_embedding(&embedding, &logical, &hardware)?;
            let report = validate_full(&logical, &hardware, &emb);
            print!("{report}");
            if report.is_feasible() {
                Ok(())
            } else {
                Err(Failure::Search(anyhow::anyhow!("{} violation(s)", report.violations.len())))
            }
        }
        Command::Bench { sizes, degrees, instances, strategies } => {
            let hardware = io::parse_hardware_spec(&c.hardware)?;
            let config = BenchConfig {
                sizes,
                degrees,
                instances,
                strategies,
                time_limit: time_limit(c)?.unwrap_or(Duration::from_secs(10)),
                seed: c.seed,
                workers: c.workers,
            };
            let rows = bench::run_bench(&config, &hardware)?;
            let mut buf = Vec::new();
            bench::write_rows(&mut buf, &rows)?;
            emit(c.out.as_deref(), std::str::from_utf8(&buf)?)?;
            Ok(())
        }
        Command::Oracle { graph } => {
            let hardware = io::parse_hardware_spec(&c.hardware)?;
            let logical = io::load_graph(&graph)?;
            let (sequence, score) = search(oracle_min_qubits(&logical, &hardware))?;
            emit(c.out.as_deref(), &format_order(&OrderRecord { graph: 0, score, sequence }))?;
            Ok(())
        }
        Command::ServeEnv => {
            protocol::serve(stdin().lock(), BufWriter::new(stdout().lock()))?;
            Ok(())
        }
    }
}

fn gen(c: &Common, kind: GenKind) -> Outcome {
    match kind {
        GenKind::Ba { nodes, degree, count } => {
            let graphs = (0..count)
                .map(|i| LogicalGraph::barabasi_albert(nodes, degree, c.seed.wrapping_add(i as u64)))
                .collect::<Result<Vec<_>, _>>()?;
            match (count, &c.out) {
                (1, out) => emit(out.as_deref(), &chainembed::core::text::format_graph(&graphs[0]))?,
                (_, Some(dir)) => {
                    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                    let width = (count - 1).to_string().len();
                    for (i, g) in graphs.iter().enumerate() {
                        io::save_graph(&dir.join(format!("ba_{i:0width$}.txt")), g)?;
                    }
                }
                (_, None) => return Err(anyhow::anyhow!("--count above 1 needs --out <dir>").into()),
            }
        }
        GenKind::Chimera => {
            let h = io::parse_hardware_spec(&c.hardware)?;
            emit(c.out.as_deref(), &chainembed::core::text::format_hardware(&h))?;
        }
    }
    Ok(())
}

fn embed(c: &Common, graph: &Path, strategy: EmbedStrategy, budget: usize, order: Option<PathBuf>) -> Outcome {
    let hardware = io::parse_hardware_spec(&c.hardware)?;
    let logical = io::load_graph(graph)?;
    if order.is_some() != (strategy == EmbedStrategy::Order) {
        return Err(anyhow::anyhow!("--order goes with --strategy order, and only with it").into());
    }
    let sequence = match strategy {
        EmbedStrategy::Degree => baseline_order(&logical, OrderStrategy::Degree, c.seed).sequence,
        EmbedStrategy::Random => baseline_order(&logical, OrderStrategy::Random, c.seed).sequence,
        EmbedStrategy::Greedy => {
            let limit = time_limit(c)?;
            let start = std::time::Instant::now();
            let stop = || limit.is_some_and(|l| start.elapsed() >= l);
            search(greedy_refine(&logical, &hardware, budget, &stop))?.sequence
        }
        EmbedStrategy::Order => {
            let path = order.unwrap();
            let records = io::load_orders(&path)?;
            let first = records.into_iter().next();
            first.with_context(|| format!("{}: no order record", path.display()))?.sequence
        }
    };
    let out = search(embed_with_order(&logical, &hardware, &sequence))?;
    match &c.out {
        Some(p) => {
            io::save_embedding(p, &out.embedding)?;
            println!("s {}", out.score);
        }
        None => print!("{}", format_embedding(&out.embedding)),
    }
    Ok(())
}

fn load_graph_dir(dir: &Path) -> anyhow::Result<Vec<LogicalGraph>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.is_file());
    paths.sort();
    anyhow::ensure!(!paths.is_empty(), "{}: no graph files", dir.display());
    paths.iter().map(|p| Ok(io::load_graph(p)?)).collect()
}

fn cmd_explore(c: &Common, dir: &Path, rounds: usize, budget: usize, greedy: Option<Option<usize>>) -> Outcome {
    let hardware = io::parse_hardware_spec(&c.hardware)?;
    let graphs = load_graph_dir(dir)?;
    let out = c.out.as_deref().context("explore needs --out <dir>")?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let baselines = explore::degree_baselines(&graphs, &hardware).map_err(Failure::Search)?;
    let config = ExploreConfig {
        rounds,
        budget,
        workers: c.workers,
        seed: c.seed,
        time_limit: time_limit(c)?,
    };
    let report = explore::explore(&graphs, &hardware, &baselines, &config)?;
    io::save_orders(&out.join("orders.txt"), &report.records())?;
    let csv = fs::File::create(out.join("progress.csv")).context("creating progress.csv")?;
    explore::write_progress(BufWriter::new(csv), &report.progress)?;

    let mean = |scores: &[Option<usize>]| {
        let ok: Vec<_> = scores.iter().flatten().collect();
        ok.iter().copied().sum::<usize>() as f64 / ok.len().max(1) as f64
    };
    let explored: Vec<_> = report.orders.iter().map(|o| o.score).collect();
    println!("degree mean {:.3}", baselines.iter().sum::<usize>() as f64 / baselines.len() as f64);
    println!("explore mean {:.3}", mean(&explored));
    if let Some(greedy_budget) = greedy {
        let b = greedy_budget.unwrap_or(rounds * budget / graphs.len());
        let orders = explore::greedy_all(&graphs, &hardware, b, c.workers).map_err(Failure::Search)?;
        io::save_orders(&out.join("greedy.txt"), &explore::records(&orders))?;
        let scores: Vec<_> = orders.iter().map(|o| o.score).collect();
        println!("greedy mean {:.3} (budget {b} per graph)", mean(&scores));
    }
    if explored.iter().any(Option::is_none) {
        return Err(Failure::Search(anyhow::anyhow!("some graphs have no feasible order")));
    }
    Ok(())
}
