//! Line-oriented text formats.
//!
//! Graphs are edge lists: `p <nodes> <edges>` followed by one `e <u> <v>`
//! line per edge, 0-based. A Chimera graph is preceded by
//! `c chimera <M> <N> <L>`. Embeddings start with `s <qubit total>` and list
//! each chain as `m <v> <q>...`. Order records are `o <graph> <score> <v>...`.
//! Blank lines and anything after `#` are ignored.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;
use core::str::{FromStr, SplitWhitespace};

use crate::{Embedding, Error, HardwareGraph, LogicalGraph, LogicalNode, Qubit, Result};

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn records(text: &str) -> impl Iterator<Item = (usize, SplitWhitespace<'_>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("");
        (!body.trim().is_empty()).then(|| (i + 1, body.split_whitespace()))
    })
}

fn field<T: FromStr>(words: &mut SplitWhitespace<'_>, line: usize, what: &str) -> Result<T> {
    let w = words.next().ok_or_else(|| err(line, format!("missing {what}")))?;
    w.parse().map_err(|_| err(line, format!("invalid {what} `{w}`")))
}

fn end(words: &mut SplitWhitespace<'_>, line: usize) -> Result<()> {
    match words.next() {
        Some(w) => Err(err(line, format!("unexpected `{w}`"))),
        None => Ok(()),
    }
}

fn rest<T: FromStr>(words: SplitWhitespace<'_>, line: usize, what: &str) -> Result<Vec<T>> {
    words
        .map(|w| w.parse().map_err(|_| err(line, format!("invalid {what} `{w}`"))))
        .collect()
}

/// A parsed graph file: the graph plus the Chimera header if present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: LogicalGraph,
    pub chimera: Option<(usize, usize, usize)>,
}

pub fn parse_graph_file(text: &str) -> Result<GraphFile> {
    let mut chimera = None;
    let mut header: Option<(usize, usize, LogicalGraph)> = None;
    let mut last_line = 0;
    for (line, mut words) in records(text) {
        last_line = line;
        let tag = words.next().unwrap();
        match (tag, &mut header) {
            ("c", None) if chimera.is_none() => {
                let kind: String = field(&mut words, line, "topology")?;
                if kind != "chimera" {
                    return Err(err(line, format!("unknown topology `{kind}`")));
                }
                let m = field(&mut words, line, "M")?;
                let n = field(&mut words, line, "N")?;
                let l = field(&mut words, line, "L")?;
                end(&mut words, line)?;
                chimera = Some((m, n, l));
            }
            ("p", None) => {
                let nodes = field(&mut words, line, "node count")?;
                let edges = field(&mut words, line, "edge count")?;
                end(&mut words, line)?;
                header = Some((nodes, edges, LogicalGraph::empty(nodes)));
            }
            ("e", Some((_, _, g))) => {
                let u: usize = field(&mut words, line, "endpoint")?;
                let v: usize = field(&mut words, line, "endpoint")?;
                end(&mut words, line)?;
                g.add_edge(u, v).map_err(|e| err(line, e.to_string()))?;
            }
            ("e", None) => return Err(err(line, "edge before `p` header")),
            ("p", Some(_)) => return Err(err(line, "duplicate `p` header")),
            ("c", _) => return Err(err(line, "`c` header must come once, before `p`")),
            _ => return Err(err(line, format!("unknown record `{tag}`"))),
        }
    }
    let (_, edges, graph) = header.ok_or_else(|| err(last_line.max(1), "missing `p` header"))?;
    if graph.edge_count() != edges {
        return Err(err(
            last_line,
            format!("header declares {edges} edges, found {}", graph.edge_count()),
        ));
    }
    Ok(GraphFile { graph, chimera })
}

pub fn parse_graph(text: &str) -> Result<LogicalGraph> {
    parse_graph_file(text).map(|f| f.graph)
}

/// Parses a Chimera file. The edge list must match the header exactly.
pub fn parse_hardware(text: &str) -> Result<HardwareGraph> {
    let file = parse_graph_file(text)?;
    let (m, n, l) = file.chimera.ok_or_else(|| err(1, "missing `c chimera` header"))?;
    let h = HardwareGraph::chimera(m, n, l).map_err(|e| err(1, e.to_string()))?;
    let same = file.graph.node_count() == h.node_count()
        && file.graph.edge_count() == h.edge_count()
        && h.edges().all(|(u, v)| file.graph.has_edge(u, v));
    if !same {
        return Err(err(1, "edge list does not match the chimera header"));
    }
    Ok(h)
}

pub fn format_graph(graph: &LogicalGraph) -> String {
    let mut out = String::new();
    write_edges(&mut out, graph.node_count(), graph.edge_count(), graph.edges());
    out
}

pub fn format_hardware(hardware: &HardwareGraph) -> String {
    let mut out = format!(
        "c chimera {} {} {}\n",
        hardware.rows(),
        hardware.cols(),
        hardware.shore()
    );
    write_edges(&mut out, hardware.node_count(), hardware.edge_count(), hardware.edges());
    out
}

fn write_edges(out: &mut String, nodes: usize, edges: usize, list: impl Iterator<Item = (usize, usize)>) {
    let _ = writeln!(out, "p {nodes} {edges}");
    for (u, v) in list {
        let _ = writeln!(out, "e {u} {v}");
    }
}

/// Parses an embedding of `logical_count` nodes into `qubit_count` qubits.
/// Nodes without an `m` line get an empty chain.
pub fn parse_embedding(text: &str, logical_count: usize, qubit_count: usize) -> Result<Embedding> {
    let mut emb = Embedding::new(logical_count, qubit_count);
    let mut total: Option<(usize, usize)> = None;
    let mut seen = alloc::vec![false; logical_count];
    for (line, mut words) in records(text) {
        match words.next().unwrap() {
            "s" if total.is_none() => {
                total = Some((field(&mut words, line, "qubit total")?, line));
                end(&mut words, line)?;
            }
            "s" => return Err(err(line, "duplicate `s` header")),
            "m" => {
                let v: LogicalNode = field(&mut words, line, "logical node")?;
                if v >= logical_count {
                    return Err(err(line, format!("logical node {v} out of range")));
                }
                if core::mem::replace(&mut seen[v], true) {
                    return Err(err(line, format!("duplicate chain for node {v}")));
                }
                for q in rest::<Qubit>(words, line, "qubit")? {
                    if q >= qubit_count {
                        return Err(err(line, format!("qubit {q} out of range")));
                    }
                    emb.assign(v, q).map_err(|e| err(line, e.to_string()))?;
                }
            }
            tag => return Err(err(line, format!("unknown record `{tag}`"))),
        }
    }
    let (declared, line) = total.ok_or_else(|| err(1, "missing `s` header"))?;
    if declared != emb.qubit_count() {
        return Err(err(
            line,
            format!("header declares {declared} qubits, chains hold {}", emb.qubit_count()),
        ));
    }
    Ok(emb)
}

pub fn format_embedding(emb: &Embedding) -> String {
    let mut out = format!("s {}\n", emb.qubit_count());
    for v in 0..emb.logical_count() {
        let _ = write!(out, "m {v}");
        for q in emb.chain(v) {
            let _ = write!(out, " {q}");
        }
        out.push('\n');
    }
    out
}

/// One line of an order file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderRecord {
    pub graph: usize,
    pub score: usize,
    pub sequence: Vec<LogicalNode>,
}

pub fn parse_orders(text: &str) -> Result<Vec<OrderRecord>> {
    records(text)
        .map(|(line, mut words)| match words.next().unwrap() {
            "o" => Ok(OrderRecord {
                graph: field(&mut words, line, "graph id")?,
                score: field(&mut words, line, "score")?,
                sequence: rest(words, line, "logical node")?,
            }),
            tag => Err(err(line, format!("unknown record `{tag}`"))),
        })
        .collect()
}

pub fn format_order(record: &OrderRecord) -> String {
    let mut out = format!("o {} {}", record.graph, record.score);
    for v in &record.sequence {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    out
}
