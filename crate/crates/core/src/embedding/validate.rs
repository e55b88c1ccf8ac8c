use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::Embedding;
use crate::{HardwareGraph, LogicalGraph, LogicalNode, Qubit};

/// The three feasibility constraints of a minor embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// Every chain induces a connected hardware subgraph.
    ChainConnection,
    /// Every logical edge is realized by at least one hardware edge.
    GlobalConnection,
    /// Chains are pairwise disjoint.
    OneToMany,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Constraint::ChainConnection => "chain-connection",
            Constraint::GlobalConnection => "global-connection",
            Constraint::OneToMany => "one-to-many",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The chain of `node` is empty or does not induce a connected subgraph.
    ChainConnection { node: LogicalNode, chain: Vec<Qubit> },
    /// No hardware edge joins the chains of `u` and `v`.
    GlobalConnection { u: LogicalNode, v: LogicalNode },
    /// `qubit` belongs to the chains of both `nodes`.
    OneToMany { qubit: Qubit, nodes: (LogicalNode, LogicalNode) },
}

impl Violation {
    pub fn constraint(&self) -> Constraint {
        match self {
            Violation::ChainConnection { .. } => Constraint::ChainConnection,
            Violation::GlobalConnection { .. } => Constraint::GlobalConnection,
            Violation::OneToMany { .. } => Constraint::OneToMany,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ChainConnection { node, chain } if chain.is_empty() => {
                write!(f, "chain-connection node {node}: empty chain")
            }
            Violation::ChainConnection { node, chain } => {
                write!(f, "chain-connection node {node}: chain {chain:?} is disconnected")
            }
            Violation::GlobalConnection { u, v } => {
                write!(f, "global-connection edge ({u}, {v}): no coupler between chains")
            }
            Violation::OneToMany { qubit, nodes: (a, b) } => {
                write!(f, "one-to-many qubit {qubit}: shared by nodes {a} and {b}")
            }
        }
    }
}

/// Outcome of [`validate`]; feasible exactly when no violation was found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, constraint: Constraint) -> usize {
        self.violations
            .iter()
            .filter(|v| v.constraint() == constraint)
            .count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "feasible");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the embedding constraints on the subgraph `P[scope]`, collecting
/// every violation.
pub fn validate(
    logical: &LogicalGraph,
    hardware: &HardwareGraph,
    emb: &Embedding,
    scope: &[LogicalNode],
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut in_scope = vec![false; logical.node_count()];
    for &v in scope {
        in_scope[v] = true;
    }

    // Claimant of each qubit among scope chains, for disjointness.
    let mut claim: Vec<Option<LogicalNode>> = vec![None; hardware.node_count()];
    for v in (0..logical.node_count()).filter(|&v| in_scope[v]) {
        let chain = emb.chain(v);
        for &q in chain {
            match claim[q] {
                Some(first) if first != v => report.violations.push(Violation::OneToMany {
                    qubit: q,
                    nodes: (first, v),
                }),
                _ => claim[q] = Some(v),
            }
        }
        if !chain_is_connected(hardware, chain) {
            report.violations.push(Violation::ChainConnection {
                node: v,
                chain: chain.to_vec(),
            });
        }
    }

    let mut mark = vec![false; hardware.node_count()];
    for (u, v) in logical.edges() {
        if !(in_scope[u] && in_scope[v]) {
            continue;
        }
        for &q in emb.chain(v) {
            mark[q] = true;
        }
        let linked = emb
            .chain(u)
            .iter()
            .any(|&q| hardware.neighbors(q).iter().any(|&w| mark[w]));
        for &q in emb.chain(v) {
            mark[q] = false;
        }
        if !linked {
            report.violations.push(Violation::GlobalConnection { u, v });
        }
    }
    report
}

/// [`validate`] over every logical node.
pub fn validate_full(
    logical: &LogicalGraph,
    hardware: &HardwareGraph,
    emb: &Embedding,
) -> ValidationReport {
    let all: Vec<LogicalNode> = (0..logical.node_count()).collect();
    validate(logical, hardware, emb, &all)
}

fn chain_is_connected(hardware: &HardwareGraph, chain: &[Qubit]) -> bool {
    let Some(&start) = chain.first() else {
        return false;
    };
    let mut members: Vec<Qubit> = chain.to_vec();
    members.sort_unstable();
    members.dedup();
    let mut seen = vec![false; members.len()];
    let idx = |q: Qubit| members.binary_search(&q).ok();
    let mut stack = vec![start];
    seen[idx(start).unwrap()] = true;
    let mut reached = 1;
    while let Some(q) = stack.pop() {
        for &w in hardware.neighbors(q) {
            if let Some(i) = idx(w) {
                if !seen[i] {
                    seen[i] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
    }
    reached == members.len()
}
