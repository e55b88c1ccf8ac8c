//! Clean paths and the qubit gain of embedding one logical node.
//!
//! A clean path starts at a free root, runs through free qubits only, and
//! ends on the first occupied qubit it reaches, which must belong to the
//! target chain. Distances to a chain are computed once by a multi-source
//! BFS seeded with every qubit of the chain and expanding only over free
//! qubits; any shortest clean path from any root can then be read off by
//! descending the distance labels.

use alloc::vec;
use alloc::vec::Vec;

use super::Embedding;
use crate::{Error, HardwareGraph, LogicalGraph, LogicalNode, Qubit, Result};

const UNREACHED: u32 = u32::MAX;

/// A path `z_1, …, z_L` whose first `L − 1` qubits are free and whose last
/// qubit lies in the chain of `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanPath {
    pub nodes: Vec<Qubit>,
    pub target: LogicalNode,
}

impl CleanPath {
    pub fn root(&self) -> Qubit {
        self.nodes[0]
    }

    pub fn terminal(&self) -> Qubit {
        *self.nodes.last().unwrap()
    }

    /// Free qubits of the path, the root included.
    pub fn free_part(&self) -> &[Qubit] {
        &self.nodes[..self.nodes.len() - 1]
    }
}

/// Search radius tried first when looking for the minimizing root. Only if
/// the best root found within it cannot be proven optimal is the search
/// repeated without a limit.
const FIRST_RADIUS: u32 = 6;

/// Distance labels towards one chain over free qubits, up to `limit`.
#[derive(Clone, Debug)]
struct ChainDistances {
    dist: Vec<u32>,
    /// Qubits with a label, in BFS order (chain first).
    reached: Vec<Qubit>,
    limit: u32,
}

impl ChainDistances {
    fn compute(hardware: &HardwareGraph, emb: &Embedding, target: LogicalNode, limit: u32) -> Self {
        let mut dist = vec![UNREACHED; hardware.node_count()];
        let mut queue: Vec<Qubit> = Vec::new();
        for &q in emb.chain(target) {
            dist[q] = 0;
            queue.push(q);
        }
        let mut head = 0;
        while head < queue.len() {
            let q = queue[head];
            head += 1;
            if dist[q] == limit {
                continue;
            }
            let next = dist[q] + 1;
            for &w in hardware.neighbors(q) {
                if dist[w] == UNREACHED && emb.is_free(w) {
                    dist[w] = next;
                    queue.push(w);
                }
            }
        }
        Self { dist, reached: queue, limit }
    }

    fn get(&self, q: Qubit) -> Option<u32> {
        match self.dist[q] {
            UNREACHED => None,
            d => Some(d),
        }
    }

    /// Lexicographically smallest shortest clean path from the free `root`.
    /// Neighbor lists are sorted, so taking the first neighbor one step
    /// closer at every hop gives the smallest sequence.
    fn path_from(&self, hardware: &HardwareGraph, root: Qubit) -> Option<Vec<Qubit>> {
        let mut d = self.get(root)?;
        let mut nodes = Vec::with_capacity(d as usize + 1);
        let mut cur = root;
        nodes.push(cur);
        while d > 0 {
            cur = *hardware
                .neighbors(cur)
                .iter()
                .find(|&&w| self.dist[w] == d - 1)
                .expect("distance labels admit a descending neighbor");
            nodes.push(cur);
            d -= 1;
        }
        Some(nodes)
    }
}

/// Minimizing root and shortest clean paths for embedding one logical node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gain {
    /// Size of the union of the selected paths (root and terminals
    /// included); `1` when the node has no embedded neighbor.
    pub gain: usize,
    pub root: Qubit,
    /// One path per embedded neighbor, in increasing neighbor order.
    pub paths: Vec<CleanPath>,
}

impl Gain {
    /// The chain the node would receive: the root followed by the free
    /// interiors of all paths, without repeats.
    pub fn chain(&self) -> Vec<Qubit> {
        let mut chain = vec![self.root];
        for path in &self.paths {
            for &q in &path.free_part()[1..] {
                if !chain.contains(&q) {
                    chain.push(q);
                }
            }
        }
        chain
    }

    /// Qubits newly occupied by the chain; terminals already belong to
    /// neighbor chains and are not charged.
    pub fn new_qubits(&self) -> usize {
        self.gain - self.paths.len()
    }
}

/// Caches per-chain distance labels for one fixed embedding, so that gains
/// of many candidate nodes can be evaluated against the same state.
pub struct CleanPathIndex<'a> {
    hardware: &'a HardwareGraph,
    emb: &'a Embedding,
    dists: Vec<Option<ChainDistances>>,
    /// Connected component of every free qubit within the free subgraph.
    components: Option<Vec<u32>>,
    stamp: Vec<u32>,
    generation: u32,
}

impl<'a> CleanPathIndex<'a> {
    pub fn new(hardware: &'a HardwareGraph, emb: &'a Embedding) -> Self {
        Self {
            hardware,
            emb,
            dists: vec![None; emb.logical_count()],
            components: None,
            stamp: vec![0; hardware.node_count()],
            generation: 0,
        }
    }

    fn distances(&mut self, target: LogicalNode, limit: u32) -> &ChainDistances {
        let (hardware, emb) = (self.hardware, self.emb);
        let slot = &mut self.dists[target];
        if slot.as_ref().is_none_or(|d| d.limit < limit) {
            *slot = Some(ChainDistances::compute(hardware, emb, target, limit));
        }
        slot.as_ref().unwrap()
    }

    /// Component labels of free qubits near the occupied region.
    ///
    /// Only cells within one cell of the bounding box of all chains are
    /// labelled. The free cells of that one-cell frame connect to each other
    /// exactly as they do through the rest of the grid, so restricting the
    /// search does not change which chains share a component.
    fn components(&mut self) -> &[u32] {
        let (hardware, emb) = (self.hardware, self.emb);
        self.components.get_or_insert_with(|| {
            let (mut rows, mut cols) = ((usize::MAX, 0), (usize::MAX, 0));
            for q in emb.chains().iter().flatten() {
                let cell = hardware.cell_of(*q);
                rows = (rows.0.min(cell.row), rows.1.max(cell.row));
                cols = (cols.0.min(cell.col), cols.1.max(cell.col));
            }
            let rows = (rows.0.saturating_sub(1), rows.1 + 1);
            let cols = (cols.0.saturating_sub(1), cols.1 + 1);
            let inside = |q: Qubit| {
                let cell = hardware.cell_of(q);
                (rows.0..=rows.1).contains(&cell.row) && (cols.0..=cols.1).contains(&cell.col)
            };

            let mut label = vec![UNREACHED; hardware.node_count()];
            let mut next = 0;
            let mut stack = Vec::new();
            for start in 0..hardware.node_count() {
                if label[start] != UNREACHED || !emb.is_free(start) || !inside(start) {
                    continue;
                }
                label[start] = next;
                stack.push(start);
                while let Some(q) = stack.pop() {
                    for &w in hardware.neighbors(q) {
                        if label[w] == UNREACHED && emb.is_free(w) && inside(w) {
                            label[w] = next;
                            stack.push(w);
                        }
                    }
                }
                next += 1;
            }
            label
        })
    }

    /// Free components touching the chain of `target`, sorted.
    fn touching(&mut self, target: LogicalNode) -> Vec<u32> {
        let (hardware, emb) = (self.hardware, self.emb);
        let labels = self.components();
        let mut out: Vec<u32> = emb
            .chain(target)
            .iter()
            .flat_map(|&q| hardware.neighbors(q))
            .map(|&w| labels[w])
            .filter(|&c| c != UNREACHED)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Per free component, how many chains of `targets` it touches.
    fn reach_counts(&mut self, targets: &[LogicalNode]) -> Vec<(u32, usize)> {
        let mut all: Vec<u32> = Vec::new();
        for &w in targets {
            all.extend(self.touching(w));
        }
        all.sort_unstable();
        let mut counts: Vec<(u32, usize)> = Vec::new();
        for c in all {
            match counts.last_mut() {
                Some((last, n)) if *last == c => *n += 1,
                _ => counts.push((c, 1)),
            }
        }
        counts
    }

    /// Shortest clean path from the free qubit `root` to the chain of
    /// `target`, or `None` when the chain is empty or unreachable.
    pub fn shortest_path(&mut self, root: Qubit, target: LogicalNode) -> Result<Option<CleanPath>> {
        if !self.emb.is_free(root) {
            return Err(Error::QubitOccupied(root));
        }
        if !self.emb.is_embedded(target) {
            return Ok(None);
        }
        let hardware = self.hardware;
        Ok(self
            .distances(target, UNREACHED)
            .path_from(hardware, root)
            .map(|nodes| CleanPath { nodes, target }))
    }

    /// Minimum over free roots of the size of the union of shortest clean
    /// paths to every embedded neighbor of `v`. Ties go to the smallest
    /// root id. `None` means `v` is isolated (or no qubit is free).
    pub fn gain(&mut self, logical: &LogicalGraph, v: LogicalNode) -> Result<Option<Gain>> {
        self.gain_within(logical, v, usize::MAX)
    }

    /// [`CleanPathIndex::gain`] restricted to gains of at most `cap`;
    /// `None` when there is no such root.
    pub fn gain_within(
        &mut self,
        logical: &LogicalGraph,
        v: LogicalNode,
        cap: usize,
    ) -> Result<Option<Gain>> {
        if self.emb.is_embedded(v) {
            return Err(Error::AlreadyEmbedded(v));
        }
        let hardware = self.hardware;
        let emb = self.emb;
        let targets: Vec<LogicalNode> = logical
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| emb.is_embedded(w))
            .collect();

        if targets.is_empty() {
            // Most free neighbors first, then smallest id.
            let root = (0..hardware.node_count())
                .filter(|&q| emb.is_free(q))
                .max_by_key(|&q| (emb.free_degree(hardware.neighbors(q)), core::cmp::Reverse(q)));
            return Ok(root.filter(|_| cap >= 1).map(|root| Gain { gain: 1, root, paths: Vec::new() }));
        }

        // The union holds one terminal per chain, the root, and at least the
        // interior of the longest path, so a root farther than `r` from some
        // chain costs more than `k + r`. A best size within `k + r` is
        // therefore exact; otherwise the radius grows.
        let k = targets.len();
        if cap <= k {
            return Ok(None);
        }
        let max_radius = u32::try_from(cap - k).unwrap_or(UNREACHED);
        let mut radius = FIRST_RADIUS.min(max_radius);
        let mut connected = false;
        let best = loop {
            let found = self.best_root(&targets, radius);
            match found {
                Some((size, _)) if size <= k + radius as usize => break found,
                _ if radius == max_radius => break None,
                _ => {}
            }
            if !connected {
                if self.reach_counts(&targets).iter().all(|&(_, n)| n < k) {
                    break None;
                }
                connected = true;
            }
            radius = match found {
                // no root beyond `size - k` can do better
                Some((size, _)) => (size - k) as u32,
                None => radius.saturating_mul(2),
            }
            .min(max_radius);
        };

        let dists: Vec<&ChainDistances> = targets
            .iter()
            .map(|&w| self.dists[w].as_ref().unwrap())
            .collect();
        Ok(best.map(|(gain, root)| Gain {
            gain,
            root,
            paths: targets
                .iter()
                .zip(&dists)
                .map(|(&target, d)| CleanPath {
                    nodes: d.path_from(hardware, root).unwrap(),
                    target,
                })
                .collect(),
        }))
    }

    /// Smallest union size and its root among roots within `limit` of every
    /// chain of `targets`.
    fn best_root(&mut self, targets: &[LogicalNode], limit: u32) -> Option<(usize, Qubit)> {
        let hardware = self.hardware;
        for &w in targets {
            self.distances(w, limit);
        }
        let dists: Vec<&ChainDistances> = targets
            .iter()
            .map(|&w| self.dists[w].as_ref().unwrap())
            .collect();

        // Candidate roots reach every neighbor chain: scan the smallest
        // reached set. Bound: k + max distance.
        let k = targets.len();
        let scan = dists.iter().min_by_key(|d| d.reached.len()).unwrap();
        let mut candidates: Vec<(usize, Qubit)> = Vec::new();
        'roots: for &q in scan.reached.iter().filter(|&&q| scan.dist[q] > 0) {
            let mut far = 0;
            for d in &dists {
                match d.get(q) {
                    Some(x) if x > 0 => far = far.max(x as usize),
                    _ => continue 'roots,
                }
            }
            candidates.push((k + far, q));
        }
        candidates.sort_unstable();

        let mut best: Option<(usize, Qubit)> = None;
        for &(bound, root) in &candidates {
            if let Some((size, _)) = best {
                if bound > size {
                    break;
                }
            }
            self.generation += 1;
            let gen = self.generation;
            let mut free_used = 0;
            for d in &dists {
                let mut cur = root;
                let mut dist = d.dist[cur];
                // Free part only; terminals are counted once per chain below.
                while dist > 0 {
                    if self.stamp[cur] != gen {
                        self.stamp[cur] = gen;
                        free_used += 1;
                    }
                    dist -= 1;
                    cur = *hardware
                        .neighbors(cur)
                        .iter()
                        .find(|&&w| d.dist[w] == dist)
                        .unwrap();
                }
            }
            let size = free_used + k;
            let better = match best {
                None => true,
                Some((s, r)) => size < s || (size == s && root < r),
            };
            if better {
                best = Some((size, root));
            }
        }
        best
    }
}

impl CleanPathIndex<'_> {
    /// How well a single free root can reach the embedded neighbors of `v`:
    /// the largest number of their chains one root reaches through clean
    /// paths, and the number of neighbor pairs sharing a free component.
    pub fn reach(&mut self, logical: &LogicalGraph, v: LogicalNode) -> (usize, usize) {
        let emb = self.emb;
        let targets: Vec<LogicalNode> = logical
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| emb.is_embedded(w))
            .collect();
        // A root reaches exactly the chains its free component touches.
        let counts = self.reach_counts(&targets);
        let best = counts.iter().map(|&(_, n)| n).max().unwrap_or(0);
        (best, counts.iter().map(|&(_, n)| n * (n - 1) / 2).sum())
    }
}

/// Shortest clean path from `root` to the chain of `target`.
///
/// Among equal-length paths the lexicographically smallest node sequence
/// is returned.
pub fn shortest_clean_path(
    hardware: &HardwareGraph,
    emb: &Embedding,
    root: Qubit,
    target: LogicalNode,
) -> Result<Option<CleanPath>> {
    CleanPathIndex::new(hardware, emb).shortest_path(root, target)
}

/// Qubit gain `C(v|t)` of embedding `v` into the current embedding.
pub fn qubit_gain(
    logical: &LogicalGraph,
    hardware: &HardwareGraph,
    emb: &Embedding,
    v: LogicalNode,
) -> Result<Option<Gain>> {
    CleanPathIndex::new(hardware, emb).gain(logical, v)
}
