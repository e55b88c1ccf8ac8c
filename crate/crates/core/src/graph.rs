//! Logical problem graphs and Chimera hardware graphs.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, LogicalNode, Qubit, Result};

/// Undirected simple graph with dense node indices `0..node_count`.
///
/// Neighbor lists are kept sorted, so two graphs compare equal exactly when
/// their node counts and edge sets agree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LogicalGraph {
    adj: Vec<Vec<LogicalNode>>,
    edge_count: usize,
}

impl LogicalGraph {
    /// Graph with `node_count` nodes and no edges.
    pub fn empty(node_count: usize) -> Self {
        Self {
            adj: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(node_count: usize, edges: &[(LogicalNode, LogicalNode)]) -> Result<Self> {
        let mut g = Self::empty(node_count);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inserts the edge `{u, v}`.
    pub fn add_edge(&mut self, u: LogicalNode, v: LogicalNode) -> Result<()> {
        let n = self.adj.len();
        for w in [u, v] {
            if w >= n {
                return Err(Error::NodeOutOfRange { node: w, node_count: n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => return Err(Error::DuplicateEdge(u.min(v), u.max(v))),
            Err(pos) => self.adj[u].insert(pos, v),
        }
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        self.edge_count += 1;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: LogicalNode) -> &[LogicalNode] {
        &self.adj[v]
    }

    pub fn degree(&self, v: LogicalNode) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: LogicalNode, v: LogicalNode) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (LogicalNode, LogicalNode)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Subgraph induced by `nodes`, relabeled so that the i-th smallest
    /// member of `nodes` becomes node `i`. Repeated members are ignored.
    pub fn induced_subgraph(&self, nodes: &[LogicalNode]) -> Result<Self> {
        let n = self.node_count();
        let mut keep: Vec<LogicalNode> = nodes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&v| v >= n) {
            return Err(Error::NodeOutOfRange { node: bad, node_count: n });
        }
        let mut relabel = vec![usize::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            relabel[v] = i;
        }
        let mut sub = Self::empty(keep.len());
        for &u in &keep {
            for &v in &self.adj[u] {
                if v > u && relabel[v] != usize::MAX {
                    sub.add_edge(relabel[u], relabel[v])?;
                }
            }
        }
        Ok(sub)
    }

    /// Barabási–Albert preferential-attachment graph on `n` nodes.
    ///
    /// Growth starts from the connected pair `{0, 1}`. Node `i >= 2` attaches
    /// to `min(d, i)` distinct earlier nodes, each drawn with probability
    /// proportional to its current degree. For `d <= 2` this yields
    /// `1 + d·(n − 2)` edges. The result is connected and depends only on
    /// `(n, d, seed)`.
    pub fn barabasi_albert(n: usize, d: usize, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("attachment degree must be at least 1"));
        }
        if d >= n {
            return Err(Error::InvalidParameter("attachment degree must be below the node count"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Self::empty(n);
        g.add_edge(0, 1)?;
        // Each node appears once per incident edge, so a uniform draw from
        // this list is a degree-proportional draw.
        let mut endpoints: Vec<LogicalNode> = vec![0, 1];
        let mut targets: Vec<LogicalNode> = Vec::with_capacity(d);
        for new in 2..n {
            targets.clear();
            if new <= d {
                targets.extend(0..new);
            } else {
                while targets.len() < d {
                    let pick = endpoints[rng.gen_range(0..endpoints.len())];
                    if !targets.contains(&pick) {
                        targets.push(pick);
                    }
                }
            }
            for &t in &targets {
                g.add_edge(new, t)?;
                endpoints.push(new);
                endpoints.push(t);
            }
        }
        Ok(g)
    }

    /// Breadth-first connectivity check; the empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }
}

/// Which shore of a unit cell a qubit sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// Vertical qubits, coupled to the same index in the cell below.
    Left = 0,
    /// Horizontal qubits, coupled to the same index in the cell to the right.
    Right = 1,
}

/// Position of a qubit inside the Chimera grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CellCoord {
    pub row: usize,
    pub col: usize,
    pub side: Side,
    pub index: usize,
}

/// Chimera graph `C(M, N, L)`: an `M × N` grid of `K_{L,L}` unit cells.
///
/// Qubit ids are `((row·N + col)·2 + side)·L + index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardwareGraph {
    rows: usize,
    cols: usize,
    shore: usize,
    adj: Vec<Vec<Qubit>>,
    edge_count: usize,
}

impl HardwareGraph {
    pub fn chimera(rows: usize, cols: usize, shore: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || shore == 0 {
            return Err(Error::InvalidParameter("chimera dimensions must be positive"));
        }
        let node_count = rows
            .checked_mul(cols)
            .and_then(|c| c.checked_mul(2 * shore))
            .ok_or(Error::InvalidParameter("chimera dimensions overflow"))?;
        let mut hw = Self {
            rows,
            cols,
            shore,
            adj: vec![Vec::with_capacity(shore + 2); node_count],
            edge_count: 0,
        };
        for row in 0..rows {
            for col in 0..cols {
                for k in 0..shore {
                    let left = hw.qubit(row, col, Side::Left, k);
                    for k2 in 0..shore {
                        hw.link(left, hw.qubit(row, col, Side::Right, k2));
                    }
                    if row + 1 < rows {
                        hw.link(left, hw.qubit(row + 1, col, Side::Left, k));
                    }
                    if col + 1 < cols {
                        let right = hw.qubit(row, col, Side::Right, k);
                        hw.link(right, hw.qubit(row, col + 1, Side::Right, k));
                    }
                }
            }
        }
        for ns in &mut hw.adj {
            ns.sort_unstable();
        }
        Ok(hw)
    }

    fn link(&mut self, a: Qubit, b: Qubit) {
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.edge_count += 1;
    }

    /// `M·N·L² + (M−1)·N·L + M·(N−1)·L`.
    pub fn expected_edge_count(rows: usize, cols: usize, shore: usize) -> usize {
        rows * cols * shore * shore + (rows - 1) * cols * shore + rows * (cols - 1) * shore
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shore(&self) -> usize {
        self.shore
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbors of qubit `q`.
    pub fn neighbors(&self, q: Qubit) -> &[Qubit] {
        &self.adj[q]
    }

    pub fn has_edge(&self, a: Qubit, b: Qubit) -> bool {
        a < self.adj.len() && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn qubit(&self, row: usize, col: usize, side: Side, index: usize) -> Qubit {
        ((row * self.cols + col) * 2 + side as usize) * self.shore + index
    }

    pub fn cell_of(&self, q: Qubit) -> CellCoord {
        let index = q % self.shore;
        let rest = q / self.shore;
        let side = if rest.is_multiple_of(2) { Side::Left } else { Side::Right };
        let cell = rest / 2;
        CellCoord {
            row: cell / self.cols,
            col: cell % self.cols,
            side,
            index,
        }
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Qubit, Qubit)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }
}
