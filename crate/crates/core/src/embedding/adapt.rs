//! Topology adaptation by unit-cell insertion.
//!
//! When a node is isolated, no amount of growing chains over the free
//! qubits they already touch can connect it (growth only ever splits free
//! regions). Instead a fresh row or column of unit cells is spliced into
//! the occupied part of the grid: everything past the cut moves one cell
//! away, and every chain with a coupler crossing the cut is stretched
//! through the qubit of the new cell that sits on that coupler line. The
//! remaining qubits of the new row (column) are free and connected along
//! the whole cut, so every chain touching the cut gains access to one
//! shared free region.

use super::{CleanPathIndex, Embedding};
use crate::graph::Side;
use crate::{Error, HardwareGraph, LogicalGraph, LogicalNode, Result};

/// Where a new line of unit cells is inserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cut {
    /// New row inserted before row `r`; rows `r..` move down.
    Row(usize),
    /// New column inserted before column `c`; columns `c..` move right.
    Col(usize),
}

/// Embedding after inserting `cut`, or `None` when the last row (column)
/// is not entirely free.
pub fn insert_cut(hardware: &HardwareGraph, emb: &Embedding, cut: Cut) -> Option<Embedding> {
    let (rows, cols, shore) = (hardware.rows(), hardware.cols(), hardware.shore());
    let occupied = (0..hardware.node_count()).filter(|&q| !emb.is_free(q));
    match cut {
        Cut::Row(r) => {
            if r >= rows || occupied.clone().any(|q| hardware.cell_of(q).row == rows - 1) {
                return None;
            }
        }
        Cut::Col(c) => {
            if c >= cols || occupied.clone().any(|q| hardware.cell_of(q).col == cols - 1) {
                return None;
            }
        }
    }

    let moved = |q| {
        let mut cell = hardware.cell_of(q);
        match cut {
            Cut::Row(r) if cell.row >= r => cell.row += 1,
            Cut::Col(c) if cell.col >= c => cell.col += 1,
            _ => {}
        }
        hardware.qubit(cell.row, cell.col, cell.side, cell.index)
    };

    let mut next = Embedding::new(emb.logical_count(), hardware.node_count());
    for v in 0..emb.logical_count() {
        for &q in emb.chain(v) {
            next.assign(v, moved(q)).ok()?;
        }
    }

    // Stretch chains across the cut: the qubit before the cut keeps its id,
    // its coupler partner moved one cell on, and the new qubit in between
    // joins the chain before the cut.
    match cut {
        Cut::Row(r) if r > 0 => {
            for col in 0..cols {
                for k in 0..shore {
                    if let Some(v) = emb.owner(hardware.qubit(r - 1, col, Side::Left, k)) {
                        next.assign(v, hardware.qubit(r, col, Side::Left, k)).ok()?;
                    }
                }
            }
        }
        Cut::Col(c) if c > 0 => {
            for row in 0..rows {
                for k in 0..shore {
                    if let Some(v) = emb.owner(hardware.qubit(row, c - 1, Side::Right, k)) {
                        next.assign(v, hardware.qubit(row, c, Side::Right, k)).ok()?;
                    }
                }
            }
        }
        _ => {}
    }
    Some(next)
}

/// Expands `emb` so that `pending` becomes embeddable.
///
/// Every row and column cut within one cell of the bounding box of the
/// neighbor chains of `pending` is tried. A cut that makes `pending`
/// embeddable wins; among those, cuts along the direction with more free
/// lines left come first, then the smaller total qubit count after
/// embedding `pending`. Without a cure, the cut that lets a single free
/// root reach the most embedded neighbors of `pending` (then connects the
/// most neighbor pairs) is taken. Remaining ties prefer fewer qubits, then
/// rows, then the smaller index.
/// Fails with [`Error::HardwareExhausted`] when no cut cures `pending` or
/// improves its reach, or when `pending` has no embedded neighbor.
pub fn topology_adapting(
    logical: &LogicalGraph,
    hardware: &HardwareGraph,
    emb: &Embedding,
    pending: LogicalNode,
) -> Result<Embedding> {
    // Only cuts through or next to the neighbor chains change their
    // surroundings; farther cuts shift them as a block.
    let (mut rows, mut cols) = ((usize::MAX, 0), (usize::MAX, 0));
    for &w in logical.neighbors(pending) {
        for &q in emb.chain(w) {
            let cell = hardware.cell_of(q);
            rows = (rows.0.min(cell.row), rows.1.max(cell.row));
            cols = (cols.0.min(cell.col), cols.1.max(cell.col));
        }
    }
    if rows.0 == usize::MAX {
        return Err(Error::HardwareExhausted);
    }
    let cuts = (rows.0.saturating_sub(1)..=rows.1 + 1)
        .map(Cut::Row)
        .chain((cols.0.saturating_sub(1)..=cols.1 + 1).map(Cut::Col));

    // Every cut uses up one free line at the far edge. Cuts along the
    // direction with fewer free lines left are taken only when the other
    // direction offers nothing as good, so the occupied region stays
    // roughly square instead of running into one edge.
    let (mut last_row, mut last_col) = (0, 0);
    for &q in emb.chains().iter().flatten() {
        let cell = hardware.cell_of(q);
        last_row = last_row.max(cell.row);
        last_col = last_col.max(cell.col);
    }
    let (row_room, col_room) = (hardware.rows() - 1 - last_row, hardware.cols() - 1 - last_col);
    let scarce = |cut| match cut {
        Cut::Row(_) => row_room < col_room,
        Cut::Col(_) => col_room < row_room,
    };
    let before = CleanPathIndex::new(hardware, emb).reach(logical, pending);

    // Cured cuts first, then the roomier direction. Cures rank by final
    // size; other cuts by reach, connected pairs (both descending), size.
    type Key = (bool, bool, usize, usize, usize, Cut);
    let mut best: Option<(Key, Embedding)> = None;
    for cut in cuts {
        let scarce = scarce(cut);
        if let Some(((false, s, ..), _)) = &best {
            if !*s && scarce {
                continue;
            }
        }
        let Some(expanded) = insert_cut(hardware, emb, cut) else {
            continue;
        };
        let mut index = CleanPathIndex::new(hardware, &expanded);
        let key = match &best {
            // Only a strictly cheaper cure can win; later cuts lose ties.
            Some(((false, s, cost, ..), _)) if *s == scarce => {
                let k = logical.neighbors(pending).iter().filter(|&&w| expanded.is_embedded(w)).count();
                let Some(cap) = (cost + k).checked_sub(expanded.qubit_count() + 1) else {
                    continue;
                };
                match index.gain_within(logical, pending, cap)? {
                    Some(g) => (false, scarce, expanded.qubit_count() + g.new_qubits(), 0, 0, cut),
                    None => continue,
                }
            }
            _ => match index.gain(logical, pending)? {
                Some(g) => (false, scarce, expanded.qubit_count() + g.new_qubits(), 0, 0, cut),
                None => {
                    let reach = index.reach(logical, pending);
                    // A cut that connects nothing new only burns a line.
                    if reach <= before {
                        continue;
                    }
                    (true, scarce, usize::MAX - reach.0, usize::MAX - reach.1, expanded.qubit_count(), cut)
                }
            },
        };
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, expanded));
        }
    }
    best.map(|(_, e)| e).ok_or(Error::HardwareExhausted)
}
