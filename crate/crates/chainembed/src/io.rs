//! Loading and saving the text formats of [`chainembed_core::text`].

use std::fs;
use std::path::Path;

use chainembed_core::text::{self, OrderRecord};
use chainembed_core::{Embedding, HardwareGraph, LogicalGraph};

use crate::{Error, Result};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io { path: path.to_owned(), source })
}

fn parsed<T>(path: &Path, r: chainembed_core::Result<T>) -> Result<T> {
    r.map_err(|source| Error::Format { path: path.to_owned(), source })
}

pub fn load_graph(path: &Path) -> Result<LogicalGraph> {
    parsed(path, text::parse_graph(&read(path)?))
}

pub fn save_graph(path: &Path, graph: &LogicalGraph) -> Result<()> {
    write(path, &text::format_graph(graph))
}

pub fn load_hardware(path: &Path) -> Result<HardwareGraph> {
    parsed(path, text::parse_hardware(&read(path)?))
}

pub fn save_hardware(path: &Path, hardware: &HardwareGraph) -> Result<()> {
    write(path, &text::format_hardware(hardware))
}

pub fn load_embedding(path: &Path, logical: &LogicalGraph, hardware: &HardwareGraph) -> Result<Embedding> {
    parsed(
        path,
        text::parse_embedding(&read(path)?, logical.node_count(), hardware.node_count()),
    )
}

pub fn save_embedding(path: &Path, emb: &Embedding) -> Result<()> {
    write(path, &text::format_embedding(emb))
}

pub fn load_orders(path: &Path) -> Result<Vec<OrderRecord>> {
    parsed(path, text::parse_orders(&read(path)?))
}

pub fn save_orders(path: &Path, records: &[OrderRecord]) -> Result<()> {
    write(path, &records.iter().map(text::format_order).collect::<String>())
}

/// Parses `MxNxL` into a Chimera graph.
pub fn parse_hardware_spec(spec: &str) -> Result<HardwareGraph> {
    let bad = || Error::HardwareSpec(spec.to_owned());
    let dims: Vec<usize> = spec
        .split(['x', 'X'])
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [m, n, l] = dims[..] else {
        return Err(bad());
    };
    HardwareGraph::chimera(m, n, l).map_err(|_| bad())
}
