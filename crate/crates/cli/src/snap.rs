//! SNAP-style edge-list ingestion.
//!
//! The format is plain text: one `u v` integer pair per line, blank
//! lines and lines starting with `#` ignored. Node ids are compacted to
//! dense 0-based ids in ascending order of the original ids, so loading
//! is independent of line order and re-serialising a loaded graph
//! reproduces it exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use minrf::objectives::influence::Graph;

use crate::CliError;

/// Ingestion tallies, reported alongside the graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub undirected_edges: usize,
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
}

/// A parsed edge list: the weighted graph, the original node ids (by
/// dense id), and the ingestion tallies.
#[derive(Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `labels[dense] = original id`, ascending.
    pub labels: Vec<u64>,
    /// Deduplicated edges in dense ids, `(low, high)` ascending.
    pub edges: Vec<(u32, u32)>,
    pub stats: GraphStats,
}

pub fn load_graph(path: &Path) -> Result<LoadedGraph, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::input(format!("cannot open graph {}: {e}", path.display())))?;
    let reader = BufReader::new(file);

    let mut raw_edges: Vec<(u64, u64)> = Vec::new();
    let mut self_loops = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line = line
            .map_err(|e| CliError::input(format!("{}:{}: {e}", path.display(), idx + 1)))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u64, CliError> {
            tok.ok_or_else(|| {
                CliError::input(format!(
                    "{}:{}: expected two node ids, got {trimmed:?}",
                    path.display(),
                    idx + 1
                ))
            })?
            .parse::<u64>()
            .map_err(|e| {
                CliError::input(format!("{}:{}: bad node id: {e}", path.display(), idx + 1))
            })
        };
        let u = parse(tokens.next())?;
        let v = parse(tokens.next())?;
        if tokens.next().is_some() {
            return Err(CliError::input(format!(
                "{}:{}: expected two node ids, got {trimmed:?}",
                path.display(),
                idx + 1
            )));
        }
        if u == v {
            self_loops += 1;
            continue;
        }
        raw_edges.push((u.min(v), u.max(v)));
    }
    if raw_edges.is_empty() {
        return Err(CliError::input(format!(
            "{}: no edges found (comments and self-loops only?)",
            path.display()
        )));
    }

    // Dense ids ascend with the original ids.
    let mut labels: Vec<u64> = raw_edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    labels.sort_unstable();
    labels.dedup();
    if labels.len() > u32::MAX as usize {
        return Err(CliError::input("graph exceeds the supported node count"));
    }
    let dense = |id: u64| labels.binary_search(&id).expect("id collected above") as u32;

    let mut edges: Vec<(u32, u32)> = raw_edges.iter().map(|&(u, v)| (dense(u), dense(v))).collect();
    edges.sort_unstable();
    let before = edges.len();
    edges.dedup();
    let duplicates = before - edges.len();

    let graph = Graph::from_undirected(labels.len(), &edges)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let stats = GraphStats {
        nodes: labels.len(),
        undirected_edges: edges.len(),
        self_loops_dropped: self_loops,
        duplicates_collapsed: duplicates,
    };
    Ok(LoadedGraph { graph, labels, edges, stats })
}

/// Writes a loaded graph back out in the same edge-list format, using
/// the original node ids. Reloading the result reproduces the graph,
/// labels, and edge list exactly.
pub fn write_graph(loaded: &LoadedGraph, path: &Path) -> Result<(), CliError> {
    let file = File::create(path)
        .map_err(|e| CliError::input(format!("cannot write graph {}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    let mut emit = || -> std::io::Result<()> {
        writeln!(
            out,
            "# {} nodes, {} undirected edges",
            loaded.stats.nodes, loaded.stats.undirected_edges
        )?;
        for &(u, v) in &loaded.edges {
            writeln!(out, "{} {}", loaded.labels[u as usize], loaded.labels[v as usize])?;
        }
        out.flush()
    };
    emit().map_err(|e| CliError::input(format!("cannot write graph {}: {e}", path.display())))
}
