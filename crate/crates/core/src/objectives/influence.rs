//! Influence spread under the linear-threshold model.
//!
//! The diffusion process is evaluated by live-edge sampling: each node
//! independently keeps at most one incoming arc (arc `u → v` is kept
//! with probability `w(u, v)`, the choices for a node being mutually
//! exclusive), and a seed set influences exactly the nodes it reaches
//! along kept arcs. A fixed batch of `K` live-edge graphs is drawn once
//! and shared by all constraints, so the objective
//!
//! `f_i(S) = (1/K) · Σ_k |reach_k(S) ∩ group_i|`
//!
//! is a deterministic, monotone submodular function of the seed set.
//! Reach counts are accumulated as integers and divided by `K` once,
//! which keeps evaluation order out of the arithmetic.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;

use crate::error::Error;
use crate::oracle::{Constraint, ElementSet, GroundSet, SetFunction};
use crate::rng::RngSpec;
use crate::EPS;

/// Weighted directed graph with per-node incoming-weight budget ≤ 1.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    /// `in_arcs[v]` lists `(u, w(u, v))` for every arc `u → v`.
    in_arcs: Vec<Vec<(u32, f64)>>,
    arc_count: usize,
}

impl Graph {
    /// Builds a graph from explicit weighted arcs.
    ///
    /// Rejects self-loops, out-of-range endpoints, non-positive or
    /// non-finite weights, and nodes whose incoming weights sum past 1.
    pub fn new_directed(n: usize, arcs: &[(u32, u32, f64)]) -> Result<Self, Error> {
        let mut in_arcs: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for &(u, v, w) in arcs {
            if u as usize >= n || v as usize >= n {
                return Err(Error::ElementOutOfRange { id: u.max(v), n });
            }
            if u == v {
                return Err(Error::invalid("arcs", format!("self-loop at node {u}")));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::invalid("arcs", format!("arc weight {w} on {u} -> {v}")));
            }
            in_arcs[v as usize].push((u, w));
        }
        let mut arc_count = 0;
        for (v, arcs) in in_arcs.iter_mut().enumerate() {
            arcs.sort_unstable_by_key(|arc| arc.0);
            arc_count += arcs.len();
            let total: f64 = arcs.iter().map(|(_, w)| w).sum();
            if total > 1.0 + EPS {
                return Err(Error::invalid(
                    "arcs",
                    format!("incoming weights at node {v} sum to {total}"),
                ));
            }
        }
        Ok(Graph { n, in_arcs, arc_count })
    }

    /// Builds the standard uniform-weight graph from undirected edges.
    ///
    /// Every edge becomes two arcs and arc `u → v` gets weight
    /// `1 / degree(v)`. Duplicate edges collapse; self-loops are
    /// rejected.
    pub fn from_undirected(n: usize, edges: &[(u32, u32)]) -> Result<Self, Error> {
        let mut unique: BTreeSet<(u32, u32)> = BTreeSet::new();
        for &(a, b) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(Error::ElementOutOfRange { id: a.max(b), n });
            }
            if a == b {
                return Err(Error::invalid("edges", format!("self-loop at node {a}")));
            }
            unique.insert((a.min(b), a.max(b)));
        }
        let mut degree = vec![0usize; n];
        for &(a, b) in &unique {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut in_arcs: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for &(a, b) in &unique {
            in_arcs[b as usize].push((a, 1.0 / degree[b as usize] as f64));
            in_arcs[a as usize].push((b, 1.0 / degree[a as usize] as f64));
        }
        for arcs in &mut in_arcs {
            arcs.sort_unstable_by_key(|arc| arc.0);
        }
        Ok(Graph { n, in_arcs, arc_count: 2 * unique.len() })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Incoming arcs of `v` as `(source, weight)`, sorted by source.
    pub fn in_arcs(&self, v: u32) -> &[(u32, f64)] {
        &self.in_arcs[v as usize]
    }
}

/// A frozen batch of live-edge graphs, stored forward for reachability.
#[derive(Clone, Debug)]
pub struct LiveEdgeSamples {
    n: usize,
    /// `forward[k][u]` lists the nodes whose kept in-arc comes from `u`
    /// in sample `k`.
    forward: Vec<Vec<Vec<u32>>>,
}

impl LiveEdgeSamples {
    pub fn sample_count(&self) -> usize {
        self.forward.len()
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Marks every node reachable from `seeds` in sample `k`.
    pub fn reach(&self, k: usize, seeds: &ElementSet) -> Vec<bool> {
        let mut visited = vec![false; self.n];
        let mut stack: Vec<u32> = Vec::new();
        for e in seeds {
            if !visited[e.index()] {
                visited[e.index()] = true;
                stack.push(e.0);
            }
        }
        while let Some(u) = stack.pop() {
            for &v in &self.forward[k][u as usize] {
                if !visited[v as usize] {
                    visited[v as usize] = true;
                    stack.push(v);
                }
            }
        }
        visited
    }
}

/// Draws `samples` live-edge graphs from `graph`.
///
/// Node `v` keeps the in-arc from source `u` with probability
/// `w(u, v)`, or none with the leftover probability. The draw order is
/// fixed (samples outer, nodes ascending), so one [`RngSpec`] pins the
/// whole batch.
pub fn sample_live_edge_graph(
    graph: &Graph,
    samples: usize,
    rng: &RngSpec,
) -> Result<LiveEdgeSamples, Error> {
    if samples == 0 {
        return Err(Error::invalid("samples", "need at least one live-edge sample"));
    }
    let n = graph.len();
    let mut generator = rng.rng();
    let mut forward: Vec<Vec<Vec<u32>>> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for v in 0..n {
            let arcs = graph.in_arcs(v as u32);
            if arcs.is_empty() {
                continue;
            }
            let x: f64 = generator.gen();
            let mut acc = 0.0;
            for &(u, w) in arcs {
                acc += w;
                if x < acc {
                    adj[u as usize].push(v as u32);
                    break;
                }
            }
        }
        forward.push(adj);
    }
    Ok(LiveEdgeSamples { n, forward })
}

/// Average reach into one node group across the sample batch.
struct GroupSpread {
    samples: Arc<LiveEdgeSamples>,
    /// `member[v]` marks nodes of the group.
    member: Vec<bool>,
}

impl SetFunction for GroupSpread {
    fn eval(&self, s: &ElementSet) -> f64 {
        let k = self.samples.sample_count();
        let mut total: u64 = 0;
        for sample in 0..k {
            let visited = self.samples.reach(sample, s);
            for (v, hit) in visited.iter().enumerate() {
                if *hit && self.member[v] {
                    total += 1;
                }
            }
        }
        total as f64 / k as f64
    }
}

/// Builds one influence constraint per node group.
///
/// Constraint `i` demands that the average reach into `groups[i]` hits
/// `frac · |groups[i]|`; its ledger slot is `i`. All constraints share
/// one frozen batch of `samples` live-edge graphs, so `m` evaluations
/// of the same seed set agree on the underlying randomness.
///
/// Empty groups are rejected: their constraint would be vacuous at any
/// positive fraction and always-satisfied at zero.
pub fn build_lt_influence(
    graph: &Graph,
    groups: &[Vec<u32>],
    frac: f64,
    samples: usize,
    rng: &RngSpec,
) -> Result<Vec<Constraint>, Error> {
    if groups.is_empty() {
        return Err(Error::NoConstraints);
    }
    if !(frac.is_finite() && 0.0 < frac && frac <= 1.0) {
        return Err(Error::invalid("frac", format!("need 0 < frac <= 1, got {frac}")));
    }
    let batch = Arc::new(sample_live_edge_graph(graph, samples, rng)?);
    let ground = GroundSet::new(graph.len());
    let mut constraints = Vec::with_capacity(groups.len());
    for (i, group) in groups.iter().enumerate() {
        if group.is_empty() {
            return Err(Error::invalid("groups", format!("group {i} is empty")));
        }
        let mut member = vec![false; graph.len()];
        for &v in group {
            if v as usize >= graph.len() {
                return Err(Error::ElementOutOfRange { id: v, n: graph.len() });
            }
            member[v as usize] = true;
        }
        let spread = GroupSpread { samples: Arc::clone(&batch), member };
        constraints.push(Constraint::new(
            Arc::new(spread),
            frac * group.len() as f64,
            i,
            &ground,
            format!("influence[{i}]"),
        ));
    }
    Ok(constraints)
}

/// Splits nodes `0..n` into `m` random groups of near-equal size.
pub fn random_groups(n: usize, m: usize, seed: u64) -> Result<Vec<Vec<u32>>, Error> {
    if m == 0 || m > n {
        return Err(Error::invalid("m", format!("need 1 <= m <= n = {n}, got {m}")));
    }
    let mut nodes: Vec<u32> = (0..n as u32).collect();
    let mut rng = RngSpec::new(seed).rng();
    use rand::seq::SliceRandom;
    nodes.shuffle(&mut rng);
    let mut groups: Vec<Vec<u32>> = vec![Vec::new(); m];
    for (i, v) in nodes.into_iter().enumerate() {
        groups[i % m].push(v);
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    Ok(groups)
}
