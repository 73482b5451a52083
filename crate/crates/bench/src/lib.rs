//! Shared instance builders for the criterion benchmarks.
//!
//! Kept in a library so the fixtures stay under test: a benchmark that
//! silently starts measuring an infeasible instance reports garbage.

use minrf::objectives::{build_lt_influence, random_groups, random_instance, Graph};
use minrf::{Constraint, GroundSet, RngSpec};

/// Random coverage family: `n` candidate sets over `m` points, dense
/// enough that a single deletion never strands a point.
pub fn random_cover(n: usize, m: usize, seed: u64) -> (GroundSet, Vec<Constraint>) {
    let inst = random_instance(n, m, 0.2, seed).expect("generator settles within its retry budget");
    (inst.ground(), inst.constraints())
}

/// Ring-with-chords influence instance: `n` nodes, `m` random target
/// groups, spread estimated from `samples` live-edge draws.
pub fn ring_influence(n: usize, m: usize, samples: usize, seed: u64) -> (GroundSet, Vec<Constraint>) {
    let n32 = n as u32;
    let mut edges: Vec<(u32, u32)> = (0..n32).map(|u| (u, (u + 1) % n32)).collect();
    for u in (0..n32).step_by(5) {
        edges.push((u, (u + n32 / 2) % n32));
    }
    let graph = Graph::from_undirected(n, &edges).expect("ring edges stay in range");
    let groups = random_groups(n, m, seed).expect("group counts are positive");
    let constraints = build_lt_influence(&graph, &groups, 0.3, samples, &RngSpec::new(seed))
        .expect("random groups are never empty");
    (GroundSet::new(n), constraints)
}
