//! Set-cover constraints.
//!
//! An instance is a universe `{0..universe}` and a family of subsets;
//! the *ground set* seen by the solvers is the family (one element per
//! candidate set). Each universe element `u` contributes the coverage
//! constraint `f_u(S) = |{j ∈ S : u ∈ F_j}|` with threshold 1, so the
//! normalised value is simply "is `u` covered".

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::oracle::{Constraint, ElementSet, GroundSet, SetFunction};
use crate::rng::RngSpec;

/// A set-cover instance: `universe` points and a family of subsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCoverInstance {
    pub universe: usize,
    pub family: Vec<BTreeSet<usize>>,
    /// Optional display names for the family members.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Counts how many chosen family members cover one universe element.
struct CoverageOracle {
    /// Family indices covering the element, ascending.
    coverers: Arc<Vec<u32>>,
}

impl SetFunction for CoverageOracle {
    fn eval(&self, s: &ElementSet) -> f64 {
        s.iter()
            .filter(|e| self.coverers.binary_search(&e.0).is_ok())
            .count() as f64
    }
}

impl SetCoverInstance {
    /// Validate and wrap a universe size and family.
    pub fn new(universe: usize, family: Vec<BTreeSet<usize>>) -> Result<Self, Error> {
        for (j, set) in family.iter().enumerate() {
            if let Some(&max) = set.iter().next_back() {
                if max >= universe {
                    return Err(Error::invalid(
                        "family",
                        format!("set {j} contains {max}, outside universe of size {universe}"),
                    ));
                }
            }
        }
        Ok(SetCoverInstance {
            universe,
            family,
            labels: None,
        })
    }

    /// Attach display names (must match the family length).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, Error> {
        if labels.len() != self.family.len() {
            return Err(Error::invalid(
                "labels",
                format!("{} labels for {} sets", labels.len(), self.family.len()),
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// The solver-facing ground set: one element per family member.
    pub fn ground(&self) -> GroundSet {
        match &self.labels {
            Some(ls) => GroundSet::with_labels(ls.clone()),
            None => GroundSet::new(self.family.len()),
        }
    }

    /// One coverage constraint per universe element, threshold 1.
    pub fn constraints(&self) -> Vec<Constraint> {
        let ground = self.ground();
        (0..self.universe)
            .map(|u| {
                let coverers: Vec<u32> = self
                    .family
                    .iter()
                    .enumerate()
                    .filter(|(_, set)| set.contains(&u))
                    .map(|(j, _)| j as u32)
                    .collect();
                Constraint::new(
                    Arc::new(CoverageOracle {
                        coverers: Arc::new(coverers),
                    }),
                    1.0,
                    u,
                    &ground,
                    format!("cover[{u}]"),
                )
            })
            .collect()
    }

    /// True when the whole family covers every universe element.
    pub fn fully_coverable(&self) -> bool {
        (0..self.universe).all(|u| self.family.iter().any(|set| set.contains(&u)))
    }

    /// The four-set instance over `{0,1,2,3}` where every point lies in
    /// exactly two sets: `{0,1}, {2,3}, {0,2}, {1,3}`.
    ///
    /// Small enough to verify by hand: the cheapest cover has size 2
    /// (`{0,1} ∪ {2,3}`), surviving any single deletion needs all four
    /// sets, and no subset survives two deletions.
    pub fn double_cover_example() -> Self {
        let family = vec![
            BTreeSet::from([0, 1]),
            BTreeSet::from([2, 3]),
            BTreeSet::from([0, 2]),
            BTreeSet::from([1, 3]),
        ];
        SetCoverInstance {
            universe: 4,
            family,
            labels: Some(vec!["A".into(), "B".into(), "C".into(), "D".into()]),
        }
    }
}

/// Seeded random instance: `n` candidate sets over a universe of `m`
/// points, each membership drawn independently with probability
/// `density`. Redraws (up to 100 times) until the full family covers
/// every point, so the instance is feasible at `r = 0`.
pub fn random_instance(
    n: usize,
    m: usize,
    density: f64,
    seed: u64,
) -> Result<SetCoverInstance, Error> {
    if n == 0 {
        return Err(Error::invalid("n", "need at least one candidate set"));
    }
    if m == 0 {
        return Err(Error::invalid("m", "need at least one universe point"));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::invalid("density", format!("{density} not in [0, 1]")));
    }
    const ATTEMPTS: usize = 100;
    let mut rng = RngSpec::new(seed).rng();
    for _ in 0..ATTEMPTS {
        let family: Vec<BTreeSet<usize>> = (0..n)
            .map(|_| {
                (0..m)
                    .filter(|_| rng.gen::<f64>() < density)
                    .collect()
            })
            .collect();
        let instance = SetCoverInstance {
            universe: m,
            family,
            labels: None,
        };
        if instance.fully_coverable() {
            return Ok(instance);
        }
    }
    Err(Error::GenerationFailed { attempts: ATTEMPTS })
}
