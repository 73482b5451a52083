//! A value oracle with a hidden fragile subset.
//!
//! The function looks exactly like `3|Z|` until a query lands on the one
//! set that betrays the hidden `R`: with `q` value queries, the chance
//! of telling this function apart from `3|Z|` — and hence of discovering
//! that removing `R` breaks the cover — is at most `q / C(n, r)`. It is
//! the standard witness that robust cover needs structural assumptions
//! beyond oracle access.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::seq::index;

use crate::error::Error;
use crate::oracle::{Constraint, ElementId, ElementSet, GroundSet, SetFunction};
use crate::rng::RngSpec;

/// Piecewise function over `V = {0..n}` with hidden `R`, `|R| = r`:
///
/// * `|Z| < n − r`        → `3|Z|`
/// * `Z = V \ R`          → `3(n − r) − 1`
/// * otherwise            → `3(n − r) + (|Z| − (n − r))`
///
/// With threshold `3(n − r)`, the full set reaches the threshold but
/// `V \ R` falls just short, so `V` is not `(r, 0)`-robust — and only a
/// query on exactly `V \ R` can reveal it.
pub struct AdversarialOracle {
    n: usize,
    r: usize,
    hidden: ElementSet,
    probes: AtomicU64,
}

impl AdversarialOracle {
    /// Sample the hidden set from `seed` and wrap it. `0 < r < n`.
    pub fn new(n: usize, r: usize, seed: u64) -> Result<Arc<Self>, Error> {
        if n == 0 {
            return Err(Error::invalid("n", "ground set must be non-empty"));
        }
        if r == 0 || r >= n {
            return Err(Error::invalid("r", format!("{r} not in 1..{n}")));
        }
        let mut rng = RngSpec::new(seed).rng();
        let hidden: ElementSet = index::sample(&mut rng, n, r)
            .into_iter()
            .map(|i| ElementId(i as u32))
            .collect();
        Ok(Arc::new(AdversarialOracle {
            n,
            r,
            hidden,
            probes: AtomicU64::new(0),
        }))
    }

    /// Threshold that makes `V` feasible but `V \ R` infeasible.
    pub fn threshold(&self) -> f64 {
        3.0 * (self.n - self.r) as f64
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.n)
    }

    /// Number of evaluations served so far.
    pub fn probe_count(&self) -> u64 {
        self.probes.load(Ordering::Relaxed)
    }

    /// The oracle as a single normalised constraint on slot `slot`.
    pub fn constraint(self: &Arc<Self>, slot: usize) -> Constraint {
        Constraint::new(
            self.clone(),
            self.threshold(),
            slot,
            &self.ground(),
            "adversarial",
        )
    }

    fn is_complement_of_hidden(&self, z: &ElementSet) -> bool {
        z.len() == self.n - self.r && z.is_disjoint(&self.hidden)
    }
}

impl SetFunction for AdversarialOracle {
    fn eval(&self, z: &ElementSet) -> f64 {
        self.probes.fetch_add(1, Ordering::Relaxed);
        let size = z.len();
        let cut = self.n - self.r;
        if size < cut {
            3.0 * size as f64
        } else if self.is_complement_of_hidden(z) {
            3.0 * cut as f64 - 1.0
        } else {
            3.0 * cut as f64 + (size - cut) as f64
        }
    }
}

/// Outcome of one probing attack.
#[derive(Clone, Copy, Debug)]
pub struct ProbeReport {
    /// Whether any probe exposed the hidden set.
    pub detected: bool,
    /// Oracle evaluations spent.
    pub probes_used: u64,
}

/// Attack the oracle with `q` uniformly random size-`r` removal checks.
///
/// Each probe asks whether `f(V \ X) < T` for a fresh uniform `X`; that
/// is the only observable difference from the benign `3|Z|`, so the
/// detection probability is at most `q / C(n, r)`.
pub fn probe_for_hidden_set(n: usize, r: usize, q: usize, seed: u64) -> Result<ProbeReport, Error> {
    let oracle = AdversarialOracle::new(n, r, seed)?;
    let threshold = oracle.threshold();
    let full: ElementSet = oracle.ground().full_set();
    // Probes draw from a sibling stream so they never replay the
    // hidden-set sampling.
    let mut rng = RngSpec::new(seed).derive(1).rng();
    let mut detected = false;
    for _ in 0..q {
        let removal: ElementSet = index::sample(&mut rng, n, r)
            .into_iter()
            .map(|i| ElementId(i as u32))
            .collect();
        let kept: ElementSet = full.difference(&removal).copied().collect();
        if oracle.eval(&kept) < threshold {
            detected = true;
        }
    }
    Ok(ProbeReport {
        detected,
        probes_used: oracle.probe_count(),
    })
}
