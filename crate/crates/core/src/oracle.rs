//! Normalised constraint oracles.
//!
//! A raw objective implements [`SetFunction`]; a [`Constraint`] wraps it
//! with a threshold `T` and exposes the normalised value
//! `c(S) = min(f(S) / T, 1)`, metering every evaluation through a
//! [`QueryLedger`]. Constraints are cheap to clone (the raw function is
//! shared behind an `Arc`) and immutable, so marginal gains may be
//! evaluated concurrently.

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::ledger::QueryLedger;
use crate::EPS;

/// Dense 0-based element index into a [`GroundSet`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u32);

impl ElementId {
    /// The id as a `usize`, for indexing.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for ElementId {
    fn from(v: u32) -> Self {
        ElementId(v)
    }
}

/// Ordered element set; `BTreeSet` keeps iteration deterministic.
pub type ElementSet = BTreeSet<ElementId>;

/// Build an [`ElementSet`] from raw ids.
pub fn element_set<I: IntoIterator<Item = u32>>(ids: I) -> ElementSet {
    ids.into_iter().map(ElementId).collect()
}

/// The universe of elements, `0..n`, with optional display labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    /// Unlabelled ground set of size `n`.
    pub fn new(n: usize) -> Self {
        GroundSet { n, labels: None }
    }

    /// Ground set whose size and labels come from `labels`.
    pub fn with_labels(labels: Vec<String>) -> Self {
        GroundSet {
            n: labels.len(),
            labels: Some(labels),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn contains(&self, e: ElementId) -> bool {
        e.index() < self.n
    }

    /// All element ids in ascending order.
    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.n as u32).map(ElementId)
    }

    /// The full universe as a set.
    pub fn full_set(&self) -> ElementSet {
        self.elements().collect()
    }

    /// Display label for `e` (its id when unlabelled).
    pub fn label(&self, e: ElementId) -> Cow<'_, str> {
        match &self.labels {
            Some(ls) => Cow::Borrowed(ls[e.index()].as_str()),
            None => Cow::Owned(e.to_string()),
        }
    }
}

/// A raw (un-normalised) set function.
///
/// Implementations must be pure: same set in, same value out, with no
/// visible mutation. Solvers rely on monotonicity and submodularity;
/// [`spot_check_constraint`] probes both on random sets.
pub trait SetFunction: Send + Sync {
    /// Value of the function on `s`.
    fn eval(&self, s: &ElementSet) -> f64;
}

/// `f(S \ X)` for a fixed removal set `X`.
struct RemovalRestricted {
    inner: Arc<dyn SetFunction>,
    removed: ElementSet,
}

impl SetFunction for RemovalRestricted {
    fn eval(&self, s: &ElementSet) -> f64 {
        if self.removed.is_empty() || s.is_disjoint(&self.removed) {
            self.inner.eval(s)
        } else {
            let kept: ElementSet = s.difference(&self.removed).copied().collect();
            self.inner.eval(&kept)
        }
    }
}

/// A normalised, thresholded constraint `c(S) = min(f(S) / T, 1)`.
///
/// `slot` names the ledger entry charged by evaluations. Oracles derived
/// from a constraint — removal restrictions and sum terms — keep the
/// base slot, so query counts always attribute to the original `f_i`.
#[derive(Clone)]
pub struct Constraint {
    inner: Arc<dyn SetFunction>,
    threshold: f64,
    slot: usize,
    n: usize,
    name: String,
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Constraint")
            .field("name", &self.name)
            .field("threshold", &self.threshold)
            .field("slot", &self.slot)
            .finish()
    }
}

impl Constraint {
    /// Wrap `inner` with threshold `threshold` over `ground`, charging
    /// ledger slot `slot`.
    ///
    /// A zero threshold yields the constant-1 (vacuous) constraint
    /// rather than a division by zero.
    pub fn new(
        inner: Arc<dyn SetFunction>,
        threshold: f64,
        slot: usize,
        ground: &GroundSet,
        name: impl Into<String>,
    ) -> Self {
        Constraint {
            inner,
            threshold,
            slot,
            n: ground.len(),
            name: name.into(),
        }
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Size of the ground set this constraint is defined over.
    pub fn ground_size(&self) -> usize {
        self.n
    }

    fn check_ids(&self, s: &ElementSet) -> Result<(), Error> {
        // The set is ordered, so only the maximum needs checking.
        if let Some(&max) = s.iter().next_back() {
            if max.index() >= self.n {
                return Err(Error::ElementOutOfRange { id: max.0, n: self.n });
            }
        }
        Ok(())
    }

    fn normalise(&self, raw: f64) -> f64 {
        if self.threshold <= 0.0 {
            1.0
        } else {
            (raw / self.threshold).min(1.0)
        }
    }

    /// Normalised value of the constraint on `s`; exactly one query.
    pub fn value(&self, s: &ElementSet, ledger: &QueryLedger) -> Result<f64, Error> {
        self.check_ids(s)?;
        ledger.charge(self.slot);
        if self.threshold <= 0.0 {
            return Ok(1.0);
        }
        Ok(self.normalise(self.inner.eval(s)))
    }

    /// Normalised value without ledger accounting.
    ///
    /// Used by the brute-force verifiers and instrumentation, which are
    /// ground truth rather than part of an algorithm's query budget.
    pub fn value_free(&self, s: &ElementSet) -> f64 {
        debug_assert!(self.check_ids(s).is_ok());
        if self.threshold <= 0.0 {
            return 1.0;
        }
        self.normalise(self.inner.eval(s))
    }

    /// Marginal gain `c(S ∪ {e}) − c(S)`, clamped at zero.
    ///
    /// With `cached = Some(c(S))` this costs one query, otherwise two.
    pub fn marginal_gain(
        &self,
        s: &ElementSet,
        e: ElementId,
        cached: Option<f64>,
        ledger: &QueryLedger,
    ) -> Result<f64, Error> {
        if !s.contains(&e) && e.index() >= self.n {
            return Err(Error::ElementOutOfRange { id: e.0, n: self.n });
        }
        if s.contains(&e) {
            return Err(Error::ElementAlreadyPresent(e.0));
        }
        let base = match cached {
            Some(v) => v,
            None => self.value(s, ledger)?,
        };
        let mut extended = s.clone();
        extended.insert(e);
        let with = self.value(&extended, ledger)?;
        Ok((with - base).max(0.0))
    }

    /// Constraint evaluating `c(S \ X)`; queries keep charging this
    /// constraint's slot.
    pub fn restrict_removal(&self, x: &ElementSet) -> Result<Constraint, Error> {
        if let Some(&max) = x.iter().next_back() {
            if max.index() >= self.n {
                return Err(Error::ElementOutOfRange { id: max.0, n: self.n });
            }
        }
        let ids: Vec<String> = x.iter().map(|e| e.to_string()).collect();
        Ok(Constraint {
            inner: Arc::new(RemovalRestricted {
                inner: self.inner.clone(),
                removed: x.clone(),
            }),
            threshold: self.threshold,
            slot: self.slot,
            n: self.n,
            name: format!("{} minus {{{}}}", self.name, ids.join(",")),
        })
    }
}

/// Sum of normalised constraints, `F(S) = Σ_i c_i(S)`.
///
/// One evaluation charges every term's slot once.
pub struct SumOracle {
    terms: Vec<Constraint>,
}

impl SumOracle {
    /// Aggregate `terms`; at least one is required.
    pub fn new(terms: Vec<Constraint>) -> Result<Self, Error> {
        if terms.is_empty() {
            return Err(Error::NoConstraints);
        }
        Ok(SumOracle { terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Σ_i c_i(S)`; one query per term.
    pub fn value(&self, s: &ElementSet, ledger: &QueryLedger) -> Result<f64, Error> {
        let mut sum = 0.0;
        for c in &self.terms {
            sum += c.value(s, ledger)?;
        }
        Ok(sum)
    }

    /// Marginal gain of the sum; `cached` saves one sweep over the terms.
    pub fn marginal_gain(
        &self,
        s: &ElementSet,
        e: ElementId,
        cached: Option<f64>,
        ledger: &QueryLedger,
    ) -> Result<f64, Error> {
        if s.contains(&e) {
            return Err(Error::ElementAlreadyPresent(e.0));
        }
        let base = match cached {
            Some(v) => v,
            None => self.value(s, ledger)?,
        };
        let mut extended = s.clone();
        extended.insert(e);
        let with = self.value(&extended, ledger)?;
        Ok((with - base).max(0.0))
    }
}

/// Probe a constraint for monotonicity, submodularity, and range.
///
/// Draws `trials` random chains `A ⊆ B ⊆ V` plus an element `e ∉ B` and
/// checks, ledger-free and up to [`EPS`]:
/// value in `[0, 1]`, `c(A) ≤ c(B)`, and `Δ_e c(A) ≥ Δ_e c(B)`.
pub fn spot_check_constraint(
    c: &Constraint,
    ground: &GroundSet,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<(), Error> {
    let n = ground.len();
    for _ in 0..trials {
        let mut a = ElementSet::new();
        let mut b = ElementSet::new();
        for e in ground.elements() {
            if rng.gen::<f64>() < 0.5 {
                b.insert(e);
                if rng.gen::<f64>() < 0.5 {
                    a.insert(e);
                }
            }
        }
        let va = c.value_free(&a);
        let vb = c.value_free(&b);
        for (tag, v) in [("subset", va), ("superset", vb)] {
            if !(-EPS..=1.0 + EPS).contains(&v) {
                return Err(Error::PropertyViolated(format!(
                    "{}: normalised value {v} of {tag} outside [0, 1]",
                    c.name()
                )));
            }
        }
        if va > vb + EPS {
            return Err(Error::PropertyViolated(format!(
                "{}: not monotone ({va} > {vb} on a chain)",
                c.name()
            )));
        }
        // Pick e outside B uniformly, if any element is left.
        let outside: Vec<u32> = (0..n as u32).filter(|&i| !b.contains(&ElementId(i))).collect();
        if outside.is_empty() {
            continue;
        }
        let e = ElementId(outside[rng.gen_range(0..outside.len())]);
        let mut a_e = a.clone();
        a_e.insert(e);
        let mut b_e = b.clone();
        b_e.insert(e);
        let gain_a = c.value_free(&a_e) - va;
        let gain_b = c.value_free(&b_e) - vb;
        if gain_a < gain_b - EPS {
            return Err(Error::PropertyViolated(format!(
                "{}: not submodular (gain of {e} grows from {gain_a} to {gain_b})",
                c.name()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSpec;

    /// `f(S) = Σ_{e ∈ S} w_e`, the simplest monotone submodular function.
    pub(crate) struct Modular {
        pub weights: Vec<f64>,
    }

    impl SetFunction for Modular {
        fn eval(&self, s: &ElementSet) -> f64 {
            s.iter().map(|e| self.weights[e.index()]).sum()
        }
    }

    fn unit_constraint() -> (GroundSet, Constraint) {
        let ground = GroundSet::new(4);
        let c = Constraint::new(
            Arc::new(Modular {
                weights: vec![1.0, 2.0, 3.0, 4.0],
            }),
            5.0,
            0,
            &ground,
            "modular",
        );
        (ground, c)
    }

    #[test]
    fn value_normalises_and_caps_at_one() {
        let (_, c) = unit_constraint();
        let ledger = QueryLedger::new(1);
        assert_eq!(c.value(&element_set([]), &ledger).unwrap(), 0.0);
        assert_eq!(c.value(&element_set([0, 1]), &ledger).unwrap(), 3.0 / 5.0);
        // 2 + 3 + 4 = 9 > 5 caps at 1.
        assert_eq!(c.value(&element_set([1, 2, 3]), &ledger).unwrap(), 1.0);
        assert_eq!(ledger.count(0), 3);
    }

    #[test]
    fn zero_threshold_is_constant_one() {
        let ground = GroundSet::new(3);
        let c = Constraint::new(
            Arc::new(Modular { weights: vec![0.0; 3] }),
            0.0,
            0,
            &ground,
            "vacuous",
        );
        let ledger = QueryLedger::new(1);
        assert_eq!(c.value(&element_set([]), &ledger).unwrap(), 1.0);
        assert_eq!(c.value(&element_set([0, 2]), &ledger).unwrap(), 1.0);
        assert_eq!(ledger.count(0), 2);
    }

    #[test]
    fn out_of_range_ids_are_rejected() {
        let (_, c) = unit_constraint();
        let ledger = QueryLedger::new(1);
        let err = c.value(&element_set([0, 9]), &ledger).unwrap_err();
        assert!(matches!(err, Error::ElementOutOfRange { id: 9, n: 4 }));
        // Failed validation must not charge the ledger.
        assert_eq!(ledger.total(), 0);
    }

    #[test]
    fn marginal_gain_uses_cache_for_single_query() {
        let (_, c) = unit_constraint();
        let ledger = QueryLedger::new(1);
        let s = element_set([0]);
        let cached = c.value(&s, &ledger).unwrap();
        let before = ledger.total();
        let gain = c.marginal_gain(&s, ElementId(1), Some(cached), &ledger).unwrap();
        assert!((gain - 2.0 / 5.0).abs() < 1e-12);
        assert_eq!(ledger.total() - before, 1);
        // Without a cache the same gain costs two queries.
        let before = ledger.total();
        let gain2 = c.marginal_gain(&s, ElementId(1), None, &ledger).unwrap();
        assert_eq!(gain, gain2);
        assert_eq!(ledger.total() - before, 2);
    }

    #[test]
    fn marginal_gain_rejects_present_element() {
        let (_, c) = unit_constraint();
        let ledger = QueryLedger::new(1);
        let err = c
            .marginal_gain(&element_set([1]), ElementId(1), None, &ledger)
            .unwrap_err();
        assert!(matches!(err, Error::ElementAlreadyPresent(1)));
    }

    #[test]
    fn restriction_evaluates_set_minus_x() {
        let (_, c) = unit_constraint();
        let ledger = QueryLedger::new(1);
        let g = c.restrict_removal(&element_set([1, 2])).unwrap();
        let s = element_set([0, 1, 3]);
        // f({0, 3}) = 5 → normalised 1.0
        assert_eq!(g.value(&s, &ledger).unwrap(), 1.0);
        let direct = c
            .value(&element_set([0, 3]), &ledger)
            .unwrap();
        assert_eq!(g.value(&s, &ledger).unwrap(), direct);
        // Restriction charges the base slot.
        assert_eq!(ledger.count(0), 3);
    }

    #[test]
    fn sum_oracle_charges_every_term() {
        let ground = GroundSet::new(3);
        let make = |slot: usize| {
            Constraint::new(
                Arc::new(Modular {
                    weights: vec![1.0, 1.0, 1.0],
                }),
                2.0,
                slot,
                &ground,
                format!("c{slot}"),
            )
        };
        let sum = SumOracle::new(vec![make(0), make(1)]).unwrap();
        let ledger = QueryLedger::new(2);
        let v = sum.value(&element_set([0, 1]), &ledger).unwrap();
        assert_eq!(v, 2.0);
        assert_eq!(ledger.snapshot(), vec![1, 1]);
        assert!(matches!(SumOracle::new(vec![]), Err(Error::NoConstraints)));
    }

    #[test]
    fn spot_check_accepts_modular_and_rejects_decreasing() {
        let (ground, c) = unit_constraint();
        let mut rng = RngSpec::new(11).rng();
        spot_check_constraint(&c, &ground, 100, &mut rng).unwrap();

        struct Decreasing;
        impl SetFunction for Decreasing {
            fn eval(&self, s: &ElementSet) -> f64 {
                4.0 - s.len() as f64
            }
        }
        let bad = Constraint::new(Arc::new(Decreasing), 4.0, 0, &ground, "bad");
        let err = spot_check_constraint(&bad, &ground, 100, &mut rng).unwrap_err();
        assert!(matches!(err, Error::PropertyViolated(_)));
    }
}
