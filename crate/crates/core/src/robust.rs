//! Robust cover: solutions that survive up to `r` deletions.
//!
//! All three methods build on the base routines in [`crate::cover`]:
//!
//! * [`alg1`] — for `r = 1`: take a base cover, scan it once in
//!   insertion order, and patch every element whose removal breaks a
//!   constraint. A damage-ratio argument caps the total patch work
//!   (asserted live on every run).
//! * [`alg_r`] — for any `r`: iteratively materialise the removal sets
//!   that still hurt as restricted constraints and re-cover against
//!   them; `r` rounds suffice.
//! * [`disjoint`] — baseline: `r + 1` pairwise disjoint covers; any `r`
//!   deletions leave one cover untouched. Fails on instances without
//!   that much slack, which is reported as infeasibility, not an error.

use itertools::Itertools;
use serde::Serialize;

use crate::cover::{run_alg0, Alg0, CoverRequest, CoverResult, RoundRecord};
use crate::error::Error;
use crate::ledger::QueryLedger;
use crate::oracle::{Constraint, ElementId, ElementSet, GroundSet};
use crate::rng::RngSpec;
use crate::{satisfies, EPS};

/// Inputs for the robust solvers.
#[derive(Clone)]
pub struct RobustRequest {
    pub ground: GroundSet,
    pub constraints: Vec<Constraint>,
    /// Satisfaction slack `alpha ∈ [0, 1)`.
    pub alpha: f64,
    /// Deletion budget the solution must survive.
    pub r: usize,
    /// Base cover routine used by every sub-solve.
    pub alg0: Alg0,
    pub rng: RngSpec,
    /// Forwarded to the base routine (see [`CoverRequest`]).
    pub keep_satisfied: bool,
}

impl RobustRequest {
    pub fn new(
        ground: GroundSet,
        constraints: Vec<Constraint>,
        alpha: f64,
        r: usize,
        alg0: Alg0,
        rng: RngSpec,
    ) -> Self {
        RobustRequest {
            ground,
            constraints,
            alpha,
            r,
            alg0,
            rng,
            keep_satisfied: false,
        }
    }

    /// Base request over the full ground set with a fresh child stream.
    fn cover_request(&self, salt: u64) -> CoverRequest {
        CoverRequest::new(
            self.ground.clone(),
            self.constraints.clone(),
            self.alpha,
            self.rng.derive(salt),
        )
        .with_keep_satisfied(self.keep_satisfied)
    }
}

/// One repair step of a robust solver.
#[derive(Clone, Debug, Serialize)]
pub struct RepairRound {
    /// `alg_r`: iteration index; `alg1`: position of the scanned
    /// element; `disjoint`: cover index.
    pub round: usize,
    /// Constraint/removal pairs that were found violated, as
    /// `(constraint slot, removal set)`.
    pub violations: Vec<(usize, ElementSet)>,
    /// Elements the repair added.
    pub added: Vec<ElementId>,
    /// Total oracle queries the step consumed.
    pub queries: u64,
}

/// Witness for an unrepairable violation.
#[derive(Clone, Debug, Serialize)]
pub struct FailureCertificate {
    pub round: usize,
    /// Slot of the constraint that cannot be satisfied.
    pub constraint: usize,
    /// Removal set under which it fails even on the full pool.
    pub removal: ElementSet,
}

/// Output of a robust solver.
#[derive(Clone, Debug, Serialize)]
pub struct RobustResult {
    pub solution: ElementSet,
    /// False when some violation cannot be repaired from the remaining
    /// pool; the solution is then empty and `failure` explains why.
    pub feasible: bool,
    /// Oracle queries consumed, per ledger slot.
    pub queries: Vec<u64>,
    /// Every insertion across all sub-solves, in order.
    pub picks: Vec<RoundRecord>,
    /// Repair steps taken after the base cover.
    pub repairs: Vec<RepairRound>,
    /// Damage ratios `ρ_e` of the patched elements (single-pass repair
    /// only); their sum is at most 1.
    pub rho: Vec<(ElementId, f64)>,
    pub failure: Option<FailureCertificate>,
}

impl RobustResult {
    pub fn total_queries(&self) -> u64 {
        self.queries.iter().sum()
    }

    fn infeasible(queries: Vec<u64>, failure: FailureCertificate) -> Self {
        RobustResult {
            solution: ElementSet::new(),
            feasible: false,
            queries,
            picks: Vec::new(),
            repairs: Vec::new(),
            rho: Vec::new(),
            failure: Some(failure),
        }
    }
}

fn wrap_base(result: CoverResult, constraints: &[Constraint], ledger: &QueryLedger, start: &[u64]) -> RobustResult {
    if result.feasible {
        RobustResult {
            solution: result.solution,
            feasible: true,
            queries: ledger.delta(start),
            picks: result.trace,
            repairs: Vec::new(),
            rho: Vec::new(),
            failure: None,
        }
    } else {
        let pos = result.failed_constraint.unwrap_or(0);
        RobustResult::infeasible(
            ledger.delta(start),
            FailureCertificate {
                round: 0,
                constraint: constraints[pos].slot(),
                removal: ElementSet::new(),
            },
        )
    }
}

/// Single-pass repair for `r = 1`.
///
/// Builds a base cover `S`, then visits each of its elements once in
/// insertion order: if dropping `e` breaks any constraint, re-cover the
/// violated ones on the pool without `e`, starting from `S \ {e}`, and
/// fold the patch into `S`. One pass suffices — patched elements never
/// need revisiting, and elements added by patches are never scanned.
///
/// For every patched element the damage ratio
/// `ρ_e = Σ_i (c_i(S) − c_i(S \ {e}))/m` is recorded; the ratios sum to
/// at most 1 (asserted at runtime), which bounds the number of patch
/// rounds independent of the instance.
pub fn alg1(req: &RobustRequest, ledger: &QueryLedger) -> Result<RobustResult, Error> {
    if req.r != 1 {
        return Err(Error::invalid("r", format!("single-pass repair needs r = 1, got {}", req.r)));
    }
    let m = req.constraints.len();
    if m == 0 {
        return Err(Error::NoConstraints);
    }
    let start = ledger.snapshot();
    let base = run_alg0(req.alg0, &req.cover_request(0), ledger)?;
    if !base.feasible {
        return Ok(wrap_base(base, &req.constraints, ledger, &start));
    }
    let mut solution = base.solution.clone();
    let mut picks = base.trace.clone();
    let order: Vec<ElementId> = base.trace.iter().map(|r| r.chosen).collect();
    debug_assert_eq!(order.len(), solution.len(), "base cover built from empty start");

    let mut repairs: Vec<RepairRound> = Vec::new();
    let mut rho: Vec<(ElementId, f64)> = Vec::new();
    let mut rho_sum = 0.0;
    let mut salt = 1u64;

    for (scan_pos, &e) in order.iter().enumerate() {
        let round_start = ledger.snapshot();
        let mut without_e: ElementSet = solution.clone();
        without_e.remove(&e);
        let mut violated: Vec<usize> = Vec::new();
        let mut removal_values: Vec<f64> = Vec::with_capacity(m);
        for (pos, c) in req.constraints.iter().enumerate() {
            let v = c.value(&without_e, ledger)?;
            removal_values.push(v);
            if !satisfies(v, req.alpha) {
                violated.push(pos);
            }
        }
        if violated.is_empty() {
            continue;
        }

        // Damage ratio of e against the solution as it stands now.
        let mut damage = 0.0;
        for (pos, c) in req.constraints.iter().enumerate() {
            let with = c.value(&solution, ledger)?;
            damage += (with - removal_values[pos]).max(0.0);
        }
        let rho_e = damage / m as f64;
        rho_sum += rho_e;
        assert!(
            rho_sum <= 1.0 + EPS,
            "damage ratios exceeded the unit budget: {rho_sum}"
        );
        rho.push((e, rho_e));

        let mut pool = req.ground.full_set();
        pool.remove(&e);
        let patch_constraints: Vec<Constraint> =
            violated.iter().map(|&pos| req.constraints[pos].clone()).collect();
        let sub = CoverRequest::new(
            req.ground.clone(),
            patch_constraints,
            req.alpha,
            req.rng.derive(salt),
        )
        .with_allowed(pool)
        .with_initial(without_e.clone())
        .with_keep_satisfied(req.keep_satisfied);
        salt += 1;

        let patch = run_alg0(req.alg0, &sub, ledger)?;
        if !patch.feasible {
            let failing = violated[patch.failed_constraint.unwrap_or(0)];
            return Ok(RobustResult::infeasible(
                ledger.delta(&start),
                FailureCertificate {
                    round: scan_pos,
                    constraint: req.constraints[failing].slot(),
                    removal: [e].into_iter().collect(),
                },
            ));
        }
        solution.extend(patch.solution.iter().copied());
        let added: Vec<ElementId> = patch.trace.iter().map(|r| r.chosen).collect();
        picks.extend(patch.trace.into_iter().map(|mut rec| {
            // Remap constraint positions from the patch request back to
            // the parent request.
            rec.active = rec.active.into_iter().map(|p| violated[p]).collect();
            rec
        }));
        repairs.push(RepairRound {
            round: scan_pos,
            violations: violated
                .iter()
                .map(|&pos| (req.constraints[pos].slot(), [e].into_iter().collect()))
                .collect(),
            added,
            queries: ledger.delta(&round_start).iter().sum(),
        });
    }

    Ok(RobustResult {
        solution,
        feasible: true,
        queries: ledger.delta(&start),
        picks,
        repairs,
        rho,
        failure: None,
    })
}

/// Enumerate removal-set violations of `s_prev`.
///
/// Yields every pair `(i, X)` — `i` indexing `constraints` — with
/// `X ⊆ s_prev` of size `min(r, |s_prev|)`, `X ⊄ s_prev2`, and
/// `c_i(s_prev \ X) < 1 − alpha`. Removal sets already contained in
/// `s_prev2` were handled by an earlier round and are skipped before
/// any query is spent, so each surviving pair costs one query per
/// constraint.
pub fn enumerate_violated(
    s_prev: &ElementSet,
    s_prev2: &ElementSet,
    constraints: &[Constraint],
    r: usize,
    alpha: f64,
    ledger: &QueryLedger,
) -> Result<Vec<(usize, ElementSet)>, Error> {
    if constraints.is_empty() {
        return Err(Error::NoConstraints);
    }
    let elements: Vec<ElementId> = s_prev.iter().copied().collect();
    let size = r.min(elements.len());
    let mut found: Vec<(usize, ElementSet)> = Vec::new();
    for combo in elements.iter().combinations(size) {
        let removal: ElementSet = combo.into_iter().copied().collect();
        if removal.is_subset(s_prev2) {
            continue;
        }
        let kept: ElementSet = s_prev.difference(&removal).copied().collect();
        for (i, c) in constraints.iter().enumerate() {
            if !satisfies(c.value(&kept, ledger)?, alpha) {
                found.push((i, removal.clone()));
            }
        }
    }
    Ok(found)
}

/// Iterative repair for arbitrary `r`.
///
/// Starts from a base cover `S_0`. Round `t` enumerates the removal
/// sets of size `r` inside `S_{t−1}` that still violate some constraint
/// (skipping sets already inside `S_{t−2}`, which earlier rounds
/// secured), turns each violated pair into a removal-restricted
/// constraint, and re-covers against those from `S_{t−1}`. After `r`
/// rounds the solution survives any `r` deletions.
pub fn alg_r(req: &RobustRequest, ledger: &QueryLedger) -> Result<RobustResult, Error> {
    if req.constraints.is_empty() {
        return Err(Error::NoConstraints);
    }
    let start = ledger.snapshot();
    let base = run_alg0(req.alg0, &req.cover_request(0), ledger)?;
    if req.r == 0 || !base.feasible {
        return Ok(wrap_base(base, &req.constraints, ledger, &start));
    }

    let mut picks = base.trace.clone();
    let mut repairs: Vec<RepairRound> = Vec::new();
    let mut s_prev2 = ElementSet::new(); // S_{t-2}
    let mut s_prev = base.solution; // S_{t-1}

    for t in 1..=req.r {
        let round_start = ledger.snapshot();
        let pairs =
            enumerate_violated(&s_prev, &s_prev2, &req.constraints, req.r, req.alpha, ledger)?;
        if pairs.is_empty() {
            repairs.push(RepairRound {
                round: t,
                violations: Vec::new(),
                added: Vec::new(),
                queries: ledger.delta(&round_start).iter().sum(),
            });
            s_prev2 = s_prev.clone();
            continue;
        }
        let derived: Vec<Constraint> = pairs
            .iter()
            .map(|(i, x)| req.constraints[*i].restrict_removal(x))
            .collect::<Result<_, _>>()?;
        let sub = CoverRequest::new(
            req.ground.clone(),
            derived,
            req.alpha,
            req.rng.derive(t as u64),
        )
        .with_initial(s_prev.clone())
        .with_keep_satisfied(req.keep_satisfied);
        let round = run_alg0(req.alg0, &sub, ledger)?;
        if !round.feasible {
            let (i, x) = &pairs[round.failed_constraint.unwrap_or(0)];
            return Ok(RobustResult::infeasible(
                ledger.delta(&start),
                FailureCertificate {
                    round: t,
                    constraint: req.constraints[*i].slot(),
                    removal: x.clone(),
                },
            ));
        }
        let added: Vec<ElementId> = round.trace.iter().map(|r| r.chosen).collect();
        picks.extend(round.trace.into_iter().map(|mut rec| {
            rec.active = rec.active.into_iter().map(|p| pairs[p].0).collect();
            rec
        }));
        repairs.push(RepairRound {
            round: t,
            violations: pairs
                .into_iter()
                .map(|(i, x)| (req.constraints[i].slot(), x))
                .collect(),
            added,
            queries: ledger.delta(&round_start).iter().sum(),
        });
        s_prev2 = s_prev;
        s_prev = round.solution;
    }

    Ok(RobustResult {
        solution: s_prev,
        feasible: true,
        queries: ledger.delta(&start),
        picks,
        repairs,
        rho: Vec::new(),
        failure: None,
    })
}

/// Baseline: `r + 1` pairwise disjoint covers.
///
/// Cover `j` is built on the pool left over by covers `0..j`; any `r`
/// deletions miss at least one cover entirely. Instances often lack
/// `r + 1` disjoint covers, in which case the result is infeasible —
/// a normal outcome for this baseline, not an input error.
pub fn disjoint(req: &RobustRequest, ledger: &QueryLedger) -> Result<RobustResult, Error> {
    if req.constraints.is_empty() {
        return Err(Error::NoConstraints);
    }
    let start = ledger.snapshot();
    let mut pool = req.ground.full_set();
    let mut union = ElementSet::new();
    let mut picks: Vec<RoundRecord> = Vec::new();
    let mut repairs: Vec<RepairRound> = Vec::new();
    for j in 0..=req.r {
        let round_start = ledger.snapshot();
        let sub = req.cover_request(j as u64).with_allowed(pool.clone());
        let cover = run_alg0(req.alg0, &sub, ledger)?;
        if !cover.feasible {
            let pos = cover.failed_constraint.unwrap_or(0);
            return Ok(RobustResult::infeasible(
                ledger.delta(&start),
                FailureCertificate {
                    round: j,
                    constraint: req.constraints[pos].slot(),
                    removal: ElementSet::new(),
                },
            ));
        }
        debug_assert!(union.is_disjoint(&cover.solution));
        for e in &cover.solution {
            pool.remove(e);
        }
        union.extend(cover.solution.iter().copied());
        repairs.push(RepairRound {
            round: j,
            violations: Vec::new(),
            added: cover.trace.iter().map(|r| r.chosen).collect(),
            queries: ledger.delta(&round_start).iter().sum(),
        });
        picks.extend(cover.trace);
    }
    Ok(RobustResult {
        solution: union,
        feasible: true,
        queries: ledger.delta(&start),
        picks,
        repairs,
        rho: Vec::new(),
        failure: None,
    })
}

/// Selector for the robust wrapper.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RobustMethod {
    /// Single-pass repair (`r = 1` only).
    Alg1,
    /// Iterative repair for arbitrary `r`.
    AlgR,
    /// Disjoint-covers baseline.
    Disjoint,
}

impl RobustMethod {
    pub fn name(&self) -> &'static str {
        match self {
            RobustMethod::Alg1 => "alg1",
            RobustMethod::AlgR => "algr",
            RobustMethod::Disjoint => "disjoint",
        }
    }
}

/// Dispatch a request to the selected robust method.
pub fn run_robust(
    method: RobustMethod,
    req: &RobustRequest,
    ledger: &QueryLedger,
) -> Result<RobustResult, Error> {
    match method {
        RobustMethod::Alg1 => alg1(req, ledger),
        RobustMethod::AlgR => alg_r(req, ledger),
        RobustMethod::Disjoint => disjoint(req, ledger),
    }
}
