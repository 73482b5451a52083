//! Solvers for minimum robust multi-submodular cover.
//!
//! The problem: given a ground set `V` and monotone submodular functions
//! `f_1..f_m` with thresholds `T_1..T_m`, find a small `S ⊆ V` that keeps
//! every constraint satisfied even after an adversary deletes up to `r`
//! elements of `S`.  Each raw function is normalised to
//! `c_i(S) = min(f_i(S) / T_i, 1)`, so a set is `(r, α)`-robust when
//! `min_{|X| ≤ r} c_i(S \ X) ≥ 1 − α` for every `i`.
//!
//! The crate is organised as:
//!
//! * [`oracle`] — normalised constraint oracles, marginal gains, removal
//!   restriction, and the query ledger that meters oracle access.
//! * [`cover`] — non-robust (`r = 0`) cover routines: randomised greedy,
//!   plain greedy, threshold greedy, and a per-constraint baseline.
//! * [`robust`] — robust wrappers that repair a base cover against
//!   deletions: a single-pass repair for `r = 1`, an iterative repair for
//!   general `r`, and a disjoint-covers baseline.
//! * [`verify`] — exact brute-force verifiers used as ground truth in
//!   tests: worst-case removal certificates and optimal cover sizes.
//! * [`objectives`] — concrete objective families: set cover, linear
//!   threshold influence, movie recommendation utility, a query-hiding
//!   adversarial function, and generators for random and worst-case
//!   instances.
//!
//! All randomness flows through [`rng::RngSpec`] (a seed + stream pair),
//! so every solver run is reproducible bit-for-bit.

pub mod cover;
pub mod error;
pub mod ledger;
pub mod objectives;
pub mod oracle;
pub mod rng;
pub mod robust;
pub mod verify;

pub use cover::{check_feasible, greedy, rand_gr, sep, thres_gr, Alg0, CoverRequest, CoverResult};
pub use error::Error;
pub use ledger::QueryLedger;
pub use oracle::{Constraint, ElementId, ElementSet, GroundSet, SetFunction, SumOracle};
pub use rng::RngSpec;
pub use robust::{alg1, alg_r, disjoint, run_robust, RobustMethod, RobustRequest, RobustResult};
pub use verify::{brute_force_opt, is_robust, worst_case_removal};

/// Absolute tolerance for all satisfaction and feasibility comparisons.
///
/// A constraint counts as satisfied when its normalised value reaches
/// `1 - alpha - EPS`; the slack keeps exact integer-valued oracles from
/// flapping on the last bit of a floating-point sum.
pub const EPS: f64 = 1e-9;

/// Whether a normalised constraint value satisfies the `(·, alpha)` target.
#[inline]
pub fn satisfies(value: f64, alpha: f64) -> bool {
    value >= 1.0 - alpha - EPS
}
