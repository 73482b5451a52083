//! Concrete objective families.
//!
//! Every builder returns ordinary [`Constraint`](crate::Constraint)s, so
//! solvers and verifiers treat all objectives uniformly:
//!
//! * [`set_cover`] — coverage constraints, one per universe element,
//!   plus seeded random instance generation.
//! * [`tight`] — a nested set-cover family on which the single-pass
//!   repair provably overshoots the optimum by a growing factor.
//! * [`influence`] — linear-threshold influence spread estimated on
//!   frozen live-edge samples, one constraint per node group.
//! * [`movie`] — modular recommendation utility from tag-vector cosine
//!   similarity, one constraint per user.
//! * [`adversarial`] — a piecewise function with a hidden fragile set
//!   that value queries almost never reveal.

pub mod adversarial;
pub mod influence;
pub mod movie;
pub mod set_cover;
pub mod tight;

pub use adversarial::{probe_for_hidden_set, AdversarialOracle, ProbeReport};
pub use influence::{build_lt_influence, random_groups, sample_live_edge_graph, Graph, LiveEdgeSamples};
pub use movie::{build_movie_utility, cosine_similarity, MovieBuild, MovieData};
pub use set_cover::{random_instance, SetCoverInstance};
pub use tight::tight_instance;
