//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by solvers, oracles, and instance builders.
///
/// Infeasibility of an instance is *not* an error: solvers report it
/// through the `feasible` flag on their results. `Error` covers invalid
/// inputs, floating-point stalls, and failed instance generation.
#[derive(Debug, Error)]
pub enum Error {
    /// An element id does not belong to the ground set.
    #[error("element {id} is outside the ground set (size {n})")]
    ElementOutOfRange { id: u32, n: usize },

    /// A marginal gain was requested for an element already in the set.
    #[error("element {0} is already in the set")]
    ElementAlreadyPresent(u32),

    /// An operation that needs at least one constraint received none.
    #[error("constraint list is empty")]
    NoConstraints,

    /// A parameter is outside its documented domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: String,
    },

    /// The best marginal gain fell to the noise floor while constraints
    /// remain unsatisfied. After a passed feasibility pre-check this can
    /// only happen through floating-point pathology.
    #[error(
        "numerical stall: best marginal gain {gain:.3e} with {unsatisfied} \
         constraint(s) still unsatisfied"
    )]
    NumericalStall { gain: f64, unsatisfied: usize },

    /// An oracle failed a monotonicity/submodularity/range spot check.
    #[error("oracle property violated: {0}")]
    PropertyViolated(String),

    /// Random instance generation hit the retry cap without producing a
    /// feasible instance.
    #[error("could not generate a feasible instance after {attempts} attempts")]
    GenerationFailed { attempts: usize },
}

impl Error {
    /// Shorthand for [`Error::InvalidParameter`].
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
