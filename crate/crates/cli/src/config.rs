//! Experiment configuration: JSON schema, validation, and algorithm
//! spec parsing.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use minrf::cover::Alg0;
use minrf::robust::RobustMethod;

use crate::CliError;

/// What to optimise over.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    /// The built-in four-set double-cover instance.
    SetCover,
    /// Random set-cover family: `n` candidate sets over `m` points.
    Random { n: usize, m: usize, density: f64 },
    /// Nested-chain worst case with `2^k` points.
    Tight { k: u32 },
    /// Linear-threshold influence over a SNAP edge list, one constraint
    /// per random node group.
    LtInfluence {
        graph: PathBuf,
        groups: usize,
        frac: f64,
    },
    /// Per-user slate utility from MovieLens ratings + genome scores.
    MovieUtility {
        ratings: PathBuf,
        genome: PathBuf,
        users: usize,
        min_rating: f64,
        frac: f64,
    },
    /// Query-hiding oracle with a planted removal set.
    Adversarial { n: usize, r: usize },
}

impl ObjectiveSpec {
    /// Whether thresholds scale with a coverage fraction, making a
    /// `frac` sweep meaningful.
    pub fn supports_frac_sweep(&self) -> bool {
        matches!(
            self,
            ObjectiveSpec::LtInfluence { .. } | ObjectiveSpec::MovieUtility { .. }
        )
    }
}

/// Sweep axis: deletion budget or threshold fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    R,
    Frac,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// One point on the sweep axis, carrying its canonical text form (used
/// in seed derivation and the CSV `sweep` column).
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub value: f64,
    pub label: String,
    /// Deletion budget at this point (0 on `frac` sweeps).
    pub r: usize,
    /// Threshold fraction override at this point (`frac` sweeps only).
    pub frac: Option<f64>,
}

impl SweepSpec {
    pub fn points(&self) -> Result<Vec<SweepPoint>, CliError> {
        if self.values.is_empty() {
            return Err(CliError::input("sweep.values must not be empty"));
        }
        if !self.values.windows(2).all(|w| w[0] < w[1]) {
            return Err(CliError::input(
                "sweep.values must be strictly increasing",
            ));
        }
        self.values
            .iter()
            .map(|&v| match self.axis {
                SweepAxis::R => {
                    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
                        return Err(CliError::input(format!(
                            "sweep value {v} is not a non-negative integer deletion budget"
                        )));
                    }
                    let r = v as usize;
                    Ok(SweepPoint { value: v, label: r.to_string(), r, frac: None })
                }
                SweepAxis::Frac => {
                    if !(v.is_finite() && 0.0 < v && v <= 1.0) {
                        return Err(CliError::input(format!(
                            "sweep fraction {v} is outside (0, 1]"
                        )));
                    }
                    Ok(SweepPoint { value: v, label: v.to_string(), r: 0, frac: Some(v) })
                }
            })
            .collect()
    }
}

fn default_alpha() -> f64 {
    0.1
}
fn default_gamma() -> f64 {
    0.2
}
fn default_samples() -> usize {
    100
}
fn default_repetitions() -> usize {
    10
}

/// Root configuration document. Unknown fields are rejected so typos
/// fail loudly.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub objective: ObjectiveSpec,
    /// Algorithm specs such as `greedy`, `randgr`, `thresgr`, `sep`,
    /// `alg1-greedy`, `algr-randgr`, `disjoint-greedy`.
    #[serde(default)]
    pub algorithms: Vec<String>,
    /// Satisfaction slack for every run.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Threshold-decay rate for the threshold-greedy backend.
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// Live-edge sample count for influence objectives.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Required by `sweep`; ignored by `solve`/`verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// CSV destination for `sweep`; stdout when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::input(format!("cannot read config {}: {e}", path.display()))
        })?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("bad config {}: {e}", path.display())))?;
        cfg.validate_fields()?;
        Ok(cfg)
    }

    pub fn validate_fields(&self) -> Result<(), CliError> {
        if !(self.alpha.is_finite() && (0.0..1.0).contains(&self.alpha)) {
            return Err(CliError::input(format!("alpha {} is outside [0, 1)", self.alpha)));
        }
        if !(self.gamma.is_finite() && 0.0 < self.gamma && self.gamma < 1.0) {
            return Err(CliError::input(format!("gamma {} is outside (0, 1)", self.gamma)));
        }
        if self.repetitions == 0 {
            return Err(CliError::input("repetitions must be at least 1"));
        }
        if self.samples == 0 {
            return Err(CliError::input("samples must be at least 1"));
        }
        Ok(())
    }

    /// Parses the algorithm list and checks it against the sweep.
    pub fn algorithm_specs(&self) -> Result<Vec<AlgSpec>, CliError> {
        if self.algorithms.is_empty() {
            return Err(CliError::input("algorithms must list at least one entry"));
        }
        let specs: Vec<AlgSpec> = self
            .algorithms
            .iter()
            .map(|s| AlgSpec::parse(s, self.gamma))
            .collect::<Result<_, _>>()?;
        let mut labels: Vec<&str> = specs.iter().map(|s| s.label()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::input("algorithms contains duplicate entries"));
        }
        if let Some(sweep) = &self.sweep {
            for point in sweep.points()? {
                for spec in &specs {
                    spec.check_budget(point.r)?;
                }
            }
        }
        Ok(specs)
    }
}

/// A parsed algorithm entry: a plain base routine or a robust wrapper
/// around one.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgSpec {
    Base(Alg0),
    Robust(RobustMethod, Alg0),
}

impl AlgSpec {
    /// Accepts `greedy` / `randgr` / `thresgr` / `sep`, and
    /// `alg1|algr|disjoint` + `-` or `+` + backend. A bare `disjoint`
    /// means `disjoint-greedy`.
    pub fn parse(text: &str, gamma: f64) -> Result<Self, CliError> {
        let base = |name: &str| -> Option<Alg0> {
            match name {
                "randgr" => Some(Alg0::RandGr),
                "greedy" => Some(Alg0::Greedy),
                "thresgr" => Some(Alg0::ThresGr { gamma }),
                "sep" => Some(Alg0::Sep),
                _ => None,
            }
        };
        let lower = text.trim().to_ascii_lowercase();
        if let Some(alg0) = base(&lower) {
            return Ok(AlgSpec::Base(alg0));
        }
        if lower == "disjoint" {
            return Ok(AlgSpec::Robust(RobustMethod::Disjoint, Alg0::Greedy));
        }
        if let Some((head, tail)) = lower.split_once(['-', '+']) {
            let method = match head {
                "alg1" => Some(RobustMethod::Alg1),
                "algr" => Some(RobustMethod::AlgR),
                "disjoint" => Some(RobustMethod::Disjoint),
                _ => None,
            };
            if let (Some(method), Some(alg0)) = (method, base(tail)) {
                if alg0 == Alg0::Sep {
                    return Err(CliError::input(format!(
                        "algorithm '{text}': the per-constraint baseline cannot resume from a \
                         partial solution, so it cannot back a robust wrapper"
                    )));
                }
                return Ok(AlgSpec::Robust(method, alg0));
            }
        }
        Err(CliError::input(format!(
            "unknown algorithm '{text}' (expected greedy, randgr, thresgr, sep, or \
             alg1/algr/disjoint-<backend>)"
        )))
    }

    /// Canonical CSV label.
    pub fn label(&self) -> &'static str {
        match self {
            AlgSpec::Base(a) => a.name(),
            AlgSpec::Robust(m, a) => match (m, a) {
                (RobustMethod::Alg1, Alg0::RandGr) => "alg1-randgr",
                (RobustMethod::Alg1, Alg0::Greedy) => "alg1-greedy",
                (RobustMethod::Alg1, Alg0::ThresGr { .. }) => "alg1-thresgr",
                (RobustMethod::AlgR, Alg0::RandGr) => "algr-randgr",
                (RobustMethod::AlgR, Alg0::Greedy) => "algr-greedy",
                (RobustMethod::AlgR, Alg0::ThresGr { .. }) => "algr-thresgr",
                (RobustMethod::Disjoint, Alg0::RandGr) => "disjoint-randgr",
                (RobustMethod::Disjoint, Alg0::Greedy) => "disjoint-greedy",
                (RobustMethod::Disjoint, Alg0::ThresGr { .. }) => "disjoint-thresgr",
                (_, Alg0::Sep) => unreachable!("rejected at parse time"),
            },
        }
    }

    /// Whether this spec can run at deletion budget `r`.
    pub fn check_budget(&self, r: usize) -> Result<(), CliError> {
        match self {
            AlgSpec::Base(_) if r > 0 => Err(CliError::input(format!(
                "base algorithm '{}' cannot honour a deletion budget of {r}; wrap it \
                 (e.g. algr-{})",
                self.label(),
                self.label()
            ))),
            AlgSpec::Robust(RobustMethod::Alg1, _) if r > 1 => Err(CliError::input(format!(
                "'{}' only supports budgets 0 and 1 (got {r}); use algr-* for larger budgets",
                self.label()
            ))),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_specs_parse_and_label() {
        let cases = [
            ("greedy", "greedy"),
            ("randgr", "randgr"),
            ("thresgr", "thresgr"),
            ("sep", "sep"),
            ("alg1-greedy", "alg1-greedy"),
            ("algr+randgr", "algr-randgr"),
            ("disjoint", "disjoint-greedy"),
            ("DISJOINT-THRESGR", "disjoint-thresgr"),
        ];
        for (text, label) in cases {
            assert_eq!(AlgSpec::parse(text, 0.2).unwrap().label(), label);
        }
        assert!(AlgSpec::parse("algr-sep", 0.2).is_err());
        assert!(AlgSpec::parse("fastest", 0.2).is_err());
        assert!(AlgSpec::parse("alg2-greedy", 0.2).is_err());
    }

    #[test]
    fn budgets_are_checked_per_spec() {
        let base = AlgSpec::parse("greedy", 0.2).unwrap();
        assert!(base.check_budget(0).is_ok());
        assert!(base.check_budget(1).is_err());
        let single = AlgSpec::parse("alg1-greedy", 0.2).unwrap();
        assert!(single.check_budget(1).is_ok());
        assert!(single.check_budget(2).is_err());
        let iterative = AlgSpec::parse("algr-greedy", 0.2).unwrap();
        assert!(iterative.check_budget(5).is_ok());
    }

    #[test]
    fn sweep_points_carry_labels_and_budgets() {
        let sweep = SweepSpec { axis: SweepAxis::R, values: vec![0.0, 1.0, 2.0] };
        let points = sweep.points().unwrap();
        assert_eq!(points.len(), 3);
        assert_eq!(points[2].label, "2");
        assert_eq!(points[2].r, 2);
        assert_eq!(points[2].frac, None);

        let sweep = SweepSpec { axis: SweepAxis::Frac, values: vec![0.25, 0.5] };
        let points = sweep.points().unwrap();
        assert_eq!(points[0].label, "0.25");
        assert_eq!(points[0].r, 0);
        assert_eq!(points[0].frac, Some(0.25));

        assert!(SweepSpec { axis: SweepAxis::R, values: vec![] }.points().is_err());
        assert!(SweepSpec { axis: SweepAxis::R, values: vec![1.0, 1.0] }.points().is_err());
        assert!(SweepSpec { axis: SweepAxis::R, values: vec![0.5] }.points().is_err());
        assert!(SweepSpec { axis: SweepAxis::Frac, values: vec![0.0, 0.5] }.points().is_err());
    }

    #[test]
    fn config_json_round_trips_with_defaults() {
        let text = r#"{
            "objective": {"kind": "random", "n": 40, "m": 4, "density": 0.3},
            "algorithms": ["greedy", "algr-randgr"],
            "sweep": {"axis": "r", "values": [0]}
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(text).unwrap();
        cfg.validate_fields().unwrap();
        assert_eq!(cfg.alpha, 0.1);
        assert_eq!(cfg.gamma, 0.2);
        assert_eq!(cfg.samples, 100);
        assert_eq!(cfg.repetitions, 10);
        assert_eq!(cfg.master_seed, 0);
        assert_eq!(cfg.algorithm_specs().unwrap().len(), 2);

        // A base algorithm combined with a positive deletion budget in
        // the sweep is a config error.
        let mut bad = cfg.clone();
        bad.sweep = Some(SweepSpec { axis: SweepAxis::R, values: vec![0.0, 1.0] });
        assert!(bad.algorithm_specs().is_err());

        // Duplicate entries (even spelt differently) are rejected.
        let mut dup = cfg.clone();
        dup.algorithms = vec!["disjoint".into(), "disjoint-greedy".into()];
        assert!(dup.algorithm_specs().is_err());

        // Unknown fields are rejected.
        assert!(serde_json::from_str::<ExperimentConfig>(
            r#"{"objective": {"kind": "set-cover"}, "algorithm": ["greedy"]}"#
        )
        .is_err());
    }
}
