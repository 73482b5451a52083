//! Subcommand implementations behind [`crate::run`].

use std::path::Path;

use serde::Serialize;

use minrf::cover::{run_alg0, CoverRequest};
use minrf::objectives::adversarial::probe_for_hidden_set;
use minrf::objectives::tight::tight_instance;
use minrf::oracle::ElementSet;
use minrf::robust::{run_robust, RobustMethod, RobustRequest};
use minrf::verify::{is_robust, worst_case_removal};
use minrf::RngSpec;

use crate::config::{AlgSpec, ExperimentConfig};
use crate::experiment::{emit_plot_data, render_csv, run_experiment, run_seed};
use crate::instances::{build_objective, instance_seed, ledger_for, BuiltObjective, LoadCache};
use crate::{CliError, Command};

pub fn dispatch(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Solve { config, algorithm, r, alpha, master_seed } => {
            solve(&config, algorithm, r, alpha, master_seed)
        }
        Command::Sweep { config, out, master_seed, repetitions, plot_dir } => {
            sweep(&config, out, master_seed, repetitions, plot_dir)
        }
        Command::Verify { config, solution, r, alpha } => verify(&config, &solution, r, alpha),
        Command::DemoAdversarial { nodes, removals, probes, seeds, seed_base } => {
            demo_adversarial(nodes, removals, probes, seeds, seed_base)
        }
        Command::GenTight { k, out } => gen_tight(k, out),
    }
}

/// Echo ingestion tallies for file-backed objectives to stderr.
fn report_load(cache: &LoadCache) {
    if let Some(stats) = cache.graph_stats() {
        eprintln!(
            "graph: {} nodes, {} undirected edges ({} self-loops dropped, {} duplicates collapsed)",
            stats.nodes, stats.undirected_edges, stats.self_loops_dropped, stats.duplicates_collapsed
        );
    }
    if let Some(stats) = cache.movie_stats() {
        eprintln!(
            "movielens: {} movies, vector dimension {}, {} movies with genome rows; \
             sampled {}/{} users ({} skipped for empty liked lists)",
            stats.movies,
            stats.dimension,
            stats.movies_with_genome,
            stats.users_sampled,
            stats.users_available,
            stats.users_skipped
        );
    }
}

#[derive(Serialize)]
struct SolveReport<'a> {
    algorithm: &'a str,
    r: usize,
    alpha: f64,
    master_seed: u64,
    run_seed: u64,
    instance: &'a str,
    feasible: bool,
    size: usize,
    solution: Vec<u32>,
    solution_labels: Vec<String>,
    queries_total: u64,
    queries_per_constraint: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
}

/// Name a constraint by ledger slot, for failure messages.
fn slot_name(built: &BuiltObjective, slot: usize) -> String {
    built
        .constraints
        .iter()
        .find(|c| c.slot() == slot)
        .map(|c| c.name().to_string())
        .unwrap_or_else(|| format!("slot {slot}"))
}

fn solve(
    config: &Path,
    algorithm: Option<String>,
    r: usize,
    alpha: Option<f64>,
    master_seed: Option<u64>,
) -> Result<i32, CliError> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(alpha) = alpha {
        cfg.alpha = alpha;
    }
    if let Some(seed) = master_seed {
        cfg.master_seed = seed;
    }
    cfg.validate_fields()?;
    let algorithm = algorithm
        .or_else(|| cfg.algorithms.first().cloned())
        .ok_or_else(|| CliError::input("no algorithm: pass --algorithm or list one in the config"))?;
    let spec = AlgSpec::parse(&algorithm, cfg.gamma)?;
    spec.check_budget(r)?;

    let mut cache = LoadCache::default();
    cache.preload(&cfg.objective, cfg.master_seed)?;
    report_load(&cache);
    let built = build_objective(
        &cfg.objective,
        cfg.samples,
        None,
        instance_seed(cfg.master_seed, 0),
        &cache,
    )?;
    eprintln!("instance: {}", built.summary);

    let seed = run_seed(cfg.master_seed, spec.label(), &r.to_string(), 0);
    let ledger = ledger_for(&built);
    let rng = RngSpec::new(seed);
    let (feasible, solution, failure) = match &spec {
        AlgSpec::Base(alg0) => {
            let req =
                CoverRequest::new(built.ground.clone(), built.constraints.clone(), cfg.alpha, rng);
            let res = run_alg0(*alg0, &req, &ledger)?;
            let failure = res
                .failed_constraint
                .map(|pos| format!("constraint {} cannot reach its target", built.constraints[pos].name()));
            (res.feasible, res.solution, failure)
        }
        AlgSpec::Robust(RobustMethod::Alg1, alg0) if r == 0 => {
            // The repair pass is vacuous without a deletion budget.
            let req =
                CoverRequest::new(built.ground.clone(), built.constraints.clone(), cfg.alpha, rng);
            let res = run_alg0(*alg0, &req, &ledger)?;
            let failure = res
                .failed_constraint
                .map(|pos| format!("constraint {} cannot reach its target", built.constraints[pos].name()));
            (res.feasible, res.solution, failure)
        }
        AlgSpec::Robust(method, alg0) => {
            let req = RobustRequest::new(
                built.ground.clone(),
                built.constraints.clone(),
                cfg.alpha,
                r,
                *alg0,
                rng,
            );
            let res = run_robust(*method, &req, &ledger)?;
            let failure = res.failure.as_ref().map(|f| {
                let ids: Vec<String> = f.removal.iter().map(|e| e.to_string()).collect();
                format!(
                    "round {}: constraint {} unsatisfiable under removal {{{}}}",
                    f.round,
                    slot_name(&built, f.constraint),
                    ids.join(",")
                )
            });
            (res.feasible, res.solution, failure)
        }
    };

    let report = SolveReport {
        algorithm: spec.label(),
        r,
        alpha: cfg.alpha,
        master_seed: cfg.master_seed,
        run_seed: seed,
        instance: &built.summary,
        feasible,
        size: solution.len(),
        solution: solution.iter().map(|e| e.0).collect(),
        solution_labels: solution.iter().map(|e| built.ground.label(*e).into_owned()).collect(),
        queries_total: ledger.total(),
        queries_per_constraint: ledger.snapshot(),
        failure,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if feasible { 0 } else { 3 })
}

fn sweep(
    config: &Path,
    out: Option<std::path::PathBuf>,
    master_seed: Option<u64>,
    repetitions: Option<usize>,
    plot_dir: Option<std::path::PathBuf>,
) -> Result<i32, CliError> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(seed) = master_seed {
        cfg.master_seed = seed;
    }
    if let Some(reps) = repetitions {
        cfg.repetitions = reps;
    }
    cfg.validate_fields()?;
    let mut cache = LoadCache::default();
    cache.preload(&cfg.objective, cfg.master_seed)?;
    report_load(&cache);

    let rows = run_experiment(&cfg, &cache)?;
    let csv = render_csv(&rows);
    match out.or_else(|| cfg.output.clone()) {
        Some(path) => {
            std::fs::write(&path, &csv)
                .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => print!("{csv}"),
    }
    if let Some(dir) = plot_dir {
        let files = emit_plot_data(&rows, &dir)?;
        eprintln!("wrote {} series files to {}", files.len(), dir.display());
    }
    Ok(0)
}

#[derive(Serialize)]
struct VerifyReport {
    robust: bool,
    r: usize,
    alpha: f64,
    solution_size: usize,
    /// Minimum normalised constraint value over all removals of size
    /// at most `r`.
    min_value: f64,
    witness_constraint: String,
    witness_removal: Vec<u32>,
}

/// Accepts a bare JSON id array or an object with a `solution` array —
/// the shape `solve` prints.
fn read_solution(path: &Path) -> Result<Vec<u32>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read solution {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("bad solution {}: {e}", path.display())))?;
    let array = match &value {
        serde_json::Value::Array(a) => a,
        serde_json::Value::Object(o) => o.get("solution").and_then(|v| v.as_array()).ok_or_else(
            || {
                CliError::input(format!(
                    "{}: expected a JSON id array or an object with a \"solution\" array",
                    path.display()
                ))
            },
        )?,
        _ => {
            return Err(CliError::input(format!(
                "{}: expected a JSON id array or an object with a \"solution\" array",
                path.display()
            )))
        }
    };
    array
        .iter()
        .map(|v| {
            v.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| {
                CliError::input(format!("{}: element id {v} is not a valid id", path.display()))
            })
        })
        .collect()
}

fn verify(config: &Path, solution: &Path, r: usize, alpha: Option<f64>) -> Result<i32, CliError> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(alpha) = alpha {
        cfg.alpha = alpha;
    }
    cfg.validate_fields()?;
    let mut cache = LoadCache::default();
    cache.preload(&cfg.objective, cfg.master_seed)?;
    report_load(&cache);
    let built = build_objective(
        &cfg.objective,
        cfg.samples,
        None,
        instance_seed(cfg.master_seed, 0),
        &cache,
    )?;
    eprintln!("instance: {}", built.summary);

    let ids = read_solution(solution)?;
    for &id in &ids {
        if id as usize >= built.ground.len() {
            return Err(CliError::input(format!(
                "solution id {id} is outside the ground set (size {})",
                built.ground.len()
            )));
        }
    }
    let set: ElementSet = minrf::oracle::element_set(ids);

    let robust = is_robust(&set, &built.constraints, r, cfg.alpha)?;
    let cert = worst_case_removal(&set, &built.constraints, r)?;
    let report = VerifyReport {
        robust,
        r,
        alpha: cfg.alpha,
        solution_size: set.len(),
        min_value: cert.value,
        witness_constraint: built.constraints[cert.constraint].name().to_string(),
        witness_removal: cert.removal.iter().map(|e| e.0).collect(),
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if robust { 0 } else { 3 })
}

/// `C(n, r)` as a float; exact for the scales the demo runs at.
fn binomial(n: usize, r: usize) -> f64 {
    let r = r.min(n.saturating_sub(r));
    let mut acc = 1.0;
    for i in 0..r {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[derive(Serialize)]
struct ProbeSummary {
    nodes: usize,
    removals: usize,
    probes_per_seed: usize,
    seeds: u64,
    detections: u64,
    frequency: f64,
    /// `probes / C(nodes, removals)` plus sampling slack.
    detection_bound: f64,
    within_bound: bool,
}

fn demo_adversarial(
    nodes: usize,
    removals: usize,
    probes: usize,
    seeds: u64,
    seed_base: u64,
) -> Result<i32, CliError> {
    if seeds == 0 {
        return Err(CliError::input("seeds must be at least 1"));
    }
    let mut detections = 0u64;
    for i in 0..seeds {
        if probe_for_hidden_set(nodes, removals, probes, seed_base + i)?.detected {
            detections += 1;
        }
    }
    let frequency = detections as f64 / seeds as f64;
    let detection_bound = probes as f64 / binomial(nodes, removals) + 0.005;
    let report = ProbeSummary {
        nodes,
        removals,
        probes_per_seed: probes,
        seeds,
        detections,
        frequency,
        detection_bound,
        within_bound: frequency <= detection_bound,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(0)
}

fn gen_tight(k: u32, out: Option<std::path::PathBuf>) -> Result<i32, CliError> {
    let inst = tight_instance(k)?;
    let json = serde_json::to_string_pretty(&inst)?;
    match out {
        Some(path) => {
            std::fs::write(&path, format!("{json}\n"))
                .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
            eprintln!(
                "wrote instance with {} sets over {} points to {}",
                inst.family.len(),
                inst.universe,
                path.display()
            );
        }
        None => println!("{json}"),
    }
    Ok(0)
}
