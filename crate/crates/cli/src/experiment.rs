//! Sweep orchestration: (sweep point × algorithm × repetition) runs,
//! aggregation into CSV rows, and per-algorithm series files.
//!
//! Runs are independent — each owns its ledger and derives its seed
//! from `(master, algorithm, sweep label, repetition)` — so they
//! execute on a small worker pool and are then reduced in task order,
//! making every output byte (except wall times) a pure function of the
//! config and master seed.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use minrf::cover::{run_alg0, CoverRequest};
use minrf::robust::{run_robust, RobustMethod, RobustRequest};
use minrf::rng::fnv1a64;
use minrf::RngSpec;

use crate::config::{AlgSpec, ExperimentConfig, SweepPoint};
use crate::instances::{build_objective, instance_seed, ledger_for, LoadCache};
use crate::CliError;

/// Everything recorded about one run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub feasible: bool,
    /// Solution size; 0 when infeasible.
    pub size: usize,
    /// Oracle queries consumed, per constraint slot.
    pub queries: Vec<u64>,
    pub millis: f64,
    /// The run's derived seed.
    pub seed: u64,
}

impl RunOutcome {
    pub fn total_queries(&self) -> u64 {
        self.queries.iter().sum()
    }
}

/// One CSV row: one algorithm aggregated over the repetitions of one
/// sweep point.
#[derive(Clone, Debug)]
pub struct ResultRow {
    pub sweep_label: String,
    pub sweep_value: f64,
    pub algorithm: &'static str,
    /// Mean solution size over the feasible runs (0 when none were).
    pub mean_size: f64,
    /// Mean total oracle queries over all runs.
    pub mean_queries: f64,
    pub feasible_rate: f64,
    pub mean_ms: f64,
    pub reps: usize,
    /// Seed of repetition 0, anchoring the whole derived family.
    pub seed0: u64,
    /// The per-run records behind the aggregates.
    pub outcomes: Vec<RunOutcome>,
}

/// Seed for one run; stable under reordering of the sweep grid.
pub fn run_seed(master: u64, algorithm: &str, sweep_label: &str, rep: usize) -> u64 {
    fnv1a64(format!("{master}|{algorithm}|{sweep_label}|{rep}").as_bytes())
}

/// Executes one (algorithm, sweep point, repetition) cell.
///
/// Budget 0 runs the base routine directly, including for the
/// single-pass repair wrapper (whose repair phase is vacuous at r = 0);
/// positive budgets go through the robust methods. Infeasibility is an
/// outcome, not an error.
fn run_one(
    spec: &AlgSpec,
    point: &SweepPoint,
    rep: usize,
    cfg: &ExperimentConfig,
    cache: &LoadCache,
) -> Result<RunOutcome, CliError> {
    let built = build_objective(
        &cfg.objective,
        cfg.samples,
        point.frac,
        instance_seed(cfg.master_seed, rep),
        cache,
    )?;
    let seed = run_seed(cfg.master_seed, spec.label(), &point.label, rep);
    let ledger = ledger_for(&built);
    let rng = RngSpec::new(seed);
    let clock = Instant::now();
    let (feasible, size, queries) = match spec {
        AlgSpec::Base(alg0) => {
            let req = CoverRequest::new(built.ground, built.constraints, cfg.alpha, rng);
            let res = run_alg0(*alg0, &req, &ledger)?;
            (res.feasible, res.solution.len(), res.queries)
        }
        AlgSpec::Robust(RobustMethod::Alg1, alg0) if point.r == 0 => {
            let req = CoverRequest::new(built.ground, built.constraints, cfg.alpha, rng);
            let res = run_alg0(*alg0, &req, &ledger)?;
            (res.feasible, res.solution.len(), res.queries)
        }
        AlgSpec::Robust(method, alg0) => {
            let req = RobustRequest::new(
                built.ground,
                built.constraints,
                cfg.alpha,
                point.r,
                *alg0,
                rng,
            );
            let res = run_robust(*method, &req, &ledger)?;
            (res.feasible, res.solution.len(), res.queries)
        }
    };
    Ok(RunOutcome {
        feasible,
        size,
        queries,
        millis: clock.elapsed().as_secs_f64() * 1e3,
        seed,
    })
}

fn aggregate(
    point: &SweepPoint,
    label: &'static str,
    outcomes: Vec<RunOutcome>,
) -> ResultRow {
    let reps = outcomes.len();
    let feasible: Vec<&RunOutcome> = outcomes.iter().filter(|o| o.feasible).collect();
    let mean_size = if feasible.is_empty() {
        0.0
    } else {
        feasible.iter().map(|o| o.size as f64).sum::<f64>() / feasible.len() as f64
    };
    let mean_queries =
        outcomes.iter().map(|o| o.total_queries() as f64).sum::<f64>() / reps as f64;
    let mean_ms = outcomes.iter().map(|o| o.millis).sum::<f64>() / reps as f64;
    ResultRow {
        sweep_label: point.label.clone(),
        sweep_value: point.value,
        algorithm: label,
        mean_size,
        mean_queries,
        feasible_rate: feasible.len() as f64 / reps as f64,
        mean_ms,
        reps,
        seed0: outcomes[0].seed,
        outcomes,
    }
}

/// Runs the full grid and aggregates, sweep-point-major.
///
/// A worker pool claims (point × algorithm × repetition) cells from a
/// shared counter; results land in per-cell slots and are reduced in
/// grid order afterwards, so scheduling never affects the output.
pub fn run_experiment(cfg: &ExperimentConfig, cache: &LoadCache) -> Result<Vec<ResultRow>, CliError> {
    let specs = cfg.algorithm_specs()?;
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::input("config has no sweep section"))?;
    let points = sweep.points()?;
    let reps = cfg.repetitions;

    let tasks: Vec<(usize, usize, usize)> = (0..points.len())
        .flat_map(|p| (0..specs.len()).flat_map(move |a| (0..reps).map(move |r| (p, a, r))))
        .collect();
    let slots: Vec<Mutex<Option<Result<RunOutcome, CliError>>>> =
        tasks.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(tasks.len())
        .max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(p, a, r)) = tasks.get(i) else { break };
                let outcome = run_one(&specs[a], &points[p], r, cfg, cache);
                *slots[i].lock().unwrap() = Some(outcome);
            });
        }
    });

    let mut cells: Vec<RunOutcome> = Vec::with_capacity(tasks.len());
    for slot in slots {
        cells.push(slot.into_inner().unwrap().expect("worker filled every slot")?);
    }
    let mut rows = Vec::with_capacity(points.len() * specs.len());
    let mut it = cells.into_iter();
    for point in &points {
        for spec in &specs {
            let outcomes: Vec<RunOutcome> = it.by_ref().take(reps).collect();
            rows.push(aggregate(point, spec.label(), outcomes));
        }
    }
    Ok(rows)
}

/// Renders rows as CSV. Fixed decimal formats keep reruns of the same
/// config byte-identical in every column except `mean_ms`.
pub fn render_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from("sweep,algorithm,mean_size,mean_queries,feasible_rate,mean_ms,reps,seed0\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{:.4},{:.4},{:.4},{:.3},{},{}\n",
            row.sweep_label,
            row.algorithm,
            row.mean_size,
            row.mean_queries,
            row.feasible_rate,
            row.mean_ms,
            row.reps,
            row.seed0
        ));
    }
    out
}

/// Writes one series file per algorithm (`<dir>/<algorithm>.csv`, rows
/// in sweep order) for plotting tools. Returns the paths written.
pub fn emit_plot_data(rows: &[ResultRow], dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if rows.is_empty() {
        return Err(CliError::input("no result rows to plot"));
    }
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
    let mut order: Vec<&'static str> = Vec::new();
    for row in rows {
        if !order.contains(&row.algorithm) {
            order.push(row.algorithm);
        }
    }
    let mut written = Vec::with_capacity(order.len());
    for algorithm in order {
        let series: Vec<&ResultRow> = rows.iter().filter(|r| r.algorithm == algorithm).collect();
        if !series.windows(2).all(|w| w[0].sweep_value < w[1].sweep_value) {
            return Err(CliError::input(format!(
                "series for {algorithm} is not strictly increasing in the sweep value"
            )));
        }
        let mut text = String::from("sweep,mean_size,mean_queries\n");
        for row in series {
            text.push_str(&format!(
                "{},{:.4},{:.4}\n",
                row.sweep_label, row.mean_size, row.mean_queries
            ));
        }
        let path = dir.join(format!("{algorithm}.csv"));
        std::fs::write(&path, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ObjectiveSpec, SweepAxis, SweepSpec};

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            objective: ObjectiveSpec::Random { n: 14, m: 3, density: 0.5 },
            algorithms: vec!["algr-greedy".into(), "disjoint-greedy".into()],
            alpha: 0.0,
            gamma: 0.2,
            samples: 100,
            sweep: Some(SweepSpec { axis: SweepAxis::R, values: vec![0.0, 1.0] }),
            repetitions: 3,
            master_seed: 11,
            output: None,
        }
    }

    #[test]
    fn grid_shape_and_aggregates() {
        let cfg = small_config();
        let cache = LoadCache::default();
        let rows = run_experiment(&cfg, &cache).unwrap();
        // 2 sweep points × 2 algorithms, point-major.
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].sweep_label, "0");
        assert_eq!(rows[0].algorithm, "algr-greedy");
        assert_eq!(rows[1].algorithm, "disjoint-greedy");
        assert_eq!(rows[2].sweep_label, "1");
        for row in &rows {
            assert_eq!(row.reps, 3);
            assert_eq!(row.outcomes.len(), 3);
            assert_eq!(row.seed0, row.outcomes[0].seed);
            // Ledger conservation: the CSV mean equals the mean of the
            // per-run per-slot totals.
            let recomputed = row
                .outcomes
                .iter()
                .map(|o| o.queries.iter().sum::<u64>() as f64)
                .sum::<f64>()
                / row.outcomes.len() as f64;
            assert_eq!(row.mean_queries, recomputed);
            if row.feasible_rate > 0.0 {
                assert!(row.mean_size >= 1.0);
            }
        }
    }

    #[test]
    fn reruns_are_identical_except_wall_time() {
        let cfg = small_config();
        let cache = LoadCache::default();
        let key = |rows: &[ResultRow]| -> Vec<(String, String, String)> {
            rows.iter()
                .map(|r| {
                    (
                        r.sweep_label.clone(),
                        r.algorithm.to_string(),
                        format!(
                            "{:.4}|{:.4}|{:.4}|{}|{}",
                            r.mean_size, r.mean_queries, r.feasible_rate, r.reps, r.seed0
                        ),
                    )
                })
                .collect()
        };
        let a = run_experiment(&cfg, &cache).unwrap();
        let b = run_experiment(&cfg, &cache).unwrap();
        assert_eq!(key(&a), key(&b));

        let mut other = cfg;
        other.master_seed = 12;
        let c = run_experiment(&other, &cache).unwrap();
        assert_ne!(key(&a), key(&c));
    }

    #[test]
    fn csv_has_the_exact_header_and_shape() {
        let cfg = small_config();
        let cache = LoadCache::default();
        let rows = run_experiment(&cfg, &cache).unwrap();
        let text = render_csv(&rows);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "sweep,algorithm,mean_size,mean_queries,feasible_rate,mean_ms,reps,seed0"
        );
        assert_eq!(lines.count(), 4);
        for line in text.lines().skip(1) {
            assert_eq!(line.split(',').count(), 8);
        }
    }

    #[test]
    fn series_files_per_algorithm() {
        let cfg = small_config();
        let cache = LoadCache::default();
        let rows = run_experiment(&cfg, &cache).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let written = emit_plot_data(&rows, dir.path()).unwrap();
        assert_eq!(written.len(), 2);
        let text = std::fs::read_to_string(dir.path().join("algr-greedy.csv")).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "sweep,mean_size,mean_queries");
        assert_eq!(lines.len(), 3); // header + 2 sweep points
        assert!(lines[1].starts_with("0,"));
        assert!(lines[2].starts_with("1,"));

        assert!(emit_plot_data(&[], dir.path()).is_err());
    }

    #[test]
    fn infeasible_runs_are_recorded_not_fatal() {
        // On the double-cover instance every point lies in exactly two
        // sets, so r = 1 is coverable (all four sets) but r = 2 is not.
        let cfg = ExperimentConfig {
            objective: ObjectiveSpec::SetCover,
            algorithms: vec!["algr-greedy".into(), "disjoint-greedy".into()],
            alpha: 0.0,
            gamma: 0.2,
            samples: 100,
            sweep: Some(SweepSpec { axis: SweepAxis::R, values: vec![1.0, 2.0] }),
            repetitions: 2,
            master_seed: 0,
            output: None,
        };
        let cache = LoadCache::default();
        let rows = run_experiment(&cfg, &cache).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows[0..2] {
            assert_eq!(row.sweep_label, "1");
            assert_eq!(row.feasible_rate, 1.0);
            assert_eq!(row.mean_size, 4.0);
        }
        for row in &rows[2..4] {
            assert_eq!(row.sweep_label, "2");
            assert_eq!(row.feasible_rate, 0.0);
            assert_eq!(row.mean_size, 0.0);
            // Failed runs still paid for their queries.
            assert!(row.mean_queries > 0.0);
        }
    }
}
