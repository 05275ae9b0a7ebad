//! Orchestrating runs: a validated run plan, seed handling for repeats,
//! output files, and the closing summary.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use hypabc::{
    grid_search, random_search, Colony, ColonyParams, GridSpec, KnnCv, MixedSphere, Objective,
    RunResult, SearchSpace, DEFAULT_GRID_CAP,
};

use crate::external::ExternalCommand;
use crate::logs::{write_log_csv, RecordJson, RunReport};
use crate::spacefile::load_space;
use crate::summary::{summarize, write_summary_csv, GroupKey, SummaryRow};

/// Search method to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// The bee-colony optimizer.
    Hypabc,
    /// Uniform random sampling.
    Random,
    /// Fixed-lattice sweep.
    Grid,
}

impl Method {
    /// Lowercase label used in filenames and reports.
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Hypabc => "hypabc",
            Method::Random => "random",
            Method::Grid => "grid",
        }
    }
}

/// Grid resolution, as given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSteps {
    /// One step for every numeric dimension.
    Uniform(f64),
    /// Per-dimension named steps.
    Named(Vec<(String, f64)>),
}

/// Parse `--grid-steps`: either a single number or a comma-separated
/// `name=step` list.
pub fn parse_grid_steps(spec: &str) -> Result<GridSteps> {
    if let Ok(step) = spec.trim().parse::<f64>() {
        return Ok(GridSteps::Uniform(step));
    }
    let mut named = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let Some((name, step)) = part.split_once('=') else {
            bail!("bad grid step `{part}`; expected a number or name=step pairs");
        };
        let step: f64 = step
            .trim()
            .parse()
            .with_context(|| format!("bad step value in `{part}`"))?;
        named.push((name.trim().to_string(), step));
    }
    if named.is_empty() {
        bail!("empty grid steps");
    }
    Ok(GridSteps::Named(named))
}

/// A validated plan for one invocation: which method, over which space and
/// objective, how many runs, and where the artifacts go.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Search method.
    pub method: Method,
    /// Space name or path.
    pub space: String,
    /// Objective name: `mixed_sphere`, `knn_cv`, or `external`.
    pub objective: String,
    /// Command template for the `external` objective.
    pub external_cmd: Option<String>,
    /// Kill external commands after this many seconds.
    pub timeout_s: Option<f64>,
    /// Evaluation budget per run.
    pub budget: usize,
    /// Population sizes to sweep (the optimizer runs once per size).
    pub np: Vec<usize>,
    /// Trial limit override.
    pub trial_limit: Option<usize>,
    /// Stop early at this objective value.
    pub target: Option<f64>,
    /// Base seed; repeat `r` uses `seed + r`.
    pub seed: u64,
    /// Number of seeded repeats.
    pub repeats: usize,
    /// Employed-phase dispatch width.
    pub parallel_width: usize,
    /// Grid resolution (grid method only).
    pub grid_steps: Option<GridSteps>,
    /// Directory for logs, reports, and the summary.
    pub out_dir: PathBuf,
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.repeats < 1 {
            bail!("repeats must be at least 1");
        }
        if self.budget < 1 {
            bail!("budget must be at least 1");
        }
        match self.method {
            Method::Hypabc => {
                if self.np.is_empty() {
                    bail!("hypabc needs at least one population size");
                }
                for &np in &self.np {
                    if self.budget < np {
                        bail!("budget {} cannot initialize {} sources", self.budget, np);
                    }
                }
            }
            Method::Grid => {
                if self.grid_steps.is_none() {
                    bail!("grid search needs --grid-steps");
                }
            }
            Method::Random => {}
        }
        if self.objective == "external" && self.external_cmd.is_none() {
            bail!("the external objective needs --external-cmd");
        }
        Ok(())
    }
}

fn build_objective(config: &RunConfig, space: &SearchSpace) -> Result<Box<dyn Objective>> {
    Ok(match config.objective.as_str() {
        "mixed_sphere" => Box::new(MixedSphere::centered(space)),
        "knn_cv" => Box::new(KnnCv::bundled()),
        "external" => {
            let template =
                config.external_cmd.clone().expect("validated: external command present");
            let timeout = config.timeout_s.map(Duration::from_secs_f64);
            Box::new(ExternalCommand::new(template, timeout))
        }
        other => bail!("unknown objective `{other}` (known: mixed_sphere, knn_cv, external)"),
    })
}

/// Execute the plan: every (population, repeat) pair for the optimizer, or
/// `repeats` seeded runs for random search, or one deterministic sweep for
/// grid search. Writes one CSV log and one JSON report per run plus
/// `summary.csv`, and returns the reports with the rendered summary rows.
pub fn execute(config: &RunConfig) -> Result<(Vec<RunReport>, Vec<SummaryRow>)> {
    config.validate()?;
    let space = load_space(&config.space)?;
    let objective = build_objective(config, &space)?;
    std::fs::create_dir_all(&config.out_dir)
        .with_context(|| format!("cannot create {}", config.out_dir.display()))?;

    let mut reports = Vec::new();
    match config.method {
        Method::Hypabc => {
            for &np in &config.np {
                for r in 0..config.repeats {
                    let seed = config.seed + r as u64;
                    let mut params = ColonyParams::new(config.budget)
                        .with_population(np)
                        .with_seed(seed)
                        .with_parallel_width(config.parallel_width);
                    if let Some(limit) = config.trial_limit {
                        params = params.with_trial_limit(limit);
                    }
                    if let Some(target) = config.target {
                        params = params.with_target(target);
                    }
                    let started = Instant::now();
                    let result = Colony::new(&space, objective.as_ref(), params)
                        .map_err(|e| anyhow::anyhow!("{e}"))?
                        .run()
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                    let wall = started.elapsed().as_secs_f64();
                    let stem = format!("hypabc_np{np}_seed{seed}");
                    reports.push(persist(config, result, Some(np), seed, wall, &stem)?);
                }
            }
        }
        Method::Random => {
            for r in 0..config.repeats {
                let seed = config.seed + r as u64;
                let started = Instant::now();
                let result = random_search(&space, objective.as_ref(), config.budget, seed)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                let wall = started.elapsed().as_secs_f64();
                let stem = format!("random_seed{seed}");
                reports.push(persist(config, result, None, seed, wall, &stem)?);
            }
        }
        Method::Grid => {
            if config.repeats > 1 {
                eprintln!("note: grid search is deterministic; running once");
            }
            let grid = match config.grid_steps.as_ref().expect("validated: steps present") {
                GridSteps::Uniform(step) => GridSpec::uniform(&space, *step),
                GridSteps::Named(steps) => GridSpec::from_steps(&space, steps),
            }
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            let started = Instant::now();
            let result = grid_search(&space, objective.as_ref(), &grid, DEFAULT_GRID_CAP)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let wall = started.elapsed().as_secs_f64();
            reports.push(persist(config, result, None, config.seed, wall, "grid")?);
        }
    }

    let rows = summarize(&reports, &[GroupKey::Method, GroupKey::Np]);
    write_summary_csv(&config.out_dir.join("summary.csv"), &rows)?;
    Ok((reports, rows))
}

/// Write one run's log CSV and JSON report.
fn persist(
    config: &RunConfig,
    result: RunResult,
    np: Option<usize>,
    seed: u64,
    wall_time_s: f64,
    stem: &str,
) -> Result<RunReport> {
    let csv_name = format!("{stem}.csv");
    write_log_csv(&config.out_dir.join(&csv_name), &result.records)?;
    let report = RunReport {
        method: config.method.as_str().to_string(),
        space: config.space.clone(),
        objective: config.objective.clone(),
        seed,
        np,
        budget: config.budget,
        best_config: result.best_assignment.clone(),
        best_objective: result.best_objective,
        best_accuracy: 1.0 - result.best_objective,
        evaluations: result.evaluations,
        cycles: result.cycles,
        cache_hits: result.cache_hits,
        cache_misses: result.cache_misses,
        stop: result.stop.to_string(),
        wall_time_s,
        log_csv: csv_name,
        records: result.records.iter().map(RecordJson::from).collect(),
    };
    report.write(&config.out_dir.join(format!("{stem}.json")))?;
    Ok(report)
}

/// Load reports given as files or directories (directories contribute every
/// `*.json` file except summaries).
pub fn load_reports(paths: &[PathBuf]) -> Result<Vec<RunReport>> {
    let mut reports = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
                .with_context(|| format!("cannot read {}", path.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
                .collect();
            entries.sort();
            for entry in entries {
                reports.push(RunReport::read(&entry)?);
            }
        } else {
            reports.push(RunReport::read(path)?);
        }
    }
    if reports.is_empty() {
        bail!("no run reports found");
    }
    Ok(reports)
}
