//! Run artifacts: the per-evaluation CSV log and the machine-readable
//! per-run report.
//!
//! The CSV is the replayable trace: one row per evaluation request, columns
//! `eval_index, cycle, phase, objective, best_so_far, cache_hit, elapsed_ms,
//! config_json`. Every field is written deterministically (floats in
//! shortest round-trip form, elapsed as whole milliseconds), so two runs of
//! the same seeded configuration produce byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use hypabc::{Assignment, EvalRecord, Phase};
use serde::{Deserialize, Serialize};

/// Column order of the evaluation log.
pub const LOG_COLUMNS: [&str; 8] = [
    "eval_index",
    "cycle",
    "phase",
    "objective",
    "best_so_far",
    "cache_hit",
    "elapsed_ms",
    "config_json",
];

/// Write the evaluation log for one run.
pub fn write_log_csv(path: &Path, records: &[EvalRecord]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut writer = csv::Writer::from_writer(BufWriter::new(file));
    writer.write_record(LOG_COLUMNS)?;
    for r in records {
        let config_json = serde_json::to_string(&r.assignment)?;
        writer.write_record([
            r.eval_index.to_string(),
            r.cycle.to_string(),
            r.phase.as_str().to_string(),
            r.objective.to_string(),
            r.best_so_far.to_string(),
            r.cache_hit.to_string(),
            r.elapsed.as_millis().to_string(),
            config_json,
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// One logged evaluation, as stored in the report document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordJson {
    /// Position in the request sequence.
    pub eval_index: u64,
    /// Cycle the request happened in (0 for initialization and baselines).
    pub cycle: u32,
    /// Which phase asked.
    pub phase: Phase,
    /// Objective value.
    pub objective: f64,
    /// Best value up to and including this request.
    pub best_so_far: f64,
    /// Whether the cache answered.
    pub cache_hit: bool,
    /// Objective call duration, whole milliseconds (0 for hits).
    pub elapsed_ms: u64,
    /// The evaluated configuration.
    pub config: Assignment,
}

impl From<&EvalRecord> for RecordJson {
    fn from(r: &EvalRecord) -> Self {
        Self {
            eval_index: r.eval_index,
            cycle: r.cycle,
            phase: r.phase,
            objective: r.objective,
            best_so_far: r.best_so_far,
            cache_hit: r.cache_hit,
            elapsed_ms: r.elapsed.as_millis() as u64,
            config: r.assignment.clone(),
        }
    }
}

/// Everything one run produced, serialized alongside its CSV log.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    /// Search method: `hypabc`, `random`, or `grid`.
    pub method: String,
    /// Space name or path as given on the command line.
    pub space: String,
    /// Objective description.
    pub objective: String,
    /// Seed this run used.
    pub seed: u64,
    /// Population size (absent for baselines).
    pub np: Option<usize>,
    /// Evaluation budget (draw budget for random search, grid size for
    /// grid search).
    pub budget: usize,
    /// Best configuration found.
    pub best_config: Assignment,
    /// Best (minimized) objective value.
    pub best_objective: f64,
    /// Accuracy-style complement, `1 - best_objective`.
    pub best_accuracy: f64,
    /// Real objective calls consumed.
    pub evaluations: usize,
    /// Optimizer cycles completed (0 for baselines).
    pub cycles: u32,
    /// Evaluation requests answered from the cache.
    pub cache_hits: u64,
    /// Evaluation requests that called the objective.
    pub cache_misses: u64,
    /// Why the run ended.
    pub stop: String,
    /// Wall-clock duration of the run, seconds.
    pub wall_time_s: f64,
    /// Path of the CSV log, relative to the report.
    pub log_csv: String,
    /// The full evaluation trace.
    pub records: Vec<RecordJson>,
}

impl RunReport {
    /// Write the report as pretty-printed JSON.
    pub fn write(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        let mut file =
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        file.write_all(json.as_bytes())?;
        file.write_all(b"\n")?;
        Ok(())
    }

    /// Read a report back.
    pub fn read(path: &Path) -> Result<Self> {
        let json = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        serde_json::from_str(&json).with_context(|| format!("malformed report {}", path.display()))
    }
}
