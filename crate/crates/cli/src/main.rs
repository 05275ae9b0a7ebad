use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use hypabc_cli::driver::{execute, load_reports, parse_grid_steps, Method, RunConfig};
use hypabc_cli::summary::{parse_group_keys, render_text, summarize, write_summary_csv};

#[derive(Parser)]
#[command(name = "hypabc", about = "Hyper-parameter search runner", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Hypabc,
    Random,
    Grid,
}

impl From<MethodArg> for Method {
    fn from(arg: MethodArg) -> Self {
        match arg {
            MethodArg::Hypabc => Method::Hypabc,
            MethodArg::Random => Method::Random,
            MethodArg::Grid => Method::Grid,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more searches and write logs, reports, and a summary.
    Run {
        /// Search method.
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Bundled space name (rf, xgboost, svm, knn) or a JSON file path.
        #[arg(long)]
        space: String,
        /// Objective: mixed_sphere, knn_cv, or external.
        #[arg(long, default_value = "mixed_sphere")]
        objective: String,
        /// Evaluation budget per run.
        #[arg(long)]
        budget: usize,
        /// Comma-separated population sizes (optimizer only).
        #[arg(long, default_value = "50")]
        np: String,
        /// Abandon a source after this many failed improvements.
        #[arg(long)]
        trial_limit: Option<usize>,
        /// Stop early once the objective reaches this value.
        #[arg(long)]
        target: Option<f64>,
        /// Base seed; repeat r uses seed + r.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Seeded repeats per configuration.
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        /// Evaluations dispatched concurrently in the employed phase.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Output directory.
        #[arg(long, default_value = "runs")]
        out_dir: PathBuf,
        /// Grid resolution: a single step or name=step pairs.
        #[arg(long)]
        grid_steps: Option<String>,
        /// Command template for the external objective; {config} expands
        /// to a JSON file path.
        #[arg(long)]
        external_cmd: Option<String>,
        /// Kill external commands after this many seconds.
        #[arg(long)]
        timeout_s: Option<f64>,
    },
    /// Summarize previously written run reports.
    Summarize {
        /// Report files or directories containing them.
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        /// Comma-separated grouping keys (method, np); empty groups all
        /// runs together.
        #[arg(long, default_value = "method,np")]
        group_by: String,
        /// Also write the summary CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_np_list(spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| anyhow::anyhow!("bad population size `{p}`"))
        })
        .collect()
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            method,
            space,
            objective,
            budget,
            np,
            trial_limit,
            target,
            seed,
            repeats,
            parallel,
            out_dir,
            grid_steps,
            external_cmd,
            timeout_s,
        } => {
            let config = RunConfig {
                method: method.into(),
                space,
                objective,
                external_cmd,
                timeout_s,
                budget,
                np: parse_np_list(&np)?,
                trial_limit,
                target,
                seed,
                repeats,
                parallel_width: parallel,
                grid_steps: grid_steps.as_deref().map(parse_grid_steps).transpose()?,
                out_dir,
            };
            let (reports, rows) = execute(&config)?;
            println!("{}", render_text(&rows));
            println!(
                "{} run(s) written to {}",
                reports.len(),
                config.out_dir.display()
            );
        }
        Command::Summarize { reports, group_by, out } => {
            let keys = parse_group_keys(&group_by)?;
            let reports = load_reports(&reports)?;
            let rows = summarize(&reports, &keys);
            println!("{}", render_text(&rows));
            if let Some(path) = out {
                write_summary_csv(&path, &rows)?;
            }
        }
    }
    Ok(())
}
