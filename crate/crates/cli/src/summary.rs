//! Aggregating run reports into comparison tables.

use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::logs::RunReport;

/// Keys a summary can group runs by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKey {
    /// Search method.
    Method,
    /// Population size.
    Np,
}

/// Parse a comma-separated group-key list; the empty string means one
/// global row.
pub fn parse_group_keys(spec: &str) -> Result<Vec<GroupKey>> {
    let mut keys = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part {
            "method" => keys.push(GroupKey::Method),
            "np" => keys.push(GroupKey::Np),
            other => bail!("unknown group key `{other}` (known: method, np)"),
        }
    }
    Ok(keys)
}

/// One aggregated line of the summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    /// Method, or `-` when not grouped by method.
    pub method: String,
    /// Population size, or `-` for baselines and ungrouped rows.
    pub np: String,
    /// Number of runs aggregated.
    pub runs: usize,
    /// Median best objective.
    pub median_best: f64,
    /// Mean best objective.
    pub mean_best: f64,
    /// Minimum best objective.
    pub min_best: f64,
    /// Median accuracy-style complement, `1 - median_best`.
    pub median_accuracy: f64,
    /// Mean real objective calls per run.
    pub mean_evaluations: f64,
    /// Mean wall time per run, seconds.
    pub mean_wall_time_s: f64,
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 { sorted[n / 2] } else { (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0 }
}

/// Group reports and aggregate each group, sorted by (method, np).
pub fn summarize(reports: &[RunReport], keys: &[GroupKey]) -> Vec<SummaryRow> {
    let group_of = |r: &RunReport| -> (String, String) {
        let method = if keys.contains(&GroupKey::Method) { r.method.clone() } else { "-".into() };
        let np = if keys.contains(&GroupKey::Np) {
            r.np.map_or_else(|| "-".into(), |np| np.to_string())
        } else {
            "-".into()
        };
        (method, np)
    };

    let mut groups: Vec<((String, String), Vec<&RunReport>)> = Vec::new();
    for report in reports {
        let key = group_of(report);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(report),
            None => groups.push((key, vec![report])),
        }
    }
    groups.sort_by(|((ma, na), _), ((mb, nb), _)| {
        let np_a = na.parse::<usize>().ok();
        let np_b = nb.parse::<usize>().ok();
        ma.cmp(mb).then(np_a.cmp(&np_b)).then(na.cmp(nb))
    });

    groups
        .into_iter()
        .map(|((method, np), members)| {
            let mut bests: Vec<f64> = members.iter().map(|r| r.best_objective).collect();
            bests.sort_by(|a, b| a.partial_cmp(b).expect("objectives are finite"));
            let runs = members.len();
            let median_best = median(&bests);
            SummaryRow {
                method,
                np,
                runs,
                median_best,
                mean_best: bests.iter().sum::<f64>() / runs as f64,
                min_best: bests[0],
                median_accuracy: 1.0 - median_best,
                mean_evaluations: members.iter().map(|r| r.evaluations as f64).sum::<f64>()
                    / runs as f64,
                mean_wall_time_s: members.iter().map(|r| r.wall_time_s).sum::<f64>()
                    / runs as f64,
            }
        })
        .collect()
}

const CSV_HEADER: [&str; 9] = [
    "method",
    "np",
    "runs",
    "median_best",
    "mean_best",
    "min_best",
    "median_accuracy",
    "mean_evaluations",
    "mean_wall_time_s",
];

/// Write the summary as CSV.
pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record([
            row.method.clone(),
            row.np.clone(),
            row.runs.to_string(),
            row.median_best.to_string(),
            row.mean_best.to_string(),
            row.min_best.to_string(),
            row.median_accuracy.to_string(),
            format!("{:.1}", row.mean_evaluations),
            format!("{:.3}", row.mean_wall_time_s),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Render the summary as an aligned text table.
pub fn render_text(rows: &[SummaryRow]) -> String {
    let mut table: Vec<[String; 9]> =
        vec![CSV_HEADER.map(String::from)];
    for row in rows {
        table.push([
            row.method.clone(),
            row.np.clone(),
            row.runs.to_string(),
            format!("{:.6}", row.median_best),
            format!("{:.6}", row.mean_best),
            format!("{:.6}", row.min_best),
            format!("{:.6}", row.median_accuracy),
            format!("{:.1}", row.mean_evaluations),
            format!("{:.3}", row.mean_wall_time_s),
        ]);
    }
    let widths: Vec<usize> = (0..9)
        .map(|c| table.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &table {
        let line: Vec<String> =
            row.iter().zip(&widths).map(|(cell, w)| format!("{cell:>w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
