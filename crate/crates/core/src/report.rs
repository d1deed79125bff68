//! Experiment report plumbing: stable CSV rows, JSON report, config echo.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::stats::ScalingFit;

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "experiment,n,epsilon,k_hits,trials,p_hat,ci_low,ci_high,method";

/// One probability row. `experiment` carries the subseries name
/// (e.g. "two_point_real/sep1.0/joint") so the CSV schema stays flat.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub experiment: String,
    pub n: usize,
    pub epsilon: f64,
    pub k_hits: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub method: String,
}

impl Row {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{:.12e},{},{},{:.12e},{:.12e},{:.12e},{}",
            self.experiment,
            self.n,
            self.epsilon,
            self.k_hits,
            self.trials,
            self.p_hat,
            self.ci_low,
            self.ci_high,
            self.method
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedFit {
    pub name: String,
    #[serde(flatten)]
    pub fit: ScalingFit,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub version: String,
    pub experiment: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub workers: usize,
    pub runtime_secs: f64,
    pub rows: Vec<Row>,
    pub fits: Vec<NamedFit>,
    /// Per-experiment summaries (orderings, quantiles, certificates, ...).
    pub extras: serde_json::Value,
}

/// FNV-1a over the canonical config bytes; stable across runs.
pub fn config_hash(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// Write rows.csv, report.json and config-echo.json into `dir`.
pub fn write_report(
    dir: &Path,
    report: &ExperimentReport,
    config_echo: &serde_json::Value,
) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut csv = std::fs::File::create(dir.join("rows.csv"))?;
    writeln!(csv, "{CSV_HEADER}")?;
    for row in &report.rows {
        writeln!(csv, "{}", row.csv_line())?;
    }
    let mut rj = std::fs::File::create(dir.join("report.json"))?;
    serde_json::to_writer_pretty(&mut rj, report)?;
    writeln!(rj)?;
    let mut ce = std::fs::File::create(dir.join("config-echo.json"))?;
    serde_json::to_writer_pretty(&mut ce, config_echo)?;
    writeln!(ce)?;
    Ok(())
}

/// Rows as one CSV string (header included); what reproducibility compares.
pub fn rows_to_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

/// A bare-bones gnuplot script for the probability rows; figures stay
/// downstream of the artifact.
pub fn gnuplot_script(csv_path: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set logscale xy\n\
         set xlabel 'epsilon'\n\
         set ylabel 'probability'\n\
         plot '{csv_path}' every ::1 using 3:6 with linespoints title 'p_hat'\n"
    )
}
