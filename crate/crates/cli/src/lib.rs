//! Library side of the `goldfish` command: configuration, simulation,
//! solver comparison and verification reports.

pub mod compare;
pub mod config;
pub mod simulate;

use std::io::Write;
use std::path::{Path, PathBuf};

use goldfish_core::verify::{self, Selector};
use serde::Serialize;

pub use compare::{compare, Comparison};
pub use config::{RunConfig, SystemKind};
pub use simulate::{simulate, SimulationOutput, SimulationReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("solver error: {0}")]
    Solver(#[from] goldfish_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn invalid_data(e: goldfish_core::Error) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) | CliError::Io { .. } => 3,
        }
    }
}

/// Formats one CSV field with 17 significant digits.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_string(header: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|v| format_number(*v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `<out>.<suffix>` next to the main output.
pub fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Writes the CSV and `<out>.diag.json`. Returns exit code 3 when the run
/// was truncated by a solver error.
pub fn run_simulate(config: &Path, out: &Path) -> Result<i32, CliError> {
    let cfg = RunConfig::load(config)?;
    let result = simulate(&cfg)?;
    write_file(out, &csv_string(&result.header, &result.rows))?;
    write_file(&sidecar_path(out, "diag.json"), &json(&result.report))?;
    Ok(if result.report.truncated { 3 } else { 0 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seconds: f64,
}

/// JSON cannot hold infinities; failed computations are reported as `null`.
fn report_json(entries: &[ReportEntry]) -> String {
    let values: Vec<serde_json::Value> = entries
        .iter()
        .map(|e| {
            serde_json::json!({
                "name": e.name,
                "max_residual": if e.max_residual.is_finite() { Some(e.max_residual) } else { None },
                "tolerance": e.tolerance,
                "pass": e.pass,
                "seconds": e.seconds,
            })
        })
        .collect();
    json(&values)
}

pub fn verify_report(selector: Selector, seed: u64, timings: bool) -> Vec<ReportEntry> {
    verify::run(selector, seed, timings)
        .into_iter()
        .map(|r| ReportEntry {
            name: r.name,
            max_residual: r.max_residual,
            tolerance: r.tolerance,
            pass: r.pass,
            seconds: r.seconds,
        })
        .collect()
}

/// Runs the selected suites and writes the JSON report to `out`, or stdout
/// when `out` is `None`. Exit code 0 if every check passes, 1 otherwise.
pub fn run_verify(
    selector: &str,
    seed: u64,
    timings: bool,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    let selector: Selector = selector
        .parse()
        .map_err(|e: verify::UnknownSelector| CliError::Config(e.to_string()))?;
    let entries = verify_report(selector, seed, timings);
    let text = report_json(&entries);
    match out {
        Some(path) => write_file(path, &text)?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })?,
    }
    Ok(if entries.iter().all(|e| e.pass) { 0 } else { 1 })
}

/// Writes the discrepancy CSV and `<out>.timing.json`.
pub fn run_compare(config: &Path, solvers: &[String], out: &Path) -> Result<i32, CliError> {
    let cfg = RunConfig::load(config)?;
    let result = compare(&cfg, solvers)?;
    write_file(out, &csv_string(&result.header, &result.rows))?;
    write_file(&sidecar_path(out, "timing.json"), &json(&result.report))?;
    Ok(if result.report.truncated { 3 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_is_fixed_width_scientific() {
        assert_eq!(format_number(1.0), "1.0000000000000000e0");
        assert_eq!(format_number(-0.1), "-1.0000000000000001e-1");
        assert_eq!(
            csv_string(&["t".into(), "q1".into()], &[vec![0.0, 2.5]]),
            "t,q1\n0.0000000000000000e0,2.5000000000000000e0\n"
        );
    }

    #[test]
    fn sidecar_appends_suffix() {
        assert_eq!(
            sidecar_path(Path::new("/tmp/run.csv"), "diag.json"),
            PathBuf::from("/tmp/run.csv.diag.json")
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        let e = goldfish_core::Error::StepSizeUnderflow { t: 0.0, h: 0.0 };
        assert_eq!(CliError::Solver(e).exit_code(), 3);
    }
}
