use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::residual::WorstPoint;

pub const REPORT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub status: Status,
    /// `null` in JSON when the suite errored or a residual was not finite.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub worst_point: WorstPoint,
    pub samples: usize,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub name: String,
    pub config_digest: String,
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    /// 0 when every suite passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    /// Failing suites first, then alphabetical.
    pub fn sort(&mut self) {
        self.suites.sort_by(|a, b| a.passed().cmp(&b.passed()).then_with(|| a.suite.cmp(&b.suite)));
    }

    pub fn get(&self, suite: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == suite)
    }
}

/// Renders a report as pretty JSON or as one line per suite.
pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            let verdict = if report.all_passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{verdict} {} (seed {}, config {})",
                if report.name.is_empty() { "<unnamed>" } else { &report.name },
                report.seed,
                &report.config_digest[..12.min(report.config_digest.len())]
            );
            for s in &report.suites {
                let status = if s.passed() { "PASS" } else { "FAIL" };
                let residual = s.max_residual.map_or("n/a".to_string(), |r| format!("{r:.3e}"));
                let _ = write!(
                    out,
                    "{status} {:<16} max_residual={residual:<10} tol={:.0e} samples={:<5} worst x={} p={} ({:.2}s)",
                    s.suite,
                    s.tolerance,
                    s.samples,
                    short(&s.worst_point.x),
                    short(&s.worst_point.p),
                    s.wall_time_s
                );
                if let Some(e) = &s.error {
                    let _ = write!(out, " error: {e}");
                }
                out.push('\n');
            }
            out
        }
    }
}

fn short(v: &[f64; 4]) -> String {
    format!("[{:.3}, {:.3}, {:.3}, {:.3}]", v[0], v[1], v[2], v[3])
}
