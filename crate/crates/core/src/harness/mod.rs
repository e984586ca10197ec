//! Configuration, preset catalog, suite orchestration and reports.

mod config;
mod presets;
mod report;
mod suites;

use std::time::Instant;

use rayon::prelude::*;

pub use config::{
    digest, load_config, parse_config_text, validate, ChartSpec, ConfigError, ConfigFile, GaugeSpec, MatrixText,
    OperatorSpec, RawSpec, VerificationConfig,
};
pub use presets::{conformal, default_gauges, preset, CATALOG, CONFORMAL_PSI, NEGATIVE_CONTROLS};
pub use report::{emit_report, Format, Report, Status, SuiteReport, REPORT_VERSION};
pub use suites::{run_suite, Context, Suite, COVECTORS_PER_POINT};

use crate::residual::WorstPoint;

/// Runs the configured suites concurrently and collects their reports,
/// failures first.
pub fn run_suites(cfg: &VerificationConfig) -> Report {
    let ctx = Context::new(cfg);
    let suites: Vec<SuiteReport> = cfg
        .suites
        .par_iter()
        .map(|&suite| {
            let start = Instant::now();
            let result = run_suite(&ctx, suite);
            let wall_time_s = start.elapsed().as_secs_f64();
            let tolerance = cfg.tolerance(suite);
            match result {
                Ok(r) => SuiteReport {
                    suite: suite.name().into(),
                    status: if r.passes(tolerance) { Status::Pass } else { Status::Fail },
                    max_residual: r.value.is_finite().then_some(r.value),
                    tolerance,
                    worst_point: r.worst,
                    samples: r.samples,
                    wall_time_s,
                    error: None,
                },
                Err(e) => SuiteReport {
                    suite: suite.name().into(),
                    status: Status::Fail,
                    max_residual: None,
                    tolerance,
                    worst_point: WorstPoint { x: [0.0; 4], p: [0.0; 4] },
                    samples: 0,
                    wall_time_s,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let mut report = Report {
        version: REPORT_VERSION.into(),
        name: cfg.name.clone(),
        config_digest: cfg.digest.clone(),
        seed: cfg.chart.seed,
        suites,
    };
    report.sort();
    report
}

/// Command-line overrides applied to a configuration before validation.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    /// Replaces the configured suite list when nonempty.
    pub suites: Vec<String>,
}

impl Overrides {
    pub fn apply(&self, file: &mut ConfigFile) {
        if let Some(seed) = self.seed {
            file.seed = seed;
        }
        if let Some(n) = self.samples {
            file.samples = n;
        }
        if !self.suites.is_empty() {
            file.suites = self.suites.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str, samples: usize) -> Report {
        let mut file = preset(name).unwrap();
        file.samples = samples;
        run_suites(&validate(file).unwrap())
    }

    #[test]
    fn minkowski_passes_everything() {
        let r = run("minkowski", 10);
        assert_eq!(r.suites.len(), Suite::ALL.len());
        for s in &r.suites {
            assert!(s.passed(), "{s:?}");
        }
        assert!(r.get("theorem1").unwrap().max_residual.unwrap() <= 1e-12);
    }

    #[test]
    fn broken_csub_fails_theorem1_only() {
        let r = run("neg_broken_csub", 5);
        assert_eq!(r.suites[0].suite, "theorem1");
        assert!(!r.suites[0].passed());
        assert!(r.suites[1..].iter().all(SuiteReport::passed));
    }

    #[test]
    fn non_hermitian_raw_operator_fails_selfadjoint() {
        let r = run("neg_non_hermitian", 5);
        assert_eq!(r.suites.len(), 1);
        assert!(!r.suites[0].passed());
        assert!(r.suites[0].max_residual.unwrap() > 1e-3);
    }
}
