use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use opgeom::harness::{emit_report, parse_config_text, preset, run_suites, validate, Format, Overrides, CATALOG, NEGATIVE_CONTROLS};

#[derive(Parser)]
#[command(version, about = "Verify the geometry and Dirac operator carried by a first-order 2x2 operator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites on a configuration file.
    Verify {
        config: PathBuf,
        /// Suite to run; repeat for several. Defaults to the configured list.
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of sample points per suite.
        #[arg(long)]
        samples: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a catalog configuration.
    Preset {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify {
            config,
            suites,
            format,
            seed,
            samples,
            out,
        } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => return fail(format!("cannot read {}: {e}", config.display())),
            };
            let mut file = match parse_config_text(&text) {
                Ok(f) => f,
                Err(e) => return fail(e),
            };
            Overrides { seed, samples, suites }.apply(&mut file);
            let cfg = match validate(file) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let report = run_suites(&cfg);
            let doc = emit_report(&report, format);
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, doc) {
                        return fail(format!("cannot write {}: {e}", path.display()));
                    }
                }
                None => print!("{doc}"),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Preset { name, out } => {
            let Some(cfg) = preset(&name) else {
                return fail(format!(
                    "unknown preset `{name}`; available: {}, negative controls: {}",
                    CATALOG.join(", "),
                    NEGATIVE_CONTROLS.join(", ")
                ));
            };
            let json = serde_json::to_string_pretty(&cfg).expect("config serializes") + "\n";
            match std::fs::write(&out, json) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(format!("cannot write {}: {e}", out.display())),
            }
        }
    }
}
