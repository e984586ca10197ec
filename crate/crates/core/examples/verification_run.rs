//! Run every verification suite on each catalog preset and on the negative
//! controls, printing one line per preset. Pass a sample count to change the
//! default of 40.

use opgeom::harness::{emit_report, preset, run_suites, validate, Format, CATALOG, NEGATIVE_CONTROLS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(40);
    for name in CATALOG.iter().chain(NEGATIVE_CONTROLS.iter()) {
        let mut file = preset(name).expect("catalog name");
        file.samples = samples;
        let report = run_suites(&validate(file)?);
        let failing: Vec<_> = report.suites.iter().filter(|s| !s.passed()).map(|s| s.suite.as_str()).collect();
        println!(
            "{name:<18} {:>2}/{} suites pass{}",
            report.suites.len() - failing.len(),
            report.suites.len(),
            if failing.is_empty() { String::new() } else { format!(", failing: {}", failing.join(", ")) }
        );
    }
    let mut file = preset("curved").expect("catalog name");
    file.samples = samples;
    print!("\n{}", emit_report(&run_suites(&validate(file)?), Format::Text));
    Ok(())
}
