//! Run a built-in scenario with fewer seeds, print its per-level table and
//! checks, and optionally write `runs.csv`, `levels.csv` and `summary.json`.
//! Checks tuned for the full seed count, such as monotone medians, can fail
//! on the reduced batch.
//!
//! Run with `cargo run --release --example scenario_runner -- [name] [out dir]`.

use std::path::PathBuf;

use pathwise::scenario::{builtin_scenario, run_scenario, BUILTIN_SCENARIOS};

fn main() -> pathwise::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "delta-matched".to_string());
    let out = args.next().map(PathBuf::from);

    let mut config = builtin_scenario(&name)?;
    config.seeds = config.seeds.min(10);
    config.taylor_seeds = config.taylor_seeds.min(1);
    println!("available: {}", BUILTIN_SCENARIOS.join(", "));
    println!("running {name} with {} seeds\n", config.seeds);

    let report = run_scenario(&config)?;
    let s = &report.summary;
    println!("{:>5} {:>12} {:>12} {:>12}", "level", "median", "mean", "iqr");
    for l in &s.levels {
        println!("{:>5} {:>12.4e} {:>12.4e} {:>12.4e}", l.level, l.median, l.mean, l.iqr);
    }
    println!("fit: {:?}", s.fit);
    for c in &s.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if let Some(dir) = out {
        report.write(&dir)?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}
