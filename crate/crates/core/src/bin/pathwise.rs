use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pathwise::paths::{one_variation, pth_variation, read_path_csv, sup_p_variation, SUP_VARIATION_MAX_POINTS};
use pathwise::scenario::{builtin_scenario, run_scenario_with, ScenarioConfig, BUILTIN_SCENARIOS};

#[derive(Parser)]
#[command(name = "pathwise", version, about = "Pathwise hedging experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// p-th variation of Brownian paths along dyadic partitions, or of a path file.
    Variation {
        #[command(flatten)]
        run: RunArgs,
        /// Path CSV (`time,value`) to measure instead of running a scenario.
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Delta hedging of a call on GBM paths.
    DeltaHedge(RunArgs),
    /// Delta-gamma hedging on exponential fBm paths.
    GammaHedge(RunArgs),
    /// Delta-gamma hedging with a volatility path.
    VolPathHedge(RunArgs),
    /// Hedging of running-integral claims.
    Asian(RunArgs),
    /// Riemann-sum defect against its oscillation bound.
    LemmaCheck(RunArgs),
    /// Print the built-in scenarios.
    ListScenarios,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON; built-in defaults apply to missing fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for runs.csv, levels.csv and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seeds: Option<u32>,
    #[arg(long)]
    base_seed: Option<u64>,
    /// Inclusive level range `a..b`.
    #[arg(long, value_parser = parse_levels)]
    levels: Option<(u32, u32)>,
    /// Built-in scenario name (see `list-scenarios`).
    #[arg(long)]
    scenario: Option<String>,
    /// Also write every run's ledger under `<out>/ledgers`.
    #[arg(long)]
    ledgers: bool,
}

fn parse_levels(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a = a.trim().parse::<u32>().map_err(|e| e.to_string())?;
    let b = b
        .trim()
        .trim_start_matches('=')
        .parse::<u32>()
        .map_err(|e| e.to_string())?;
    Ok((a, b))
}

fn default_scenario(family: &str) -> &'static str {
    match family {
        "variation" => "qv-brownian",
        "delta-hedge" => "delta-matched",
        "gamma-hedge" => "gamma-fbm045",
        "vol-path-hedge" => "volpath-gamma-fbm045",
        "asian" => "asian-gamma-fbm045",
        _ => "lemma-sin",
    }
}

fn load(family: &str, args: &RunArgs) -> pathwise::Result<ScenarioConfig> {
    let mut config = match &args.config {
        Some(path) => ScenarioConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => builtin_scenario(args.scenario.as_deref().unwrap_or(default_scenario(family)))?,
    };
    if let Some(n) = args.seeds {
        config.seeds = n;
    }
    if let Some(k) = args.base_seed {
        config.base_seed = k;
    }
    if let Some((a, b)) = args.levels {
        config = config.with_level_range(a, b)?;
    }
    if args.ledgers {
        config.write_ledgers = true;
    }
    if let Some(out) = &args.out {
        config.output_dir = Some(out.clone());
    }
    config.validate()?;
    if config.family() != family {
        return Err(pathwise::Error::InvalidArgument(format!(
            "scenario `{}` belongs to `{}`, not `{family}`",
            config.name,
            config.family()
        )));
    }
    Ok(config)
}

fn run(family: &str, args: &RunArgs) -> pathwise::Result<bool> {
    let config = load(family, args)?;
    let ledger_dir = config.output_dir.as_ref().map(|d| d.join("ledgers"));
    let report = run_scenario_with(&config, ledger_dir.as_deref())?;
    let s = &report.summary;
    println!(
        "scenario {} ({} seeds, reference {:.6})",
        s.scenario, config.seeds, s.reference_value
    );
    println!(
        "{:>5} {:>12} {:>14} {:>14} {:>14} {:>6}",
        "level", "mesh", "median", "mean", "iqr", "failed"
    );
    for l in &s.levels {
        println!(
            "{:>5} {:>12.4e} {:>14.6e} {:>14.6e} {:>14.6e} {:>6}",
            l.level, l.mesh, l.median, l.mean, l.iqr, l.failed
        );
    }
    if let Some(fit) = &s.fit {
        println!("fit: {fit:?}");
    }
    for c in &s.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if let Some(dir) = &config.output_dir {
        report.write(dir)?;
        println!("wrote {}", dir.display());
    }
    Ok(s.passed)
}

fn measure(path: &PathBuf, p: f64) -> pathwise::Result<bool> {
    let x = read_path_csv(std::fs::File::open(path)?, path.display().to_string())?;
    let along = pth_variation(&x, x.grid(), p)?;
    println!("points {}", x.len());
    println!("{p}-variation along grid {:.12e}", along.sum);
    println!("1-variation {:.12e}", one_variation(&x));
    if x.len() <= SUP_VARIATION_MAX_POINTS {
        println!("sup {p}-variation {:.12e}", sup_p_variation(&x, p)?);
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Variation {
            path: Some(file), p, ..
        } => measure(file, *p),
        Command::Variation { run: args, .. } => run("variation", args),
        Command::DeltaHedge(a) => run("delta-hedge", a),
        Command::GammaHedge(a) => run("gamma-hedge", a),
        Command::VolPathHedge(a) => run("vol-path-hedge", a),
        Command::Asian(a) => run("asian", a),
        Command::LemmaCheck(a) => run("lemma-check", a),
        Command::ListScenarios => {
            for name in BUILTIN_SCENARIOS {
                let c = builtin_scenario(name).expect("built-in scenario");
                println!("{name:<24} {:<15} {}", c.family(), c.description);
            }
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
