//! Write a simulated path to CSV, read it back and hedge along it, then
//! export the interval ledger as CSV and its summary as JSON.
//!
//! Run with `cargo run --example ledger_export -- [output dir]`.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use pathwise::hedging::{decompose_ledger, run_hedge, write_ledger_csv, HedgeSetup, LedgerSummary, WeightRule};
use pathwise::paths::{gbm_path, read_path_csv, write_path_csv, PartitionSequence};
use pathwise::pricing::{analytic_instrument, Instrument, Payoff, PricedInstrument, Pricer, VolSource};
use pathwise::tolerances::Tolerances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;
    let seed = 17;

    let seq = PartitionSequence::dyadic(1.0, 10)?;
    let path_file = dir.join("gbm.csv");
    write_path_csv(
        &gbm_path(&seq, seed, 100.0, 0.2)?,
        BufWriter::new(File::create(&path_file)?),
    )?;
    let price = read_path_csv(File::open(&path_file)?, "gbm")?;

    let vol = VolSource::Fixed(0.2);
    let call = PricedInstrument::new(Instrument::black_scholes(Payoff::call(100.0, 1.0)?), vol);
    let stock = PricedInstrument::new(analytic_instrument("identity", 1.0)?, vol);
    let instruments: [&dyn Pricer; 2] = [&call, &stock];
    let setup = HedgeSetup {
        price: &price,
        aux: None,
        seq: &seq,
        level: 6,
        instruments: &instruments,
        rule: &WeightRule::Delta,
        t_cut: HedgeSetup::default_t_cut(&seq),
        tolerances: Tolerances::default(),
    };
    let ledger = run_hedge(&setup)?;
    let taylor = decompose_ledger(&setup, &ledger)?;

    let csv = dir.join("ledger_level6.csv");
    write_ledger_csv(BufWriter::new(File::create(&csv)?), &ledger, None)?;
    let json = dir.join("ledger_level6.json");
    std::fs::write(
        &json,
        serde_json::to_string_pretty(&LedgerSummary::new(seed, &ledger, Some(&taylor)))?,
    )?;

    println!("path   -> {}", path_file.display());
    println!("ledger -> {} ({} intervals)", csv.display(), ledger.intervals());
    println!("json   -> {}", json.display());
    println!("replication error {:.6e}", ledger.replication_error);
    Ok(())
}
