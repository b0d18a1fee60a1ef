//! Discrete delta hedging of a call on geometric Brownian paths, with the
//! pricing volatility equal to and then different from the realized one.
//!
//! Run with `cargo run --release --example delta_hedge`.

use pathwise::hedging::{run_hedge, HedgeSetup, WeightRule};
use pathwise::paths::{gbm_path, PartitionSequence};
use pathwise::pricing::{analytic_instrument, Instrument, Payoff, PricedInstrument, Pricer, VolSource};
use pathwise::tolerances::Tolerances;

fn main() -> pathwise::Result<()> {
    let seq = PartitionSequence::dyadic(1.0, 16)?;
    let seeds = 0..20u64;
    let paths = seeds
        .clone()
        .map(|s| gbm_path(&seq, s, 100.0, 0.2))
        .collect::<Result<Vec<_>, _>>()?;

    for sigma_pricing in [0.2, 0.3] {
        let call = PricedInstrument::new(
            Instrument::black_scholes(Payoff::call(100.0, 1.0)?),
            VolSource::Fixed(sigma_pricing),
        );
        let stock = PricedInstrument::new(analytic_instrument("identity", 1.0)?, VolSource::Fixed(sigma_pricing));
        let instruments: [&dyn Pricer; 2] = [&call, &stock];

        println!("pricing vol {sigma_pricing}, realized vol 0.2");
        println!("{:>5} {:>14} {:>14}", "level", "median |err|", "mean err");
        for level in (8..=16).step_by(2) {
            let mut errors = Vec::new();
            for path in &paths {
                let setup = HedgeSetup {
                    price: path,
                    aux: None,
                    seq: &seq,
                    level,
                    instruments: &instruments,
                    rule: &WeightRule::Delta,
                    t_cut: HedgeSetup::default_t_cut(&seq),
                    tolerances: Tolerances::default(),
                };
                errors.push(run_hedge(&setup)?.replication_error);
            }
            let mean = errors.iter().sum::<f64>() / errors.len() as f64;
            let mut abs: Vec<f64> = errors.iter().map(|e| e.abs()).collect();
            abs.sort_by(f64::total_cmp);
            println!("{level:>5} {:>14.6e} {:>14.6e}", abs[abs.len() / 2], mean);
        }
        println!();
    }
    Ok(())
}
