//! Delta against delta-gamma hedging of a call on an exponential fractional
//! Brownian path with H = 0.45, where the Black-Scholes model is wrong.
//!
//! Run with `cargo run --release --example gamma_hedge_fbm`.

use pathwise::hedging::{run_hedge, HedgeSetup, WeightRule};
use pathwise::paths::{exp_price_path, fbm_path, PartitionSequence};
use pathwise::pricing::{analytic_instrument, Instrument, Payoff, PricedInstrument, Pricer, VolSource};
use pathwise::tolerances::Tolerances;

fn main() -> pathwise::Result<()> {
    let seq = PartitionSequence::dyadic(1.0, 16)?;
    let price = exp_price_path(&fbm_path(&seq, 0.45, 4)?, 100.0, 0.2)?;

    let vol = VolSource::Fixed(0.2);
    let target = PricedInstrument::new(Instrument::black_scholes(Payoff::call(100.0, 1.0)?), vol);
    let stock = PricedInstrument::new(analytic_instrument("identity", 1.0)?, vol);
    let hedge_call = PricedInstrument::new(Instrument::black_scholes(Payoff::call(110.0, 1.0)?), vol);

    let delta: [&dyn Pricer; 2] = [&target, &stock];
    let gamma: [&dyn Pricer; 3] = [&target, &stock, &hedge_call];

    println!(
        "{:>5} {:>14} {:>14} {:>12}",
        "level", "delta err", "gamma err", "max |q|"
    );
    for level in 8..=16 {
        let run = |instruments: &[&dyn Pricer], rule: &WeightRule| {
            run_hedge(&HedgeSetup {
                price: &price,
                aux: None,
                seq: &seq,
                level,
                instruments,
                rule,
                t_cut: HedgeSetup::default_t_cut(&seq),
                tolerances: Tolerances::default(),
            })
        };
        let d = run(&delta, &WeightRule::Delta)?;
        let g = run(&gamma, &WeightRule::DeltaGamma)?;
        println!(
            "{level:>5} {:>14.6e} {:>14.6e} {:>12.4}",
            d.replication_error,
            g.replication_error,
            g.weights.max_abs()
        );
    }
    Ok(())
}
