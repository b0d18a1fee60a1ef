//! Gamma hedging when the pricing volatility follows a deterministic path
//! `sigma_t = 0.2 + 0.05 sin t`, read from the auxiliary state coordinate.
//!
//! Run with `cargo run --release --example vol_path_hedge`.

use pathwise::hedging::{run_hedge, HedgeSetup, WeightRule};
use pathwise::paths::{exp_price_path, fbm_path, function_path, PartitionSequence};
use pathwise::pricing::{analytic_instrument, Instrument, Payoff, PricedInstrument, Pricer, VolSource};
use pathwise::tolerances::Tolerances;

fn main() -> pathwise::Result<()> {
    let seq = PartitionSequence::dyadic(1.0, 16)?;
    let price = exp_price_path(&fbm_path(&seq, 0.45, 5)?, 100.0, 0.2)?;
    let sigma = function_path(&seq.finest(), |t| 0.2 + 0.05 * t.sin(), "sigma_t")?;

    let vol = VolSource::FromState;
    let target = PricedInstrument::new(Instrument::black_scholes(Payoff::call(100.0, 1.0)?), vol);
    let stock = PricedInstrument::new(analytic_instrument("identity", 1.0)?, vol);
    let hedge_call = PricedInstrument::new(Instrument::black_scholes(Payoff::call(110.0, 1.0)?), vol);
    let instruments: [&dyn Pricer; 3] = [&target, &stock, &hedge_call];

    println!(
        "{:>5} {:>14} {:>14} {:>14}",
        "level", "initial", "error", "gamma imbal."
    );
    for level in (8..=16).step_by(2) {
        let ledger = run_hedge(&HedgeSetup {
            price: &price,
            aux: Some(&sigma),
            seq: &seq,
            level,
            instruments: &instruments,
            rule: &WeightRule::DeltaGamma,
            t_cut: HedgeSetup::default_t_cut(&seq),
            tolerances: Tolerances::default(),
        })?;
        println!(
            "{level:>5} {:>14.6} {:>14.6e} {:>14.2e}",
            ledger.initial_value, ledger.replication_error, ledger.max_gamma_imbalance
        );
    }
    Ok(())
}
