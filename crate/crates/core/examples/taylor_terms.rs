//! Split a hedging ledger into its Taylor terms `T(a1, a2)`, where `a1`
//! counts derivatives in `(t, aux)` and `a2` in the spot. For a delta hedge
//! `T(0, 1)` vanishes and the error is what is left of `T(1, 0) + T(0, 2)`;
//! for a delta-gamma hedge `T(0, 2)` vanishes too.
//!
//! Run with `cargo run --release --example taylor_terms`.

use pathwise::hedging::{decompose_ledger, run_hedge, HedgeSetup, WeightRule};
use pathwise::paths::{exp_price_path, fbm_path, PartitionSequence};
use pathwise::pricing::{analytic_instrument, Instrument, Payoff, PricedInstrument, Pricer, VolSource};
use pathwise::tolerances::Tolerances;

fn main() -> pathwise::Result<()> {
    let seq = PartitionSequence::dyadic(1.0, 12)?;
    let price = exp_price_path(&fbm_path(&seq, 0.45, 4)?, 100.0, 0.2)?;
    let vol = VolSource::Fixed(0.2);
    let target = PricedInstrument::new(Instrument::black_scholes(Payoff::call(100.0, 1.0)?), vol);
    let stock = PricedInstrument::new(analytic_instrument("identity", 1.0)?, vol);
    let hedge_call = PricedInstrument::new(Instrument::black_scholes(Payoff::call(110.0, 1.0)?), vol);

    let delta: [&dyn Pricer; 2] = [&target, &stock];
    let gamma: [&dyn Pricer; 3] = [&target, &stock, &hedge_call];
    for (name, instruments, rule) in [
        ("delta", &delta[..], WeightRule::Delta),
        ("delta-gamma", &gamma[..], WeightRule::DeltaGamma),
    ] {
        let setup = HedgeSetup {
            price: &price,
            aux: None,
            seq: &seq,
            level: 10,
            instruments,
            rule: &rule,
            t_cut: HedgeSetup::default_t_cut(&seq),
            tolerances: Tolerances::default(),
        };
        let ledger = run_hedge(&setup)?;
        let d = decompose_ledger(&setup, &ledger)?;
        println!("{name} hedge at level 10, ledger total {:.6e}", d.ledger_total);
        for t in &d.terms {
            println!("  T({}, {}) = {:>14.6e}", t.a1, t.a2, t.value);
        }
        println!(
            "  sum of terms - total = {:.2e} ({} intervals fell back to lambda = 1/2)\n",
            d.identity_gap(),
            d.fallback_intervals.len()
        );
    }
    Ok(())
}
