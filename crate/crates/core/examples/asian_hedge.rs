//! Asian claims on the state `(t, I_t, X_t)`.
//!
//! The squared average `I_T^2` is hedged delta-gamma with the underlying and
//! `s^2 exp(sigma^2 (T - t))` on a rough path, then delta only on a path whose
//! volatility differs from the pricing one. The running-average forward is
//! hedged with the underlying alone.
//!
//! Run with `cargo run --release --example asian_hedge`.

use pathwise::asian::{asian_analytic, run_asian_hedge, AsianRule};
use pathwise::paths::{exp_price_path, fbm_path, gbm_path, PartitionSequence};
use pathwise::pricing::{analytic_instrument, PricedInstrument, Pricer, VolSource};

fn main() -> pathwise::Result<()> {
    let seq = PartitionSequence::dyadic(1.0, 16)?;
    let rough = exp_price_path(&fbm_path(&seq, 0.45, 2)?, 100.0, 0.2)?;
    let wild = gbm_path(&seq, 2, 100.0, 0.4)?;

    let vol = VolSource::Fixed(0.2);
    let stock = PricedInstrument::new(analytic_instrument("identity", 1.0)?, vol);
    let square = PricedInstrument::new(analytic_instrument("squareExp", 1.0)?, vol);
    let squared_avg = asian_analytic("squaredAverage", 0.2, 1.0)?;
    let forward = asian_analytic("runningAverageForward", 0.2, 1.0)?;

    println!(
        "{:>5} {:>16} {:>16} {:>16}",
        "level", "I^2 delta-gamma", "I^2 delta only", "forward"
    );
    for level in (8..=16).step_by(2) {
        let g = run_asian_hedge(
            &rough,
            &seq,
            level,
            &squared_avg,
            &[&stock as &dyn Pricer, &square],
            AsianRule::DeltaGamma,
        )?;
        let d = run_asian_hedge(
            &wild,
            &seq,
            level,
            &squared_avg,
            &[&stock as &dyn Pricer],
            AsianRule::DeltaOnlyQvMatched,
        )?;
        let f = run_asian_hedge(
            &rough,
            &seq,
            level,
            &forward,
            &[&stock as &dyn Pricer],
            AsianRule::DeltaOnlyQvMatched,
        )?;
        println!(
            "{level:>5} {:>16.6e} {:>16.6e} {:>16.6e}",
            g.ledger.replication_error, d.ledger.replication_error, f.ledger.replication_error
        );
        if level == 16 {
            println!(
                "\nrealized vol of the mismatched path: {:.4} (flagged: {})",
                d.realized_sigma, d.qv_mismatch
            );
        }
    }
    Ok(())
}
