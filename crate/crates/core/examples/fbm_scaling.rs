//! Quadratic variation of fractional Brownian motion for several Hurst
//! indices: it blows up for H < 1/2, stays near T for H = 1/2 and vanishes
//! for H > 1/2.
//!
//! Run with `cargo run --example fbm_scaling`.

use pathwise::paths::{fbm_path, pth_variation_at_level, PartitionSequence};

fn main() -> pathwise::Result<()> {
    let seq = PartitionSequence::dyadic(1.0, 16)?;
    let hursts = [0.3, 0.45, 0.5, 0.7];
    let paths = hursts
        .iter()
        .map(|&h| fbm_path(&seq, h, 11))
        .collect::<Result<Vec<_>, _>>()?;

    print!("{:>5}", "level");
    for h in hursts {
        print!(" {:>12}", format!("H={h}"));
    }
    println!();
    for level in (6..=16).step_by(2) {
        print!("{level:>5}");
        for p in &paths {
            print!(" {:>12.5e}", pth_variation_at_level(p, &seq, level, 2.0)?.sum);
        }
        println!();
    }

    // Along the 1/H-th variation the sums settle for every H.
    println!();
    for (h, p) in hursts.iter().zip(&paths) {
        let v = pth_variation_at_level(p, &seq, 16, 1.0 / h)?.sum;
        println!("H={h}: level-16 sum of |dX|^(1/H) = {v:.4}");
    }
    Ok(())
}
