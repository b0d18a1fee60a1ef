//! p-th variation of one Brownian path along the dyadic partitions.
//!
//! Run with `cargo run --example variation`.

use pathwise::paths::{brownian_path, pth_variation_at_level, sup_p_variation, PartitionSequence};

fn main() -> pathwise::Result<()> {
    let seq = PartitionSequence::dyadic(1.0, 16)?;
    let b = brownian_path(&seq, 7, 1.0)?;

    println!("{:>5} {:>12} {:>12} {:>12}", "level", "p=2", "p=3", "p=4");
    for level in (4..=16).step_by(2) {
        let v: Vec<f64> = [2.0, 3.0, 4.0]
            .iter()
            .map(|&p| pth_variation_at_level(&b, &seq, level, p).map(|r| r.sum))
            .collect::<Result<_, _>>()?;
        println!("{level:>5} {:>12.6} {:>12.6e} {:>12.6e}", v[0], v[1], v[2]);
    }

    // The supremum over all partitions dominates every dyadic sum.
    let coarse = PartitionSequence::dyadic(1.0, 10)?;
    let short = brownian_path(&coarse, 7, 1.0)?;
    let dyadic = pth_variation_at_level(&short, &coarse, 10, 3.0)?.sum;
    println!(
        "\n3-variation on 1024 points: sup {:.6}, dyadic {:.6}",
        sup_p_variation(&short, 3.0)?,
        dyadic
    );
    Ok(())
}
