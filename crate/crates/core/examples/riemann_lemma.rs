//! Left-point Riemann sums of `y (1 d sin t - cos t d t)` along dyadic
//! partitions. The integral vanishes, so the sum is pure discretization
//! error and must sit below `sup|y| sum_i osc(f^i, mesh) |g^i|_1-var`.
//!
//! Run with `cargo run --example riemann_lemma`.

use pathwise::hedging::riemann_sum_defect;
use pathwise::paths::{brownian_path, constant_path, function_path, PartitionSequence};

fn main() -> pathwise::Result<()> {
    let seq = PartitionSequence::dyadic(1.0, 16)?;
    let grid = seq.finest();
    let y = brownian_path(&seq, 1, 1.0)?.map(|_, b| (0.5 * b).exp(), "exp(B/2)")?;
    let f = [constant_path(&grid, 1.0)?, function_path(&grid, |t| -t.cos(), "-cos")?];
    let g = [
        function_path(&grid, f64::sin, "sin")?,
        function_path(&grid, |t| t, "t")?,
    ];

    println!("{:>5} {:>12} {:>12} {:>6}", "level", "|sum|", "bound", "holds");
    for level in (6..=16).step_by(2) {
        let d = riemann_sum_defect(&y, &f, &g, &seq.level(level)?)?;
        println!("{level:>5} {:>12.4e} {:>12.4e} {:>6}", d.lhs, d.bound, d.holds());
    }
    Ok(())
}
