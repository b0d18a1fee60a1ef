use serde::Serialize;

use crate::error::{Error, Result};
use crate::paths::{one_variation, oscillation_inclusive, Partition, Path};
use crate::summation::KahanSum;

/// Left-point Riemann sum of `sum_i y f^i dg^i` and its a priori bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiemannDefect {
    /// `|sum_[u,v] sum_i y_u f^i_u (g^i_v - g^i_u)|`.
    pub lhs: f64,
    /// `sup|y| sum_i osc(f^i, mesh) |g^i|_1-var`.
    pub bound: f64,
    pub mesh: f64,
}

impl RiemannDefect {
    pub fn holds(&self) -> bool {
        self.lhs <= self.bound
    }
}

/// Riemann sum along `partition` for a family whose integrals
/// `sum_i int f^i dg^i` vanish identically.
///
/// Oscillation and 1-variation are measured on the paths' own grid, which
/// must contain `partition`. Oscillation uses closed windows of width equal
/// to the mesh, since a partition interval includes both of its ends.
pub fn riemann_sum_defect(y: &Path, f: &[Path], g: &[Path], partition: &Partition) -> Result<RiemannDefect> {
    if f.len() != g.len() {
        return Err(Error::invalid("f and g families differ in length"));
    }
    let grid = y.grid();
    if f.iter().chain(g).any(|p| p.grid() != grid) {
        return Err(Error::invalid("all paths must share one grid"));
    }
    let idx = partition.indices_in(grid)?;
    let mesh = partition.mesh();

    let (yv, mut lhs) = (y.values(), KahanSum::new());
    for w in idx.windows(2) {
        let (a, b) = (w[0], w[1]);
        for (fi, gi) in f.iter().zip(g) {
            lhs.add(yv[a] * fi.values()[a] * (gi.values()[b] - gi.values()[a]));
        }
    }

    let mut bound = KahanSum::new();
    for (fi, gi) in f.iter().zip(g) {
        bound.add(oscillation_inclusive(fi, mesh)? * one_variation(gi));
    }
    Ok(RiemannDefect {
        lhs: lhs.value().abs(),
        bound: y.sup_norm() * bound.value(),
        mesh,
    })
}
