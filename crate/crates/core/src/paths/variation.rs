use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::summation::KahanSum;

use super::{Partition, PartitionSequence, Path};

/// Exact supremum p-variation is an O(n^2) dynamic program; longer paths are
/// refused.
pub const SUP_VARIATION_MAX_POINTS: usize = (1 << 12) + 1;

/// `sum |X_v - X_u|^p` along one partition, with the running partial sums.
#[derive(Debug, Clone)]
pub struct VariationReport {
    pub p: f64,
    pub level: Option<u32>,
    pub sum: f64,
    /// Partial sums `t -> sum_{[u,v], v <= t}` at the partition times.
    pub running: Option<Path>,
}

/// p-th variation of `path` along `partition`.
///
/// `partition` must be a subset of the sampling grid; no interpolation is
/// performed.
pub fn pth_variation(path: &Path, partition: &Partition, p: f64) -> Result<VariationReport> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("p must be >= 1, got {p}")));
    }
    let x = path.restrict(partition)?;
    let mut acc = KahanSum::new();
    let mut running = Vec::with_capacity(x.len());
    running.push(0.0);
    for w in x.windows(2) {
        acc.add(abs_pow(w[1] - w[0], p));
        running.push(acc.value());
    }
    let sum = acc.value();
    let running = Path::new(partition.clone(), running, format!("{p}-variation process"))?;
    Ok(VariationReport {
        p,
        level: None,
        sum,
        running: Some(running),
    })
}

/// [`pth_variation`] along level `level` of `seq`, with the level recorded.
pub fn pth_variation_at_level(path: &Path, seq: &PartitionSequence, level: u32, p: f64) -> Result<VariationReport> {
    let mut r = pth_variation(path, &seq.level(level)?, p)?;
    r.level = Some(level);
    Ok(r)
}

#[inline]
fn abs_pow(d: f64, p: f64) -> f64 {
    let a = d.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else if p == 3.0 {
        a * a * a
    } else {
        a.powf(p)
    }
}

/// `(sup over sub-partitions of the grid of sum |X_v - X_u|^p)^(1/p)`.
///
/// Sub-partitions always contain the first and last grid point.
pub fn sup_p_variation(path: &Path, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("p must be >= 1, got {p}")));
    }
    let x = path.values();
    let n = x.len();
    if n > SUP_VARIATION_MAX_POINTS {
        return Err(Error::LengthGuard {
            what: "exact p-variation",
            len: n,
            limit: SUP_VARIATION_MAX_POINTS,
        });
    }
    if p == 1.0 {
        // triangle inequality: the full grid attains the supremum
        return Ok(kahan_abs_increments(x));
    }
    let mut best = vec![0.0f64; n];
    for j in 1..n {
        let mut b = f64::NEG_INFINITY;
        for i in 0..j {
            b = b.max(best[i] + abs_pow(x[j] - x[i], p));
        }
        best[j] = b;
    }
    Ok(best[n - 1].powf(1.0 / p))
}

fn kahan_abs_increments(x: &[f64]) -> f64 {
    x.windows(2).map(|w| (w[1] - w[0]).abs()).collect::<KahanSum>().value()
}

/// Total variation of the sampled sequence.
pub fn one_variation(path: &Path) -> f64 {
    kahan_abs_increments(path.values())
}

/// Modulus of continuity: `sup |X_s - X_t|` over sampled pairs with
/// `|s - t| < delta`.
pub fn oscillation(path: &Path, delta: f64) -> Result<f64> {
    window_oscillation(path, delta, false)
}

/// As [`oscillation`] but pairs at distance exactly `delta` are included.
///
/// On a sampled path this is the form that bounds `|X_v - X_u|` over an
/// interval of length `delta`.
pub fn oscillation_inclusive(path: &Path, delta: f64) -> Result<f64> {
    window_oscillation(path, delta, true)
}

fn window_oscillation(path: &Path, delta: f64, inclusive: bool) -> Result<f64> {
    if !(delta > 0.0 && delta <= path.horizon() * (1.0 + 1e-12)) {
        return Err(Error::invalid(format!("delta must be in (0, T], got {delta}")));
    }
    let t = path.times();
    let x = path.values();
    let inside = |dt: f64| if inclusive { dt <= delta } else { dt < delta };
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut left = 0;
    let mut best = 0.0f64;
    for j in 0..x.len() {
        while !inside(t[j] - t[left]) {
            left += 1;
        }
        while maxq.back().is_some_and(|&k| x[k] <= x[j]) {
            maxq.pop_back();
        }
        maxq.push_back(j);
        while minq.back().is_some_and(|&k| x[k] >= x[j]) {
            minq.pop_back();
        }
        minq.push_back(j);
        while maxq.front().is_some_and(|&k| k < left) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&k| k < left) {
            minq.pop_front();
        }
        best = best.max(x[maxq[0]] - x[minq[0]]);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{brownian_path, constant_path, linear_path};

    fn grid_path(values: &[f64]) -> Path {
        let g = Partition::uniform(1.0, values.len() - 1).unwrap();
        Path::new(g, values.to_vec(), "test").unwrap()
    }

    #[test]
    fn constant_path_has_zero_variation() {
        let g = Partition::uniform(1.0, 32).unwrap();
        let c = constant_path(&g, 4.2).unwrap();
        let r = pth_variation(&c, &g, 2.0).unwrap();
        assert_eq!(r.sum, 0.0);
        assert_eq!(oscillation(&c, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn linear_path_closed_form() {
        let (a, t, n) = (1.7, 2.0, 64usize);
        let g = Partition::uniform(t, n).unwrap();
        let l = linear_path(&g, a).unwrap();
        for p in [1.0, 1.5, 2.0, 3.0] {
            let r = pth_variation(&l, &g, p).unwrap();
            let expected = a.powf(p) * t.powf(p) * (n as f64).powf(1.0 - p);
            assert!((r.sum - expected).abs() < 1e-12 * expected.max(1.0), "p={p}");
            let running = r.running.unwrap();
            assert_eq!(*running.values().last().unwrap(), r.sum);
        }
    }

    #[test]
    fn refuses_partition_off_grid() {
        let g = Partition::uniform(1.0, 4).unwrap();
        let l = linear_path(&g, 1.0).unwrap();
        let off = Partition::uniform(1.0, 3).unwrap();
        assert!(matches!(
            pth_variation(&l, &off, 2.0),
            Err(Error::PartitionNotOnGrid { .. })
        ));
        assert!(pth_variation(&l, &g, 0.5).is_err());
    }

    #[test]
    fn sup_variation_small_cases() {
        let up = grid_path(&[0.0, 0.5, 0.7, 2.0]);
        assert!((sup_p_variation(&up, 1.0).unwrap() - 2.0).abs() < 1e-15);
        let zig = grid_path(&[0.0, 1.0, 0.0]);
        assert!((sup_p_variation(&zig, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((sup_p_variation(&zig, 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    /// Enumerate every sub-partition containing both endpoints.
    fn brute_force_sup(x: &[f64], p: f64) -> f64 {
        let n = x.len();
        let inner = n - 2;
        let mut best = 0.0f64;
        for mask in 0u32..(1 << inner) {
            let mut idx = vec![0];
            idx.extend((0..inner).filter(|k| mask & (1 << k) != 0).map(|k| k + 1));
            idx.push(n - 1);
            let s: f64 = idx.windows(2).map(|w| (x[w[1]] - x[w[0]]).abs().powf(p)).sum();
            best = best.max(s);
        }
        best.powf(1.0 / p)
    }

    #[test]
    fn sup_variation_matches_enumeration() {
        let seq = PartitionSequence::dyadic(1.0, 4).unwrap();
        for seed in 0..5 {
            let b = brownian_path(&seq, seed, 1.0).unwrap();
            for p in [1.0, 1.5, 2.0, 2.5, 4.0] {
                let dp = sup_p_variation(&b, p).unwrap();
                let bf = brute_force_sup(b.values(), p);
                assert!((dp - bf).abs() < 1e-12 * bf.max(1.0), "seed {seed} p {p}");
            }
        }
    }

    #[test]
    fn sup_variation_length_guard() {
        let seq = PartitionSequence::dyadic(1.0, 13).unwrap();
        let b = brownian_path(&seq, 0, 1.0).unwrap();
        assert!(matches!(sup_p_variation(&b, 2.0), Err(Error::LengthGuard { .. })));
    }

    fn brute_osc(path: &Path, delta: f64, inclusive: bool) -> f64 {
        let (t, x) = (path.times(), path.values());
        let mut best = 0.0f64;
        for i in 0..x.len() {
            for j in i..x.len() {
                let dt = t[j] - t[i];
                if (inclusive && dt <= delta) || (!inclusive && dt < delta) {
                    best = best.max((x[j] - x[i]).abs());
                }
            }
        }
        best
    }

    #[test]
    fn oscillation_matches_brute_force() {
        let seq = PartitionSequence::dyadic(1.0, 8).unwrap();
        let b = brownian_path(&seq, 3, 1.0).unwrap();
        for delta in [1.0 / 256.0, 0.01, 0.05, 0.3, 1.0] {
            for inclusive in [false, true] {
                let fast = window_oscillation(&b, delta, inclusive).unwrap();
                assert_eq!(fast, brute_osc(&b, delta, inclusive));
            }
        }
    }

    #[test]
    fn oscillation_of_linear_path() {
        let g = Partition::uniform(1.0, 64).unwrap();
        let l = linear_path(&g, 3.0).unwrap();
        // largest sampled gap strictly below 4/64 is 3/64
        let o = oscillation(&l, 4.0 / 64.0).unwrap();
        assert!((o - 3.0 * 3.0 / 64.0).abs() < 1e-12);
        let o = oscillation_inclusive(&l, 4.0 / 64.0).unwrap();
        assert!((o - 3.0 * 4.0 / 64.0).abs() < 1e-12);
    }
}
