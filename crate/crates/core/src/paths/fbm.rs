//! Fractional Brownian motion on a uniform grid.
//!
//! Increments are fractional Gaussian noise. The default generator is the
//! circulant embedding (Davies-Harte) method: the `n x n` Toeplitz
//! covariance of the noise is embedded in a circulant matrix of size `2n`
//! whose eigenvalues come from one FFT. A Cholesky factorization of the
//! exact covariance is kept for small grids, both as a fallback when the
//! embedding is not positive and as an independent oracle.

use rustfft::{num_complex::Complex64, FftPlanner};

use crate::error::{Error, Result};
use crate::rng::GaussianStream;

use super::{PartitionSequence, Path};

/// Largest number of increments handled by the Cholesky factorization.
const CHOLESKY_MAX: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbmMethod {
    /// Circulant embedding, falling back to Cholesky on small grids.
    Auto,
    CirculantEmbedding,
    Cholesky,
}

/// Autocovariance of unit-step fractional Gaussian noise at lag `k`.
pub fn fgn_covariance(hurst: f64, k: usize) -> f64 {
    let h2 = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

/// Standard fBm with `Cov(B_s, B_t) = (s^2H + t^2H - |t-s|^2H) / 2` on the
/// finest grid of a uniform partition sequence.
pub fn fbm_path(seq: &PartitionSequence, hurst: f64, seed: u64) -> Result<Path> {
    fbm_path_with(seq, hurst, seed, FbmMethod::Auto)
}

pub fn fbm_path_with(seq: &PartitionSequence, hurst: f64, seed: u64, method: FbmMethod) -> Result<Path> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::invalid(format!("hurst must be in (0, 1), got {hurst}")));
    }
    let grid = seq.finest();
    let n = grid.intervals();
    let mut gauss = GaussianStream::new(seed);
    let noise = match method {
        FbmMethod::Cholesky => cholesky_fgn(n, hurst, &mut gauss)?,
        FbmMethod::CirculantEmbedding => circulant_fgn(n, hurst, &mut gauss)?,
        FbmMethod::Auto => match circulant_fgn(n, hurst, &mut gauss) {
            Err(Error::EmbeddingNotPositive { .. }) if n <= CHOLESKY_MAX => {
                cholesky_fgn(n, hurst, &mut GaussianStream::new(seed))?
            }
            other => other?,
        },
    };
    // self-similarity: increments over a step dt have standard deviation dt^H
    let step = seq.mesh(seq.max_level()).powf(hurst);
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    let mut x = 0.0;
    for z in noise {
        x += step * z;
        values.push(x);
    }
    Path::new(grid, values, format!("fbm(H={hurst}, seed={seed})"))
}

fn circulant_fgn(n: usize, hurst: f64, gauss: &mut GaussianStream) -> Result<Vec<f64>> {
    let m = 2 * n;
    // first row of the circulant: c_0..c_n, c_{n-1}..c_1
    let mut row: Vec<Complex64> = (0..m)
        .map(|j| {
            let k = if j <= n { j } else { m - j };
            Complex64::new(fgn_covariance(hurst, k), 0.0)
        })
        .collect();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);
    let scale = row.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
    let min = row.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
    if min < -1e-10 * scale {
        return Err(Error::EmbeddingNotPositive {
            min_eigenvalue: min,
            points: n,
        });
    }
    let mut w: Vec<Complex64> = row
        .iter()
        .map(|lam| {
            let a = (lam.re.max(0.0) / m as f64).sqrt();
            let re = gauss.next_gaussian();
            let im = gauss.next_gaussian();
            Complex64::new(a * re, a * im)
        })
        .collect();
    fft.process(&mut w);
    Ok(w[..n].iter().map(|c| c.re).collect())
}

fn cholesky_fgn(n: usize, hurst: f64, gauss: &mut GaussianStream) -> Result<Vec<f64>> {
    if n > CHOLESKY_MAX {
        return Err(Error::LengthGuard {
            what: "exact fBm covariance factorization",
            len: n,
            limit: CHOLESKY_MAX,
        });
    }
    let l = cholesky_lower(n, |i, j| fgn_covariance(hurst, i.abs_diff(j)))?;
    let z: Vec<f64> = (0..n).map(|_| gauss.next_gaussian()).collect();
    Ok((0..n).map(|i| (0..=i).map(|j| l[i * n + j] * z[j]).sum()).collect())
}

/// Dense lower Cholesky factor, row-major.
pub(crate) fn cholesky_lower(n: usize, cov: impl Fn(usize, usize) -> f64) -> Result<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = cov(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::invalid("covariance matrix is not positive definite"));
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_hurst() {
        let seq = PartitionSequence::dyadic(1.0, 4).unwrap();
        assert!(fbm_path(&seq, 0.0, 1).is_err());
        assert!(fbm_path(&seq, 1.0, 1).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let seq = PartitionSequence::dyadic(1.0, 12).unwrap();
        let a = fbm_path(&seq, 0.3, 5).unwrap();
        let b = fbm_path(&seq, 0.3, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hurst_half_noise_is_white() {
        assert_eq!(fgn_covariance(0.5, 0), 1.0);
        for k in 1..10 {
            assert!(fgn_covariance(0.5, k).abs() < 1e-15);
        }
    }

    #[test]
    fn embedding_is_positive_across_hurst() {
        let mut g = GaussianStream::new(0);
        for h in [0.1, 0.3, 0.45, 0.5, 0.7, 0.9] {
            assert!(circulant_fgn(1 << 10, h, &mut g).is_ok(), "H={h}");
        }
    }

    #[test]
    fn cholesky_guard() {
        let mut g = GaussianStream::new(0);
        assert!(matches!(
            cholesky_fgn(CHOLESKY_MAX + 1, 0.4, &mut g),
            Err(Error::LengthGuard { .. })
        ));
    }
}
