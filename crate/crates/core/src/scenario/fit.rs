use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares slope of `log2(median)` against level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConvergenceFit {
    Rate {
        slope: f64,
        stderr: f64,
    },
    /// Some median is zero: the experiment is exact to round-off and no
    /// rate is defined.
    Converged,
}

impl ConvergenceFit {
    pub fn slope(&self) -> Option<f64> {
        match self {
            ConvergenceFit::Rate { slope, .. } => Some(*slope),
            ConvergenceFit::Converged => None,
        }
    }
}

pub const MIN_FIT_LEVELS: usize = 4;

/// Fit `log2(median) = a + slope * level`.
pub fn fit_convergence(levels: &[u32], medians: &[f64]) -> Result<ConvergenceFit> {
    if levels.len() != medians.len() {
        return Err(Error::invalid("levels and medians differ in length"));
    }
    if levels.len() < MIN_FIT_LEVELS {
        return Err(Error::TooFewLevels {
            needed: MIN_FIT_LEVELS,
            got: levels.len(),
        });
    }
    if medians.iter().any(|m| m.is_nan()) {
        return Err(Error::invalid("median is NaN"));
    }
    if medians.iter().any(|&m| m <= 0.0) {
        return Ok(ConvergenceFit::Converged);
    }
    let n = levels.len() as f64;
    let x: Vec<f64> = levels.iter().map(|&l| l as f64).collect();
    let y: Vec<f64> = medians.iter().map(|m| m.log2()).collect();
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let ssr: f64 = x.iter().zip(&y).map(|(a, b)| (b - icept - slope * a).powi(2)).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(ConvergenceFit::Rate { slope, stderr })
}

/// Summary statistics of one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub level: u32,
    pub mesh: f64,
    pub runs: usize,
    pub failed: usize,
    pub median: f64,
    pub mean: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub max: f64,
}

impl LevelStats {
    /// Statistics of `values`, which must be non-empty and free of NaN.
    pub fn from_values(level: u32, mesh: f64, values: &[f64], failed: usize) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| quantile_sorted(&v, p);
        let (q1, q3) = (q(0.25), q(0.75));
        Self {
            level,
            mesh,
            runs: v.len(),
            failed,
            median: q(0.5),
            mean: crate::summation::kahan_sum(v.iter().copied()) / v.len() as f64,
            q1,
            q3,
            iqr: q3 - q1,
            max: v.last().copied().unwrap_or(f64::NAN),
        }
    }
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let h = p * (n - 1) as f64;
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(n - 1);
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        }
    }
}
