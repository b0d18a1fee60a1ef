use crate::error::{Error, Result};
use crate::rng::GaussianStream;

use super::{Partition, PartitionSequence, Path};

/// Brownian motion with variance `scale^2 * t`, sampled exactly on the finest
/// grid of `seq` from independent Gaussian increments.
pub fn brownian_path(seq: &PartitionSequence, seed: u64, scale: f64) -> Result<Path> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::invalid(format!("scale must be positive, got {scale}")));
    }
    let grid = seq.finest();
    let mut gauss = GaussianStream::new(seed);
    let mut values = Vec::with_capacity(grid.len());
    values.push(0.0);
    let mut x = 0.0;
    for (u, v) in grid.pairs() {
        x += scale * (v - u).sqrt() * gauss.next_gaussian();
        values.push(x);
    }
    Path::new(grid, values, format!("brownian(seed={seed}, scale={scale})"))
}

/// `S_t = s0 * exp(sigma * driver_t)`.
pub fn exp_price_path(driver: &Path, s0: f64, sigma: f64) -> Result<Path> {
    if !(s0 > 0.0 && s0.is_finite()) {
        return Err(Error::invalid(format!("s0 must be positive, got {s0}")));
    }
    if !sigma.is_finite() {
        return Err(Error::invalid("sigma must be finite"));
    }
    let p = driver.map(
        |_, x| s0 * (sigma * x).exp(),
        format!("exp({sigma} * {}) * {s0}", driver.label()),
    )?;
    if !p.is_positive() {
        return Err(Error::invalid("exponential path underflowed to zero"));
    }
    Ok(p)
}

/// Geometric Brownian motion `s0 * exp(sigma B_t - sigma^2 t / 2)` driven by
/// [`brownian_path`] with the same seed.
pub fn gbm_path(seq: &PartitionSequence, seed: u64, s0: f64, sigma: f64) -> Result<Path> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    let b = brownian_path(seq, seed, 1.0)?;
    let half = 0.5 * sigma * sigma;
    let p = b.map(
        |t, x| s0 * (sigma * x - half * t).exp(),
        format!("gbm(seed={seed}, s0={s0}, sigma={sigma})"),
    )?;
    if !(s0 > 0.0) || !p.is_positive() {
        return Err(Error::invalid("gbm path must stay positive"));
    }
    Ok(p)
}

/// Running trapezoidal integral `I_t = int_0^t X_u du` on the input grid.
pub fn integral_path(path: &Path) -> Result<Path> {
    let t = path.times();
    let x = path.values();
    let mut values = Vec::with_capacity(x.len());
    values.push(0.0);
    let mut acc = 0.0;
    for i in 1..x.len() {
        acc += 0.5 * (x[i] + x[i - 1]) * (t[i] - t[i - 1]);
        values.push(acc);
    }
    Path::new(path.grid().clone(), values, format!("integral({})", path.label()))
}

pub fn constant_path(grid: &Partition, c: f64) -> Result<Path> {
    Path::new(grid.clone(), vec![c; grid.len()], format!("constant({c})"))
}

/// `X_t = a * t`.
pub fn linear_path(grid: &Partition, a: f64) -> Result<Path> {
    function_path(grid, |t| a * t, format!("linear({a})"))
}

pub fn function_path(grid: &Partition, f: impl Fn(f64) -> f64, label: impl Into<String>) -> Result<Path> {
    Path::new(grid.clone(), grid.times().iter().map(|&t| f(t)).collect(), label)
}
