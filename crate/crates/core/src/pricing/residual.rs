use crate::error::Result;

use super::black_scholes::Greeks;
use super::instrument::Instrument;

/// `theta + sigma^2 s^2 gamma / 2`, zero for solutions of the zero-rate
/// Black-Scholes PDE.
pub fn pde_residual(instr: &Instrument, sigma: f64, t: f64, s: f64) -> Result<f64> {
    let g = instr.quote(sigma, t, s)?;
    Ok(g.theta + 0.5 * sigma * sigma * s * s * g.gamma)
}

/// As [`pde_residual`] with finite-difference greeks.
pub fn pde_residual_fd(instr: &Instrument, sigma: f64, t: f64, s: f64) -> Result<f64> {
    let g = fd_greeks(instr, sigma, t, s)?;
    Ok(g.theta + 0.5 * sigma * sigma * s * s * g.gamma)
}

/// `vega - sigma (T - t) s^2 gamma`.
pub fn vega_gamma_defect(instr: &Instrument, sigma: f64, t: f64, s: f64) -> Result<f64> {
    let g = instr.quote(sigma, t, s)?;
    let tau = instr.maturity() - t;
    Ok(g.vega - sigma * tau * s * s * g.gamma)
}

/// Central-difference greeks of [`Instrument::price`] with spot step
/// `max(1e-5, 1e-5 s)`.
pub fn fd_greeks(instr: &Instrument, sigma: f64, t: f64, s: f64) -> Result<Greeks> {
    let h = (1e-5 * s).max(1e-5);
    let tau = instr.maturity() - t;
    let ht = (1e-5 * instr.maturity()).min(0.5 * tau);
    let hv = 1e-5 * sigma.max(1e-3);
    let p = |sig: f64, tt: f64, ss: f64| instr.price(sig, tt, ss);
    let value = p(sigma, t, s)?;
    let up = p(sigma, t, s + h)?;
    let dn = p(sigma, t, s - h)?;
    // one-sided in time at t = 0
    let theta = if t >= ht {
        (p(sigma, t + ht, s)? - p(sigma, t - ht, s)?) / (2.0 * ht)
    } else {
        (-3.0 * value + 4.0 * p(sigma, t + ht, s)? - p(sigma, t + 2.0 * ht, s)?) / (2.0 * ht)
    };
    Ok(Greeks {
        value,
        delta: (up - dn) / (2.0 * h),
        gamma: (up - 2.0 * value + dn) / (h * h),
        theta,
        vega: (p(sigma + hv, t, s)? - p(sigma - hv, t, s)?) / (2.0 * hv),
        reliable: true,
    })
}
