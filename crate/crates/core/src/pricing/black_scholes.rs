//! Zero-rate Black-Scholes prices.
//!
//! Everything is expressed through the total variance `v = sigma^2 (T - t)`
//! and the log-price derivatives `L_k = d^k F / d(ln s)^k`. For any payoff
//! `L_k = v^(-k/2) E[f(S_T) He_k(Z)]`, the kernel-differentiated form, and
//! `dF/dv = (L_2 - L_1) / 2`, which is the Black-Scholes PDE in disguise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

use super::normal::{hermite_he, norm_cdf, norm_pdf};
use super::payoff::{Payoff, PayoffKind};
use super::quadrature::{gauss_hermite, gauss_legendre, QuadratureRule};

/// Price and first-order sensitivities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Greeks {
    pub value: f64,
    pub delta: f64,
    pub gamma: f64,
    pub theta: f64,
    pub vega: f64,
    /// False inside the near-expiry guard, where greeks are the payoff's.
    pub reliable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuoteMethod {
    /// Closed form when the payoff has one, quadrature otherwise.
    Auto,
    Quadrature,
}

/// `L_0..=L_4`: price and its first four derivatives in `ln s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLadder(pub [f64; 5]);

impl LogLadder {
    pub fn value(&self) -> f64 {
        self.0[0]
    }

    pub fn delta(&self, s: f64) -> f64 {
        self.0[1] / s
    }

    pub fn gamma(&self, s: f64) -> f64 {
        (self.0[2] - self.0[1]) / (s * s)
    }

    pub fn third(&self, s: f64) -> f64 {
        (self.0[3] - 3.0 * self.0[2] + 2.0 * self.0[1]) / (s * s * s)
    }

    /// dF/dv
    pub fn dv(&self) -> f64 {
        0.5 * (self.0[2] - self.0[1])
    }

    /// d^2F/(ds dv)
    pub fn dsv(&self, s: f64) -> f64 {
        0.5 * (self.0[3] - self.0[2]) / s
    }

    /// d^2F/dv^2
    pub fn dvv(&self) -> f64 {
        0.25 * (self.0[4] - 2.0 * self.0[3] + self.0[2])
    }
}

pub(crate) fn check_quote_args(payoff: &Payoff, sigma: f64, t: f64, s: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::invalid(format!("spot must be positive, got {s}")));
    }
    if !(t >= 0.0 && t <= payoff.maturity) {
        return Err(Error::invalid(format!("time {t} outside [0, {}]", payoff.maturity)));
    }
    Ok(())
}

/// Quote a European payoff at time `t` and spot `s`.
pub fn bs_quote(payoff: &Payoff, sigma: f64, t: f64, s: f64) -> Result<Greeks> {
    quote_with(payoff, sigma, t, s, QuoteMethod::Auto, &Tolerances::default())
}

/// As [`bs_quote`] but always through quadrature of the lognormal kernel.
pub fn bs_quote_quadrature(payoff: &Payoff, sigma: f64, t: f64, s: f64) -> Result<Greeks> {
    quote_with(payoff, sigma, t, s, QuoteMethod::Quadrature, &Tolerances::default())
}

pub(crate) fn quote_with(
    payoff: &Payoff,
    sigma: f64,
    t: f64,
    s: f64,
    method: QuoteMethod,
    tol: &Tolerances,
) -> Result<Greeks> {
    check_quote_args(payoff, sigma, t, s)?;
    let tau = payoff.maturity - t;
    if tau < tol.near_expiry {
        return Ok(intrinsic_greeks(payoff, s));
    }
    if method == QuoteMethod::Auto {
        if let Some(g) = vanilla_greeks(&payoff.kind, sigma, tau, s) {
            return Ok(g);
        }
    }
    let v = sigma * sigma * tau;
    let l = quadrature_ladder(payoff, v, s, 2, tol)?;
    let s2g = l.0[2] - l.0[1];
    Ok(Greeks {
        value: l.value(),
        delta: l.delta(s),
        gamma: l.gamma(s),
        theta: -0.5 * sigma * sigma * s2g,
        vega: sigma * tau * s2g,
        reliable: true,
    })
}

fn intrinsic_greeks(payoff: &Payoff, s: f64) -> Greeks {
    let value = payoff.eval(s);
    let h = 1e-6 * s;
    let delta = match payoff.kind {
        PayoffKind::Call { strike } => f64::from(u8::from(s > strike)),
        PayoffKind::Put { strike } => -f64::from(u8::from(s < strike)),
        PayoffKind::Identity => 1.0,
        _ => (payoff.eval(s + h) - payoff.eval(s - h)) / (2.0 * h),
    };
    Greeks {
        value,
        delta,
        gamma: 0.0,
        theta: 0.0,
        vega: 0.0,
        reliable: false,
    }
}

/// Textbook closed forms for calls and puts.
fn vanilla_greeks(kind: &PayoffKind, sigma: f64, tau: f64, s: f64) -> Option<Greeks> {
    let (strike, is_call) = match *kind {
        PayoffKind::Call { strike } => (strike, true),
        PayoffKind::Put { strike } => (strike, false),
        _ => return None,
    };
    let sq = sigma * tau.sqrt();
    let d1 = (s / strike).ln() / sq + 0.5 * sq;
    let d2 = d1 - sq;
    let pdf = norm_pdf(d1);
    let (value, delta) = if is_call {
        (s * norm_cdf(d1) - strike * norm_cdf(d2), norm_cdf(d1))
    } else {
        (strike * norm_cdf(-d2) - s * norm_cdf(-d1), -norm_cdf(-d1))
    };
    Some(Greeks {
        value,
        delta,
        gamma: pdf / (s * sq),
        theta: -s * pdf * sigma / (2.0 * tau.sqrt()),
        vega: s * pdf * tau.sqrt(),
        reliable: true,
    })
}

/// Log-price derivative ladder at total variance `v > 0`.
pub fn log_ladder(payoff: &Payoff, v: f64, s: f64, method: QuoteMethod) -> Result<LogLadder> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::invalid(format!("total variance must be positive, got {v}")));
    }
    if method == QuoteMethod::Auto {
        if let Some(l) = closed_form_ladder(&payoff.kind, v, s) {
            return Ok(l);
        }
    }
    quadrature_ladder(payoff, v, s, 4, &Tolerances::default())
}

pub(crate) fn closed_form_ladder(kind: &PayoffKind, v: f64, s: f64) -> Option<LogLadder> {
    match *kind {
        PayoffKind::Identity => Some(LogLadder([s; 5])),
        PayoffKind::Power { exponent: p } => {
            let value = s.powf(p) * (0.5 * p * (p - 1.0) * v).exp();
            Some(LogLadder([
                value,
                p * value,
                p * p * value,
                p.powi(3) * value,
                p.powi(4) * value,
            ]))
        }
        PayoffKind::Call { strike } | PayoffKind::Put { strike } => {
            let is_call = matches!(kind, PayoffKind::Call { .. });
            let sq = v.sqrt();
            let d1 = (s / strike).ln() / sq + 0.5 * sq;
            let d2 = d1 - sq;
            let (value, base) = if is_call {
                (s * norm_cdf(d1) - strike * norm_cdf(d2), s * norm_cdf(d1))
            } else {
                (strike * norm_cdf(-d2) - s * norm_cdf(-d1), -s * norm_cdf(-d1))
            };
            // d^j/dx^j [K phi(d2) / sqrt(v)] with x = ln s and dd2/dx = 1/sqrt(v)
            let kphi = strike * norm_pdf(d2);
            let a = |j: usize| -> f64 {
                let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * kphi * hermite_he(j, d2) / sq.powi(j as i32 + 1)
            };
            let l2 = base + a(0);
            let l3 = l2 + a(1);
            let l4 = l3 + a(2);
            Some(LogLadder([value, base, l2, l3, l4]))
        }
        PayoffKind::Tabulated(_) => None,
    }
}

const GH_NODES: usize = 64;
const GL_NODES: usize = 16;
const Z_LOW: f64 = -14.0;
const Z_HIGH: f64 = 14.0;
const PIECE: f64 = 2.0;

/// Integrals `E[f(S_T) He_k(Z)]` and `E[|f(S_T) He_k(Z)|]` for `k <= order`.
fn moments(payoff: &Payoff, v: f64, s: f64, order: usize, fine: bool) -> ([f64; 5], [f64; 5]) {
    let sq = v.sqrt();
    let mut sum = [0.0; 5];
    let mut abs = [0.0; 5];
    let mut accumulate = |z: f64, w: f64| {
        let f = payoff.eval(s * (sq * z - 0.5 * v).exp());
        if f == 0.0 {
            return;
        }
        let (mut a, mut b) = (1.0, z);
        for k in 0..=order {
            let he = match k {
                0 => 1.0,
                1 => z,
                _ => {
                    let c = z * b - (k - 1) as f64 * a;
                    a = b;
                    b = c;
                    c
                }
            };
            sum[k] += w * f * he;
            abs[k] += w * (f * he).abs();
        }
    };
    let breaks = payoff.breakpoints();
    if breaks.is_empty() {
        let rule = gauss_hermite(if fine { 2 * GH_NODES } else { GH_NODES });
        for (z, w) in rule.nodes.iter().zip(&rule.weights) {
            accumulate(*z, *w);
        }
    } else {
        let rule: QuadratureRule = gauss_legendre(if fine { 2 * GL_NODES } else { GL_NODES });
        let hi = Z_HIGH + 2.0 * sq;
        let mut cuts: Vec<f64> = breaks
            .iter()
            .map(|b| ((b / s).ln() + 0.5 * v) / sq)
            .filter(|z| *z > Z_LOW && *z < hi)
            .collect();
        let mut z = Z_LOW;
        while z < hi {
            cuts.push(z);
            z += PIECE;
        }
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let phi_norm = (2.0 * std::f64::consts::PI).sqrt().recip();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                let z = mid + half * x;
                accumulate(z, half * wt * phi_norm * (-0.5 * z * z).exp());
            }
        }
    }
    (sum, abs)
}

pub(crate) fn quadrature_ladder(payoff: &Payoff, v: f64, s: f64, order: usize, tol: &Tolerances) -> Result<LogLadder> {
    let (coarse, _) = moments(payoff, v, s, order, false);
    let (fine, mass) = moments(payoff, v, s, order, true);
    const WHAT: [&str; 5] = ["L0", "L1", "L2", "L3", "L4"];
    let mut out = [0.0; 5];
    for k in 0..=order {
        let scale = mass[k].max(f64::MIN_POSITIVE);
        let rel = (fine[k] - coarse[k]).abs() / scale;
        if rel > tol.quadrature_rel {
            return Err(Error::QuadratureNonConvergence {
                what: WHAT[k],
                disagreement: rel,
            });
        }
        out[k] = fine[k] / v.sqrt().powi(k as i32);
    }
    Ok(LogLadder(out))
}
