use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

use super::black_scholes::{
    check_quote_args, closed_form_ladder, quadrature_ladder, quote_with, Greeks, LogLadder, QuoteMethod,
};
use super::payoff::{Payoff, PayoffKind};

/// Coordinate indices of a [`State`] inside [`Jet`] arrays.
pub const T: usize = 0;
pub const AUX: usize = 1;
pub const X: usize = 2;

/// Market state seen by a pricing function: time, an auxiliary coordinate
/// and the spot.
///
/// The auxiliary coordinate carries the instantaneous volatility for
/// volatility-path hedging and the running integral `I_t` for Asian
/// instruments; pricers that do not use it ignore it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub t: f64,
    pub aux: f64,
    pub x: f64,
}

impl State {
    pub fn new(t: f64, aux: f64, x: f64) -> Self {
        Self { t, aux, x }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.t, self.aux, self.x]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

/// Value, gradient and Hessian in the coordinates `(t, aux, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: [f64; 3],
    pub hess: [[f64; 3]; 3],
    pub reliable: bool,
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        Self {
            value,
            grad: [0.0; 3],
            hess: [[0.0; 3]; 3],
            reliable: true,
        }
    }

    pub fn delta(&self) -> f64 {
        self.grad[X]
    }

    pub fn gamma(&self) -> f64 {
        self.hess[X][X]
    }

    pub(crate) fn symmetrize(mut self) -> Self {
        for i in 0..3 {
            for j in 0..i {
                self.hess[j][i] = self.hess[i][j];
            }
        }
        self
    }
}

/// A pricing function `F(t, aux, x)` usable by the hedging ledger.
pub trait Pricer: Send + Sync + Debug {
    fn label(&self) -> String;

    fn maturity(&self) -> f64;

    /// Value at maturity.
    fn terminal(&self, state: &State) -> f64;

    /// Value at `state.t <= maturity`; the terminal value at maturity.
    fn value(&self, state: &State) -> Result<f64>;

    /// Derivatives up to second order at `state.t < maturity`.
    fn jet(&self, state: &State) -> Result<Jet>;

    /// `F(to) - F(from)` given both values. Closed-form families override
    /// this to difference the formula itself, which keeps the error at the
    /// size of the increment rather than of the prices.
    fn difference(&self, from: &State, to: &State, f_from: f64, f_to: f64) -> Result<f64> {
        let _ = (from, to);
        Ok(f_to - f_from)
    }
}

/// A European claim priced in the zero-rate Black-Scholes model, either from
/// a payoff or from a named exact PDE solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum Instrument {
    BlackScholes {
        payoff: Payoff,
    },
    /// `F(t, s) = s`.
    Identity {
        maturity: f64,
    },
    /// `F(t, s) = s^2 exp(sigma^2 (T - t))`.
    SquareExp {
        maturity: f64,
    },
}

/// Named exact solutions of the zero-rate Black-Scholes PDE.
pub fn analytic_instrument(name: &str, maturity: f64) -> Result<Instrument> {
    if !(maturity > 0.0 && maturity.is_finite()) {
        return Err(Error::invalid(format!("maturity must be positive, got {maturity}")));
    }
    match name {
        "identity" => Ok(Instrument::Identity { maturity }),
        "squareExp" | "square_exp" => Ok(Instrument::SquareExp { maturity }),
        other => Err(Error::Unknown {
            kind: "analytic instrument",
            name: other.to_string(),
        }),
    }
}

impl Instrument {
    pub fn black_scholes(payoff: Payoff) -> Self {
        Instrument::BlackScholes { payoff }
    }

    pub fn maturity(&self) -> f64 {
        match self {
            Instrument::BlackScholes { payoff } => payoff.maturity,
            Instrument::Identity { maturity } | Instrument::SquareExp { maturity } => *maturity,
        }
    }

    pub fn family(&self) -> String {
        match self {
            Instrument::BlackScholes { payoff } => format!("blackScholes({:?})", payoff.kind),
            Instrument::Identity { .. } => "analytic(identity)".into(),
            Instrument::SquareExp { .. } => "analytic(squareExp)".into(),
        }
    }

    pub fn payoff_value(&self, s: f64) -> f64 {
        match self {
            Instrument::BlackScholes { payoff } => payoff.eval(s),
            Instrument::Identity { .. } => s,
            Instrument::SquareExp { .. } => s * s,
        }
    }

    fn check(&self, sigma: f64, t: f64, s: f64) -> Result<()> {
        match self {
            Instrument::BlackScholes { payoff } => check_quote_args(payoff, sigma, t, s),
            _ => check_quote_args(&Payoff::identity(self.maturity())?, sigma, t, s),
        }
    }

    /// Price at volatility `sigma`, time `t` and spot `s`.
    pub fn price(&self, sigma: f64, t: f64, s: f64) -> Result<f64> {
        self.check(sigma, t, s)?;
        let tau = self.maturity() - t;
        if tau < Tolerances::default().near_expiry {
            return Ok(self.payoff_value(s));
        }
        Ok(match self {
            Instrument::BlackScholes { payoff } => match closed_form_ladder(&payoff.kind, sigma * sigma * tau, s) {
                Some(l) => l.value(),
                None => quote_with(payoff, sigma, t, s, QuoteMethod::Auto, &Tolerances::default())?.value,
            },
            Instrument::Identity { .. } => s,
            Instrument::SquareExp { .. } => s * s * (sigma * sigma * tau).exp(),
        })
    }

    /// Greeks at volatility `sigma`.
    pub fn quote(&self, sigma: f64, t: f64, s: f64) -> Result<Greeks> {
        self.check(sigma, t, s)?;
        match self {
            Instrument::BlackScholes { payoff } => {
                quote_with(payoff, sigma, t, s, QuoteMethod::Auto, &Tolerances::default())
            }
            Instrument::Identity { .. } => Ok(Greeks {
                value: s,
                delta: 1.0,
                gamma: 0.0,
                theta: 0.0,
                vega: 0.0,
                reliable: true,
            }),
            Instrument::SquareExp { maturity } => {
                let tau = maturity - t;
                let e = (sigma * sigma * tau).exp();
                Ok(Greeks {
                    value: s * s * e,
                    delta: 2.0 * s * e,
                    gamma: 2.0 * e,
                    theta: -sigma * sigma * s * s * e,
                    vega: 2.0 * sigma * tau * s * s * e,
                    reliable: true,
                })
            }
        }
    }

    /// Derivatives in the coordinates `(t, sigma, s)`.
    pub fn vol_jet(&self, sigma: f64, t: f64, s: f64) -> Result<Jet> {
        self.check(sigma, t, s)?;
        let tau = self.maturity() - t;
        let tol = Tolerances::default();
        if tau < tol.near_expiry {
            let g = self.quote(sigma, t, s)?;
            let mut j = Jet::constant(g.value);
            j.grad[X] = g.delta;
            j.reliable = false;
            return Ok(j);
        }
        match self {
            Instrument::BlackScholes { payoff } => {
                let v = sigma * sigma * tau;
                let ladder = match closed_form_ladder(&payoff.kind, v, s) {
                    Some(l) => l,
                    None => quadrature_ladder(payoff, v, s, 4, &tol)?,
                };
                Ok(ladder_jet(&ladder, sigma, tau, s))
            }
            Instrument::Identity { .. } => {
                let mut j = Jet::constant(s);
                j.grad[X] = 1.0;
                Ok(j)
            }
            Instrument::SquareExp { .. } => {
                let e = (sigma * sigma * tau).exp();
                let f = s * s * e;
                let (s2, t2) = (sigma * sigma, tau * tau);
                let mut j = Jet::constant(f);
                j.grad = [-s2 * f, 2.0 * sigma * tau * f, 2.0 * s * e];
                j.hess[T][T] = s2 * s2 * f;
                j.hess[AUX][T] = (-2.0 * sigma - 2.0 * s2 * sigma * tau) * f;
                j.hess[AUX][AUX] = (2.0 * tau + 4.0 * s2 * t2) * f;
                j.hess[X][T] = -s2 * 2.0 * s * e;
                j.hess[X][AUX] = 4.0 * sigma * tau * s * e;
                j.hess[X][X] = 2.0 * e;
                Ok(j.symmetrize())
            }
        }
    }
}

/// Chain rule from `(v, s)` to `(t, sigma, s)` with `v = sigma^2 (T - t)`.
fn ladder_jet(l: &LogLadder, sigma: f64, tau: f64, s: f64) -> Jet {
    let (fv, fsv, fvv) = (l.dv(), l.dsv(s), l.dvv());
    let v_t = -sigma * sigma;
    let v_sig = 2.0 * sigma * tau;
    let v_tsig = -2.0 * sigma;
    let v_sigsig = 2.0 * tau;
    let mut j = Jet::constant(l.value());
    j.grad = [fv * v_t, fv * v_sig, l.delta(s)];
    j.hess[T][T] = fvv * v_t * v_t;
    j.hess[AUX][T] = fvv * v_t * v_sig + fv * v_tsig;
    j.hess[AUX][AUX] = fvv * v_sig * v_sig + fv * v_sigsig;
    j.hess[X][T] = fsv * v_t;
    j.hess[X][AUX] = fsv * v_sig;
    j.hess[X][X] = l.gamma(s);
    j.symmetrize()
}

/// Where the volatility of a quote comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolSource {
    Fixed(f64),
    /// Read from the auxiliary coordinate of the state.
    FromState,
}

/// An [`Instrument`] bound to a volatility source; the hedging-side view.
#[derive(Debug, Clone, PartialEq)]
pub struct PricedInstrument {
    pub instrument: Instrument,
    pub vol: VolSource,
}

impl PricedInstrument {
    pub fn new(instrument: Instrument, vol: VolSource) -> Self {
        Self { instrument, vol }
    }

    fn sigma(&self, state: &State) -> f64 {
        match self.vol {
            VolSource::Fixed(s) => s,
            VolSource::FromState => state.aux,
        }
    }
}

impl Pricer for PricedInstrument {
    fn label(&self) -> String {
        format!("{} @ {:?}", self.instrument.family(), self.vol)
    }

    fn maturity(&self) -> f64 {
        self.instrument.maturity()
    }

    fn terminal(&self, state: &State) -> f64 {
        self.instrument.payoff_value(state.x)
    }

    fn value(&self, state: &State) -> Result<f64> {
        if state.t >= self.maturity() {
            return Ok(self.terminal(state));
        }
        self.instrument.price(self.sigma(state), state.t, state.x)
    }

    fn difference(&self, from: &State, to: &State, f_from: f64, f_to: f64) -> Result<f64> {
        match self.instrument {
            Instrument::Identity { .. } => Ok(to.x - from.x),
            Instrument::SquareExp { maturity } => {
                let exponent = |z: &State| {
                    let s = self.sigma(z);
                    s * s * (maturity - z.t).max(0.0)
                };
                let (eu, ku) = (exponent(from).exp(), exponent(to) - exponent(from));
                let ev = eu * ku.exp();
                Ok((to.x - from.x) * (to.x + from.x) * ev + from.x * from.x * eu * ku.exp_m1())
            }
            Instrument::BlackScholes { .. } => Ok(f_to - f_from),
        }
    }

    fn jet(&self, state: &State) -> Result<Jet> {
        let mut j = self.instrument.vol_jet(self.sigma(state), state.t, state.x)?;
        if let VolSource::Fixed(_) = self.vol {
            j.grad[AUX] = 0.0;
            for k in 0..3 {
                j.hess[AUX][k] = 0.0;
                j.hess[k][AUX] = 0.0;
            }
        }
        Ok(j)
    }
}

impl PayoffKind {
    pub fn strike(&self) -> Option<f64> {
        match *self {
            PayoffKind::Call { strike } | PayoffKind::Put { strike } => Some(strike),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_names() {
        assert!(matches!(
            analytic_instrument("identity", 1.0),
            Ok(Instrument::Identity { .. })
        ));
        assert!(matches!(
            analytic_instrument("squareExp", 1.0),
            Ok(Instrument::SquareExp { .. })
        ));
        assert!(matches!(analytic_instrument("cube", 1.0), Err(Error::Unknown { .. })));
    }

    #[test]
    fn square_exp_equals_power_two_payoff() {
        let a = analytic_instrument("squareExp", 1.5).unwrap();
        let b = Instrument::black_scholes(Payoff::power(2.0, 1.5).unwrap());
        for (sig, t, s) in [(0.2, 0.0, 100.0), (0.5, 1.2, 30.0), (0.05, 1.4999, 250.0)] {
            let ja = a.vol_jet(sig, t, s).unwrap();
            let jb = b.vol_jet(sig, t, s).unwrap();
            let scale = ja.value.abs();
            assert!((ja.value - jb.value).abs() < 1e-12 * scale);
            for i in 0..3 {
                assert!((ja.grad[i] - jb.grad[i]).abs() < 1e-10 * scale, "grad {i}");
                for k in 0..3 {
                    assert!((ja.hess[i][k] - jb.hess[i][k]).abs() < 1e-10 * scale, "hess {i}{k}");
                }
            }
        }
    }

    #[test]
    fn identity_second_derivatives_vanish() {
        let id = analytic_instrument("identity", 1.0).unwrap();
        let j = id.vol_jet(0.3, 0.4, 80.0).unwrap();
        assert_eq!(j.hess, [[0.0; 3]; 3]);
        assert_eq!(j.delta(), 1.0);
    }

    /// Every jet entry against central differences of `price`.
    #[test]
    fn call_jet_matches_finite_differences() {
        let inst = Instrument::black_scholes(Payoff::call(100.0, 1.0).unwrap());
        let (sig, t, s) = (0.25, 0.3, 95.0);
        let j = inst.vol_jet(sig, t, s).unwrap();
        let f = |z: [f64; 3]| inst.price(z[1], z[0], z[2]).unwrap();
        let h = [1e-4, 1e-4, 1e-2];
        let z0 = [t, sig, s];
        for a in 0..3 {
            let mut zp = z0;
            let mut zm = z0;
            zp[a] += h[a];
            zm[a] -= h[a];
            let d = (f(zp) - f(zm)) / (2.0 * h[a]);
            assert!(
                (d - j.grad[a]).abs() < 1e-6 * (1.0 + d.abs()),
                "grad {a}: {d} vs {}",
                j.grad[a]
            );
            for b in 0..3 {
                let mut pp = z0;
                let mut pm = z0;
                let mut mp = z0;
                let mut mm = z0;
                pp[a] += h[a];
                pp[b] += h[b];
                pm[a] += h[a];
                pm[b] -= h[b];
                mp[a] -= h[a];
                mp[b] += h[b];
                mm[a] -= h[a];
                mm[b] -= h[b];
                let d2 = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h[a] * h[b]);
                assert!(
                    (d2 - j.hess[a][b]).abs() < 1e-4 * (1.0 + d2.abs()),
                    "hess {a}{b}: {d2} vs {}",
                    j.hess[a][b]
                );
            }
        }
    }

    #[test]
    fn analytic_differences_match_values() {
        for name in ["identity", "squareExp"] {
            for vol in [VolSource::Fixed(0.3), VolSource::FromState] {
                let p = PricedInstrument::new(analytic_instrument(name, 1.0).unwrap(), vol);
                let (a, b) = (State::new(0.25, 0.2, 97.0), State::new(0.375, 0.25, 101.5));
                let (fa, fb) = (p.value(&a).unwrap(), p.value(&b).unwrap());
                let d = p.difference(&a, &b, fa, fb).unwrap();
                assert!((d - (fb - fa)).abs() <= 1e-12 * fb.abs(), "{name}");
                let end = State::new(1.0, 0.2, 99.0);
                let d = p.difference(&a, &end, fa, p.value(&end).unwrap()).unwrap();
                assert!((d - (p.terminal(&end) - fa)).abs() <= 1e-12 * fa.abs());
            }
        }
    }

    #[test]
    fn fixed_vol_zeroes_aux_block() {
        let p = PricedInstrument::new(
            Instrument::black_scholes(Payoff::call(100.0, 1.0).unwrap()),
            VolSource::Fixed(0.2),
        );
        let j = p.jet(&State::new(0.5, 123.0, 100.0)).unwrap();
        assert_eq!(j.grad[AUX], 0.0);
        assert!(j.hess.iter().all(|r| r[AUX] == 0.0));
        let v = PricedInstrument::new(p.instrument.clone(), VolSource::FromState);
        let jv = v.jet(&State::new(0.5, 0.2, 100.0)).unwrap();
        assert!(jv.grad[AUX] > 0.0);
        assert_eq!(jv.value, j.value);
        assert_eq!(p.value(&State::new(1.0, 0.0, 120.0)).unwrap(), 20.0);
    }
}
