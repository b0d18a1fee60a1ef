//! Path-dependent claims on the running integral `I_t = int_0^t X_u du`.
//!
//! The pricing functions `F(t, I, X)` solve
//! `F_t + X F_I + sigma^2 X^2 F_XX / 2 = 0` exactly, so they can be hedged
//! with the same ledger as the European claims by carrying `I` in the
//! auxiliary coordinate of [`State`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hedging::{run_hedge, HedgeSetup, PnLLedger, WeightRule};
use crate::paths::{integral_path, PartitionSequence, Path};
use crate::pricing::{Jet, Pricer, State, AUX, T, X};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AsianKind {
    /// `F = I + X (T - t)`; pays `I_T`.
    RunningAverageForward,
    /// `F = (I + X (T - t))^2 + a(T - t) X^2`; pays `I_T^2`.
    SquaredAverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsianInstrument {
    pub kind: AsianKind,
    pub sigma: f64,
    pub maturity: f64,
}

/// Look up an Asian family by name (`runningAverageForward` or
/// `squaredAverage`).
pub fn asian_analytic(name: &str, sigma: f64, maturity: f64) -> Result<AsianInstrument> {
    let kind = match name {
        "runningAverageForward" | "running_average_forward" => AsianKind::RunningAverageForward,
        "squaredAverage" | "squared_average" => AsianKind::SquaredAverage,
        _ => {
            return Err(Error::Unknown {
                kind: "asian instrument",
                name: name.to_string(),
            })
        }
    };
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    if !(maturity > 0.0 && maturity.is_finite()) {
        return Err(Error::invalid(format!("maturity must be positive, got {maturity}")));
    }
    Ok(AsianInstrument { kind, sigma, maturity })
}

/// `a(tau)` and its first two `tau`-derivatives for `k = sigma^2`, the
/// solution of `a' = k a + k tau^2`, `a(0) = 0` in time to maturity.
pub fn squared_average_coefficient(k: f64, tau: f64) -> [f64; 3] {
    let x = k * tau;
    if x.abs() < 0.1 {
        // a = 2 tau^2 sum_{n>=1} x^n/(n+2)!, a' = 2 tau sum_{n>=1} x^n/(n+1)!
        let (mut a, mut da, mut term_a, mut term_da) = (0.0, 0.0, 1.0 / 2.0, 1.0);
        for n in 1..=16 {
            term_a *= x / (n as f64 + 2.0);
            term_da *= x / (n as f64 + 1.0);
            a += term_a;
            da += term_da;
        }
        return [2.0 * tau * tau * a, 2.0 * tau * da, 2.0 * x.exp_m1()];
    }
    let e = x.exp_m1();
    [
        2.0 * e / (k * k) - tau * tau - 2.0 * tau / k,
        2.0 * e / k - 2.0 * tau,
        2.0 * e,
    ]
}

impl AsianInstrument {
    fn check(&self, state: &State) -> Result<f64> {
        if !(state.t <= self.maturity) || !state.t.is_finite() {
            return Err(Error::invalid(format!(
                "time {} outside [0, {}]",
                state.t, self.maturity
            )));
        }
        Ok((self.maturity - state.t).max(0.0))
    }

    /// `F_t + X F_I + sigma^2 X^2 F_XX / 2` from the exact derivatives.
    pub fn pde_residual(&self, state: &State) -> Result<f64> {
        let j = self.jet(state)?;
        Ok(j.grad[T] + state.x * j.grad[AUX] + 0.5 * self.sigma * self.sigma * state.x * state.x * j.gamma())
    }
}

impl Pricer for AsianInstrument {
    fn label(&self) -> String {
        format!("{:?} sigma={}", self.kind, self.sigma)
    }

    fn maturity(&self) -> f64 {
        self.maturity
    }

    fn terminal(&self, state: &State) -> f64 {
        match self.kind {
            AsianKind::RunningAverageForward => state.aux,
            AsianKind::SquaredAverage => state.aux * state.aux,
        }
    }

    fn value(&self, state: &State) -> Result<f64> {
        Ok(self.jet(state)?.value)
    }

    fn difference(&self, from: &State, to: &State, _: f64, _: f64) -> Result<f64> {
        let (tu, tv) = (self.check(from)?, self.check(to)?);
        let (xu, xv) = (from.x, to.x);
        // change of I + X tau, grouped so no term is of the size of the price
        let du = (to.aux - from.aux) + (xv - xu) * tv - xu * (tu - tv);
        Ok(match self.kind {
            AsianKind::RunningAverageForward => du,
            AsianKind::SquaredAverage => {
                let k = self.sigma * self.sigma;
                let (au, av) = (
                    squared_average_coefficient(k, tu)[0],
                    squared_average_coefficient(k, tv)[0],
                );
                let (uu, uv) = (from.aux + xu * tu, to.aux + xv * tv);
                du * (uu + uv) + av * (xv - xu) * (xv + xu) + xu * xu * (av - au)
            }
        })
    }

    fn jet(&self, state: &State) -> Result<Jet> {
        let tau = self.check(state)?;
        let (i, x) = (state.aux, state.x);
        let mut j = Jet::constant(0.0);
        match self.kind {
            AsianKind::RunningAverageForward => {
                j.value = i + x * tau;
                j.grad = [-x, 1.0, tau];
                j.hess[X][T] = -1.0;
            }
            AsianKind::SquaredAverage => {
                let [a, da, d2a] = squared_average_coefficient(self.sigma * self.sigma, tau);
                let u = i + x * tau;
                j.value = u * u + a * x * x;
                j.grad = [-2.0 * u * x - da * x * x, 2.0 * u, 2.0 * u * tau + 2.0 * a * x];
                j.hess[T][T] = 2.0 * x * x + d2a * x * x;
                j.hess[AUX][T] = -2.0 * x;
                j.hess[AUX][AUX] = 2.0;
                j.hess[X][T] = -2.0 * u - 2.0 * tau * x - 2.0 * da * x;
                j.hess[X][AUX] = 2.0 * tau;
                j.hess[X][X] = 2.0 * tau * tau + 2.0 * a;
            }
        }
        Ok(j.symmetrize())
    }
}

/// Hedging rule for Asian targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AsianRule {
    /// Underlying plus a convex hedge, delta and gamma neutral.
    DeltaGamma,
    /// Underlying only; replicates when `[X]_t = int sigma^2 X^2 du`.
    DeltaOnlyQvMatched,
}

/// An Asian ledger together with a check of the quadratic-variation
/// assumption behind [`AsianRule::DeltaOnlyQvMatched`].
#[derive(Debug, Clone)]
pub struct AsianHedge {
    pub ledger: PnLLedger,
    /// `sqrt([log X]_T / T)` measured along the hedging partition.
    pub realized_sigma: f64,
    /// Set when the delta-only rule runs on a path whose realized
    /// volatility is more than 10% away from the target's.
    pub qv_mismatch: bool,
}

/// Hedge an Asian target along level `level`, with `I` integrated by the
/// trapezoid rule on the finest grid of `x`.
pub fn run_asian_hedge(
    x: &Path,
    seq: &PartitionSequence,
    level: u32,
    target: &AsianInstrument,
    hedges: &[&dyn Pricer],
    rule: AsianRule,
) -> Result<AsianHedge> {
    let integral = integral_path(x)?;
    let mut instruments: Vec<&dyn Pricer> = vec![target];
    instruments.extend_from_slice(hedges);
    let weight_rule = match rule {
        AsianRule::DeltaGamma => WeightRule::DeltaGamma,
        AsianRule::DeltaOnlyQvMatched => WeightRule::Delta,
    };
    let setup = HedgeSetup {
        price: x,
        aux: Some(&integral),
        seq,
        level,
        instruments: &instruments,
        rule: &weight_rule,
        t_cut: HedgeSetup::default_t_cut(seq),
        tolerances: Tolerances::default(),
    };
    let ledger = run_hedge(&setup)?;
    let realized_sigma = realized_log_vol(x, seq, level)?;
    let qv_mismatch = rule == AsianRule::DeltaOnlyQvMatched && (realized_sigma / target.sigma - 1.0).abs() > 0.1;
    Ok(AsianHedge {
        ledger,
        realized_sigma,
        qv_mismatch,
    })
}

/// Annualized volatility of `log X` from its quadratic variation at `level`.
pub fn realized_log_vol(x: &Path, seq: &PartitionSequence, level: u32) -> Result<f64> {
    if !x.is_positive() {
        return Err(Error::invalid("realized log-volatility needs a positive path"));
    }
    let v = x.restrict(&seq.level(level)?)?;
    let qv: f64 = v.windows(2).map(|w| (w[1] / w[0]).ln().powi(2)).sum();
    Ok((qv / seq.horizon()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{brownian_path, exp_price_path};
    use crate::pricing::{analytic_instrument, PricedInstrument, VolSource};

    /// RK4 on `a' = k a + k tau^2` in time to maturity.
    fn rk4(k: f64, tau: f64, steps: usize) -> f64 {
        let f = |s: f64, a: f64| k * a + k * s * s;
        let h = tau / steps as f64;
        let mut a = 0.0;
        for i in 0..steps {
            let s = i as f64 * h;
            let k1 = f(s, a);
            let k2 = f(s + h / 2.0, a + h / 2.0 * k1);
            let k3 = f(s + h / 2.0, a + h / 2.0 * k2);
            let k4 = f(s + h, a + h * k3);
            a += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        a
    }

    #[test]
    fn coefficient_matches_ode_solve() {
        for sigma in [0.05, 0.2, 0.4, 1.0] {
            for tau in [1e-4, 0.01, 0.5, 1.0, 3.0] {
                let k = sigma * sigma;
                let a = squared_average_coefficient(k, tau)[0];
                let r = rk4(k, tau, 4000);
                assert!(
                    (a - r).abs() <= 1e-12 * (1.0 + r.abs()) + 1e-13 * tau * tau,
                    "{sigma} {tau}: {a} {r}"
                );
            }
        }
    }

    #[test]
    fn series_and_closed_form_agree_at_switch() {
        let k = 0.04;
        let below = squared_average_coefficient(k, 0.0999999 / k);
        let above = squared_average_coefficient(k, 0.1 / k);
        for i in 0..3 {
            assert!((below[i] - above[i]).abs() <= 1e-5 * above[i].abs(), "{i}");
        }
        let tau = 0.0999999 / k;
        let e = (k * tau).exp_m1();
        let closed = 2.0 * e / (k * k) - tau * tau - 2.0 * tau / k;
        assert!((below[0] - closed).abs() <= 1e-12 * closed.abs());
    }

    #[test]
    fn pde_residual_vanishes_on_lattice() {
        for name in ["runningAverageForward", "squaredAverage"] {
            let inst = asian_analytic(name, 0.3, 1.0).unwrap();
            for t in [0.0, 0.25, 0.5, 0.9, 0.99] {
                for i in [0.0, 50.0, 200.0] {
                    for x in [20.0, 100.0, 500.0] {
                        let s = State::new(t, i, x);
                        let scale = inst.value(&s).unwrap().abs().max(1.0);
                        let r = inst.pde_residual(&s).unwrap();
                        assert!(r.abs() <= 1e-9 * scale, "{name} {t} {i} {x}: {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn jet_matches_finite_differences() {
        let inst = asian_analytic("squaredAverage", 0.3, 1.0).unwrap();
        let z = State::new(0.4, 37.0, 90.0);
        let j = inst.jet(&z).unwrap();
        let h = [1e-5, 1e-3, 1e-3];
        for a in 0..3 {
            let mut p = z.as_array();
            let mut m = z.as_array();
            p[a] += h[a];
            m[a] -= h[a];
            let (jp, jm) = (
                inst.jet(&State::from_array(p)).unwrap(),
                inst.jet(&State::from_array(m)).unwrap(),
            );
            let g = (jp.value - jm.value) / (2.0 * h[a]);
            assert!((g - j.grad[a]).abs() <= 1e-6 * (1.0 + g.abs()), "grad {a}");
            for b in 0..3 {
                let hb = (jp.grad[b] - jm.grad[b]) / (2.0 * h[a]);
                assert!((hb - j.hess[a][b]).abs() <= 1e-5 * (1.0 + hb.abs()), "hess {a}{b}");
            }
        }
    }

    #[test]
    fn differences_match_values() {
        for name in ["runningAverageForward", "squaredAverage"] {
            let q = asian_analytic(name, 0.3, 1.0).unwrap();
            let (a, b) = (State::new(0.5, 48.0, 97.0), State::new(0.5 + 1.0 / 1024.0, 48.1, 97.3));
            let (fa, fb) = (q.value(&a).unwrap(), q.value(&b).unwrap());
            let d = q.difference(&a, &b, fa, fb).unwrap();
            assert!((d - (fb - fa)).abs() <= 1e-12 * fb.abs(), "{name}: {d} {}", fb - fa);
        }
    }

    #[test]
    fn terminal_values() {
        let r = asian_analytic("runningAverageForward", 0.2, 2.0).unwrap();
        let q = asian_analytic("squaredAverage", 0.2, 2.0).unwrap();
        let s = State::new(2.0, 150.0, 80.0);
        assert_eq!(r.value(&s).unwrap(), 150.0);
        assert_eq!(q.value(&s).unwrap(), 150.0 * 150.0);
        assert!(asian_analytic("geometric", 0.2, 1.0).is_err());
    }

    #[test]
    fn self_hedge_is_exact() {
        let seq = PartitionSequence::dyadic(1.0, 8).unwrap();
        let x = exp_price_path(&brownian_path(&seq, 2, 1.0).unwrap(), 100.0, 0.2).unwrap();
        let q = asian_analytic("squaredAverage", 0.2, 1.0).unwrap();
        let rule = WeightRule::Fixed(vec![1.0]);
        let integral = integral_path(&x).unwrap();
        let inst: [&dyn Pricer; 2] = [&q, &q];
        let setup = HedgeSetup {
            price: &x,
            aux: Some(&integral),
            seq: &seq,
            level: 8,
            instruments: &inst,
            rule: &rule,
            t_cut: HedgeSetup::default_t_cut(&seq),
            tolerances: Tolerances::default(),
        };
        let l = run_hedge(&setup).unwrap();
        assert_eq!(l.replication_error, 0.0);
    }

    #[test]
    fn gamma_hedge_beats_delta_only_on_mismatched_paths() {
        let seq = PartitionSequence::dyadic(1.0, 12).unwrap();
        let x = exp_price_path(&brownian_path(&seq, 8, 1.0).unwrap(), 100.0, 0.4).unwrap();
        let q = asian_analytic("squaredAverage", 0.2, 1.0).unwrap();
        let u = PricedInstrument::new(analytic_instrument("identity", 1.0).unwrap(), VolSource::Fixed(0.2));
        let sq = PricedInstrument::new(analytic_instrument("squareExp", 1.0).unwrap(), VolSource::Fixed(0.2));
        let dg = run_asian_hedge(&x, &seq, 12, &q, &[&u, &sq], AsianRule::DeltaGamma).unwrap();
        let d = run_asian_hedge(&x, &seq, 12, &q, &[&u], AsianRule::DeltaOnlyQvMatched).unwrap();
        assert!(d.qv_mismatch && !dg.qv_mismatch);
        assert!(dg.ledger.replication_error.abs() * 20.0 < d.ledger.replication_error.abs());
    }
}
