use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pricing::Greeks;

/// How the hedge quantities `q^1..q^n` are chosen at each rebalance time;
/// the target always carries `q^0 = -1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    /// One hedge, delta neutral.
    Delta,
    /// Underlying and one option, delta and gamma neutral.
    DeltaGamma,
    /// Constant quantities, one per hedge.
    Fixed(Vec<f64>),
}

impl WeightRule {
    pub fn hedge_count(&self) -> Option<usize> {
        match self {
            WeightRule::Delta => Some(1),
            WeightRule::DeltaGamma => Some(2),
            WeightRule::Fixed(q) => Some(q.len()),
        }
    }
}

/// Delta-neutral quantity of a single hedge: `q^1 = delta^0 / delta^1`.
pub fn solve_delta_weights(target: &Greeks, hedges: &[Greeks], delta_floor: f64) -> Result<Vec<f64>> {
    let [hedge] = hedges else {
        return Err(Error::invalid(format!(
            "delta hedging uses exactly one hedge, got {}",
            hedges.len()
        )));
    };
    if hedge.delta.abs() < delta_floor {
        return Err(Error::DegenerateHedge { delta: hedge.delta });
    }
    Ok(vec![target.delta / hedge.delta])
}

/// Delta- and gamma-neutral quantities `[q_underlying, q_option]`.
///
/// The underlying has no gamma, so the 2x2 system is triangular:
/// the option absorbs the gamma and the underlying the remaining delta.
pub fn solve_delta_gamma_weights(
    target: &Greeks,
    underlying: &Greeks,
    option: &Greeks,
    gamma_floor: f64,
) -> Result<[f64; 2]> {
    if option.gamma.abs() <= gamma_floor || !option.gamma.is_finite() {
        return Err(Error::NearExpiryDegeneracy {
            t: f64::NAN,
            gamma: option.gamma,
            floor: gamma_floor,
        });
    }
    if underlying.gamma != 0.0 {
        return Err(Error::invalid("the first delta-gamma hedge must be gamma free"));
    }
    if underlying.delta.abs() < 1e-12 {
        return Err(Error::DegenerateHedge {
            delta: underlying.delta,
        });
    }
    let q_option = target.gamma / option.gamma;
    let q_underlying = (target.delta - q_option * option.delta) / underlying.delta;
    Ok([q_underlying, q_option])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pricing::{analytic_instrument, bs_quote, Payoff};

    fn g(delta: f64, gamma: f64) -> Greeks {
        Greeks {
            value: 0.0,
            delta,
            gamma,
            theta: 0.0,
            vega: 0.0,
            reliable: true,
        }
    }

    #[test]
    fn delta_weights_basic() {
        let under = g(1.0, 0.0);
        assert_eq!(solve_delta_weights(&under, &[under], 1e-12).unwrap(), vec![1.0]);
        assert_eq!(solve_delta_weights(&g(0.0, 0.0), &[under], 1e-12).unwrap(), vec![0.0]);
        assert!(matches!(
            solve_delta_weights(&under, &[g(1e-13, 0.0)], 1e-12),
            Err(Error::DegenerateHedge { .. })
        ));
        assert!(solve_delta_weights(&under, &[under, under], 1e-12).is_err());
    }

    #[test]
    fn delta_weight_of_atm_call() {
        let call = bs_quote(&Payoff::call(100.0, 1.0).unwrap(), 0.2, 0.0, 100.0).unwrap();
        let q = solve_delta_weights(&call, &[g(1.0, 0.0)], 1e-12).unwrap();
        // N(d1) at 40 digits
        assert!((q[0] - 0.539_827_837_277_029).abs() < 1e-14);
    }

    #[test]
    fn delta_gamma_identity_cases() {
        let under = g(1.0, 0.0);
        let opt = g(0.4, 0.02);
        let [qu, qo] = solve_delta_gamma_weights(&opt, &under, &opt, 1e-10).unwrap();
        assert_eq!((qu, qo), (0.0, 1.0));
        let [qu, qo] = solve_delta_gamma_weights(&under, &under, &opt, 1e-10).unwrap();
        assert_eq!((qu, qo), (1.0, 0.0));
        assert!(matches!(
            solve_delta_gamma_weights(&opt, &under, &g(0.0, 1e-11), 1e-10),
            Err(Error::NearExpiryDegeneracy { .. })
        ));
    }

    #[test]
    fn delta_gamma_call_spread_is_neutral() {
        let target = bs_quote(&Payoff::call(100.0, 1.0).unwrap(), 0.2, 0.0, 100.0).unwrap();
        let hedge = bs_quote(&Payoff::call(110.0, 1.0).unwrap(), 0.2, 0.0, 100.0).unwrap();
        let under = analytic_instrument("identity", 1.0)
            .unwrap()
            .quote(0.2, 0.0, 100.0)
            .unwrap();
        let [qu, qo] = solve_delta_gamma_weights(&target, &under, &hedge, 1e-10).unwrap();
        // gamma ratio and residual delta from 40-digit closed forms
        assert!((qo - 1.068_114_868_764_158_6).abs() < 1e-12);
        assert!((qu - 0.162_512_316_910_077_4).abs() < 1e-12);
        let delta_sum = -target.delta + qu * under.delta + qo * hedge.delta;
        let gamma_sum = -target.gamma + qu * under.gamma + qo * hedge.gamma;
        assert!(delta_sum.abs() < 1e-12);
        assert!(gamma_sum.abs() < 1e-12);
    }
}
