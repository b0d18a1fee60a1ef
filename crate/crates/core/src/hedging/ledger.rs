use crate::error::{Error, Result};
use crate::paths::{PartitionSequence, Path};
use crate::pricing::{Greeks, Jet, Pricer, State};
use crate::summation::KahanSum;
use crate::tolerances::Tolerances;

use super::weights::{solve_delta_gamma_weights, solve_delta_weights, WeightRule};

/// Everything a discrete hedge needs.
///
/// `instruments[0]` is the target (quantity fixed at -1); the others are the
/// hedges in the order the weight rule expects (underlying first for
/// [`WeightRule::DeltaGamma`]).
#[derive(Debug, Clone, Copy)]
pub struct HedgeSetup<'a> {
    pub price: &'a Path,
    /// Volatility path or running-integral path, on the same grid as `price`.
    pub aux: Option<&'a Path>,
    pub seq: &'a PartitionSequence,
    pub level: u32,
    pub instruments: &'a [&'a dyn Pricer],
    pub rule: &'a WeightRule,
    /// Last rebalance time; weights are held after it.
    pub t_cut: f64,
    pub tolerances: Tolerances,
}

impl<'a> HedgeSetup<'a> {
    /// Default truncation: one finest-grid step before the horizon.
    pub fn default_t_cut(seq: &PartitionSequence) -> f64 {
        seq.horizon() - seq.mesh(seq.max_level())
    }
}

/// Hedge quantities `q^1..q^n` at each rebalance time (`q^0 = -1`).
#[derive(Debug, Clone, Default)]
pub struct HedgeWeights {
    pub times: Vec<f64>,
    pub quantities: Vec<Vec<f64>>,
    /// Whether the quantities at that time were solved (false when held).
    pub solved: Vec<bool>,
}

impl HedgeWeights {
    pub fn max_abs(&self) -> f64 {
        self.quantities.iter().flatten().fold(0.0, |m, q| m.max(q.abs()))
    }
}

/// Interval-by-interval profit and loss of `sum_i q^i_u (F^i(v) - F^i(u))`.
#[derive(Debug, Clone)]
pub struct PnLLedger {
    pub level: u32,
    pub mesh: f64,
    pub times: Vec<f64>,
    /// Auxiliary coordinate at the partition times, when an aux path was given.
    pub aux: Option<Vec<f64>>,
    pub increments: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub weights: HedgeWeights,
    /// `F^0(0, X_0)`.
    pub initial_value: f64,
    /// `F^0` at the horizon (the payoff when the horizon is the maturity).
    pub terminal_value: f64,
    pub hedge_gains: f64,
    /// `terminal - initial - hedge gains`, accumulated as minus the ledger
    /// total so that the target's change is telescoped from its increments.
    pub replication_error: f64,
    /// Rebalance time after which weights were held.
    pub effective_t_cut: f64,
    /// Whether weights were held early because of near-expiry degeneracy.
    pub truncated_early: bool,
    /// Largest `|sum q delta| / sum |q delta|` over solved rebalances.
    pub max_delta_imbalance: f64,
    /// Same for gamma; zero unless the rule is delta-gamma.
    pub max_gamma_imbalance: f64,
}

impl PnLLedger {
    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn intervals(&self) -> usize {
        self.increments.len()
    }
}

pub(crate) struct Grid {
    pub times: Vec<f64>,
    pub states: Vec<State>,
}

pub(crate) fn partition_states(setup: &HedgeSetup) -> Result<Grid> {
    let partition = setup.seq.level(setup.level)?;
    let idx = partition.indices_in(setup.price.grid())?;
    if let Some(aux) = setup.aux {
        if aux.grid() != setup.price.grid() {
            return Err(Error::invalid("auxiliary path must share the price grid"));
        }
    }
    let states = idx
        .iter()
        .map(|&i| {
            State::new(
                setup.price.times()[i],
                setup.aux.map_or(0.0, |a| a.values()[i]),
                setup.price.values()[i],
            )
        })
        .collect();
    Ok(Grid {
        times: partition.times().to_vec(),
        states,
    })
}

fn validate(setup: &HedgeSetup) -> Result<()> {
    if setup.instruments.is_empty() {
        return Err(Error::invalid("no target instrument"));
    }
    let hedges = setup.instruments.len() - 1;
    if setup.rule.hedge_count() != Some(hedges) {
        return Err(Error::invalid(format!(
            "rule {:?} does not fit {hedges} hedge instruments",
            setup.rule
        )));
    }
    if setup.level > setup.seq.max_level() {
        return Err(Error::invalid("level above the sequence's finest level"));
    }
    if !(setup.t_cut < setup.seq.horizon()) {
        return Err(Error::invalid("truncation time must precede the horizon"));
    }
    Ok(())
}

fn as_greeks(j: &Jet) -> Greeks {
    Greeks {
        value: j.value,
        delta: j.delta(),
        gamma: j.gamma(),
        theta: j.grad[crate::pricing::T],
        vega: j.grad[crate::pricing::AUX],
        reliable: j.reliable,
    }
}

/// Solve the rule at one state. `Err(NearExpiryDegeneracy)` asks the caller
/// to stop rebalancing.
fn solve_at(setup: &HedgeSetup, state: &State) -> Result<(Vec<f64>, f64, f64)> {
    if let WeightRule::Fixed(q) = setup.rule {
        return Ok((q.clone(), 0.0, 0.0));
    }
    let jets = setup
        .instruments
        .iter()
        .map(|p| p.jet(state))
        .collect::<Result<Vec<_>>>()?;
    if jets.iter().any(|j| !j.reliable) {
        return Err(Error::NearExpiryDegeneracy {
            t: state.t,
            gamma: 0.0,
            floor: setup.tolerances.gamma_floor,
        });
    }
    let greeks: Vec<Greeks> = jets.iter().map(as_greeks).collect();
    let q = match setup.rule {
        WeightRule::Delta => solve_delta_weights(&greeks[0], &greeks[1..], setup.tolerances.delta_floor)?,
        WeightRule::DeltaGamma => {
            solve_delta_gamma_weights(&greeks[0], &greeks[1], &greeks[2], setup.tolerances.gamma_floor)
                .map_err(|e| match e {
                    Error::NearExpiryDegeneracy { gamma, floor, .. } => Error::NearExpiryDegeneracy {
                        t: state.t,
                        gamma,
                        floor,
                    },
                    other => other,
                })?
                .to_vec()
        }
        WeightRule::Fixed(_) => unreachable!(),
    };
    let imbalance = |f: fn(&Greeks) -> f64| {
        let mut sum = -f(&greeks[0]);
        let mut abs = f(&greeks[0]).abs();
        for (qi, g) in q.iter().zip(&greeks[1..]) {
            sum += qi * f(g);
            abs += (qi * f(g)).abs();
        }
        if abs == 0.0 {
            0.0
        } else {
            sum.abs() / abs
        }
    };
    let dg = imbalance(|g| g.delta);
    let gg = if *setup.rule == WeightRule::DeltaGamma {
        imbalance(|g| g.gamma)
    } else {
        0.0
    };
    Ok((q, dg, gg))
}

/// Run the discrete hedge along level `setup.level`.
///
/// Weights are solved at each interval's left end `u` while `u <= t_cut`
/// and held afterwards. A near-expiry degeneracy at a rebalance time moves
/// the truncation back to the previous rebalance; one at time 0 is an error.
pub fn run_hedge(setup: &HedgeSetup) -> Result<PnLLedger> {
    validate(setup)?;
    let grid = partition_states(setup)?;
    let n = grid.states.len() - 1;
    let inst = setup.instruments;

    let value = |p: &dyn Pricer, s: &State| p.value(s);
    let mut prev: Vec<f64> = inst.iter().map(|p| value(*p, &grid.states[0])).collect::<Result<_>>()?;
    let initial_value = prev[0];

    let mut weights = HedgeWeights::default();
    let mut current: Vec<f64> = Vec::new();
    let mut effective_t_cut = setup.t_cut;
    let mut frozen = false;
    let mut truncated_early = false;
    let (mut max_dg, mut max_gg) = (0.0f64, 0.0f64);

    let mut total = KahanSum::new();
    let mut gains = KahanSum::new();
    let mut increments = Vec::with_capacity(n);
    let mut cumulative = Vec::with_capacity(n);

    for k in 0..n {
        let (su, sv) = (&grid.states[k], &grid.states[k + 1]);
        let mut solved = false;
        if !frozen && su.t <= setup.t_cut {
            match solve_at(setup, su) {
                Ok((q, dg, gg)) => {
                    current = q;
                    solved = true;
                    max_dg = max_dg.max(dg);
                    max_gg = max_gg.max(gg);
                }
                Err(e @ Error::NearExpiryDegeneracy { .. }) => {
                    if k == 0 {
                        return Err(e);
                    }
                    frozen = true;
                    truncated_early = true;
                    effective_t_cut = grid.times[k - 1];
                }
                Err(e) => return Err(e),
            }
        } else if !frozen {
            frozen = true;
            effective_t_cut = grid.times[k - 1].min(setup.t_cut);
        }
        weights.times.push(su.t);
        weights.quantities.push(current.clone());
        weights.solved.push(solved);

        let next: Vec<f64> = inst.iter().map(|p| value(*p, sv)).collect::<Result<_>>()?;
        let diff = |i: usize| inst[i].difference(su, sv, prev[i], next[i]);
        let mut inc = KahanSum::new();
        inc.add(-diff(0)?);
        for (i, q) in current.iter().enumerate() {
            let g = q * diff(i + 1)?;
            inc.add(g);
            gains.add(g);
        }
        let inc = inc.value();
        total.add(inc);
        increments.push(inc);
        cumulative.push(total.value());
        prev = next;
    }

    let terminal_value = prev[0];
    let hedge_gains = gains.value();
    let replication_error = -total.value();
    Ok(PnLLedger {
        level: setup.level,
        mesh: setup.seq.mesh(setup.level),
        times: grid.times,
        aux: setup.aux.map(|_| grid.states.iter().map(|s| s.aux).collect()),
        increments,
        cumulative,
        weights,
        initial_value,
        terminal_value,
        hedge_gains,
        replication_error,
        effective_t_cut,
        truncated_early,
        max_delta_imbalance: max_dg,
        max_gamma_imbalance: max_gg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{brownian_path, constant_path, exp_price_path};
    use crate::pricing::{analytic_instrument, Instrument, Payoff, PricedInstrument, VolSource};

    fn call(k: f64, sigma: f64) -> PricedInstrument {
        PricedInstrument::new(
            Instrument::black_scholes(Payoff::call(k, 1.0).unwrap()),
            VolSource::Fixed(sigma),
        )
    }

    fn underlying() -> PricedInstrument {
        PricedInstrument::new(analytic_instrument("identity", 1.0).unwrap(), VolSource::Fixed(0.2))
    }

    #[test]
    fn constant_prices_give_zero_increments() {
        let seq = PartitionSequence::dyadic(1.0, 6).unwrap();
        let flat = constant_path(&seq.finest(), 100.0).unwrap();
        let id = underlying();
        let inst: [&dyn Pricer; 2] = [&id, &id];
        let setup = HedgeSetup {
            price: &flat,
            aux: None,
            seq: &seq,
            level: 6,
            instruments: &inst,
            rule: &WeightRule::Delta,
            t_cut: HedgeSetup::default_t_cut(&seq),
            tolerances: Tolerances::default(),
        };
        let l = run_hedge(&setup).unwrap();
        assert!(l.increments.iter().all(|&x| x == 0.0));
        assert_eq!(l.replication_error, 0.0);
    }

    #[test]
    fn zero_weights_telescope_to_the_target() {
        let seq = PartitionSequence::dyadic(1.0, 8).unwrap();
        let s = exp_price_path(&brownian_path(&seq, 9, 1.0).unwrap(), 100.0, 0.2).unwrap();
        let (c, u) = (call(100.0, 0.2), underlying());
        let inst: [&dyn Pricer; 2] = [&c, &u];
        let rule = WeightRule::Fixed(vec![0.0]);
        let setup = HedgeSetup {
            price: &s,
            aux: None,
            seq: &seq,
            level: 5,
            instruments: &inst,
            rule: &rule,
            t_cut: HedgeSetup::default_t_cut(&seq),
            tolerances: Tolerances::default(),
        };
        let l = run_hedge(&setup).unwrap();
        let payoff = (s.last() - 100.0).max(0.0);
        assert_eq!(l.terminal_value, payoff);
        assert_eq!(l.hedge_gains, 0.0);
        assert!((l.replication_error - (payoff - l.initial_value)).abs() < 1e-12);
        assert!((l.total() + l.replication_error).abs() < 1e-12);
    }

    #[test]
    fn ledger_bookkeeping_and_neutrality() {
        let seq = PartitionSequence::dyadic(1.0, 10).unwrap();
        let s = exp_price_path(&brownian_path(&seq, 1, 1.0).unwrap(), 100.0, 0.2).unwrap();
        let (c, u, h) = (call(100.0, 0.2), underlying(), call(110.0, 0.2));
        for (rule, inst) in [
            (WeightRule::Delta, vec![&c as &dyn Pricer, &u]),
            (WeightRule::DeltaGamma, vec![&c as &dyn Pricer, &u, &h]),
        ] {
            let setup = HedgeSetup {
                price: &s,
                aux: None,
                seq: &seq,
                level: 10,
                instruments: &inst,
                rule: &rule,
                t_cut: HedgeSetup::default_t_cut(&seq),
                tolerances: Tolerances::default(),
            };
            let l = run_hedge(&setup).unwrap();
            assert_eq!(l.intervals(), 1024);
            let direct: f64 = crate::summation::kahan_sum(l.increments.iter().copied());
            assert_eq!(direct, l.total());
            assert!((l.total() + l.replication_error).abs() < 1e-10);
            assert!(l.max_delta_imbalance <= 1e-10, "{rule:?}: {}", l.max_delta_imbalance);
            assert!(l.max_gamma_imbalance <= 1e-10);
        }
    }

    #[test]
    fn rule_and_instrument_count_must_agree() {
        let seq = PartitionSequence::dyadic(1.0, 4).unwrap();
        let s = constant_path(&seq.finest(), 1.0).unwrap();
        let u = underlying();
        let inst: [&dyn Pricer; 2] = [&u, &u];
        let setup = HedgeSetup {
            price: &s,
            aux: None,
            seq: &seq,
            level: 4,
            instruments: &inst,
            rule: &WeightRule::DeltaGamma,
            t_cut: 0.5,
            tolerances: Tolerances::default(),
        };
        assert!(run_hedge(&setup).is_err());
        let setup = HedgeSetup {
            rule: &WeightRule::Delta,
            t_cut: 1.0,
            ..setup
        };
        assert!(run_hedge(&setup).is_err());
    }

    #[test]
    fn degeneracy_at_start_is_reported() {
        // hedge option so far out of the money that its gamma underflows
        let seq = PartitionSequence::dyadic(1.0, 4).unwrap();
        let s = constant_path(&seq.finest(), 100.0).unwrap();
        let (c, u, h) = (call(100.0, 0.2), underlying(), call(1e6, 0.2));
        let inst: [&dyn Pricer; 3] = [&c, &u, &h];
        let setup = HedgeSetup {
            price: &s,
            aux: None,
            seq: &seq,
            level: 4,
            instruments: &inst,
            rule: &WeightRule::DeltaGamma,
            t_cut: HedgeSetup::default_t_cut(&seq),
            tolerances: Tolerances::default(),
        };
        assert!(matches!(run_hedge(&setup), Err(Error::NearExpiryDegeneracy { t, .. }) if t == 0.0));
    }
}
