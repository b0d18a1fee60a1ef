use serde::Serialize;

use crate::error::Result;
use crate::pricing::{Jet, Pricer, State, AUX, T, X};
use crate::summation::KahanSum;

use super::ledger::{partition_states, run_hedge, HedgeSetup, PnLLedger};

/// Multi-indices `(a1, a2)` with `0 < a1 + a2 <= 3`, in the order used by
/// [`TaylorDecomposition::interval_terms`]. `a1` counts powers of the
/// first block `(t, aux)`, `a2` powers of the spot increment.
pub const TAYLOR_INDEX: [(u32, u32); 9] = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorTerm {
    pub a1: u32,
    pub a2: u32,
    pub value: f64,
}

/// Third-order expansion of every ledger increment around its left point.
///
/// Orders one and two use exact derivatives at `(u, aux_u, X_u)`. The
/// third-order terms are evaluated at `z_u + lambda (z_v - z_u)` with
/// `lambda` chosen so that each interval's terms add up to its increment.
#[derive(Debug, Clone)]
pub struct TaylorDecomposition {
    pub level: u32,
    /// Summed over intervals, in [`TAYLOR_INDEX`] order.
    pub terms: Vec<TaylorTerm>,
    pub interval_terms: Vec<[f64; 9]>,
    /// Remainder point of each interval.
    pub lambdas: Vec<f64>,
    /// Intervals where no exact remainder point was found and `lambda = 1/2`
    /// was used instead.
    pub fallback_intervals: Vec<usize>,
    /// Sum of `|increment - sum of terms|` over the fallback intervals.
    pub identity_defect: f64,
    pub ledger_total: f64,
}

impl TaylorDecomposition {
    pub fn term(&self, a1: u32, a2: u32) -> f64 {
        self.terms
            .iter()
            .find(|t| t.a1 == a1 && t.a2 == a2)
            .map_or(0.0, |t| t.value)
    }

    pub fn total(&self) -> f64 {
        self.terms.iter().map(|t| t.value).collect::<KahanSum>().value()
    }

    /// `|ledger total - sum of terms|`.
    pub fn identity_gap(&self) -> f64 {
        (self.ledger_total - self.total()).abs()
    }
}

/// Run the ledger for `setup` and decompose it.
pub fn taylor_decomposition(setup: &HedgeSetup) -> Result<TaylorDecomposition> {
    let ledger = run_hedge(setup)?;
    decompose_ledger(setup, &ledger)
}

struct Portfolio<'a> {
    instruments: &'a [&'a dyn Pricer],
    weights: Vec<f64>,
}

impl Portfolio<'_> {
    fn jet(&self, z: &State) -> Result<Jet> {
        let mut out = Jet::constant(0.0);
        for (p, w) in self.instruments.iter().zip(&self.weights) {
            if *w == 0.0 {
                continue;
            }
            let j = p.jet(z)?;
            out.value += w * j.value;
            for a in 0..3 {
                out.grad[a] += w * j.grad[a];
                for b in 0..3 {
                    out.hess[a][b] += w * j.hess[a][b];
                }
            }
        }
        Ok(out)
    }
}

fn shift(z: &State, d: [f64; 3], s: f64) -> State {
    State::new(z.t + s * d[T], z.aux + s * d[AUX], z.x + s * d[X])
}

fn q11(j: &Jet, h: [f64; 3]) -> f64 {
    let (a, b) = (h[T], h[AUX]);
    j.hess[T][T] * a * a + 2.0 * j.hess[T][AUX] * a * b + j.hess[AUX][AUX] * b * b
}

fn q22(j: &Jet, h: [f64; 3]) -> f64 {
    j.hess[X][X] * h[X] * h[X]
}

struct Expansion<'a> {
    portfolio: Portfolio<'a>,
    zu: State,
    h: [f64; 3],
    horizon: f64,
    t_step: f64,
    x_step: f64,
}

impl Expansion<'_> {
    /// `[T30, T21, T12, T03]` at `z_u + lambda h`.
    fn third(&self, lambda: f64) -> Result<[f64; 4]> {
        let z = shift(&self.zu, self.h, lambda);
        let h1 = [self.h[T], self.h[AUX], 0.0];
        let h2 = [0.0, 0.0, self.h[X]];
        let tau = self.horizon - z.t;

        // derivatives of (Q11, Q22) along h1; steps shrink with the time to
        // maturity, where the third derivatives vary fastest
        let step = self.t_step * tau;
        let eps = step / h1[T];
        let (d1_11, d1_22) = if z.t - step >= 0.0 {
            let p = self.portfolio.jet(&shift(&z, h1, eps))?;
            let m = self.portfolio.jet(&shift(&z, h1, -eps))?;
            (
                (q11(&p, h1) - q11(&m, h1)) / (2.0 * eps),
                (q22(&p, h2) - q22(&m, h2)) / (2.0 * eps),
            )
        } else {
            let c = self.portfolio.jet(&z)?;
            let p = self.portfolio.jet(&shift(&z, h1, eps))?;
            let pp = self.portfolio.jet(&shift(&z, h1, 2.0 * eps))?;
            let fwd = |f: &dyn Fn(&Jet) -> f64| (-3.0 * f(&c) + 4.0 * f(&p) - f(&pp)) / (2.0 * eps);
            (fwd(&|j| q11(j, h1)), fwd(&|j| q22(j, h2)))
        };

        let (d2_11, d2_22) = if h2[X] == 0.0 {
            (0.0, 0.0)
        } else {
            let dx = self.x_step * z.x.abs().max(1e-8) * (tau / self.horizon).sqrt().min(1.0);
            let ex = [0.0, 0.0, 1.0];
            let p = self.portfolio.jet(&shift(&z, ex, dx))?;
            let m = self.portfolio.jet(&shift(&z, ex, -dx))?;
            (
                (q11(&p, h1) - q11(&m, h1)) / (2.0 * dx) * h2[X],
                (q22(&p, h2) - q22(&m, h2)) / (2.0 * dx) * h2[X],
            )
        };
        Ok([d1_11 / 6.0, d2_11 / 2.0, d1_22 / 2.0, d2_22 / 6.0])
    }

    /// Candidate remainder points, scanned in order until a sign change.
    fn scan_points(&self, near_expiry: f64) -> Vec<f64> {
        let mut pts: Vec<f64> = (0..16).map(|k| k as f64 / 16.0).collect();
        for k in 5..=40 {
            let l = 1.0 - (-(k as f64)).exp2();
            let tau = self.horizon - (self.zu.t + l * self.h[T]);
            if tau < 100.0 * near_expiry {
                break;
            }
            pts.push(l);
        }
        pts
    }

    fn dense_points(&self, near_expiry: f64) -> Vec<f64> {
        let mut pts: Vec<f64> = (0..512).map(|k| k as f64 / 512.0).collect();
        pts.extend(self.scan_points(near_expiry).into_iter().filter(|&l| l > 511.0 / 512.0));
        pts
    }
}

fn sum4(a: &[f64; 4]) -> f64 {
    a.iter().copied().collect::<KahanSum>().value()
}

type Sample = (f64, f64, [f64; 4]);

/// Sign-change search over candidate remainder points.
#[derive(Default)]
struct Scan {
    closest: Option<Sample>,
    lo: Option<f64>,
    hi: Option<f64>,
}

impl Scan {
    fn spread(&self) -> f64 {
        match (self.lo, self.hi) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    fn run(
        &mut self,
        f: &mut dyn FnMut(f64) -> Result<(f64, [f64; 4])>,
        points: Vec<f64>,
        root_tol: f64,
    ) -> Result<Option<(f64, [f64; 4])>> {
        let mut prev: Option<Sample> = None;
        for l in points {
            let (fl, tl) = f(l)?;
            if fl.abs() <= root_tol {
                return Ok(Some((l, tl)));
            }
            if let Some(p) = prev {
                if p.1.signum() != fl.signum() {
                    return illinois(f, p, (l, fl, tl), root_tol).map(Some);
                }
            }
            if self.closest.is_none_or(|c| fl.abs() < c.1.abs()) {
                self.closest = Some((l, fl, tl));
            }
            self.lo = Some(self.lo.map_or(fl, |v| v.min(fl)));
            self.hi = Some(self.hi.map_or(fl, |v| v.max(fl)));
            prev = Some((l, fl, tl));
        }
        Ok(None)
    }
}

/// `sum_i |w_i| (|F^i(u)| + |F^i(v)|)`, the size of the numbers whose
/// differences make up one ledger increment.
fn ledger_scale(p: &Portfolio, zu: &State, zv: &State) -> Result<f64> {
    let mut s = 0.0;
    for (inst, w) in p.instruments.iter().zip(&p.weights) {
        if *w != 0.0 {
            s += w.abs() * (inst.value(zu)?.abs() + inst.value(zv)?.abs());
        }
    }
    Ok(s)
}

/// Illinois-modified regula falsi on a bracketing pair.
fn illinois(
    f: &mut dyn FnMut(f64) -> Result<(f64, [f64; 4])>,
    mut a: Sample,
    mut b: Sample,
    tol: f64,
) -> Result<(f64, [f64; 4])> {
    let mut side = 0i8;
    for _ in 0..100 {
        let c = (a.0 * b.1 - b.0 * a.1) / (b.1 - a.1);
        let c = if c.is_finite() && c > a.0.min(b.0) && c < a.0.max(b.0) {
            c
        } else {
            0.5 * (a.0 + b.0)
        };
        let (fc, tc) = f(c)?;
        if fc.abs() <= tol || (b.0 - a.0).abs() < 1e-15 {
            return Ok((c, tc));
        }
        if fc.signum() == b.1.signum() {
            b = (c, fc, tc);
            if side == 1 {
                a.1 *= 0.5;
            }
            side = 1;
        } else {
            a = (c, fc, tc);
            if side == -1 {
                b.1 *= 0.5;
            }
            side = -1;
        }
    }
    let best = if a.1.abs() < b.1.abs() { a } else { b };
    Ok((best.0, best.2))
}

/// Decompose an existing ledger built from `setup`.
pub fn decompose_ledger(setup: &HedgeSetup, ledger: &PnLLedger) -> Result<TaylorDecomposition> {
    let grid = partition_states(setup)?;
    let horizon = setup.seq.horizon();
    let tol = setup.tolerances;
    let n = ledger.intervals();

    let mut interval_terms = Vec::with_capacity(n);
    let mut lambdas = Vec::with_capacity(n);
    let mut fallback_intervals = Vec::new();
    let mut defect = KahanSum::new();
    let mut sums: Vec<KahanSum> = (0..9).map(|_| KahanSum::new()).collect();

    for k in 0..n {
        let (zu, zv) = (grid.states[k], grid.states[k + 1]);
        let mut weights = vec![-1.0];
        weights.extend_from_slice(&ledger.weights.quantities[k]);
        let portfolio = Portfolio {
            instruments: setup.instruments,
            weights,
        };
        let h = [zv.t - zu.t, zv.aux - zu.aux, zv.x - zu.x];
        let j = portfolio.jet(&zu)?;
        let low = [
            j.grad[T] * h[T] + j.grad[AUX] * h[AUX],
            j.grad[X] * h[X],
            0.5 * q11(&j, h),
            (j.hess[X][T] * h[T] + j.hess[X][AUX] * h[AUX]) * h[X],
            0.5 * q22(&j, h),
        ];
        let increment = ledger.increments[k];
        let target = increment - low.iter().copied().collect::<KahanSum>().value();

        let exp = Expansion {
            portfolio,
            zu,
            h,
            horizon,
            t_step: tol.third_derivative_step,
            x_step: tol.third_derivative_step,
        };
        let mut f = |l: f64| -> Result<(f64, [f64; 4])> {
            let t = exp.third(l)?;
            Ok((sum4(&t) - target, t))
        };
        let scale = target.abs() + low.iter().map(|v| v.abs()).sum::<f64>() + increment.abs();
        let root_tol = 1e-15 * scale;

        // The increment itself carries rounding from differencing prices; a
        // miss within that noise is not a failure of the expansion.
        let noise = 16.0 * f64::EPSILON * ledger_scale(&exp.portfolio, &zu, &zv)?;
        let mut scan = Scan::default();
        let mut found = scan.run(&mut f, exp.scan_points(tol.near_expiry), root_tol)?;
        if found.is_none() && scan.spread() > noise {
            // crossings can hide between coarse points where the third
            // derivatives vary fast, which happens close to expiry
            found = scan.run(&mut f, exp.dense_points(tol.near_expiry), root_tol)?;
        }
        if found.is_none() {
            found = scan.closest.filter(|c| c.1.abs() <= noise).map(|c| (c.0, c.2));
        }
        let (lambda, third) = match found {
            Some(r) => r,
            None => {
                let (fl, tl) = f(0.5)?;
                fallback_intervals.push(k);
                defect.add(fl.abs());
                (0.5, tl)
            }
        };
        let row = [
            low[0], low[1], low[2], low[3], low[4], third[0], third[1], third[2], third[3],
        ];
        for (acc, v) in sums.iter_mut().zip(row) {
            acc.add(v);
        }
        interval_terms.push(row);
        lambdas.push(lambda);
    }

    Ok(TaylorDecomposition {
        level: ledger.level,
        terms: TAYLOR_INDEX
            .iter()
            .zip(&sums)
            .map(|(&(a1, a2), s)| TaylorTerm {
                a1,
                a2,
                value: s.value(),
            })
            .collect(),
        interval_terms,
        lambdas,
        fallback_intervals,
        identity_defect: defect.value(),
        ledger_total: ledger.total(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hedging::WeightRule;
    use crate::paths::{brownian_path, exp_price_path, PartitionSequence};
    use crate::pricing::{analytic_instrument, Instrument, Payoff, PricedInstrument, VolSource};
    use crate::tolerances::Tolerances;

    fn call(k: f64) -> PricedInstrument {
        PricedInstrument::new(
            Instrument::black_scholes(Payoff::call(k, 1.0).unwrap()),
            VolSource::Fixed(0.2),
        )
    }

    fn identity() -> PricedInstrument {
        PricedInstrument::new(analytic_instrument("identity", 1.0).unwrap(), VolSource::Fixed(0.2))
    }

    fn run_hedge_for(level: u32, rule: WeightRule, inst: &[&dyn Pricer], seed: u64) -> PnLLedger {
        let seq = PartitionSequence::dyadic(1.0, 10).unwrap();
        let s = exp_price_path(&brownian_path(&seq, seed, 1.0).unwrap(), 100.0, 0.2).unwrap();
        let setup = HedgeSetup {
            price: &s,
            aux: None,
            seq: &seq,
            level,
            instruments: inst,
            rule: &rule,
            t_cut: HedgeSetup::default_t_cut(&seq),
            tolerances: Tolerances::default(),
        };
        run_hedge(&setup).unwrap()
    }

    fn decompose(level: u32, rule: WeightRule, inst: &[&dyn Pricer], seed: u64) -> TaylorDecomposition {
        let seq = PartitionSequence::dyadic(1.0, 10).unwrap();
        let s = exp_price_path(&brownian_path(&seq, seed, 1.0).unwrap(), 100.0, 0.2).unwrap();
        let setup = HedgeSetup {
            price: &s,
            aux: None,
            seq: &seq,
            level,
            instruments: inst,
            rule: &rule,
            t_cut: HedgeSetup::default_t_cut(&seq),
            tolerances: Tolerances::default(),
        };
        taylor_decomposition(&setup).unwrap()
    }

    #[test]
    fn linear_instruments_have_no_higher_terms() {
        let (a, b) = (identity(), identity());
        let d = decompose(6, WeightRule::Fixed(vec![0.5]), &[&a, &b], 3);
        for &(a1, a2) in &TAYLOR_INDEX[2..] {
            assert_eq!(d.term(a1, a2), 0.0);
        }
        assert!(d.identity_gap() <= 1e-12 * (1.0 + d.ledger_total.abs()));
    }

    #[test]
    fn identity_holds_for_delta_and_gamma_hedges() {
        let (c, u, h) = (call(100.0), identity(), call(110.0));
        for seed in [1, 2] {
            let d = decompose(8, WeightRule::Delta, &[&c, &u], seed);
            assert!(
                d.identity_gap() <= 1e-9 * (1.0 + d.ledger_total.abs()),
                "{}",
                d.identity_gap()
            );
            assert!(d.term(0, 1).abs() < 1e-10);

            let g = decompose(10, WeightRule::DeltaGamma, &[&c, &u, &h], seed);
            assert!(
                g.identity_gap() <= 1e-9 * (1.0 + g.ledger_total.abs()),
                "{}",
                g.identity_gap()
            );
            // neutral wherever the weights were solved rather than held
            let ledger = run_hedge_for(10, WeightRule::DeltaGamma, &[&c, &u, &h], seed);
            for (row, solved) in g.interval_terms.iter().zip(&ledger.weights.solved) {
                if *solved {
                    assert!(row[1].abs() < 1e-12 && row[4].abs() < 1e-12, "{row:?}");
                }
            }
            assert!(g.lambdas.iter().all(|l| (0.0..=1.0).contains(l)));
        }
    }

    #[test]
    fn third_order_terms_shrink_with_level() {
        let (c, u) = (call(100.0), identity());
        let coarse = decompose(6, WeightRule::Delta, &[&c, &u], 5);
        let fine = decompose(10, WeightRule::Delta, &[&c, &u], 5);
        let third = |d: &TaylorDecomposition| d.interval_terms.iter().map(|r| r[8].abs()).sum::<f64>();
        assert!(third(&fine) < third(&coarse));
    }
}
