use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::asian::{asian_analytic, AsianInstrument, AsianRule};
use crate::error::{Error, Result};
use crate::hedging::WeightRule;
use crate::pricing::{analytic_instrument, Instrument, Payoff, PricedInstrument, VolSource};

/// A complete, self-describing experiment.
///
/// Every field has a default, and the summary written by a run embeds the
/// fully materialized config, so a summary is enough to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub description: String,
    pub horizon: f64,
    pub max_level: u32,
    pub levels: Vec<u32>,
    pub seeds: u32,
    pub base_seed: u64,
    pub path: PathSpec,
    pub experiment: Experiment,
    /// Last rebalance time; one finest-grid step before the horizon if unset.
    pub t_cut: Option<f64>,
    /// Number of leading seeds on which the Taylor decomposition is checked.
    pub taylor_seeds: u32,
    /// Write one ledger CSV and summary JSON per run.
    pub write_ledgers: bool,
    pub output_dir: Option<PathBuf>,
    pub thresholds: Thresholds,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: "custom".into(),
            description: String::new(),
            horizon: 1.0,
            max_level: 16,
            levels: (8..=16).collect(),
            seeds: 100,
            base_seed: 0,
            path: PathSpec::default(),
            experiment: Experiment::default(),
            t_cut: None,
            taylor_seeds: 0,
            write_ledgers: false,
            output_dir: None,
            thresholds: Thresholds::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    /// Standard Brownian motion (variation experiments).
    Brownian,
    /// `s0 exp(sigma B - sigma^2 t / 2)`.
    Gbm,
    /// `s0 exp(sigma B^H)` with fractional Brownian `B^H`.
    ExpFbm,
    /// `s0` at every time.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathSpec {
    pub kind: PathKind,
    pub hurst: f64,
    pub sigma_realized: f64,
    pub s0: f64,
    /// Pricing volatility path `base + amplitude sin t`, carried as the
    /// auxiliary coordinate.
    pub vol_path: Option<VolPathSpec>,
}

impl Default for PathSpec {
    fn default() -> Self {
        Self {
            kind: PathKind::Gbm,
            hurst: 0.5,
            sigma_realized: 0.2,
            s0: 100.0,
            vol_path: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolPathSpec {
    pub base: f64,
    pub amplitude: f64,
}

/// A hedging instrument. `sigma: None` prices off the volatility path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstrumentSpec {
    Call { strike: f64, sigma: Option<f64> },
    Put { strike: f64, sigma: Option<f64> },
    Power { exponent: f64, sigma: Option<f64> },
    Identity,
    SquareExp { sigma: Option<f64> },
}

impl InstrumentSpec {
    pub fn build(&self, maturity: f64) -> Result<PricedInstrument> {
        let vol = |s: &Option<f64>| s.map_or(VolSource::FromState, VolSource::Fixed);
        Ok(match self {
            InstrumentSpec::Call { strike, sigma } => {
                PricedInstrument::new(Instrument::black_scholes(Payoff::call(*strike, maturity)?), vol(sigma))
            }
            InstrumentSpec::Put { strike, sigma } => {
                PricedInstrument::new(Instrument::black_scholes(Payoff::put(*strike, maturity)?), vol(sigma))
            }
            InstrumentSpec::Power { exponent, sigma } => PricedInstrument::new(
                Instrument::black_scholes(Payoff::power(*exponent, maturity)?),
                vol(sigma),
            ),
            InstrumentSpec::Identity => {
                PricedInstrument::new(analytic_instrument("identity", maturity)?, VolSource::Fixed(1.0))
            }
            InstrumentSpec::SquareExp { sigma } => {
                PricedInstrument::new(analytic_instrument("squareExp", maturity)?, vol(sigma))
            }
        })
    }

    fn uses_vol_path(&self) -> bool {
        match self {
            InstrumentSpec::Call { sigma, .. }
            | InstrumentSpec::Put { sigma, .. }
            | InstrumentSpec::Power { sigma, .. }
            | InstrumentSpec::SquareExp { sigma } => sigma.is_none(),
            InstrumentSpec::Identity => false,
        }
    }

    fn sigma(&self) -> Option<f64> {
        match self {
            InstrumentSpec::Call { sigma, .. }
            | InstrumentSpec::Put { sigma, .. }
            | InstrumentSpec::Power { sigma, .. }
            | InstrumentSpec::SquareExp { sigma } => *sigma,
            InstrumentSpec::Identity => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsianSpec {
    pub name: String,
    pub sigma: f64,
}

impl AsianSpec {
    pub fn build(&self, maturity: f64) -> Result<AsianInstrument> {
        asian_analytic(&self.name, self.sigma, maturity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariationStatistic {
    /// `|sum (dX)^2 - T|` along each level.
    QvDeviation,
    /// `sum |dX|^p` along each level.
    PVariation,
}

/// What is measured on each (seed, level).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Experiment {
    /// Replication error of a discrete hedge.
    Hedge {
        target: InstrumentSpec,
        hedges: Vec<InstrumentSpec>,
        rule: WeightRule,
    },
    /// Replication error of an Asian target.
    Asian {
        target: AsianSpec,
        hedges: Vec<InstrumentSpec>,
        rule: AsianRule,
    },
    Variation {
        statistic: VariationStatistic,
        p: f64,
    },
    /// Riemann-sum defect of `int y d(sin) - int y cos dt` with
    /// `y = exp(B / 2)`.
    Lemma,
}

impl Default for Experiment {
    fn default() -> Self {
        Experiment::Hedge {
            target: InstrumentSpec::Call {
                strike: 100.0,
                sigma: Some(0.2),
            },
            hedges: vec![InstrumentSpec::Identity],
            rule: WeightRule::Delta,
        }
    }
}

/// Pass/fail criteria; unset fields are not checked. Relative thresholds
/// are multiples of the scenario's reference value (the target's initial
/// price for hedges, the horizon for variation runs, 1 otherwise).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Median at the last level at most this times the reference.
    pub final_median_rel: Option<f64>,
    /// Mean at the last level at most this times the reference.
    pub final_mean_rel: Option<f64>,
    /// Every run at every level at most this times the reference.
    pub max_abs_rel: Option<f64>,
    /// Medians nonincreasing from this level on.
    pub monotone_from: Option<u32>,
    /// Fitted log2-slope of the medians inside `[lo, hi]`.
    pub slope: Option<[f64; 2]>,
    /// Slope strictly negative.
    pub decreasing: bool,
    /// Medians on the level range at least `rel` times the reference.
    pub floor: Option<FloorCheck>,
    /// Median at the last level at most this times the median at the first.
    pub last_over_first: Option<f64>,
    /// Tolerance of the Taylor identity, relative to `1 + |ledger total|`.
    pub taylor_identity: f64,
    /// Largest fraction of failed runs.
    pub max_error_rate: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            final_median_rel: None,
            final_mean_rel: None,
            max_abs_rel: None,
            monotone_from: None,
            slope: None,
            decreasing: false,
            floor: None,
            last_over_first: None,
            taylor_identity: 1e-9,
            max_error_rate: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FloorCheck {
    pub from: u32,
    pub to: u32,
    pub rel: f64,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::invalid(format!("scenario `{}`: {m}", self.name)));
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad(format!("horizon must be positive, got {}", self.horizon));
        }
        if !(1..=crate::paths::MAX_LEVEL).contains(&self.max_level) {
            return bad(format!("max_level {} out of range", self.max_level));
        }
        if self.levels.is_empty() || self.levels.iter().any(|&l| l < 1 || l > self.max_level) {
            return bad(format!("levels {:?} must lie in [1, {}]", self.levels, self.max_level));
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return bad("levels must be strictly increasing".into());
        }
        if self.seeds == 0 {
            return bad("seed count must be at least 1".into());
        }
        let p = &self.path;
        if !(p.sigma_realized > 0.0 && p.sigma_realized.is_finite()) {
            return bad(format!("sigma_realized must be positive, got {}", p.sigma_realized));
        }
        if !(p.s0 > 0.0 && p.s0.is_finite()) {
            return bad(format!("s0 must be positive, got {}", p.s0));
        }
        if p.kind == PathKind::ExpFbm && !(p.hurst > 0.0 && p.hurst < 1.0) {
            return bad(format!("hurst must lie in (0, 1), got {}", p.hurst));
        }
        if let Some(v) = p.vol_path {
            if !(v.base - v.amplitude.abs() > 0.0) {
                return bad("volatility path must stay positive".into());
            }
        }
        if let Some(t) = self.t_cut {
            if !(t > 0.0 && t < self.horizon) {
                return bad(format!("t_cut {t} must lie in (0, horizon)"));
            }
        }
        let check_instruments = |specs: &[&InstrumentSpec]| -> Result<()> {
            for s in specs {
                if s.uses_vol_path() && p.vol_path.is_none() {
                    return Err(Error::invalid(format!(
                        "scenario `{}`: instrument {s:?} needs a volatility path",
                        self.name
                    )));
                }
                if let Some(sig) = s.sigma() {
                    if !(sig > 0.0 && sig.is_finite()) {
                        return Err(Error::invalid(format!(
                            "scenario `{}`: sigma_pricing must be positive, got {sig}",
                            self.name
                        )));
                    }
                }
                s.build(self.horizon)?;
            }
            Ok(())
        };
        match &self.experiment {
            Experiment::Hedge { target, hedges, rule } => {
                let mut all = vec![target];
                all.extend(hedges);
                check_instruments(&all)?;
                if rule.hedge_count() != Some(hedges.len()) {
                    return bad(format!("rule {rule:?} does not fit {} hedges", hedges.len()));
                }
            }
            Experiment::Asian { target, hedges, rule } => {
                target.build(self.horizon)?;
                check_instruments(&hedges.iter().collect::<Vec<_>>())?;
                let need = match rule {
                    AsianRule::DeltaGamma => 2,
                    AsianRule::DeltaOnlyQvMatched => 1,
                };
                if hedges.len() != need {
                    return bad(format!("rule {rule:?} needs {need} hedges"));
                }
                if p.kind == PathKind::Brownian {
                    return bad("Asian instruments need a positive price path".into());
                }
            }
            Experiment::Variation { p: exponent, .. } => {
                if !(*exponent >= 1.0 && exponent.is_finite()) {
                    return bad(format!("variation exponent must be at least 1, got {exponent}"));
                }
            }
            Experiment::Lemma => {}
        }
        Ok(())
    }

    /// CLI subcommand that runs this kind of experiment.
    pub fn family(&self) -> &'static str {
        match &self.experiment {
            Experiment::Variation { .. } => "variation",
            Experiment::Lemma => "lemma-check",
            Experiment::Asian { .. } => "asian",
            Experiment::Hedge { .. } if self.path.vol_path.is_some() => "vol-path-hedge",
            Experiment::Hedge {
                rule: WeightRule::DeltaGamma,
                ..
            } => "gamma-hedge",
            Experiment::Hedge { .. } => "delta-hedge",
        }
    }

    /// Restrict to the levels `lo..=hi`, raising the maximum level if needed.
    pub fn with_level_range(mut self, lo: u32, hi: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(format!("empty level range {lo}..{hi}")));
        }
        self.levels = (lo..=hi).collect();
        self.max_level = self.max_level.max(hi);
        if let Some(m) = self.thresholds.monotone_from {
            self.thresholds.monotone_from = Some(m.max(lo));
        }
        Ok(self)
    }
}
