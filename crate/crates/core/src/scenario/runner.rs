use std::fs;
use std::path::Path as FsPath;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asian::{realized_log_vol, AsianRule};
use crate::error::{Error, Result};
use crate::hedging::{
    decompose_ledger, riemann_sum_defect, run_hedge, write_ledger_csv, HedgeSetup, LedgerSummary, PnLLedger, WeightRule,
};
use crate::paths::{
    brownian_path, constant_path, exp_price_path, fbm_path, function_path, gbm_path, integral_path,
    pth_variation_at_level, PartitionSequence, Path,
};
use crate::pricing::Pricer;
use crate::tolerances::Tolerances;

use super::config::{Experiment, PathKind, ScenarioConfig, VariationStatistic};
use super::report::{summarize, ScenarioReport};

/// Outcome of one (seed, level) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed_index: u32,
    pub seed: u64,
    pub level: u32,
    pub mesh: f64,
    /// Replication error, variation statistic or Riemann-sum defect.
    pub metric: Option<f64>,
    /// Value the relative thresholds are measured against.
    pub reference: Option<f64>,
    /// A priori bound on the metric, where one exists.
    pub bound: Option<f64>,
    /// `|ledger total - sum of Taylor terms| / (1 + |ledger total|)`.
    pub taylor_gap: Option<f64>,
    pub taylor_fallbacks: Option<usize>,
    /// Delta-only Asian hedge on a path whose volatility does not match.
    pub qv_mismatch: bool,
    pub error: Option<String>,
}

impl RunRecord {
    fn new(config: &ScenarioConfig, seq: &PartitionSequence, seed_index: u32, level: u32) -> Self {
        Self {
            seed_index,
            seed: seed_of(config, seed_index),
            level,
            mesh: seq.mesh(level),
            metric: None,
            reference: None,
            bound: None,
            taylor_gap: None,
            taylor_fallbacks: None,
            qv_mismatch: false,
            error: None,
        }
    }
}

fn seed_of(config: &ScenarioConfig, seed_index: u32) -> u64 {
    config.base_seed.wrapping_add(seed_index as u64)
}

/// Run every (seed, level) of a scenario and summarize.
///
/// Seeds run in parallel; records come back in seed order, so the result
/// depends only on the config. When `ledger_dir` is given and the config
/// asks for it, each run's ledger is written there.
pub fn run_scenario_with(config: &ScenarioConfig, ledger_dir: Option<&FsPath>) -> Result<ScenarioReport> {
    config.validate()?;
    let seq = PartitionSequence::dyadic(config.horizon, config.max_level)?;
    let ledger_dir = ledger_dir.filter(|_| config.write_ledgers);
    if let Some(dir) = ledger_dir {
        fs::create_dir_all(dir)?;
    }
    let per_seed: Vec<Vec<RunRecord>> = (0..config.seeds)
        .into_par_iter()
        .map(|i| run_seed(config, &seq, i, ledger_dir))
        .collect();
    let runs: Vec<RunRecord> = per_seed.into_iter().flatten().collect();
    Ok(summarize(config, &seq, runs))
}

/// [`run_scenario_with`] without ledger output.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioReport> {
    run_scenario_with(config, None)
}

fn run_seed(config: &ScenarioConfig, seq: &PartitionSequence, i: u32, ledger_dir: Option<&FsPath>) -> Vec<RunRecord> {
    let fail_all = |e: Error| {
        config
            .levels
            .iter()
            .map(|&l| RunRecord {
                error: Some(e.to_string()),
                ..RunRecord::new(config, seq, i, l)
            })
            .collect()
    };
    let price = match simulate(config, seq, seed_of(config, i)) {
        Ok(p) => p,
        Err(e) => return fail_all(e),
    };
    match &config.experiment {
        Experiment::Variation { statistic, p } => config
            .levels
            .iter()
            .map(|&l| {
                let mut r = RunRecord::new(config, seq, i, l);
                match pth_variation_at_level(&price, seq, l, *p) {
                    Ok(v) => {
                        let (m, reference) = match statistic {
                            VariationStatistic::QvDeviation => (v.sum - config.horizon, config.horizon),
                            VariationStatistic::PVariation => (v.sum, 1.0),
                        };
                        r.metric = Some(m);
                        r.reference = Some(reference);
                    }
                    Err(e) => r.error = Some(e.to_string()),
                }
                r
            })
            .collect(),
        Experiment::Lemma => lemma_runs(config, seq, i, &price),
        Experiment::Hedge { .. } | Experiment::Asian { .. } => hedge_runs(config, seq, i, &price, ledger_dir),
    }
}

/// Underlying path of one seed on the finest grid.
pub fn simulate(config: &ScenarioConfig, seq: &PartitionSequence, seed: u64) -> Result<Path> {
    let p = &config.path;
    match p.kind {
        PathKind::Brownian => brownian_path(seq, seed, 1.0),
        PathKind::Gbm => gbm_path(seq, seed, p.s0, p.sigma_realized),
        PathKind::ExpFbm => exp_price_path(&fbm_path(seq, p.hurst, seed)?, p.s0, p.sigma_realized),
        PathKind::Constant => constant_path(&seq.finest(), p.s0),
    }
}

fn lemma_runs(config: &ScenarioConfig, seq: &PartitionSequence, i: u32, b: &Path) -> Vec<RunRecord> {
    let build = || -> Result<(Path, [Path; 2], [Path; 2])> {
        let grid = seq.finest();
        let y = b.map(|_, x| (0.5 * x).exp(), "exp(B/2)")?;
        let f = [constant_path(&grid, 1.0)?, function_path(&grid, |t| -t.cos(), "-cos")?];
        let g = [
            function_path(&grid, f64::sin, "sin")?,
            function_path(&grid, |t| t, "t")?,
        ];
        Ok((y, f, g))
    };
    let (y, f, g) = match build() {
        Ok(v) => v,
        Err(e) => {
            return config
                .levels
                .iter()
                .map(|&l| RunRecord {
                    error: Some(e.to_string()),
                    ..RunRecord::new(config, seq, i, l)
                })
                .collect()
        }
    };
    config
        .levels
        .iter()
        .map(|&l| {
            let mut r = RunRecord::new(config, seq, i, l);
            match seq.level(l).and_then(|p| riemann_sum_defect(&y, &f, &g, &p)) {
                Ok(d) => {
                    r.metric = Some(d.lhs);
                    r.bound = Some(d.bound);
                    r.reference = Some(1.0);
                }
                Err(e) => r.error = Some(e.to_string()),
            }
            r
        })
        .collect()
}

struct HedgePlan {
    instruments: Vec<Box<dyn Pricer>>,
    rule: WeightRule,
    aux: Option<Path>,
    asian_qv_check: Option<f64>,
}

fn plan(config: &ScenarioConfig, seq: &PartitionSequence, price: &Path) -> Result<HedgePlan> {
    let t = config.horizon;
    let vol_path = match config.path.vol_path {
        Some(v) => Some(function_path(
            &seq.finest(),
            |s| v.base + v.amplitude * s.sin(),
            format!("{} + {} sin t", v.base, v.amplitude),
        )?),
        None => None,
    };
    match &config.experiment {
        Experiment::Hedge { target, hedges, rule } => {
            let mut instruments: Vec<Box<dyn Pricer>> = vec![Box::new(target.build(t)?)];
            for h in hedges {
                instruments.push(Box::new(h.build(t)?));
            }
            Ok(HedgePlan {
                instruments,
                rule: rule.clone(),
                aux: vol_path,
                asian_qv_check: None,
            })
        }
        Experiment::Asian { target, hedges, rule } => {
            let target = target.build(t)?;
            let mut instruments: Vec<Box<dyn Pricer>> = vec![Box::new(target)];
            for h in hedges {
                instruments.push(Box::new(h.build(t)?));
            }
            let (rule, qv) = match rule {
                AsianRule::DeltaGamma => (WeightRule::DeltaGamma, None),
                AsianRule::DeltaOnlyQvMatched => (WeightRule::Delta, Some(target.sigma)),
            };
            Ok(HedgePlan {
                instruments,
                rule,
                aux: Some(integral_path(price)?),
                asian_qv_check: qv,
            })
        }
        _ => Err(Error::invalid("not a hedging experiment")),
    }
}

fn hedge_runs(
    config: &ScenarioConfig,
    seq: &PartitionSequence,
    i: u32,
    price: &Path,
    ledger_dir: Option<&FsPath>,
) -> Vec<RunRecord> {
    let plan = match plan(config, seq, price) {
        Ok(p) => p,
        Err(e) => {
            return config
                .levels
                .iter()
                .map(|&l| RunRecord {
                    error: Some(e.to_string()),
                    ..RunRecord::new(config, seq, i, l)
                })
                .collect()
        }
    };
    let instruments: Vec<&dyn Pricer> = plan.instruments.iter().map(|b| b.as_ref()).collect();
    let with_taylor = i < config.taylor_seeds;
    config
        .levels
        .iter()
        .map(|&level| {
            let mut r = RunRecord::new(config, seq, i, level);
            let setup = HedgeSetup {
                price,
                aux: plan.aux.as_ref(),
                seq,
                level,
                instruments: &instruments,
                rule: &plan.rule,
                t_cut: config.t_cut.unwrap_or_else(|| HedgeSetup::default_t_cut(seq)),
                tolerances: Tolerances::default(),
            };
            let outcome = (|| -> Result<()> {
                let ledger = run_hedge(&setup)?;
                r.metric = Some(ledger.replication_error);
                r.reference = Some(ledger.initial_value);
                if let Some(sigma) = plan.asian_qv_check {
                    let realized = realized_log_vol(price, seq, level)?;
                    r.qv_mismatch = (realized / sigma - 1.0).abs() > 0.1;
                }
                let taylor = if with_taylor {
                    let d = decompose_ledger(&setup, &ledger)?;
                    r.taylor_gap = Some(d.identity_gap() / (1.0 + d.ledger_total.abs()));
                    r.taylor_fallbacks = Some(d.fallback_intervals.len());
                    Some(d)
                } else {
                    None
                };
                if let Some(dir) = ledger_dir {
                    write_run_ledger(dir, r.seed, &ledger, taylor.as_ref(), config)?;
                }
                Ok(())
            })();
            if let Err(e) = outcome {
                r.metric = None;
                r.error = Some(e.to_string());
            }
            r
        })
        .collect()
}

fn write_run_ledger(
    dir: &FsPath,
    seed: u64,
    ledger: &PnLLedger,
    taylor: Option<&crate::hedging::TaylorDecomposition>,
    config: &ScenarioConfig,
) -> Result<()> {
    let stem = format!("seed{seed}_level{}", ledger.level);
    let aux = match config.experiment {
        Experiment::Asian { .. } => Some("I_u"),
        _ if config.path.vol_path.is_some() => Some("sigma_u"),
        _ => None,
    };
    let file = fs::File::create(dir.join(format!("{stem}.csv")))?;
    write_ledger_csv(std::io::BufWriter::new(file), ledger, aux)?;
    let summary = LedgerSummary::new(seed, ledger, taylor);
    fs::write(
        dir.join(format!("{stem}.json")),
        serde_json::to_string_pretty(&summary)?,
    )?;
    Ok(())
}
