use crate::asian::AsianRule;
use crate::error::{Error, Result};
use crate::hedging::WeightRule;

use super::config::{
    AsianSpec, Experiment, FloorCheck, InstrumentSpec, PathKind, PathSpec, ScenarioConfig, Thresholds,
    VariationStatistic, VolPathSpec,
};

/// Names of the built-in scenarios, in listing order.
pub const BUILTIN_SCENARIOS: [&str; 12] = [
    "qv-brownian",
    "cubic-brownian",
    "delta-matched",
    "delta-mismatched",
    "gamma-fbm045",
    "delta-fbm045",
    "volpath-gamma-fbm045",
    "asian-gamma-fbm045",
    "asian-delta-mismatched",
    "asian-running-average",
    "lemma-sin",
    "zero-vol",
];

fn call(strike: f64, sigma: Option<f64>) -> InstrumentSpec {
    InstrumentSpec::Call { strike, sigma }
}

fn brownian() -> PathSpec {
    PathSpec {
        kind: PathKind::Brownian,
        ..PathSpec::default()
    }
}

fn exp_fbm() -> PathSpec {
    PathSpec {
        kind: PathKind::ExpFbm,
        hurst: 0.45,
        ..PathSpec::default()
    }
}

fn gamma_hedge(sigma: Option<f64>) -> Experiment {
    Experiment::Hedge {
        target: call(100.0, sigma),
        hedges: vec![InstrumentSpec::Identity, call(110.0, sigma)],
        rule: WeightRule::DeltaGamma,
    }
}

fn delta_hedge(sigma: f64) -> Experiment {
    Experiment::Hedge {
        target: call(100.0, Some(sigma)),
        hedges: vec![InstrumentSpec::Identity],
        rule: WeightRule::Delta,
    }
}

fn squared_average() -> AsianSpec {
    AsianSpec {
        name: "squaredAverage".into(),
        sigma: 0.2,
    }
}

/// Built-in scenario by name.
pub fn builtin_scenario(name: &str) -> Result<ScenarioConfig> {
    let base = ScenarioConfig {
        name: name.to_string(),
        ..ScenarioConfig::default()
    };
    let c = match name {
        "qv-brownian" => ScenarioConfig {
            description: "Quadratic variation of Brownian paths along dyadic partitions tends to T at the CLT rate.".into(),
            seeds: 200,
            path: brownian(),
            experiment: Experiment::Variation {
                statistic: VariationStatistic::QvDeviation,
                p: 2.0,
            },
            thresholds: Thresholds {
                final_mean_rel: Some(0.01),
                slope: Some([-0.65, -0.35]),
                ..Thresholds::default()
            },
            ..base
        },
        "cubic-brownian" => ScenarioConfig {
            description: "Cubic variation of Brownian paths vanishes along dyadic partitions.".into(),
            seeds: 200,
            path: brownian(),
            experiment: Experiment::Variation {
                statistic: VariationStatistic::PVariation,
                p: 3.0,
            },
            thresholds: Thresholds {
                last_over_first: Some(1e-2),
                slope: Some([-0.7, -0.3]),
                ..Thresholds::default()
            },
            ..base
        },
        "delta-matched" => ScenarioConfig {
            description: "Delta hedging replicates a call when the path's quadratic variation matches the pricing volatility.".into(),
            experiment: delta_hedge(0.2),
            taylor_seeds: 2,
            thresholds: Thresholds {
                final_median_rel: Some(0.005),
                monotone_from: Some(8),
                decreasing: true,
                ..Thresholds::default()
            },
            ..base
        },
        "delta-mismatched" => ScenarioConfig {
            description: "Delta hedging with the wrong volatility leaves an error that does not vanish.".into(),
            experiment: delta_hedge(0.3),
            taylor_seeds: 2,
            thresholds: Thresholds {
                floor: Some(FloorCheck { from: 12, to: 16, rel: 0.05 }),
                ..Thresholds::default()
            },
            ..base
        },
        "gamma-fbm045" => ScenarioConfig {
            description: "Delta-gamma hedging replicates a call along exponential fBm paths with H = 0.45, which have vanishing cubic variation.".into(),
            path: exp_fbm(),
            experiment: gamma_hedge(Some(0.2)),
            taylor_seeds: 2,
            thresholds: Thresholds {
                final_median_rel: Some(0.01),
                monotone_from: Some(10),
                decreasing: true,
                ..Thresholds::default()
            },
            ..base
        },
        "delta-fbm045" => ScenarioConfig {
            description: "Delta hedging alone fails on the same exponential fBm paths.".into(),
            path: exp_fbm(),
            experiment: delta_hedge(0.2),
            taylor_seeds: 2,
            thresholds: Thresholds {
                floor: Some(FloorCheck { from: 12, to: 16, rel: 0.05 }),
                ..Thresholds::default()
            },
            ..base
        },
        "volpath-gamma-fbm045" => ScenarioConfig {
            description: "Delta-gamma hedging with a volatility path sigma_t = 0.2 + 0.05 sin t used for pricing.".into(),
            path: PathSpec {
                vol_path: Some(VolPathSpec { base: 0.2, amplitude: 0.05 }),
                ..exp_fbm()
            },
            experiment: gamma_hedge(None),
            taylor_seeds: 2,
            thresholds: Thresholds {
                final_median_rel: Some(0.01),
                monotone_from: Some(10),
                decreasing: true,
                ..Thresholds::default()
            },
            ..base
        },
        "asian-gamma-fbm045" => ScenarioConfig {
            description: "Gamma-neutral hedging of the squared running integral along exponential fBm paths.".into(),
            path: exp_fbm(),
            experiment: Experiment::Asian {
                target: squared_average(),
                hedges: vec![InstrumentSpec::Identity, InstrumentSpec::SquareExp { sigma: Some(0.2) }],
                rule: AsianRule::DeltaGamma,
            },
            taylor_seeds: 2,
            thresholds: Thresholds {
                final_median_rel: Some(0.01),
                monotone_from: Some(10),
                decreasing: true,
                ..Thresholds::default()
            },
            ..base
        },
        "asian-delta-mismatched" => ScenarioConfig {
            description: "Delta-only hedging of the squared running integral on GBM paths with realized volatility 0.4 against pricing volatility 0.2.".into(),
            path: PathSpec {
                sigma_realized: 0.4,
                ..PathSpec::default()
            },
            experiment: Experiment::Asian {
                target: squared_average(),
                hedges: vec![InstrumentSpec::Identity],
                rule: AsianRule::DeltaOnlyQvMatched,
            },
            taylor_seeds: 2,
            thresholds: Thresholds {
                floor: Some(FloorCheck { from: 12, to: 16, rel: 0.01 }),
                ..Thresholds::default()
            },
            ..base
        },
        "asian-running-average" => ScenarioConfig {
            description: "Delta hedging of the running-average forward, whose price is linear in the spot.".into(),
            experiment: Experiment::Asian {
                target: AsianSpec {
                    name: "runningAverageForward".into(),
                    sigma: 0.2,
                },
                hedges: vec![InstrumentSpec::Identity],
                rule: AsianRule::DeltaOnlyQvMatched,
            },
            taylor_seeds: 2,
            thresholds: Thresholds {
                max_abs_rel: Some(1e-12),
                ..Thresholds::default()
            },
            ..base
        },
        "lemma-sin" => ScenarioConfig {
            description: "Riemann sums of y d(sin t) - y cos t dt vanish and stay below the oscillation bound.".into(),
            seeds: 20,
            levels: (6..=16).collect(),
            path: brownian(),
            experiment: Experiment::Lemma,
            thresholds: Thresholds {
                monotone_from: Some(6),
                decreasing: true,
                ..Thresholds::default()
            },
            ..base
        },
        "zero-vol" => ScenarioConfig {
            description: "A constant path hedged with the underlying itself: every error is exactly zero.".into(),
            seeds: 4,
            max_level: 10,
            levels: (4..=10).collect(),
            path: PathSpec {
                kind: PathKind::Constant,
                ..PathSpec::default()
            },
            experiment: Experiment::Hedge {
                target: InstrumentSpec::Identity,
                hedges: vec![InstrumentSpec::Identity],
                rule: WeightRule::Delta,
            },
            thresholds: Thresholds {
                max_abs_rel: Some(0.0),
                ..Thresholds::default()
            },
            ..base
        },
        _ => {
            return Err(Error::Unknown {
                kind: "scenario",
                name: name.to_string(),
            })
        }
    };
    Ok(c)
}
