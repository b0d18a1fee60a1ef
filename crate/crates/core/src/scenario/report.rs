use std::fs;
use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::paths::PartitionSequence;

use super::config::ScenarioConfig;
use super::fit::{fit_convergence, ConvergenceFit, LevelStats, MIN_FIT_LEVELS};
use super::runner::RunRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorSummary {
    pub runs: usize,
    pub max_relative_gap: f64,
    pub fallback_intervals: usize,
}

/// Per-level statistics of `|metric|`, the convergence fit and the
/// threshold checks of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSummary {
    pub scenario: String,
    pub config: ScenarioConfig,
    /// Median reference value over successful runs at the first level.
    pub reference_value: f64,
    pub levels: Vec<LevelStats>,
    pub fit: Option<ConvergenceFit>,
    pub taylor: Option<TaylorSummary>,
    pub qv_mismatch_runs: usize,
    pub total_runs: usize,
    pub failed_runs: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl ConvergenceSummary {
    pub fn level(&self, level: u32) -> Option<&LevelStats> {
        self.levels.iter().find(|s| s.level == level)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub summary: ConvergenceSummary,
    pub runs: Vec<RunRecord>,
}

impl ScenarioReport {
    /// `summary.json` exactly as [`ScenarioReport::write`] emits it.
    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.summary)? + "\n")
    }

    /// Write `runs.csv`, `levels.csv` and `summary.json` into `dir`.
    pub fn write(&self, dir: &FsPath) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut w = csv::Writer::from_path(dir.join("runs.csv"))?;
        w.write_record([
            "seed_index",
            "seed",
            "level",
            "mesh",
            "metric",
            "abs_metric",
            "reference",
            "bound",
            "taylor_gap",
            "qv_mismatch",
            "error",
        ])?;
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        for r in &self.runs {
            w.write_record([
                r.seed_index.to_string(),
                r.seed.to_string(),
                r.level.to_string(),
                r.mesh.to_string(),
                opt(r.metric),
                opt(r.metric.map(f64::abs)),
                opt(r.reference),
                opt(r.bound),
                opt(r.taylor_gap),
                r.qv_mismatch.to_string(),
                r.error.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_path(dir.join("levels.csv"))?;
        w.write_record([
            "level", "mesh", "runs", "failed", "median", "mean", "q1", "q3", "iqr", "max",
        ])?;
        for s in &self.summary.levels {
            w.write_record([
                s.level.to_string(),
                s.mesh.to_string(),
                s.runs.to_string(),
                s.failed.to_string(),
                s.median.to_string(),
                s.mean.to_string(),
                s.q1.to_string(),
                s.q3.to_string(),
                s.iqr.to_string(),
                s.max.to_string(),
            ])?;
        }
        w.flush()?;

        fs::write(dir.join("summary.json"), self.summary_json()?)?;
        Ok(())
    }
}

pub(crate) fn summarize(config: &ScenarioConfig, seq: &PartitionSequence, runs: Vec<RunRecord>) -> ScenarioReport {
    let mut levels = Vec::new();
    for &l in &config.levels {
        let at: Vec<&RunRecord> = runs.iter().filter(|r| r.level == l).collect();
        let values: Vec<f64> = at.iter().filter_map(|r| r.metric).map(f64::abs).collect();
        if !values.is_empty() {
            levels.push(LevelStats::from_values(
                l,
                seq.mesh(l),
                &values,
                at.len() - values.len(),
            ));
        }
    }

    let first = config.levels[0];
    let mut refs: Vec<f64> = runs
        .iter()
        .filter(|r| r.level == first)
        .filter_map(|r| r.reference)
        .collect();
    refs.sort_by(f64::total_cmp);
    let reference_value = super::fit::quantile_sorted(&refs, 0.5);

    let fit = if levels.len() >= MIN_FIT_LEVELS {
        let ls: Vec<u32> = levels.iter().map(|s| s.level).collect();
        let ms: Vec<f64> = levels.iter().map(|s| s.median).collect();
        fit_convergence(&ls, &ms).ok()
    } else {
        None
    };

    let taylor_runs: Vec<&RunRecord> = runs.iter().filter(|r| r.taylor_gap.is_some()).collect();
    let taylor = (!taylor_runs.is_empty()).then(|| TaylorSummary {
        runs: taylor_runs.len(),
        max_relative_gap: taylor_runs.iter().filter_map(|r| r.taylor_gap).fold(0.0, f64::max),
        fallback_intervals: taylor_runs.iter().filter_map(|r| r.taylor_fallbacks).sum(),
    });

    let failed_runs = runs.iter().filter(|r| r.error.is_some()).count();
    let mut summary = ConvergenceSummary {
        scenario: config.name.clone(),
        config: config.clone(),
        reference_value,
        levels,
        fit,
        taylor,
        qv_mismatch_runs: runs.iter().filter(|r| r.qv_mismatch).count(),
        total_runs: runs.len(),
        failed_runs,
        checks: Vec::new(),
        passed: false,
    };
    summary.checks = checks(&summary, &runs);
    summary.passed = summary.checks.iter().all(|c| c.passed);
    ScenarioReport { summary, runs }
}

fn checks(s: &ConvergenceSummary, runs: &[RunRecord]) -> Vec<Check> {
    let th = &s.config.thresholds;
    let reference = s.reference_value.abs();
    let mut out = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        out.push(Check {
            name: name.into(),
            passed,
            detail,
        })
    };

    let rate = s.failed_runs as f64 / s.total_runs.max(1) as f64;
    push(
        "error_rate",
        rate <= th.max_error_rate && s.levels.len() == s.config.levels.len(),
        format!("{} of {} runs failed", s.failed_runs, s.total_runs),
    );

    let last = s.levels.last();
    if let Some(rel) = th.final_median_rel {
        let limit = rel * reference;
        let got = last.map_or(f64::INFINITY, |l| l.median);
        push(
            "final_median",
            got <= limit,
            format!("median {got:e} vs limit {limit:e}"),
        );
    }
    if let Some(rel) = th.final_mean_rel {
        let limit = rel * reference;
        let got = last.map_or(f64::INFINITY, |l| l.mean);
        push("final_mean", got <= limit, format!("mean {got:e} vs limit {limit:e}"));
    }
    if let Some(rel) = th.max_abs_rel {
        let limit = rel * reference;
        let got = s.levels.iter().map(|l| l.max).fold(0.0, f64::max);
        push(
            "max_abs",
            got <= limit,
            format!("largest |metric| {got:e} vs limit {limit:e}"),
        );
    }
    if let Some(from) = th.monotone_from {
        let meds: Vec<(u32, f64)> = s
            .levels
            .iter()
            .filter(|l| l.level >= from)
            .map(|l| (l.level, l.median))
            .collect();
        let bad: Vec<u32> = meds.windows(2).filter(|w| w[1].1 > w[0].1).map(|w| w[1].0).collect();
        push(
            "monotone",
            bad.is_empty(),
            if bad.is_empty() {
                format!("medians nonincreasing from level {from}")
            } else {
                format!("median increases at levels {bad:?}")
            },
        );
    }
    if let Some([lo, hi]) = th.slope {
        let (ok, detail) = match s.fit {
            Some(ConvergenceFit::Rate { slope, stderr }) => (
                slope >= lo && slope <= hi,
                format!("slope {slope:.4} +- {stderr:.4} vs [{lo}, {hi}]"),
            ),
            Some(ConvergenceFit::Converged) => (false, "converged to round-off; no slope".into()),
            None => (false, "no fit".into()),
        };
        push("slope", ok, detail);
    }
    if th.decreasing {
        let (ok, detail) = match s.fit {
            Some(ConvergenceFit::Rate { slope, .. }) => (slope < 0.0, format!("slope {slope:.4}")),
            Some(ConvergenceFit::Converged) => (true, "converged to round-off".into()),
            None => (false, "no fit".into()),
        };
        push("decreasing", ok, detail);
    }
    if let Some(f) = th.floor {
        let limit = f.rel * reference;
        let meds: Vec<f64> = s
            .levels
            .iter()
            .filter(|l| l.level >= f.from && l.level <= f.to)
            .map(|l| l.median)
            .collect();
        let lowest = meds.iter().copied().fold(f64::INFINITY, f64::min);
        push(
            "floor",
            !meds.is_empty() && lowest >= limit,
            format!(
                "lowest median on levels {}..{} is {lowest:e} vs floor {limit:e}",
                f.from, f.to
            ),
        );
    }
    if let Some(ratio) = th.last_over_first {
        let (a, b) = (s.levels.first().map(|l| l.median), last.map(|l| l.median));
        let got = match (a, b) {
            (Some(a), Some(b)) if a > 0.0 => b / a,
            _ => f64::INFINITY,
        };
        push(
            "last_over_first",
            got <= ratio,
            format!("ratio {got:e} vs limit {ratio:e}"),
        );
    }
    let bounded: Vec<&RunRecord> = runs.iter().filter(|r| r.bound.is_some()).collect();
    if !bounded.is_empty() {
        let broken = bounded
            .iter()
            .filter(|r| matches!((r.metric, r.bound), (Some(m), Some(b)) if m.abs() > b))
            .count();
        push(
            "bound",
            broken == 0,
            format!("{broken} of {} runs exceed their bound", bounded.len()),
        );
    }
    if let Some(t) = &s.taylor {
        push(
            "taylor_identity",
            t.max_relative_gap <= th.taylor_identity,
            format!(
                "largest gap {:e} over {} runs ({} fallback intervals)",
                t.max_relative_gap, t.runs, t.fallback_intervals
            ),
        );
    }
    out
}
