use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, LearnerConfig};
use crate::equilibrium::saddle_gap;
use crate::games::{Drift, GameFamily, GameSequence};
use crate::geometry::Regularizer;
use crate::learner::{run_bandit, run_gradient};
use crate::metrics::{self, RateFit, RunTrace};
use crate::{ActionProfile, Error, Result};

/// First line of every trace CSV.
pub const CSV_HEADER: &str = "# proxlearn-trace v1";
pub const SUMMARY_FORMAT: &str = "proxlearn-summary v1";
/// Environment variable naming the default output directory.
pub const OUTPUT_ENV: &str = "PROXLEARN_OUT";
const DEFAULT_OUTPUT: &str = "proxlearn-out";
const CHECKPOINTS: usize = 60;

/// A finished single-seed run with its per-stage metric series.
#[derive(Clone, Debug)]
pub struct SeedRun {
    pub seed: u64,
    pub trace: RunTrace<f64>,
    /// Per-stage series, indexed by stage − 1. Cumulative quantities are
    /// prefixed with `cum_`.
    pub series: BTreeMap<&'static str, Vec<f64>>,
    /// End-of-run figures.
    pub metrics: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub metrics: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub format: String,
    pub config: ExperimentConfig,
    pub warnings: Vec<String>,
    /// Set when at least one seed failed.
    pub partial: bool,
    pub seeds: Vec<SeedSummary>,
    pub checkpoints: Vec<usize>,
    /// Means over the successful seeds, sampled at `checkpoints`.
    pub mean_series: BTreeMap<String, Vec<f64>>,
    /// Tail fits of the mean cumulative series.
    pub rate_fits: BTreeMap<String, RateFit>,
}

/// Output directory: the config's, else `$PROXLEARN_OUT`, else `./proxlearn-out`.
pub fn output_root(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output_dir
        .clone()
        .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT))
}

/// Runs every seed in parallel, writes `seed-<s>.csv` per seed and
/// `summary.json` into `<output>/<name>/`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Summary> {
    let validation = cfg.validate()?;
    let dir = output_root(cfg).join(&cfg.name);
    fs::create_dir_all(&dir)?;

    let outcomes: Vec<(u64, Result<(SeedRun, PathBuf)>)> = cfg
        .seeds
        .par_iter()
        .map(|&seed| {
            let out = run_seed(cfg, seed).and_then(|run| {
                let path = dir.join(format!("seed-{seed}.csv"));
                write_csv(&path, &run)?;
                Ok((run, path))
            });
            (seed, out)
        })
        .collect();

    let mut seeds = Vec::with_capacity(outcomes.len());
    let mut runs = Vec::new();
    for (seed, outcome) in outcomes {
        match outcome {
            Ok((run, path)) => {
                seeds.push(SeedSummary {
                    seed,
                    csv: Some(path),
                    error: None,
                    metrics: run.metrics.clone(),
                });
                runs.push(run);
            }
            Err(e) => seeds.push(SeedSummary {
                seed,
                csv: None,
                error: Some(e.to_string()),
                metrics: BTreeMap::new(),
            }),
        }
    }

    let checkpoints = checkpoints(cfg.horizon);
    let mut mean_series = BTreeMap::new();
    let mut rate_fits = BTreeMap::new();
    if let Some(first) = runs.first() {
        for &key in first.series.keys() {
            let mean = mean_of(runs.iter().map(|r| &r.series[key][..]));
            if key.starts_with("cum_") {
                if let Ok(fit) = metrics::fit_tail(&mean) {
                    if fit.slope.is_finite() && fit.r_squared.is_finite() {
                        rate_fits.insert(key.to_string(), fit);
                    }
                }
            }
            let sampled = checkpoints.iter().map(|&n| mean[n - 1]).collect::<Vec<_>>();
            if sampled.iter().all(|v| v.is_finite()) {
                mean_series.insert(key.to_string(), sampled);
            }
        }
    }

    let summary = Summary {
        format: SUMMARY_FORMAT.into(),
        config: cfg.clone(),
        warnings: validation.warnings,
        partial: runs.len() < cfg.seeds.len(),
        seeds,
        checkpoints,
        mean_series,
        rate_fits,
    };
    let file = BufWriter::new(File::create(dir.join("summary.json"))?);
    serde_json::to_writer_pretty(file, &summary)?;
    Ok(summary)
}

fn mean_of<'a>(series: impl Iterator<Item = &'a [f64]>) -> Vec<f64> {
    let mut total: Vec<f64> = Vec::new();
    let mut count = 0.0;
    for s in series {
        if total.is_empty() {
            total = s.to_vec();
        } else {
            for (t, &v) in total.iter_mut().zip(s) {
                *t += v;
            }
        }
        count += 1.0;
    }
    total.iter().map(|t| t / count).collect()
}

/// Roughly log-spaced stages ending at the horizon.
pub fn checkpoints(horizon: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..CHECKPOINTS)
        .map(|k| {
            let t = k as f64 / (CHECKPOINTS - 1) as f64;
            (horizon as f64).powf(t).round() as usize
        })
        .map(|n| n.clamp(1, horizon))
        .collect();
    out.dedup();
    out
}

/// Runs one seed and evaluates every metric that applies to the game.
pub fn run_seed(cfg: &ExperimentConfig, seed: u64) -> Result<SeedRun> {
    let seq = cfg.sequence()?;
    let reg = Regularizer::new(cfg.regularizer);
    let schedule = cfg.learner.step().schedule();
    let trace = match &cfg.learner {
        LearnerConfig::Gradient { noise, .. } => {
            run_gradient(&seq, &reg, &schedule, &noise.schedule(), cfg.horizon, seed)?
        }
        LearnerConfig::Bandit { .. } => {
            let spsa = cfg.spsa()?.expect("bandit learner has sampling parameters");
            run_bandit(&seq, &reg, &schedule, &spsa, cfg.horizon, seed)?
        }
    };
    let (series, metrics) = evaluate(&trace, &seq, &reg, cfg.horizon)?;
    Ok(SeedRun {
        seed,
        trace,
        series,
        metrics,
    })
}

type Evaluation = (BTreeMap<&'static str, Vec<f64>>, BTreeMap<String, f64>);

fn evaluate(
    trace: &RunTrace<f64>,
    seq: &GameSequence<f64>,
    reg: &Regularizer,
    horizon: usize,
) -> Result<Evaluation> {
    let mut series: BTreeMap<&'static str, Vec<f64>> = BTreeMap::new();
    let mut metrics: BTreeMap<String, f64> = BTreeMap::new();
    let players = seq.players();
    let bandit = trace.is_bandit();

    let mut gap = vec![0.0; horizon];
    for i in 0..players {
        for (g, v) in gap
            .iter_mut()
            .zip(metrics::gap_series(trace, seq.sets(), i))
        {
            *g += v;
        }
    }
    metrics.insert("gap".into(), gap[horizon - 1]);
    series.insert("cum_gap", gap);

    for i in 0..players {
        match metrics::static_regret(trace, seq, i, trace.full_window()) {
            Ok(r) => {
                metrics.insert(format!("static_regret_{i}"), r);
            }
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }

    let first = seq.stage(1)?;
    let start = &trace.stage(1).candidate;
    if (0..players).all(|i| first.best_response(i, start).is_some()) {
        let mut dynreg = vec![0.0; horizon];
        for i in 0..players {
            for (d, v) in dynreg
                .iter_mut()
                .zip(metrics::dynamic_regret_series(trace, seq, i)?)
            {
                *d += v;
            }
        }
        metrics.insert("dynamic_regret".into(), dynreg[horizon - 1]);
        series.insert("cum_dynamic_regret", dynreg);
    }

    let path = match seq.drift() {
        Drift::Static | Drift::Drifting { .. } => {
            optional(metrics::equilibrium_path(seq, horizon))?
        }
        _ => None,
    };
    if let Some(path) = &path {
        let mut add = |key: &'static str, cum: &'static str, realized: bool| -> Result<()> {
            let sq = metrics::tracking_series(trace, path, realized)?;
            let cumulative = cumulative_sum(&sq);
            metrics.insert(
                cum.trim_start_matches("cum_").into(),
                cumulative[horizon - 1],
            );
            series.insert(key, sq);
            series.insert(cum, cumulative);
            Ok(())
        };
        add("sq_tracking_error", "cum_tracking_error", false)?;
        if bandit {
            add(
                "sq_tracking_error_realized",
                "cum_tracking_error_realized",
                true,
            )?;
        }
    }

    let limit_eq = match seq.limit_game() {
        Some(g) => optional(metrics::unique_equilibrium(&g))?,
        None => None,
    };
    if let Some(eq) = &limit_eq {
        let distance: Vec<f64> = trace
            .rows()
            .iter()
            .map(|r| r.candidate.sub(eq).norm())
            .collect();
        metrics.insert("final_distance".into(), distance[horizon - 1]);
        series.insert("distance", distance);
        if bandit {
            let last = trace.stage(horizon).action(true);
            metrics.insert("final_distance_realized".into(), last.sub(eq).norm());
        }
        let bregman = metrics::bregman_series(trace, seq, reg, eq)?;
        metrics.insert("final_bregman".into(), bregman[horizon - 1]);
        series.insert("bregman", bregman);
    }

    if matches!(seq.base().family(), GameFamily::BilinearZeroSum { .. }) {
        let game = seq.base();
        let last: Vec<f64> = trace
            .rows()
            .iter()
            .map(|r| saddle_gap(game, &r.candidate))
            .collect::<Result<_>>()?;
        let ergodic: Vec<f64> = metrics::ergodic_average(trace)
            .iter()
            .map(|x| saddle_gap(game, x))
            .collect::<Result<_>>()?;
        metrics.insert("saddle_gap".into(), last[horizon - 1]);
        metrics.insert("ergodic_saddle_gap".into(), ergodic[horizon - 1]);
        series.insert("saddle_gap", last);
        series.insert("ergodic_saddle_gap", ergodic);
    }

    metrics.retain(|_, v| v.is_finite());
    Ok((series, metrics))
}

fn optional<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Unsupported(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn cumulative_sum(v: &[f64]) -> Vec<f64> {
    let mut total = 0.0;
    v.iter()
        .map(|x| {
            total += x;
            total
        })
        .collect()
}

fn action_columns(prefix: &str, x: &ActionProfile<f64>) -> Vec<String> {
    x.blocks()
        .iter()
        .enumerate()
        .flat_map(|(i, b)| (0..b.len()).map(move |k| format!("{prefix}{i}_{k}")))
        .collect()
}

/// Writes one run as a versioned CSV: a comment line, then one row per stage.
pub fn write_csv(path: &Path, run: &SeedRun) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    writeln!(file, "{CSV_HEADER}")?;
    let mut out = csv::Writer::from_writer(file);

    let first = run.trace.stage(1);
    let bandit = run.trace.is_bandit();
    let diagnostics = first.bias_norm.is_some();
    let mut header = vec!["n".to_string()];
    header.extend(action_columns("x", &first.candidate));
    if bandit {
        header.extend(action_columns("xhat", first.action(true)));
    }
    header.push("step".into());
    if bandit {
        header.push("radius".into());
    }
    if diagnostics {
        header.push("bias_norm".into());
        header.push("noise_norm".into());
    }
    header.extend(run.series.keys().map(|k| k.to_string()));
    out.write_record(&header)?;

    let mut record: Vec<String> = Vec::with_capacity(header.len());
    for (idx, row) in run.trace.rows().iter().enumerate() {
        record.clear();
        record.push(row.stage.to_string());
        record.extend(row.candidate.iter_flat().map(f64::to_string));
        if bandit {
            record.extend(row.action(true).iter_flat().map(f64::to_string));
        }
        record.push(row.step.to_string());
        if bandit {
            record.push(row.radius.unwrap_or(f64::NAN).to_string());
        }
        if diagnostics {
            record.push(row.bias_norm.unwrap_or(f64::NAN).to_string());
            record.push(row.noise_norm.unwrap_or(f64::NAN).to_string());
        }
        record.extend(run.series.values().map(|s| s[idx].to_string()));
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}
