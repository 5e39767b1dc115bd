//! The three sweep experiments.
//!
//! Trials run on a rayon pool of the requested size, but every trial draws
//! from its own seed-derived streams and results are reduced in trial order,
//! so the output does not depend on the pool size.

use rayon::prelude::*;

use crate::channel::{draw_channel, estimate_channel, sigma_v_from_gamma};
use crate::detector::{detect_realization, theoretical_error};
use crate::error::{Error, Result};
use crate::geometry::sample_mt_location;
use crate::harness::config::ExperimentConfig;
use crate::harness::output::{fmt_sig, Csv};
use crate::harness::seed::{self, CHANNEL, TERMINAL};
use crate::harness::trial::{run_trial, sweep_params, LinkModel, Scenario, TrialResult};

/// Runs `f(i)` for `i in 0..n` on `jobs` threads (0 = all cores) and returns
/// the results in index order.
pub fn parallel_map<T, F>(n: usize, jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| (0..n).into_par_iter().map(&f).collect())
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn run_trials(scenario: &Scenario, config: &ExperimentConfig, num_locations: usize, jobs: usize) -> Result<Vec<TrialResult>> {
    parallel_map(config.num_trials, jobs, |t| {
        run_trial(scenario, num_locations, seed::trial_seed(config.seed, t))
    })
}

/// Mean/stderr of the IoU after `n` locations (1-based) across trials.
fn iou_at(trials: &[TrialResult], n: usize) -> (f64, f64) {
    let v: Vec<f64> = trials.iter().map(|t| t.iou_trace[n - 1]).collect();
    mean_stderr(&v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IouSweepRow {
    pub antennas: usize,
    pub num_locations: usize,
    pub mean_iou: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IouSweep {
    pub rows: Vec<IouSweepRow>,
}

impl IouSweep {
    pub fn csv(&self) -> String {
        let mut csv = Csv::new(&["M", "num_locations", "mean_iou", "stderr"]);
        for r in &self.rows {
            csv.row(&[
                r.antennas.to_string(),
                r.num_locations.to_string(),
                fmt_sig(r.mean_iou),
                fmt_sig(r.stderr),
            ]);
        }
        csv.finish()
    }

    pub fn get(&self, antennas: usize, num_locations: usize) -> Option<&IouSweepRow> {
        self.rows
            .iter()
            .find(|r| r.antennas == antennas && r.num_locations == num_locations)
    }
}

/// Mean IoU against the number of visited locations for each array size,
/// with perfect LoS knowledge.
pub fn case_study_1(config: &ExperimentConfig, jobs: usize) -> Result<IouSweep> {
    let mut rows = Vec::new();
    for &m in &config.sweeps.antennas {
        let scenario = Scenario::new(config.layout.clone(), m, config.cell_size, LinkModel::Perfect)?;
        let trials = run_trials(&scenario, config, config.num_locations, jobs)?;
        for n in 1..=config.num_locations {
            let (mean_iou, stderr) = iou_at(&trials, n);
            rows.push(IouSweepRow {
                antennas: m,
                num_locations: n,
                mean_iou,
                stderr,
            });
        }
    }
    Ok(IouSweep { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSweepRow {
    pub k_db: f64,
    pub gamma_v_db: f64,
    pub empirical_error: f64,
    pub theoretical_error: f64,
    pub links: usize,
    pub errors: usize,
}

impl ErrorSweepRow {
    /// Binomial standard deviation of the empirical rate around the theory.
    pub fn binomial_sigma(&self) -> f64 {
        let p = self.theoretical_error;
        (p * (1.0 - p) / self.links as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSweep {
    pub rows: Vec<ErrorSweepRow>,
}

impl ErrorSweep {
    pub fn csv(&self) -> String {
        let mut csv = Csv::new(&["K_db", "gamma_v_db", "empirical_error", "theoretical_error"]);
        for r in &self.rows {
            csv.row(&[
                fmt_sig(r.k_db),
                fmt_sig(r.gamma_v_db),
                fmt_sig(r.empirical_error),
                fmt_sig(r.theoretical_error),
            ]);
        }
        csv.finish()
    }
}

/// Per-realization outcome of the LoS error sweep.
struct LinkTally {
    errors: usize,
    links: usize,
    theory_sum: f64,
}

/// Empirical LoS error against the closed-form prediction over a grid of
/// K-factors and estimate SNRs, `error_realizations` terminal positions per
/// point.
pub fn case_study_2(config: &ExperimentConfig, k_db: &[f64], gamma_v_db: &[f64], jobs: usize) -> Result<ErrorSweep> {
    let scenario = Scenario::new(config.layout.clone(), config.num_antennas, config.cell_size, LinkModel::Perfect)?;
    let mut rows = Vec::new();
    for &k in k_db {
        for &g in gamma_v_db {
            let params = sweep_params(config, k, g)?;
            let tallies = parallel_map(config.error_realizations, jobs, |r| {
                let ts = seed::trial_seed(config.seed, r);
                let mt = sample_mt_location(&scenario.layout, &mut seed::stream(ts, 0, TERMINAL))?;
                let mut rng = seed::stream(ts, 0, CHANNEL);
                let truth = draw_channel(&scenario.layout, &scenario.array, mt, &params, &mut rng)?;
                let sigma_v_sq = sigma_v_from_gamma(&truth, params.k, g);
                let est = estimate_channel(truth, sigma_v_sq, &mut rng)?;
                let det = detect_realization(&est, &params, &config.detector)?;
                let errors = det.b_hat.iter().zip(&est.b).filter(|(a, b)| a != b).count();
                Ok(LinkTally {
                    errors,
                    links: est.b.len(),
                    theory_sum: theoretical_error(&est.p, params.k, sigma_v_sq)? * est.b.len() as f64,
                })
            })?;
            let errors: usize = tallies.iter().map(|t| t.errors).sum();
            let links: usize = tallies.iter().map(|t| t.links).sum();
            let theory: f64 = tallies.iter().map(|t| t.theory_sum).sum();
            rows.push(ErrorSweepRow {
                k_db: k,
                gamma_v_db: g,
                empirical_error: errors as f64 / links as f64,
                theoretical_error: theory / links as f64,
                links,
                errors,
            });
        }
    }
    Ok(ErrorSweep { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSweepRow {
    pub k_db: f64,
    pub gamma_v_db: f64,
    pub num_locations: usize,
    pub mean_iou: f64,
    pub stderr: f64,
    pub perfect_iou: f64,
    pub perfect_stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSweep {
    pub rows: Vec<NoiseSweepRow>,
}

impl NoiseSweep {
    pub fn csv(&self) -> String {
        let mut csv = Csv::new(&["K_db", "gamma_v_db", "num_locations", "mean_iou", "stderr", "perfect_iou"]);
        for r in &self.rows {
            csv.row(&[
                fmt_sig(r.k_db),
                fmt_sig(r.gamma_v_db),
                r.num_locations.to_string(),
                fmt_sig(r.mean_iou),
                fmt_sig(r.stderr),
                fmt_sig(r.perfect_iou),
            ]);
        }
        csv.finish()
    }

    pub fn get(&self, k_db: f64, gamma_v_db: f64, num_locations: usize) -> Option<&NoiseSweepRow> {
        self.rows
            .iter()
            .find(|r| r.k_db == k_db && r.gamma_v_db == gamma_v_db && r.num_locations == num_locations)
    }
}

/// Mean IoU with detected LoS bits against the estimate SNR for several
/// K-factors, next to the perfect-knowledge reference on the same terminal
/// paths.
pub fn case_study_3(
    config: &ExperimentConfig,
    k_db: &[f64],
    gamma_v_db: &[f64],
    locations: &[usize],
    jobs: usize,
) -> Result<NoiseSweep> {
    let horizon = locations.iter().copied().max().unwrap_or(0);
    if horizon == 0 {
        return Err(Error::invalid("need at least one location count"));
    }
    let base = Scenario::new(config.layout.clone(), config.num_antennas, config.cell_size, LinkModel::Perfect)?;
    let perfect = run_trials(&base, config, horizon, jobs)?;
    let mut rows = Vec::new();
    for &k in k_db {
        for &g in gamma_v_db {
            let scenario = base.with_link(LinkModel::Detected {
                params: sweep_params(config, k, g)?,
                detector: config.detector,
            });
            let trials = run_trials(&scenario, config, horizon, jobs)?;
            for &n in locations {
                let (mean_iou, stderr) = iou_at(&trials, n);
                let (perfect_iou, perfect_stderr) = iou_at(&perfect, n);
                rows.push(NoiseSweepRow {
                    k_db: k,
                    gamma_v_db: g,
                    num_locations: n,
                    mean_iou,
                    stderr,
                    perfect_iou,
                    perfect_stderr,
                });
            }
        }
    }
    Ok(NoiseSweep { rows })
}
