use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{aggregate, confusion, ConfusionCounts, RateReport};
use crate::noise::sample_noise;
use crate::oracle::{active_set, in_theta_k, SignalVector};
use crate::primitives::{ObservationVector, SelectionMask};
use crate::selector::select;
use crate::uq::{evaluate_uq, UqRecord, UqReport};

use super::config::ExperimentConfig;
use super::records::RepRecord;
use super::seed::stream_rng;

/// Environment variable capping the worker count (`0` or unset: all cores).
pub const THREADS_ENV: &str = "HULLSELECT_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    /// `None` or `Some(0)` uses the hardware default.
    Parallel { threads: Option<usize> },
}

/// Reads [`THREADS_ENV`].
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => v.trim().parse::<usize>().map(|t| (t > 0).then_some(t)).map_err(|_| Error::Config {
            path: THREADS_ENV.into(),
            message: format!("expected a non-negative integer, got {v:?}"),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    #[serde(rename = "oracle_A")]
    pub oracle_a: f64,
    pub active_set: SelectionMask,
    pub active_size: usize,
    pub rates: RateReport,
    pub uq: UqReport,
    pub theta_in_theta_k: Option<bool>,
    pub reps_csv: Option<String>,
    pub wall_time_seconds: f64,
    pub software_version: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub report: ExperimentReport,
    pub records: Vec<RepRecord>,
}

/// Runs the experiment with the worker count from [`THREADS_ENV`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_experiment_with(cfg, Execution::Parallel { threads: threads_from_env()? })
}

fn replicate(cfg: &ExperimentConfig, theta: &SignalVector, active: &SelectionMask, rep: u64) -> Result<RepRecord> {
    let mut rng = stream_rng(cfg.master_seed, rep);
    let xi = sample_noise(&cfg.noise, cfg.n, &mut rng)?;
    let x: Vec<f64> = theta.values().iter().zip(&xi).map(|(t, e)| t + cfg.sigma * e).collect();
    let obs = ObservationVector::new(x, cfg.sigma)?;
    let result = select(&obs, &cfg.selector())?;
    let c = confusion(&result.selected, active)?;
    Ok(RepRecord {
        rep,
        false_pos: c.false_pos,
        false_neg: c.false_neg,
        selected_size: c.selected_size,
        preselector_size: result.preselector.len(),
        active_size: c.active_size,
        hamming: c.hamming(),
    })
}

/// Runs one experiment cell.
///
/// `θ` and `I*(oracle_A, θ)` are fixed once; replication `r` (1-based) draws
/// its noise from a stream derived from `(master_seed, r)`. Serial and
/// parallel execution give identical records and reports.
pub fn run_experiment_with(cfg: &ExperimentConfig, exec: Execution) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let started = Instant::now();
    let theta = cfg.theta()?;
    let oracle_a = cfg.evaluation_level();
    let active = active_set(&theta, oracle_a, cfg.sigma)?.active;
    let theta_in_theta_k = cfg
        .theta_check
        .map(|tc| in_theta_k(&theta, cfg.sigma, tc.a0, tc.a1))
        .transpose()?;

    let reps = 1..=cfg.replications as u64;
    let records: Vec<RepRecord> = match exec {
        Execution::Serial => reps.map(|r| replicate(cfg, &theta, &active, r)).collect::<Result<_>>()?,
        Execution::Parallel { threads } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .map_err(|e| Error::Io(std::io::Error::other(e)))?;
            pool.install(|| {
                reps.into_par_iter()
                    .map(|r| replicate(cfg, &theta, &active, r))
                    .collect::<Result<Vec<_>>>()
            })?
        }
    };

    let counts: Vec<ConfusionCounts> = records.iter().map(|r| r.confusion(cfg.n)).collect();
    let rates = aggregate(&counts, &cfg.kfwer_ks)?;
    let uq_records: Vec<UqRecord> = records.iter().map(RepRecord::uq).collect();
    let uq = evaluate_uq(&uq_records, cfg.n, &cfg.uq)?;

    let report = ExperimentReport {
        config: cfg.clone(),
        oracle_a,
        active_size: active.len(),
        active_set: active,
        rates,
        uq,
        theta_in_theta_k,
        reps_csv: cfg.output.reps_csv.clone(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        software_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    Ok(ExperimentOutcome { report, records })
}
