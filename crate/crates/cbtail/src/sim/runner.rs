//! Monte Carlo experiment engine: per-cell replicate loops, deterministic
//! stream addressing, replicate-level parallelism and per-cell aggregation.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{bootstrap_distribution, confidence_interval, MultiplierLaw};
use crate::empirical::ranks;
use crate::error::{Error, Result};
use crate::seed::{derive_seed, stream_rng, STREAM_BOOT, STREAM_DATA};
use crate::tail::{Smoothing, TailEstimator};

use super::config::{Cell, ExperimentConfig};

/// Which estimator a result row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Raw,
    Checkerboard,
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Estimator::Raw => "raw",
            Estimator::Checkerboard => "checkerboard",
        })
    }
}

/// Everything retained from one replicate of one cell.
#[derive(Debug, Clone)]
pub struct ReplicateOutcome {
    pub cell: usize,
    pub rep: usize,
    /// Point estimates, clamped to [0, 1] like the reported intervals.
    pub raw: f64,
    pub checkerboard: f64,
    /// Clamped interval endpoints per estimator.
    pub raw_ci: (f64, f64),
    pub checkerboard_ci: (f64, f64),
    /// Sample standard deviation of the scaled bootstrap replicates
    /// `(mu/tau) sqrt(k_n) (lambda_reweighted - lambda_hat)`; it estimates
    /// the limiting standard deviation directly.
    pub boot_sd: f64,
    /// Wall seconds for this replicate; 0 when timing is disabled.
    pub seconds: f64,
}

/// One aggregated result row; two per cell (raw and checkerboard).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub model: String,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub estimator: Estimator,
    pub bias: f64,
    pub mse: f64,
    pub coverage: f64,
    pub ci_length: f64,
    pub reps: usize,
    pub seconds: f64,
}

/// Completed experiment: aggregated rows in cell order plus the replicate
/// table they were computed from and the provenance pair.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub records: Vec<CellRecord>,
    pub outcomes: Vec<ReplicateOutcome>,
    pub config_hash: u64,
    pub master_seed: u64,
    /// True when the model's limiting variance at the requested corner is
    /// zero (comonotone, independence, any tail-independent corner). The
    /// rescaled estimator then converges to a point mass, quantile-inversion
    /// intervals carry no information, and the coverage column should not be
    /// read as a calibration measure.
    pub degenerate_variance: bool,
}

/// Run the full cell grid. Replicate (c, r) draws its data from the stream
/// addressed by (master seed, DATA, c, r) and its bootstrap from streams
/// under (master seed, BOOT, c, r), so results are identical under any
/// parallelism degree.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let oracle = config.model.tail_oracle(config.side)?;
    let cells = config.cells()?;
    let reps = config.reps;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::Config(format!("building worker pool: {e}")))?;
    let mut outcomes: Vec<ReplicateOutcome> = pool.install(|| {
        (0..cells.len() * reps)
            .into_par_iter()
            .map(|task| run_replicate(config, &cells[task / reps], task % reps))
            .collect::<Result<_>>()
    })?;
    // The indexed collect is already ordered; sorting pins the contract that
    // aggregation never depends on the schedule.
    outcomes.sort_by_key(|o| (o.cell, o.rep));

    let mut records = Vec::with_capacity(2 * cells.len());
    for cell in &cells {
        let slice = &outcomes[cell.index * reps..(cell.index + 1) * reps];
        let seconds: f64 = slice.iter().map(|o| o.seconds).sum();
        for estimator in [Estimator::Raw, Estimator::Checkerboard] {
            records.push(aggregate(config, cell, estimator, slice, oracle.lambda, seconds));
        }
    }
    Ok(ExperimentResult {
        records,
        outcomes,
        config_hash: config.config_hash(),
        master_seed: config.master_seed,
        degenerate_variance: oracle.sigma2 == 0.0,
    })
}

fn run_replicate(config: &ExperimentConfig, cell: &Cell, rep: usize) -> Result<ReplicateOutcome> {
    let started = config.timing.then(Instant::now);
    let (c, r) = (cell.index as u64, rep as u64);
    let mut rng = stream_rng(config.master_seed, &[STREAM_DATA, c, r]);
    let sample = config.model.sample(cell.n, &mut rng)?;
    let pseudo = ranks(&sample)?;
    let (k, m) = (cell.plan.k_n, cell.plan.m_n);

    let raw = TailEstimator::new(pseudo, k, m, config.side, Smoothing::Raw)?
        .lambda_hat()?
        .value;
    let boot_seed = derive_seed(config.master_seed, &[STREAM_BOOT, c, r]);
    let dist = bootstrap_distribution(
        &sample,
        &MultiplierLaw::StdExponential,
        k,
        m,
        config.side,
        config.bootstrap_b,
        boot_seed,
    )?;
    // The distribution is centered at the checkerboard estimate; reuse it.
    let checkerboard = dist.center();
    debug_assert!(
        (raw - checkerboard).abs()
            <= 4.0 * cell.n as f64 / (k as f64 * m as f64) + 1e-9,
        "smoothing moved the estimate beyond its deviation bound"
    );
    let cb_ci = confidence_interval(&dist, checkerboard, k, config.level)?;
    let raw_ci = confidence_interval(&dist, raw, k, config.level)?;
    let boot_sd = {
        let b = dist.len() as f64;
        let mean = dist.replicates().iter().sum::<f64>() / b;
        let ss = dist
            .replicates()
            .iter()
            .map(|x| (x - mean) * (x - mean))
            .sum::<f64>();
        (ss / (b - 1.0)).sqrt()
    };

    Ok(ReplicateOutcome {
        cell: cell.index,
        rep,
        raw,
        checkerboard,
        raw_ci: (raw_ci.lo, raw_ci.hi),
        checkerboard_ci: (cb_ci.lo, cb_ci.hi),
        boot_sd,
        seconds: started.map_or(0.0, |t| t.elapsed().as_secs_f64()),
    })
}

fn aggregate(
    config: &ExperimentConfig,
    cell: &Cell,
    estimator: Estimator,
    outcomes: &[ReplicateOutcome],
    lambda_true: f64,
    seconds: f64,
) -> CellRecord {
    let reps = outcomes.len();
    let mut dev_sum = 0.0;
    let mut dev_sq_sum = 0.0;
    let mut covered = 0usize;
    let mut length_sum = 0.0;
    for outcome in outcomes {
        let (estimate, (lo, hi)) = match estimator {
            Estimator::Raw => (outcome.raw, outcome.raw_ci),
            Estimator::Checkerboard => (outcome.checkerboard, outcome.checkerboard_ci),
        };
        let dev = estimate - lambda_true;
        dev_sum += dev;
        dev_sq_sum += dev * dev;
        if (lo..=hi).contains(&lambda_true) {
            covered += 1;
        }
        length_sum += hi - lo;
    }
    let repsf = reps as f64;
    CellRecord {
        model: config.model.label(),
        n: cell.n,
        alpha: cell.alpha,
        beta: cell.beta,
        estimator,
        bias: dev_sum / repsf,
        mse: dev_sq_sum / repsf,
        coverage: covered as f64 / repsf,
        ci_length: length_sum / repsf,
        reps,
        seconds,
    }
}
