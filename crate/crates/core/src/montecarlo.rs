//! Seeded Monte Carlo comparison of the shape estimators.
//!
//! For every grid shape and trial, `num_blocks` blocks of `block_size`
//! samples are drawn once and every configured estimator runs the block-wise
//! recursive mean over the same data. Across trials the finalized estimates
//! are reduced to a mean and an unbiased sample variance, and the bound
//! curves for one block and for all blocks are attached.
//!
//! Trials are independent; [`run_trial`] and [`summarize`] let a caller
//! spread them across threads and still get identical results as long as
//! the outcomes are handed to [`summarize`] in trial order.

use alloc::vec::Vec;

use crate::blockwise::{BlockEstimatorState, RestartPolicy};
use crate::bounds::{crlb, crlb_modified, normalized, BoundQuery};
use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::nakagami::{NakagamiParams, SampleBlock};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub m_grid: Vec<f64>,
    /// True Ω = E[x²].
    pub omega: f64,
    pub block_size: usize,
    pub num_blocks: usize,
    pub trials: usize,
    pub estimators: Vec<EstimatorKind>,
    pub base_seed: u64,
    pub restart_policy: RestartPolicy,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            m_grid: alloc::vec![0.5, 1.0, 2.0, 4.0, 8.0, 16.0],
            omega: 1.0,
            block_size: 30,
            num_blocks: 5,
            trials: 2000,
            estimators: EstimatorKind::ALL.to_vec(),
            base_seed: 0,
            restart_policy: RestartPolicy::default(),
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason| Err(Error::InvalidConfig { field, reason });
        if self.m_grid.is_empty() {
            return bad("m_grid", "must contain at least one shape");
        }
        if self.m_grid.iter().any(|m| !(m.is_finite() && *m > 0.0)) {
            return bad("m_grid", "values must be finite and > 0");
        }
        let mut sorted = self.m_grid.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return bad("m_grid", "values must be distinct");
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return bad("omega", "must be finite and > 0");
        }
        if self.block_size < 2 {
            return bad("block_size", "must be >= 2");
        }
        if self.num_blocks == 0 {
            return bad("num_blocks", "must be >= 1");
        }
        if self.trials == 0 {
            return bad("trials", "must be >= 1");
        }
        if self.estimators.is_empty() {
            return bad("estimators", "must name at least one estimator");
        }
        let mut kinds = self.estimators.clone();
        kinds.sort();
        if kinds.windows(2).any(|w| w[0] == w[1]) {
            return bad("estimators", "must be distinct");
        }
        Ok(())
    }

    /// Total samples per trial, N = block_size × num_blocks.
    pub fn total_samples(&self) -> usize {
        self.block_size * self.num_blocks
    }

    /// Seed of the sample stream for one (grid index, trial) pair:
    /// `base_seed + m_index · trials + trial`.
    pub fn trial_seed(&self, m_index: usize, trial: usize) -> u64 {
        self.base_seed.wrapping_add((m_index as u64) * (self.trials as u64) + trial as u64)
    }
}

/// Finalized estimate per configured estimator (same order as
/// `cfg.estimators`); `None` marks a failed trial.
pub type TrialOutcome = Vec<Option<f64>>;

/// Runs one trial: draws the blocks once and feeds them to every estimator.
pub fn run_trial(cfg: &BenchConfig, m_index: usize, trial: usize) -> Result<TrialOutcome> {
    let m = *cfg.m_grid.get(m_index).ok_or(Error::InvalidConfig { field: "m_grid", reason: "index out of range" })?;
    let params = NakagamiParams::from_omega(m, cfg.omega)?;
    let seed = cfg.trial_seed(m_index, trial);
    let mut rng = crate::rng_from_seed(seed);
    let blocks: Vec<SampleBlock> =
        (0..cfg.num_blocks).map(|_| params.sample_with(cfg.block_size, &mut rng)).collect::<Result<_>>()?;
    let policy = cfg.restart_policy.with_seed(seed);

    Ok(cfg
        .estimators
        .iter()
        .map(|&kind| {
            let mut state = BlockEstimatorState::new(kind);
            for block in &blocks {
                state.ingest_block(block, &policy).ok()?;
            }
            state.finalize().ok().map(|e| e.m_hat)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub m_true: f64,
    pub estimator: EstimatorKind,
    pub mean_m_hat: f64,
    /// Sample variance across successful trials, (count − 1) divisor.
    pub variance: f64,
    pub normalized_variance: f64,
    pub failures: usize,
    /// Bound for a single block, N = block_size.
    pub crlb_block: f64,
    /// Bound for all blocks, N = block_size × num_blocks.
    pub crlb_total: f64,
    pub crlb_modified_total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    /// Sorted by (m_true, estimator name).
    pub rows: Vec<BenchRow>,
    pub trials: usize,
}

impl BenchResult {
    pub fn row(&self, m_true: f64, estimator: EstimatorKind) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.m_true == m_true && r.estimator == estimator)
    }
}

/// Reduces the outcomes of all trials at one grid point to rows, one per
/// estimator. `outcomes` must be in trial order for reproducible rounding.
pub fn summarize(cfg: &BenchConfig, m_index: usize, outcomes: &[TrialOutcome]) -> Result<Vec<BenchRow>> {
    let m = cfg.m_grid[m_index];
    let n_block = cfg.block_size as u64;
    let n_total = cfg.total_samples() as u64;
    let crlb_block = crlb(BoundQuery::new(m, n_block)?)?;
    let crlb_total = crlb(BoundQuery::new(m, n_total)?)?;
    let crlb_modified_total = crlb_modified(BoundQuery::new(m, n_total)?)?;

    Ok(cfg
        .estimators
        .iter()
        .enumerate()
        .map(|(j, &estimator)| {
            let values: Vec<f64> = outcomes.iter().filter_map(|o| o[j]).collect();
            let failures = outcomes.len() - values.len();
            let (mean_m_hat, variance) = mean_and_variance(&values);
            BenchRow {
                m_true: m,
                estimator,
                mean_m_hat,
                variance,
                normalized_variance: normalized(variance, m),
                failures,
                crlb_block,
                crlb_total,
                crlb_modified_total,
            }
        })
        .collect())
}

/// Two-pass mean and (n − 1)-divisor variance. One value gives variance 0;
/// none gives NaN for both.
fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    match values.len() {
        0 => (f64::NAN, f64::NAN),
        1 => (values[0], 0.0),
        n => {
            let mean = values.iter().sum::<f64>() / n as f64;
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (mean, ss / (n - 1) as f64)
        }
    }
}

/// Sorts rows by (m_true, estimator name) and wraps them.
pub fn assemble(cfg: &BenchConfig, mut rows: Vec<BenchRow>) -> BenchResult {
    rows.sort_by(|a, b| a.m_true.total_cmp(&b.m_true).then_with(|| a.estimator.name().cmp(b.estimator.name())));
    BenchResult { rows, trials: cfg.trials }
}

/// Runs the whole study on the current thread.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchResult> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.m_grid.len() * cfg.estimators.len());
    for m_index in 0..cfg.m_grid.len() {
        let outcomes: Vec<TrialOutcome> = (0..cfg.trials).map(|t| run_trial(cfg, m_index, t)).collect::<Result<_>>()?;
        rows.extend(summarize(cfg, m_index, &outcomes)?);
    }
    Ok(assemble(cfg, rows))
}
