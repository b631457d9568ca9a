//! Streaming block estimation.
//!
//! Each incoming block is estimated on its own and folded into a running
//! arithmetic mean, m̄ᵢ = ((i−1)/i)·m̄ᵢ₋₁ + (1/i)·m̂ᵢ. Past blocks are never
//! revisited. For the iterative ML solver a block may be solved several
//! times from jittered starting points and the results reduced by a
//! centrality measure.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::estimators::{estimate_ml_from, Estimate, EstimatorKind, SufficientStats};
use crate::nakagami::SampleBlock;

/// Histogram resolution used by [`Centrality::Mode`].
pub const MODE_BINS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Centrality {
    Mean,
    Median,
    Mode,
}

impl Centrality {
    pub fn name(self) -> &'static str {
        match self {
            Centrality::Mean => "mean",
            Centrality::Median => "median",
            Centrality::Mode => "mode",
        }
    }

    /// Reduces `values` to one number. Panics on an empty slice.
    ///
    /// The result does not depend on the order of `values`.
    pub fn reduce(self, values: &[f64]) -> f64 {
        assert!(!values.is_empty(), "centrality of an empty set");
        let mut sorted: Vec<f64> = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        match self {
            // Summing in sorted order keeps the mean order-independent.
            Centrality::Mean => sorted.iter().sum::<f64>() / sorted.len() as f64,
            Centrality::Median => {
                let n = sorted.len();
                if n % 2 == 1 {
                    sorted[n / 2]
                } else {
                    0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
                }
            }
            Centrality::Mode => histogram_mode(&sorted),
        }
    }
}

/// Midpoint of the most populated of [`MODE_BINS`] equal bins over
/// [min, max]; the lowest bin wins ties.
fn histogram_mode(sorted: &[f64]) -> f64 {
    let lo = sorted[0];
    let hi = sorted[sorted.len() - 1];
    let width = hi - lo;
    if width <= 0.0 {
        return lo;
    }
    let mut counts = [0usize; MODE_BINS];
    for &v in sorted {
        let bin = libm::floor((v - lo) / width * MODE_BINS as f64) as usize;
        counts[bin.min(MODE_BINS - 1)] += 1;
    }
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    lo + width * (best as f64 + 0.5) / MODE_BINS as f64
}

impl fmt::Display for Centrality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownCentrality;

impl fmt::Display for UnknownCentrality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown centrality; expected mean, median or mode")
    }
}

impl core::error::Error for UnknownCentrality {}

impl FromStr for Centrality {
    type Err = UnknownCentrality;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mean" => Ok(Centrality::Mean),
            "median" => Ok(Centrality::Median),
            "mode" => Ok(Centrality::Mode),
            _ => Err(UnknownCentrality),
        }
    }
}

/// How many times the ML solver is restarted per block and how the
/// restarts are combined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestartPolicy {
    restarts: u32,
    centrality: Centrality,
    jitter: f64,
    seed: u64,
}

impl RestartPolicy {
    pub const DEFAULT_JITTER: f64 = 0.1;

    /// `jitter` is the relative half-width of the uniform perturbation
    /// applied to the solver's starting point on every restart after the
    /// first.
    pub fn new(restarts: u32, centrality: Centrality, jitter: f64) -> Result<Self> {
        if restarts == 0 {
            return Err(Error::InvalidConfig { field: "restarts", reason: "must be >= 1" });
        }
        if !(jitter.is_finite() && (0.0..1.0).contains(&jitter)) {
            return Err(Error::InvalidConfig { field: "jitter", reason: "must be in [0, 1)" });
        }
        Ok(Self { restarts, centrality, jitter, seed: 0 })
    }

    /// Seed for the jitter stream; block i uses `seed + i`.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn restarts(&self) -> u32 {
        self.restarts
    }

    pub fn centrality(&self) -> Centrality {
        self.centrality
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl Default for RestartPolicy {
    fn default() -> Self {
        Self { restarts: 1, centrality: Centrality::Mean, jitter: Self::DEFAULT_JITTER, seed: 0 }
    }
}

/// Estimates a single block with `method`, applying restarts to the ML solver.
///
/// `block_index` selects the jitter stream so that repeated calls are
/// reproducible.
pub fn estimate_block(
    method: EstimatorKind,
    block: &SampleBlock,
    policy: &RestartPolicy,
    block_index: u64,
) -> Result<Estimate> {
    if method != EstimatorKind::ExactML || policy.restarts == 1 {
        return method.estimate(block);
    }
    let stats = SufficientStats::from_block(block);
    let first = method.estimate_stats(&stats)?;
    let mut rng = crate::rng_from_seed(policy.seed.wrapping_add(block_index));
    let mut shapes = Vec::with_capacity(policy.restarts as usize);
    shapes.push(first.m_hat);
    let mut iterations = first.iterations;
    for _ in 1..policy.restarts {
        let u: f64 = rng.random_range(-1.0..=1.0);
        let est = estimate_ml_from(&stats, first.m_hat * (1.0 + policy.jitter * u))?;
        iterations += est.iterations;
        shapes.push(est.m_hat);
    }
    let m_hat = policy.centrality.reduce(&shapes);
    Ok(Estimate { m_hat, sigma_hat: stats.mean_x2 / m_hat, method, iterations, converged: true })
}

/// Result of feeding one block to a [`BlockEstimatorState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ingest {
    /// The block's estimate was folded into the running means.
    Folded(Estimate),
    /// The block carried no shape information and was left out.
    Skipped { delta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockEstimatorState {
    method: EstimatorKind,
    blocks_seen: usize,
    running_m: f64,
    running_sigma: f64,
    skipped: usize,
}

impl BlockEstimatorState {
    pub fn new(method: EstimatorKind) -> Self {
        Self { method, blocks_seen: 0, running_m: 0.0, running_sigma: 0.0, skipped: 0 }
    }

    pub fn method(&self) -> EstimatorKind {
        self.method
    }

    /// Number of blocks folded into the running means.
    pub fn blocks_seen(&self) -> usize {
        self.blocks_seen
    }

    /// Number of degenerate blocks left out.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn running_m(&self) -> f64 {
        self.running_m
    }

    pub fn running_sigma(&self) -> f64 {
        self.running_sigma
    }

    /// Estimates `block` and folds the estimate in.
    ///
    /// Degenerate blocks are skipped and counted. Any other estimator error
    /// is returned and leaves the state untouched.
    pub fn ingest_block(&mut self, block: &SampleBlock, policy: &RestartPolicy) -> Result<Ingest> {
        let index = (self.blocks_seen + self.skipped) as u64;
        match estimate_block(self.method, block, policy, index) {
            Ok(est) => {
                self.fold(est.m_hat, est.sigma_hat);
                Ok(Ingest::Folded(est))
            }
            Err(Error::DegenerateBlock { delta }) => {
                self.skipped += 1;
                Ok(Ingest::Skipped { delta })
            }
            Err(e) => Err(e),
        }
    }

    /// Folds one per-block estimate into the running means.
    pub fn fold(&mut self, m_hat: f64, sigma_hat: f64) {
        self.blocks_seen += 1;
        if self.blocks_seen == 1 {
            self.running_m = m_hat;
            self.running_sigma = sigma_hat;
        } else {
            let i = self.blocks_seen as f64;
            self.running_m = (i - 1.0) / i * self.running_m + m_hat / i;
            self.running_sigma = (i - 1.0) / i * self.running_sigma + sigma_hat / i;
        }
    }

    pub fn finalize(&self) -> Result<Estimate> {
        if self.blocks_seen == 0 {
            return Err(Error::NoBlocks);
        }
        Ok(Estimate {
            m_hat: self.running_m,
            sigma_hat: self.running_sigma,
            method: self.method,
            iterations: 0,
            converged: true,
        })
    }
}
