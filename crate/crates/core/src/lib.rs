//! Nakagami-m shape estimation in a `no_std` + `alloc` setting.
//!
//! The crate covers the whole numerical path: special functions, the
//! Nakagami-m law and its sampler, five shape estimators behind a single
//! interface, block-wise recursive-mean estimation, Cramér–Rao style
//! variance bounds, a seeded Monte Carlo harness comparing the estimators,
//! and a hidden-Markov-random-field segmenter with Gaussian or Nakagami
//! class likelihoods.
//!
//! File formats, CSV emission and the command-line driver live in the
//! companion `nakagami-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod blockwise;
pub mod bounds;
pub mod error;
pub mod estimators;
pub mod hmrf;
pub mod montecarlo;
pub mod nakagami;
pub mod specfun;

pub use blockwise::{BlockEstimatorState, Centrality, Ingest, RestartPolicy};
pub use bounds::BoundQuery;
pub use error::{Error, Result};
pub use estimators::{Estimate, EstimatorKind, SufficientStats};
pub use nakagami::{NakagamiParams, SampleBlock};
pub use specfun::PositiveReal;

/// Seeded generator used everywhere randomness is needed.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Builds the crate's generator from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> Rng {
    use rand::SeedableRng;
    Rng::seed_from_u64(seed)
}
