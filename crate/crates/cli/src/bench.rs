//! Benchmark driver that spreads trials over the rayon pool.

use rayon::prelude::*;

use nakagami_core::montecarlo::{assemble, run_trial, summarize, BenchConfig, BenchResult, TrialOutcome};
use nakagami_core::Result;

/// Same result as [`nakagami_core::montecarlo::run_bench`], bit for bit.
/// Trial outcomes are collected in trial order before reduction, so the
/// thread count does not affect the output.
pub fn run_bench_parallel(cfg: &BenchConfig) -> Result<BenchResult> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.m_grid.len() * cfg.estimators.len());
    for m_index in 0..cfg.m_grid.len() {
        let outcomes: Vec<TrialOutcome> =
            (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, m_index, t)).collect::<Result<_>>()?;
        rows.extend(summarize(cfg, m_index, &outcomes)?);
    }
    Ok(assemble(cfg, rows))
}
