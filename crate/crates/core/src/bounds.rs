//! Variance bounds for the shape estimate when the spread is also unknown.
//!
//! The joint Fisher information per sample for (m, σ) is
//! `[[ψ′(m), 1/σ], [1/σ, m/σ²]]`; inverting it gives the marginal bound
//! `1 / (N (ψ′(m) − 1/m))`. The modified bound replaces ψ′(m) with the
//! chord slope `2(ψ(m+½) − ψ(m))`, which is never larger because ψ is
//! concave, so the modified bound is never smaller.

use crate::error::{Error, Result};
use crate::specfun::raw;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    m: f64,
    n: u64,
}

impl BoundQuery {
    pub fn new(m: f64, n: u64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::Domain { what: "shape m", value: m });
        }
        if n == 0 {
            return Err(Error::InvalidParams("sample count must be >= 1"));
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

/// Per-sample Fisher information for m after profiling out σ: ψ′(m) − 1/m.
pub fn fisher_information_m(m: f64) -> f64 {
    raw::trigamma(m) - 1.0 / m
}

/// Cramér–Rao lower bound on var(m̂) from N samples with σ unknown.
pub fn crlb(q: BoundQuery) -> Result<f64> {
    let info = fisher_information_m(q.m);
    if info.is_nan() || info <= 0.0 {
        return Err(Error::NonPositiveDenominator { m: q.m, value: info });
    }
    Ok(1.0 / (q.n as f64 * info))
}

/// Modified bound 1 / (N [2ψ(m+½) − 2ψ(m) − 1/m]).
pub fn crlb_modified(q: BoundQuery) -> Result<f64> {
    let denom = 2.0 * (raw::digamma(q.m + 0.5) - raw::digamma(q.m)) - 1.0 / q.m;
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::NonPositiveDenominator { m: q.m, value: denom });
    }
    Ok(1.0 / (q.n as f64 * denom))
}

/// Variance normalized by m², for comparisons across shape values.
pub fn normalized(bound_value: f64, m: f64) -> f64 {
    bound_value / (m * m)
}
