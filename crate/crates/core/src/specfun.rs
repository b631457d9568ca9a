//! Log-gamma, digamma and trigamma on the positive real axis.
//!
//! Every function shifts its argument above [`ASYMPTOTIC_THRESHOLD`] with the
//! upward recurrence and then sums the Stirling-type asymptotic series with
//! Bernoulli-number coefficients up to B₁₄. At the threshold the first
//! neglected term is below 1e-17, so the result is limited by rounding in
//! the recurrence, not by truncation.

use crate::error::{Error, Result};

const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// ½ ln(2π)
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// B₂ₖ / (2k(2k−1)) for k = 1..7, the ln Γ series.
const LN_GAMMA_SERIES: [f64; 7] =
    [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360_360.0, 1.0 / 156.0];

/// B₂ₖ / (2k) for k = 1..7, the ψ series.
const DIGAMMA_SERIES: [f64; 7] =
    [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32_760.0, 1.0 / 12.0];

/// B₂ₖ for k = 1..7, the ψ′ series.
const TRIGAMMA_SERIES: [f64; 7] =
    [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];

/// A finite, strictly positive real.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PositiveReal(f64);

impl PositiveReal {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::Domain { what: "argument", value })
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PositiveReal {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

/// ln Γ(x).
pub fn ln_gamma(x: PositiveReal) -> f64 {
    raw::ln_gamma(x.0)
}

/// Γ(x), computed as `exp(ln_gamma(x))`. Overflows to `inf` above x ≈ 171.6.
pub fn gamma(x: PositiveReal) -> f64 {
    libm::exp(raw::ln_gamma(x.0))
}

/// ψ(x) = d/dx ln Γ(x).
pub fn digamma(x: PositiveReal) -> f64 {
    raw::digamma(x.0)
}

/// ψ′(x).
pub fn trigamma(x: PositiveReal) -> f64 {
    raw::trigamma(x.0)
}

/// ln x − ψ(x), evaluated without the cancellation of the naive difference.
///
/// Strictly positive and strictly decreasing; behaves like 1/(2x) for large x.
pub fn ln_minus_digamma(x: PositiveReal) -> f64 {
    raw::ln_minus_digamma(x.0)
}

/// Unchecked kernels. Callers guarantee `x > 0` and finite.
pub(crate) mod raw {
    use super::*;

    /// Smallest n ≥ 0 with x + n ≥ threshold.
    #[inline]
    fn shift_count(x: f64) -> u32 {
        if x >= ASYMPTOTIC_THRESHOLD {
            0
        } else {
            libm::ceil(ASYMPTOTIC_THRESHOLD - x) as u32
        }
    }

    #[inline]
    fn series(coeffs: &[f64], first: f64, ratio: f64) -> f64 {
        let mut term = first;
        let mut acc = 0.0;
        for &c in coeffs {
            acc += c * term;
            term *= ratio;
        }
        acc
    }

    pub fn ln_gamma(x: f64) -> f64 {
        let n = shift_count(x);
        let mut z = x;
        let mut product = 1.0;
        for _ in 0..n {
            product *= z;
            z += 1.0;
        }
        let inv = 1.0 / z;
        let asym = (z - 0.5) * libm::log(z) - z + HALF_LN_2PI + series(&LN_GAMMA_SERIES, inv, inv * inv);
        asym - libm::log(product)
    }

    pub fn digamma(x: f64) -> f64 {
        let n = shift_count(x);
        let mut z = x;
        let mut shift = 0.0;
        for _ in 0..n {
            shift += 1.0 / z;
            z += 1.0;
        }
        let inv = 1.0 / z;
        let inv2 = inv * inv;
        libm::log(z) - 0.5 * inv - series(&DIGAMMA_SERIES, inv2, inv2) - shift
    }

    pub fn trigamma(x: f64) -> f64 {
        let n = shift_count(x);
        let mut z = x;
        let mut shift = 0.0;
        for _ in 0..n {
            shift += 1.0 / (z * z);
            z += 1.0;
        }
        let inv = 1.0 / z;
        let inv2 = inv * inv;
        inv + 0.5 * inv2 + series(&TRIGAMMA_SERIES, inv2 * inv, inv2) + shift
    }

    pub fn ln_minus_digamma(x: f64) -> f64 {
        let n = shift_count(x);
        let mut z = x;
        let mut shift = 0.0;
        for _ in 0..n {
            shift += 1.0 / z;
            z += 1.0;
        }
        let inv = 1.0 / z;
        let inv2 = inv * inv;
        let tail = 0.5 * inv + series(&DIGAMMA_SERIES, inv2, inv2);
        if n == 0 {
            tail
        } else {
            // ln x − ψ(x) = ln(x/z) + (ln z − ψ(z)) + Σ 1/(x+i)
            libm::log(x / z) + tail + shift
        }
    }
}
