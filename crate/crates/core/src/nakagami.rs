//! The Nakagami-m law, parameterized by shape `m` and spread `sigma`, where
//! `sigma = Ω / m` and Ω = E[x²]:
//!
//! f(x) = 2 / (Γ(m) σᵐ) · x^(2m−1) · exp(−x²/σ),   x > 0.
//!
//! x² is Gamma distributed with shape m and scale σ, which gives both the
//! sampler and the even moments.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use rand::distr::Open01;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::specfun::raw;

/// Shape and spread of a Nakagami-m law.
///
/// Both the gamma-scale spread σ and the standard spread Ω = mσ are stored,
/// so that whichever one was supplied is returned bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NakagamiParams {
    m: f64,
    sigma: f64,
    omega: f64,
}

fn check_positive(value: f64, what: &'static str) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(what))
    }
}

impl NakagamiParams {
    pub fn new(m: f64, sigma: f64) -> Result<Self> {
        check_positive(m, "shape m must be finite and > 0")?;
        check_positive(sigma, "spread sigma must be finite and > 0")?;
        let omega = m * sigma;
        check_positive(omega, "spread omega = m * sigma must be finite and > 0")?;
        Ok(Self { m, sigma, omega })
    }

    pub fn from_omega(m: f64, omega: f64) -> Result<Self> {
        check_positive(m, "shape m must be finite and > 0")?;
        check_positive(omega, "spread omega must be finite and > 0")?;
        let sigma = omega / m;
        check_positive(sigma, "spread sigma = omega / m must be finite and > 0")?;
        Ok(Self { m, sigma, omega })
    }

    #[inline]
    pub fn m(&self) -> f64 {
        self.m
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Standard spread Ω = E[x²] = mσ.
    #[inline]
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// ln f(x). Errors for x ≤ 0 or non-finite x.
    pub fn log_pdf(&self, x: f64) -> Result<f64> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::Domain { what: "Nakagami sample", value: x });
        }
        Ok(self.log_pdf_unchecked(x))
    }

    #[inline]
    pub(crate) fn log_pdf_unchecked(&self, x: f64) -> f64 {
        LN_2 - raw::ln_gamma(self.m) - self.m * libm::log(self.sigma) + (2.0 * self.m - 1.0) * libm::log(x)
            - x * x / self.sigma
    }

    /// Sum of [`log_pdf`](Self::log_pdf) over an i.i.d. block.
    pub fn block_log_likelihood(&self, block: &SampleBlock) -> f64 {
        block.iter().map(|x| self.log_pdf_unchecked(x)).sum()
    }

    /// E[x^k] for k ∈ {2, 4, 6}: σʲ Γ(m+j)/Γ(m) with j = k/2.
    pub fn analytic_moment(&self, k: u32) -> Result<f64> {
        let j = match k {
            2 | 4 | 6 => k / 2,
            _ => return Err(Error::UnsupportedMoment(k)),
        };
        Ok((0..j).map(|i| self.sigma * (self.m + i as f64)).product())
    }

    /// One draw from the law using the caller's generator.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        libm::sqrt(self.sigma * standard_gamma(self.m, rng))
    }

    /// `n` draws from a generator seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<SampleBlock> {
        let mut rng = crate::rng_from_seed(seed);
        self.sample_with(n, &mut rng)
    }

    /// `n` draws continuing the caller's stream.
    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<SampleBlock> {
        if n == 0 {
            return Err(Error::EmptyBlock);
        }
        let mut values = Vec::with_capacity(n);
        while values.len() < n {
            let x = self.draw(rng);
            // sqrt of a Gamma draw underflows to 0 only for extremely small m.
            if x > 0.0 {
                values.push(x);
            }
        }
        Ok(SampleBlock(values))
    }
}

/// Gamma(shape, 1) variate by Marsaglia and Tsang's squeeze method.
///
/// For shape < 1 the draw at shape + 1 is scaled by U^(1/shape).
pub fn standard_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        let u: f64 = rng.sample(Open01);
        return standard_gamma(shape + 1.0, rng) * libm::pow(u, 1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / libm::sqrt(9.0 * d);
    loop {
        let z: f64 = rng.sample(StandardNormal);
        let t = 1.0 + c * z;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u: f64 = rng.sample(Open01);
        let z2 = z * z;
        if u < 1.0 - 0.0331 * z2 * z2 {
            return d * v;
        }
        if libm::log(u) < 0.5 * z2 + d * (1.0 - v + libm::log(v)) {
            return d * v;
        }
    }
}

/// A non-empty block of positive, finite envelope samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBlock(Vec<f64>);

impl SampleBlock {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyBlock);
        }
        if let Some(&bad) = values.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::Domain { what: "Nakagami sample", value: bad });
        }
        Ok(Self(values))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }

    /// Every sample multiplied by `c`. Errors if the result leaves the support.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for SampleBlock {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::vec;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let n = n + n % 2;
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn log_pdf_values() {
        let p = NakagamiParams::new(1.0, 1.0).unwrap();
        assert!((p.log_pdf(1.0).unwrap() - (LN_2 - 1.0)).abs() < 1e-14);
        let p = NakagamiParams::new(2.0, 0.5).unwrap();
        assert!((p.log_pdf(1.0).unwrap() - 0.079_441_541_679_835_9).abs() < 1e-12);
        assert!(matches!(p.log_pdf(0.0), Err(Error::Domain { .. })));
        assert!(matches!(p.log_pdf(-1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(NakagamiParams::new(0.0, 1.0).is_err());
        assert!(NakagamiParams::new(1.0, -1.0).is_err());
        assert!(NakagamiParams::from_omega(f64::NAN, 1.0).is_err());
        assert!(NakagamiParams::from_omega(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn rayleigh_normalization() {
        let p = NakagamiParams::new(1.0, 1.0).unwrap();
        let area = simpson(|x| if x > 0.0 { p.log_pdf(x).unwrap().exp() } else { 0.0 }, 0.0, 20.0, 20_000);
        assert!((area - 1.0).abs() < 1e-8, "area {area}");
    }

    #[test]
    fn normalization_grid() {
        for m in [0.5, 1.0, 2.0, 8.0] {
            for sigma in [0.5, 1.0, 4.0] {
                let p = NakagamiParams::new(m, sigma).unwrap();
                let upper = (sigma * (m + 40.0 * m.sqrt() + 40.0)).sqrt();
                // f(0⁺) is finite only at m = 1/2.
                let at_zero = if m == 0.5 { 2.0 / (std::f64::consts::PI * sigma).sqrt() } else { 0.0 };
                let area =
                    simpson(|x| if x > 0.0 { p.log_pdf(x).unwrap().exp() } else { at_zero }, 0.0, upper, 200_000);
                assert!((area - 1.0).abs() < 1e-6, "m={m} sigma={sigma}: {area}");
            }
        }
    }

    #[test]
    fn block_likelihood_is_additive() {
        let p = NakagamiParams::new(1.0, 1.0).unwrap();
        let one = SampleBlock::new(vec![1.0]).unwrap();
        let two = SampleBlock::new(vec![1.0, 1.0]).unwrap();
        assert!((p.block_log_likelihood(&one) - (LN_2 - 1.0)).abs() < 1e-14);
        assert!((p.block_log_likelihood(&two) - 2.0 * (LN_2 - 1.0)).abs() < 1e-14);
        let p = NakagamiParams::new(2.5, 0.3).unwrap();
        let b = SampleBlock::new(vec![1.0, 2.0, 0.5]).unwrap();
        let sum: f64 = [1.0, 2.0, 0.5].iter().map(|&x| p.log_pdf(x).unwrap()).sum();
        assert!((p.block_log_likelihood(&b) - sum).abs() < 1e-12);
    }

    #[test]
    fn moments() {
        let p = NakagamiParams::new(1.0, 1.0).unwrap();
        assert_eq!(p.analytic_moment(2).unwrap(), 1.0);
        assert_eq!(p.analytic_moment(4).unwrap(), 2.0);
        assert_eq!(p.analytic_moment(6).unwrap(), 6.0);
        let p = NakagamiParams::new(2.0, 1.0).unwrap();
        assert_eq!(p.analytic_moment(4).unwrap(), 6.0);
        assert_eq!(p.analytic_moment(3), Err(Error::UnsupportedMoment(3)));
        assert_eq!(p.analytic_moment(8), Err(Error::UnsupportedMoment(8)));
    }

    #[test]
    fn sample_second_moment() {
        for (m, sigma) in [(1.0, 1.0), (4.0, 0.25)] {
            let p = NakagamiParams::new(m, sigma).unwrap();
            let n = 100_000;
            let b = p.sample(n, 42).unwrap();
            let mean_x2 = b.iter().map(|x| x * x).sum::<f64>() / n as f64;
            let stderr = (m * sigma * sigma / n as f64).sqrt();
            assert!((mean_x2 - 1.0).abs() < 3.0 * stderr, "m={m}: {mean_x2}");
        }
    }

    #[test]
    fn sample_fourth_moment() {
        for m in [0.5, 1.0, 3.0] {
            let p = NakagamiParams::from_omega(m, 1.0).unwrap();
            let n = 200_000;
            let b = p.sample(n, 7).unwrap();
            let x4: std::vec::Vec<f64> = b.iter().map(|x| x.powi(4)).collect();
            let mean = x4.iter().sum::<f64>() / n as f64;
            // Var[x⁴] = E[x⁸] − E[x⁴]², with E[x⁸] = σ⁴ m(m+1)(m+2)(m+3).
            let e8 = p.sigma().powi(4) * m * (m + 1.0) * (m + 2.0) * (m + 3.0);
            let var = e8 - p.analytic_moment(4).unwrap().powi(2);
            let want = p.analytic_moment(4).unwrap();
            assert!((mean - want).abs() < 4.0 * (var / n as f64).sqrt(), "m={m}: {mean} vs {want}");
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = NakagamiParams::new(1.3, 0.7).unwrap();
        assert_eq!(p.sample(50, 9).unwrap(), p.sample(50, 9).unwrap());
        assert_ne!(p.sample(50, 9).unwrap(), p.sample(50, 10).unwrap());
        assert_eq!(p.sample(0, 1), Err(Error::EmptyBlock));
    }

    #[test]
    fn sample_block_validation() {
        assert_eq!(SampleBlock::new(vec![]), Err(Error::EmptyBlock));
        assert!(SampleBlock::new(vec![1.0, 0.0]).is_err());
        assert!(SampleBlock::new(vec![1.0, f64::NAN]).is_err());
        assert_eq!(SampleBlock::new(vec![2.0]).unwrap().len(), 1);
    }

    proptest! {
        #[test]
        fn spread_bridge_round_trips(m in 1e-3f64..1e3, omega in 1e-6f64..1e6) {
            let p = NakagamiParams::from_omega(m, omega).unwrap();
            prop_assert_eq!(p.omega(), omega);
            let q = NakagamiParams::new(m, p.sigma()).unwrap();
            prop_assert_eq!(q.sigma(), p.sigma());
            prop_assert!(((q.omega() - omega) / omega).abs() < 4.0 * f64::EPSILON);
        }
    }
}
