//! Hidden-Markov-random-field segmentation of grayscale images.
//!
//! Labels live on the pixel grid with a Potts prior over 4-neighbour pairs;
//! each class emits intensities from either a Gaussian or a Nakagami-m law.
//! The posterior energy
//!
//! U(x) = −Σᵢ ln f(yᵢ | θ_{xᵢ}) + β Σ_{(a,b)} [x_a ≠ x_b]
//!
//! is minimized by iterated conditional modes, alternating with parameter
//! re-estimation from the current labels.

mod energy;
mod kmeans;
mod segment;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::nakagami::NakagamiParams;

pub use energy::{
    clique_potential, icm_sweep, icm_sweep_in_place, soft_prior_update, total_energy, unary_costs, LabelProbabilities,
};
pub use kmeans::kmeans_init;
pub use segment::{
    initial_model, pixel_accuracy, prepare_image, segment, update_params, Phase, SegmentConfig, Segmentation,
    TraceEntry,
};

/// Row-major grayscale intensities.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl ImageGrid {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParams("image dimensions must be non-zero"));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch { expected: (width, height), got: (pixels.len(), 1) });
        }
        if let Some(&bad) = pixels.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::Domain { what: "pixel intensity", value: bad });
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn max(&self) -> f64 {
        self.pixels.iter().copied().fold(0.0, f64::max)
    }
}

/// Row-major class labels in `[0, classes)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelField {
    width: usize,
    height: usize,
    classes: usize,
    labels: Vec<usize>,
}

impl LabelField {
    pub fn new(width: usize, height: usize, classes: usize, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != width * height {
            return Err(Error::DimensionMismatch { expected: (width, height), got: (labels.len(), 1) });
        }
        if classes == 0 {
            return Err(Error::InvalidParams("label field needs at least one class"));
        }
        if labels.iter().any(|&l| l >= classes) {
            return Err(Error::InvalidParams("label outside [0, classes)"));
        }
        Ok(Self { width, height, classes, labels })
    }

    pub fn uniform(width: usize, height: usize, classes: usize, label: usize) -> Result<Self> {
        Self::new(width, height, classes, vec![label; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.labels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, label: usize) {
        assert!(label < self.classes, "label {label} out of range");
        self.labels[y * self.width + x] = label;
    }

    /// Pixels carrying each label.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    fn check_matches(&self, image: &ImageGrid) -> Result<()> {
        if (self.width, self.height) != (image.width, image.height) {
            return Err(Error::DimensionMismatch {
                expected: (image.width, image.height),
                got: (self.width, self.height),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Likelihood {
    Gaussian,
    Nakagami,
}

impl Likelihood {
    pub fn name(self) -> &'static str {
        match self {
            Likelihood::Gaussian => "gaussian",
            Likelihood::Nakagami => "nakagami",
        }
    }
}

impl fmt::Display for Likelihood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownLikelihood;

impl fmt::Display for UnknownLikelihood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown likelihood; expected gaussian or nakagami")
    }
}

impl core::error::Error for UnknownLikelihood {}

impl FromStr for Likelihood {
    type Err = UnknownLikelihood;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" => Ok(Likelihood::Gaussian),
            "nakagami" => Ok(Likelihood::Nakagami),
            _ => Err(UnknownLikelihood),
        }
    }
}

/// Emission parameters of one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassParams {
    Gaussian { mean: f64, variance: f64 },
    Nakagami(NakagamiParams),
}

impl ClassParams {
    pub fn gaussian(mean: f64, variance: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::InvalidParams("Gaussian mean must be finite"));
        }
        if !(variance.is_finite() && variance > 0.0) {
            return Err(Error::InvalidParams("Gaussian variance must be finite and > 0"));
        }
        Ok(ClassParams::Gaussian { mean, variance })
    }

    pub fn likelihood(&self) -> Likelihood {
        match self {
            ClassParams::Gaussian { .. } => Likelihood::Gaussian,
            ClassParams::Nakagami(_) => Likelihood::Nakagami,
        }
    }

    /// −ln f(y). Errors for a Nakagami class evaluated at y ≤ 0.
    pub fn neg_log_likelihood(&self, y: f64) -> Result<f64> {
        match self {
            ClassParams::Gaussian { mean, variance } => {
                let d = y - mean;
                Ok(0.5 * libm::log(2.0 * core::f64::consts::PI * variance) + d * d / (2.0 * variance))
            }
            ClassParams::Nakagami(p) => p.log_pdf(y).map(|v| -v),
        }
    }
}

/// Class emission parameters plus the prior weight and ICM budget.
#[derive(Debug, Clone, PartialEq)]
pub struct SegModel {
    likelihood: Likelihood,
    classes: Vec<ClassParams>,
    beta: f64,
    max_sweeps: usize,
}

impl SegModel {
    pub const DEFAULT_MAX_SWEEPS: usize = 50;

    pub fn new(likelihood: Likelihood, classes: Vec<ClassParams>, beta: f64) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidParams("model needs at least one class"));
        }
        if classes.iter().any(|c| c.likelihood() != likelihood) {
            return Err(Error::InvalidParams("class parameters do not match the likelihood"));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidConfig { field: "beta", reason: "must be finite and >= 0" });
        }
        Ok(Self { likelihood, classes, beta, max_sweeps: Self::DEFAULT_MAX_SWEEPS })
    }

    pub fn with_max_sweeps(mut self, max_sweeps: usize) -> Self {
        self.max_sweeps = max_sweeps.max(1);
        self
    }

    pub fn likelihood(&self) -> Likelihood {
        self.likelihood
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[ClassParams] {
        &self.classes
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn max_sweeps(&self) -> usize {
        self.max_sweeps
    }

    /// The same model with classes reordered: new class `i` is old class `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.classes.len() {
            return Err(Error::InvalidParams("permutation length differs from class count"));
        }
        let classes = order
            .iter()
            .map(|&i| self.classes.get(i).copied().ok_or(Error::InvalidParams("bad permutation")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { classes, ..self.clone() })
    }
}
