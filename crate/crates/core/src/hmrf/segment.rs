use alloc::vec;
use alloc::vec::Vec;

use super::energy::{energy_from_costs, soft_prior_update, sweep_with_costs, unary_costs};
use super::{kmeans_init, ClassParams, ImageGrid, LabelField, Likelihood, SegModel};
use crate::blockwise::{BlockEstimatorState, RestartPolicy};
use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::nakagami::{NakagamiParams, SampleBlock};

/// Shape used for a Nakagami class whose pixels are all equal.
const FROZEN_SHAPE: f64 = 1e3;
/// Gaussian variances are floored at this fraction of the image variance.
const VARIANCE_FLOOR: f64 = 1e-6;
/// A trailing chunk shorter than this is merged into the previous one.
const MIN_TAIL_CHUNK: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentConfig {
    pub beta: f64,
    /// ICM sweeps per iteration.
    pub max_sweeps: usize,
    /// Outer parameter/ICM iterations.
    pub max_iterations: usize,
    /// Stop once no class parameter moves by more than this (relative).
    pub tolerance: f64,
    pub seed: u64,
    /// Zero pixels are raised to this fraction of the image maximum on the Nakagami path.
    pub nakagami_floor: f64,
    /// Split each class into blocks of this many pixels for the blockwise estimator.
    /// `None` feeds the whole class as a single block.
    pub nakagami_chunk: Option<usize>,
    /// Weight Gaussian updates by the neighbour prior instead of hard labels.
    pub gaussian_soft_update: bool,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        Self {
            beta: 1.0,
            max_sweeps: SegModel::DEFAULT_MAX_SWEEPS,
            max_iterations: 30,
            tolerance: 1e-4,
            seed: 0,
            nakagami_floor: 1e-6,
            nakagami_chunk: None,
            gaussian_soft_update: false,
        }
    }
}

impl SegmentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::InvalidConfig { field: "beta", reason: "must be finite and >= 0" });
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidConfig { field: "max_sweeps", reason: "must be >= 1" });
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig { field: "max_iterations", reason: "must be >= 1" });
        }
        if !(self.tolerance.is_finite() && self.tolerance >= 0.0) {
            return Err(Error::InvalidConfig { field: "tolerance", reason: "must be finite and >= 0" });
        }
        if !(self.nakagami_floor > 0.0 && self.nakagami_floor < 1.0) {
            return Err(Error::InvalidConfig { field: "nakagami_floor", reason: "must be in (0, 1)" });
        }
        if matches!(self.nakagami_chunk, Some(c) if c < 2) {
            return Err(Error::InvalidConfig { field: "nakagami_chunk", reason: "must be >= 2" });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Energy right after the class parameters were re-estimated.
    Params,
    /// Energy after one ICM sweep.
    Icm,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Params => "params",
            Phase::Icm => "icm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    pub phase: Phase,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segmentation {
    pub labels: LabelField,
    /// The model the final ICM phase ran against.
    pub model: SegModel,
    pub trace: Vec<TraceEntry>,
    pub iterations: usize,
    pub sweeps: usize,
    /// Classes whose parameters were frozen in the last update.
    pub starved: Vec<usize>,
}

impl Segmentation {
    pub fn energy(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |t| t.energy)
    }
}

/// Copy of `image` that is valid for `likelihood`.
///
/// On the Nakagami path zeros become `floor · max`. An all-zero image is an
/// error there.
pub fn prepare_image(image: &ImageGrid, likelihood: Likelihood, floor: f64) -> Result<ImageGrid> {
    if likelihood == Likelihood::Gaussian || image.pixels().iter().all(|&p| p > 0.0) {
        return Ok(image.clone());
    }
    let max = image.max();
    if max <= 0.0 {
        return Err(Error::Domain { what: "image maximum", value: max });
    }
    let eps = floor * max;
    let pixels = image.pixels().iter().map(|&p| if p > 0.0 { p } else { eps }).collect();
    ImageGrid::new(image.width(), image.height(), pixels)
}

fn image_variance(image: &ImageGrid) -> f64 {
    let y = image.pixels();
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

fn variance_floor(image: &ImageGrid) -> f64 {
    (VARIANCE_FLOOR * image_variance(image)).max(f64::MIN_POSITIVE)
}

fn class_pixels(image: &ImageGrid, labels: &LabelField, k: usize) -> Vec<f64> {
    image.pixels().iter().zip(labels.labels()).filter(|(_, &l)| l == k).map(|(&y, _)| y).collect()
}

fn fit_gaussian(values: &[f64], floor: f64) -> Result<ClassParams> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    ClassParams::gaussian(mean, (ss / (n - 1.0)).max(floor))
}

fn fit_gaussian_weighted(values: &[f64], weights: &[f64], floor: f64) -> Result<ClassParams> {
    let sw: f64 = weights.iter().sum();
    let mean = values.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / sw;
    let ss: f64 = values.iter().zip(weights).map(|(v, w)| w * (v - mean) * (v - mean)).sum();
    ClassParams::gaussian(mean, (ss / sw).max(floor))
}

/// Blockwise ML fit of one class. `None` when every block was degenerate.
fn fit_nakagami(values: &[f64], chunk: Option<usize>) -> Result<Option<NakagamiParams>> {
    let size = chunk.unwrap_or(values.len()).max(1);
    let mut bounds: Vec<(usize, usize)> =
        (0..values.len()).step_by(size).map(|a| (a, (a + size).min(values.len()))).collect();
    if bounds.len() > 1 {
        let (a, b) = bounds[bounds.len() - 1];
        if b - a < MIN_TAIL_CHUNK {
            bounds.pop();
            bounds.last_mut().unwrap().1 = b;
        }
    }
    let mut state = BlockEstimatorState::new(EstimatorKind::ExactML);
    let policy = RestartPolicy::default();
    for (a, b) in bounds {
        let block = SampleBlock::new(values[a..b].to_vec())?;
        if let Err(e) = state.ingest_block(&block, &policy) {
            // Too few samples or a stalled solver: leave this block out.
            if !matches!(e, Error::TooFewSamples { .. } | Error::NoConvergence { .. }) {
                return Err(e);
            }
        }
    }
    match state.finalize() {
        Ok(est) => NakagamiParams::new(est.m_hat, est.sigma_hat).map(Some),
        Err(Error::NoBlocks) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Fresh class parameters from a label field.
///
/// Classes that cannot be fitted (fewer than two pixels or constant
/// intensities) fall back to a near-degenerate law centred on their pixels,
/// or on the whole image if they are empty.
pub fn initial_model(
    image: &ImageGrid,
    labels: &LabelField,
    likelihood: Likelihood,
    config: &SegmentConfig,
) -> Result<SegModel> {
    labels.check_matches(image)?;
    let floor = variance_floor(image);
    let mut classes = Vec::with_capacity(labels.classes());
    for k in 0..labels.classes() {
        let mut values = class_pixels(image, labels, k);
        if values.is_empty() {
            values = image.pixels().to_vec();
        }
        let params = match likelihood {
            Likelihood::Gaussian if values.len() >= 2 => fit_gaussian(&values, floor)?,
            Likelihood::Gaussian => ClassParams::gaussian(values[0], floor)?,
            Likelihood::Nakagami => {
                let fitted = if values.len() >= 2 { fit_nakagami(&values, config.nakagami_chunk)? } else { None };
                match fitted {
                    Some(p) => ClassParams::Nakagami(p),
                    None => {
                        let omega = values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64;
                        ClassParams::Nakagami(NakagamiParams::from_omega(FROZEN_SHAPE, omega)?)
                    }
                }
            }
        };
        classes.push(params);
    }
    Ok(SegModel::new(likelihood, classes, config.beta)?.with_max_sweeps(config.max_sweeps))
}

/// Re-estimates every class from the current labels.
///
/// Returns the new model and the classes whose parameters were kept because
/// they had fewer than two pixels or no shape information.
pub fn update_params(
    image: &ImageGrid,
    labels: &LabelField,
    model: &SegModel,
    config: &SegmentConfig,
) -> Result<(SegModel, Vec<usize>)> {
    labels.check_matches(image)?;
    if labels.classes() != model.num_classes() {
        return Err(Error::InvalidParams("label field and model disagree on class count"));
    }
    let floor = variance_floor(image);
    let soft = (model.likelihood() == Likelihood::Gaussian && config.gaussian_soft_update)
        .then(|| soft_prior_update(labels, model));
    let counts = labels.counts();
    let mut classes = model.classes().to_vec();
    let mut starved = Vec::new();
    for (k, slot) in classes.iter_mut().enumerate() {
        if counts[k] < 2 {
            starved.push(k);
            continue;
        }
        match model.likelihood() {
            Likelihood::Gaussian => {
                *slot = match &soft {
                    Some(p) => {
                        let w: Vec<f64> = p.class_weights(k).collect();
                        fit_gaussian_weighted(image.pixels(), &w, floor)?
                    }
                    None => fit_gaussian(&class_pixels(image, labels, k), floor)?,
                };
            }
            Likelihood::Nakagami => match fit_nakagami(&class_pixels(image, labels, k), config.nakagami_chunk)? {
                Some(p) => *slot = ClassParams::Nakagami(p),
                None => starved.push(k),
            },
        }
    }
    let model = SegModel::new(model.likelihood(), classes, model.beta())?.with_max_sweeps(model.max_sweeps());
    Ok((model, starved))
}

fn relative_change(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale
}

/// Largest relative parameter move between two models of the same shape.
fn parameter_change(old: &SegModel, new: &SegModel) -> f64 {
    old.classes()
        .iter()
        .zip(new.classes())
        .map(|(a, b)| match (a, b) {
            (ClassParams::Gaussian { mean: m0, variance: v0 }, ClassParams::Gaussian { mean: m1, variance: v1 }) => {
                relative_change(*m0, *m1, libm::sqrt(*v0)).max(relative_change(*v0, *v1, *v0))
            }
            (ClassParams::Nakagami(p), ClassParams::Nakagami(q)) => {
                relative_change(p.m(), q.m(), p.m()).max(relative_change(p.omega(), q.omega(), p.omega()))
            }
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

/// Segments `image` into `classes` regions.
///
/// k-means labels seed the class parameters; each iteration then runs ICM
/// sweeps until no pixel changes (or the sweep budget runs out) and
/// re-estimates the parameters from the new labels. Iteration stops when the
/// parameters settle or the iteration budget is spent.
pub fn segment(
    image: &ImageGrid,
    classes: usize,
    likelihood: Likelihood,
    config: &SegmentConfig,
) -> Result<Segmentation> {
    config.validate()?;
    let image = prepare_image(image, likelihood, config.nakagami_floor)?;
    let mut labels = kmeans_init(&image, classes, config.seed)?;
    let mut model = initial_model(&image, &labels, likelihood, config)?;
    let mut costs = unary_costs(&image, &model)?;
    let mut trace = vec![TraceEntry {
        iteration: 0,
        phase: Phase::Params,
        energy: energy_from_costs(&costs, &labels, model.beta()),
    }];
    let mut sweeps = 0;
    let mut starved = Vec::new();
    let mut iterations = 0;

    for iteration in 1..=config.max_iterations {
        iterations = iteration;
        for _ in 0..model.max_sweeps() {
            let changed = sweep_with_costs(&costs, &mut labels, model.beta());
            sweeps += 1;
            trace.push(TraceEntry {
                iteration,
                phase: Phase::Icm,
                energy: energy_from_costs(&costs, &labels, model.beta()),
            });
            if changed == 0 {
                break;
            }
        }

        let (next, frozen) = update_params(&image, &labels, &model, config)?;
        starved = frozen;
        if parameter_change(&model, &next) <= config.tolerance {
            break;
        }
        model = next;
        costs = unary_costs(&image, &model)?;
        trace.push(TraceEntry {
            iteration,
            phase: Phase::Params,
            energy: energy_from_costs(&costs, &labels, model.beta()),
        });
    }

    // The last trace entry must describe the returned state.
    if trace.last().map(|t| t.phase) == Some(Phase::Params) {
        sweep_with_costs(&costs, &mut labels, model.beta());
        sweeps += 1;
        trace.push(TraceEntry {
            iteration: iterations,
            phase: Phase::Icm,
            energy: energy_from_costs(&costs, &labels, model.beta()),
        });
    }

    Ok(Segmentation { labels, model, trace, iterations, sweeps, starved })
}

/// Fraction of pixels labelled correctly under the best matching of
/// predicted to true classes. Supports up to 8 classes.
pub fn pixel_accuracy(predicted: &LabelField, truth: &LabelField) -> Result<f64> {
    if (predicted.width(), predicted.height()) != (truth.width(), truth.height()) {
        return Err(Error::DimensionMismatch {
            expected: (truth.width(), truth.height()),
            got: (predicted.width(), predicted.height()),
        });
    }
    let k = predicted.classes().max(truth.classes());
    if k > 8 {
        return Err(Error::InvalidParams("pixel accuracy supports at most 8 classes"));
    }
    let mut confusion = vec![0usize; k * k];
    for (&p, &t) in predicted.labels().iter().zip(truth.labels()) {
        confusion[p * k + t] += 1;
    }
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = 0;
    permutations(&mut perm, 0, &mut |p| {
        let hits = (0..k).map(|i| confusion[i * k + p[i]]).sum::<usize>();
        best = best.max(hits);
    });
    Ok(best as f64 / predicted.labels().len() as f64)
}

fn permutations(items: &mut [usize], start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, visit);
        items.swap(start, i);
    }
}
