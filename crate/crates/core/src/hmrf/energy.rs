use alloc::vec;
use alloc::vec::Vec;

use super::{ImageGrid, LabelField, SegModel};
use crate::error::{Error, Result};

/// A label change must lower the local energy by more than this.
const MIN_IMPROVEMENT: f64 = 1e-10;

/// Potts pair potential: 0 for equal labels, 1 otherwise.
#[inline]
pub fn clique_potential(a: usize, b: usize) -> f64 {
    if a == b {
        0.0
    } else {
        1.0
    }
}

/// −ln f(yᵢ | θₖ) for every pixel i and class k, stored at `i * K + k`.
pub fn unary_costs(image: &ImageGrid, model: &SegModel) -> Result<Vec<f64>> {
    let k = model.num_classes();
    let mut costs = Vec::with_capacity(image.len() * k);
    for &y in image.pixels() {
        for class in model.classes() {
            costs.push(class.neg_log_likelihood(y)?);
        }
    }
    Ok(costs)
}

fn check_inputs(image: &ImageGrid, labels: &LabelField, model: &SegModel) -> Result<()> {
    labels.check_matches(image)?;
    if labels.classes() != model.num_classes() {
        return Err(Error::InvalidParams("label field and model disagree on class count"));
    }
    Ok(())
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct Accumulator {
    sum: f64,
    carry: f64,
}

impl Accumulator {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Number of 4-neighbour pairs with different labels; each pair counted once.
pub(crate) fn disagreeing_pairs(labels: &LabelField) -> usize {
    let (w, h) = (labels.width(), labels.height());
    let l = labels.labels();
    let mut count = 0;
    for y in 0..h {
        for x in 0..w {
            let here = l[y * w + x];
            if x + 1 < w && l[y * w + x + 1] != here {
                count += 1;
            }
            if y + 1 < h && l[(y + 1) * w + x] != here {
                count += 1;
            }
        }
    }
    count
}

/// U = −Σ ln f(yᵢ | θ_{xᵢ}) + β · #{disagreeing 4-neighbour pairs}.
pub fn total_energy(image: &ImageGrid, labels: &LabelField, model: &SegModel) -> Result<f64> {
    check_inputs(image, labels, model)?;
    let mut acc = Accumulator::default();
    for (&y, &l) in image.pixels().iter().zip(labels.labels()) {
        acc.add(model.classes()[l].neg_log_likelihood(y)?);
    }
    acc.add(model.beta() * disagreeing_pairs(labels) as f64);
    Ok(acc.value())
}

pub(crate) fn energy_from_costs(costs: &[f64], labels: &LabelField, beta: f64) -> f64 {
    let k = labels.classes();
    let mut acc = Accumulator::default();
    for (i, &l) in labels.labels().iter().enumerate() {
        acc.add(costs[i * k + l]);
    }
    acc.add(beta * disagreeing_pairs(labels) as f64);
    acc.value()
}

/// Disagreement count of each candidate label with the 4-neighbours of (x, y).
fn neighbour_disagreements(labels: &LabelField, x: usize, y: usize, out: &mut [f64]) {
    let (w, h) = (labels.width(), labels.height());
    let l = labels.labels();
    let mut neighbours = 0.0;
    out.iter_mut().for_each(|v| *v = 0.0);
    let mut visit = |n: usize| {
        neighbours += 1.0;
        out[l[n]] -= 1.0;
    };
    if x > 0 {
        visit(y * w + x - 1);
    }
    if x + 1 < w {
        visit(y * w + x + 1);
    }
    if y > 0 {
        visit((y - 1) * w + x);
    }
    if y + 1 < h {
        visit((y + 1) * w + x);
    }
    out.iter_mut().for_each(|v| *v += neighbours);
}

/// One raster-order ICM pass over precomputed unary costs.
pub(crate) fn sweep_with_costs(costs: &[f64], labels: &mut LabelField, beta: f64) -> usize {
    let k = labels.classes();
    let (w, h) = (labels.width(), labels.height());
    let mut disagree = vec![0.0; k];
    let mut changed = 0;
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            neighbour_disagreements(labels, x, y, &mut disagree);
            let local = |c: usize| costs[i * k + c] + beta * disagree[c];
            let current = labels.labels[i];
            let mut best = current;
            let mut best_e = local(current);
            for c in 0..k {
                let e = local(c);
                if e < best_e - MIN_IMPROVEMENT {
                    best = c;
                    best_e = e;
                }
            }
            if best != current {
                labels.labels[i] = best;
                changed += 1;
            }
        }
    }
    changed
}

/// One ICM pass in raster order, updating `labels` in place.
///
/// Each pixel takes the label minimizing its own likelihood term plus β
/// times its disagreements with the current neighbours. Returns the number
/// of changed pixels; the total energy never increases.
pub fn icm_sweep_in_place(image: &ImageGrid, labels: &mut LabelField, model: &SegModel) -> Result<usize> {
    check_inputs(image, labels, model)?;
    let costs = unary_costs(image, model)?;
    Ok(sweep_with_costs(&costs, labels, model.beta()))
}

/// One ICM pass returning the new field and the number of changed pixels.
pub fn icm_sweep(image: &ImageGrid, labels: &LabelField, model: &SegModel) -> Result<(LabelField, usize)> {
    let mut next = labels.clone();
    let changed = icm_sweep_in_place(image, &mut next, model)?;
    Ok((next, changed))
}

/// Per-pixel label probabilities from the neighbour prior alone.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelProbabilities {
    classes: usize,
    probs: Vec<f64>,
}

impl LabelProbabilities {
    pub fn classes(&self) -> usize {
        self.classes
    }

    /// Probabilities of every class at pixel `i`.
    pub fn at(&self, i: usize) -> &[f64] {
        &self.probs[i * self.classes..(i + 1) * self.classes]
    }

    /// Probability of class `k` at every pixel.
    pub fn class_weights(&self, k: usize) -> impl Iterator<Item = f64> + '_ {
        self.probs.iter().skip(k).step_by(self.classes).copied()
    }
}

/// p′ₖ(i) ∝ exp(−β · disagreements of label k with the neighbours of i),
/// normalized over labels at each pixel.
pub fn soft_prior_update(labels: &LabelField, model: &SegModel) -> LabelProbabilities {
    let k = labels.classes();
    let (w, h) = (labels.width(), labels.height());
    let mut probs = Vec::with_capacity(w * h * k);
    let mut disagree = vec![0.0; k];
    for y in 0..h {
        for x in 0..w {
            neighbour_disagreements(labels, x, y, &mut disagree);
            let min = disagree.iter().copied().fold(f64::INFINITY, f64::min);
            let start = probs.len();
            let mut z = 0.0;
            for &d in &disagree {
                let e = libm::exp(-model.beta() * (d - min));
                z += e;
                probs.push(e);
            }
            probs[start..].iter_mut().for_each(|p| *p /= z);
        }
    }
    LabelProbabilities { classes: k, probs }
}
