use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{ImageGrid, LabelField};
use crate::error::{Error, Result};

const MAX_LLOYD_ITERATIONS: usize = 100;

/// 1-D k-means on intensities, seeded by k-means++.
///
/// Labels are renumbered so class centers increase with the label.
pub fn kmeans_init(image: &ImageGrid, classes: usize, seed: u64) -> Result<LabelField> {
    if classes < 2 {
        return Err(Error::InvalidConfig { field: "k", reason: "must be >= 2" });
    }
    let y = image.pixels();
    let mut distinct = y.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < classes {
        return Err(Error::DegenerateImage { distinct: distinct.len(), classes });
    }

    let mut rng = crate::rng_from_seed(seed);
    let mut centers = plus_plus(y, classes, &mut rng);
    let mut labels = vec![0usize; y.len()];
    assign(y, &centers, &mut labels);

    for _ in 0..MAX_LLOYD_ITERATIONS {
        let mut sums = vec![0.0; classes];
        let mut counts = vec![0usize; classes];
        for (&v, &l) in y.iter().zip(&labels) {
            sums[l] += v;
            counts[l] += 1;
        }
        for k in 0..classes {
            if counts[k] > 0 {
                centers[k] = sums[k] / counts[k] as f64;
            } else {
                // Re-seed an empty cluster at the worst-served pixel.
                let far = farthest(y, &centers, &labels);
                centers[k] = y[far];
                labels[far] = k;
            }
        }
        if !assign(y, &centers, &mut labels) {
            break;
        }
    }

    // Canonical order: label 0 has the smallest center.
    let mut order: Vec<usize> = (0..classes).collect();
    order.sort_by(|&a, &b| centers[a].total_cmp(&centers[b]).then(a.cmp(&b)));
    let mut rank = vec![0; classes];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let labels = labels.into_iter().map(|l| rank[l]).collect();
    LabelField::new(image.width(), image.height(), classes, labels)
}

fn plus_plus<R: Rng + ?Sized>(y: &[f64], classes: usize, rng: &mut R) -> Vec<f64> {
    let mut centers = Vec::with_capacity(classes);
    centers.push(y[rng.random_range(0..y.len())]);
    let mut d2: Vec<f64> = y.iter().map(|v| (v - centers[0]) * (v - centers[0])).collect();
    while centers.len() < classes {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = y.len() - 1;
            for (i, &d) in d2.iter().enumerate() {
                if target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.random_range(0..y.len())
        };
        let c = y[pick];
        centers.push(c);
        for (d, v) in d2.iter_mut().zip(y) {
            *d = d.min((v - c) * (v - c));
        }
    }
    centers
}

/// Nearest-center assignment, lowest index on ties. Returns whether anything changed.
fn assign(y: &[f64], centers: &[f64], labels: &mut [usize]) -> bool {
    let mut changed = false;
    for (v, l) in y.iter().zip(labels.iter_mut()) {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, c) in centers.iter().enumerate() {
            let d = (v - c).abs();
            if d < best_d {
                best_d = d;
                best = k;
            }
        }
        if *l != best {
            *l = best;
            changed = true;
        }
    }
    changed
}

fn farthest(y: &[f64], centers: &[f64], labels: &[usize]) -> usize {
    let mut idx = 0;
    let mut worst = -1.0;
    for (i, (v, &l)) in y.iter().zip(labels).enumerate() {
        let d = (v - centers[l]).abs();
        if d > worst {
            worst = d;
            idx = i;
        }
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_clusters() {
        let img = ImageGrid::new(4, 1, vec![0.0, 0.0, 10.0, 10.0]).unwrap();
        for seed in 0..20 {
            let f = kmeans_init(&img, 2, seed).unwrap();
            assert_eq!(f.labels(), &[0, 0, 1, 1]);
        }
        let img = ImageGrid::new(4, 1, vec![10.0, 0.0, 10.0, 0.0]).unwrap();
        assert_eq!(kmeans_init(&img, 2, 3).unwrap().labels(), &[1, 0, 1, 0]);
    }

    #[test]
    fn three_levels_in_order() {
        let img = ImageGrid::new(6, 1, vec![9.0, 1.0, 5.0, 1.1, 9.2, 5.1]).unwrap();
        assert_eq!(kmeans_init(&img, 3, 1).unwrap().labels(), &[2, 0, 1, 0, 2, 1]);
    }

    #[test]
    fn degenerate_images() {
        let img = ImageGrid::new(2, 2, vec![3.0; 4]).unwrap();
        assert_eq!(kmeans_init(&img, 2, 0), Err(Error::DegenerateImage { distinct: 1, classes: 2 }));
        let img = ImageGrid::new(2, 1, vec![1.0, 2.0]).unwrap();
        assert!(kmeans_init(&img, 1, 0).is_err());
        assert!(kmeans_init(&img, 3, 0).is_err());
    }

    #[test]
    fn deterministic() {
        let mut rng = crate::rng_from_seed(4);
        let px: Vec<f64> = (0..400).map(|_| rng.random::<f64>() * 10.0).collect();
        let img = ImageGrid::new(20, 20, px).unwrap();
        assert_eq!(kmeans_init(&img, 3, 17).unwrap(), kmeans_init(&img, 3, 17).unwrap());
    }
}
