use nakagami_core::{BlockEstimatorState, EstimatorKind, Ingest, NakagamiParams, RestartPolicy};

fn finalized_after(blocks: usize, m: f64, seed: u64) -> f64 {
    let p = NakagamiParams::from_omega(m, 1.0).unwrap();
    let mut rng = nakagami_core::rng_from_seed(seed);
    let mut state = BlockEstimatorState::new(EstimatorKind::ExactML);
    let policy = RestartPolicy::default();
    for _ in 0..blocks {
        let block = p.sample_with(30, &mut rng).unwrap();
        assert!(matches!(state.ingest_block(&block, &policy).unwrap(), Ingest::Folded(_)));
    }
    state.finalize().unwrap().m_hat
}

fn variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
}

#[test]
fn five_blocks_at_unit_shape() {
    // 0.25 is roughly two standard deviations of the finalized estimate here.
    let runs: Vec<f64> = (0..400).map(|seed| finalized_after(5, 1.0, seed)).collect();
    let inside = runs.iter().filter(|m| (*m - 1.0).abs() < 0.25).count();
    assert!(inside as f64 >= 0.85 * runs.len() as f64, "{inside} of {}", runs.len());
    let mean = runs.iter().sum::<f64>() / runs.len() as f64;
    assert!((mean - 1.0).abs() < 0.15, "mean {mean}");
}

#[test]
fn variance_falls_with_more_blocks() {
    let trials = 600;
    let vars: Vec<f64> = (1..=5)
        .map(|n| {
            let est: Vec<f64> = (0..trials).map(|t| finalized_after(n, 2.0, 50_000 + t)).collect();
            variance(&est)
        })
        .collect();
    for w in vars.windows(2) {
        assert!(w[1] <= w[0] * 1.05, "{vars:?}");
    }
    assert!(vars[4] < 0.5 * vars[0], "{vars:?}");
}

#[test]
fn running_mean_equals_plain_mean() {
    let p = NakagamiParams::from_omega(3.0, 1.0).unwrap();
    let mut state = BlockEstimatorState::new(EstimatorKind::ExactML);
    let policy = RestartPolicy::default();
    let mut direct = Vec::new();
    for b in 0..7 {
        let block = p.sample(30, 900 + b).unwrap();
        direct.push(EstimatorKind::ExactML.estimate(&block).unwrap().m_hat);
        state.ingest_block(&block, &policy).unwrap();
    }
    let mean = direct.iter().sum::<f64>() / direct.len() as f64;
    assert!((state.finalize().unwrap().m_hat - mean).abs() < 1e-12 * mean);
}
