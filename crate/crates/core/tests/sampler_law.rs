use nakagami_core::specfun::{ln_gamma, PositiveReal};
use nakagami_core::NakagamiParams;

/// CDF of Nakagami(m, σ) tabulated by trapezoidal quadrature of the density.
struct CdfTable {
    step: f64,
    values: Vec<f64>,
}

impl CdfTable {
    fn new(m: f64, sigma: f64) -> Self {
        let upper = (sigma * (m + 40.0 * m.sqrt() + 60.0)).sqrt();
        let steps = 400_000;
        let step = upper / steps as f64;
        let log_norm = 2f64.ln() - ln_gamma(PositiveReal::new(m).unwrap()) - m * sigma.ln();
        let pdf = |x: f64| {
            if x == 0.0 {
                return if m == 0.5 { log_norm.exp() } else { 0.0 };
            }
            (log_norm + (2.0 * m - 1.0) * x.ln() - x * x / sigma).exp()
        };
        let mut values = Vec::with_capacity(steps + 1);
        values.push(0.0);
        let mut acc = 0.0;
        let mut prev = pdf(0.0);
        for i in 1..=steps {
            let cur = pdf(i as f64 * step);
            acc += 0.5 * step * (prev + cur);
            values.push(acc);
            prev = cur;
        }
        Self { step, values }
    }

    fn at(&self, x: f64) -> f64 {
        let t = x / self.step;
        let i = t.floor() as usize;
        if i + 1 >= self.values.len() {
            return 1.0;
        }
        let frac = t - i as f64;
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }
}

fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn quadrature_table_is_normalized() {
    for (m, sigma) in [(0.5, 2.0), (1.0, 1.0), (8.0, 0.125)] {
        let t = CdfTable::new(m, sigma);
        assert!((t.values.last().unwrap() - 1.0).abs() < 1e-8, "m = {m}");
    }
    // Rayleigh case has a closed form.
    let t = CdfTable::new(1.0, 2.0);
    for x in [0.3, 1.0, 2.2] {
        assert!((t.at(x) - (1.0 - (-x * x / 2.0f64).exp())).abs() < 1e-9);
    }
}

#[test]
fn samples_follow_the_law() {
    let n = 10_000;
    let critical = 1.628 / (n as f64).sqrt();
    for (i, (m, omega)) in [(0.5, 1.0), (1.0, 1.0), (2.5, 3.0), (8.0, 1.0), (20.0, 0.5)].into_iter().enumerate() {
        let p = NakagamiParams::from_omega(m, omega).unwrap();
        let table = CdfTable::new(p.m(), p.sigma());
        let xs = p.sample(n, 1000 + i as u64).unwrap().into_vec();
        let d = ks_statistic(xs, |x| table.at(x));
        assert!(d < critical, "m = {m}: D = {d} >= {critical}");
    }
}

#[test]
fn wrong_shape_is_rejected() {
    let n = 10_000;
    let critical = 1.628 / (n as f64).sqrt();
    let drawn = NakagamiParams::from_omega(2.0, 1.0).unwrap();
    let claimed = NakagamiParams::from_omega(1.5, 1.0).unwrap();
    let table = CdfTable::new(claimed.m(), claimed.sigma());
    let d = ks_statistic(drawn.sample(n, 5).unwrap().into_vec(), |x| table.at(x));
    assert!(d > critical);
}
