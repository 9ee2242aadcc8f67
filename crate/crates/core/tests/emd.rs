use std::sync::Arc;

use rand::Rng as _;
use submatch::baseline::{exact_emd, exact_perfect};
use submatch::emd::{
    estimate_emd, sample_complexity, sample_empirical, CountingSource, DiscreteDistribution, Metric, MetricTable,
};
use submatch::pipeline::TemplateSettings;
use submatch::{seed, Backend};

const GAMMA: f64 = 0.15;

fn settings() -> TemplateSettings {
    TemplateSettings::practical(20, 5)
}

#[test]
fn point_masses() {
    let metric = Arc::new(MetricTable::new(2, 2, vec![0.0, 0.7, 0.7, 0.0]).unwrap());
    let mu = DiscreteDistribution::point(2, 0).unwrap();
    let nu = DiscreteDistribution::point(2, 1).unwrap();
    let r = estimate_emd(&mu, &nu, metric, 2, GAMMA, &settings(), Backend::Exact, 1).unwrap();
    assert!((r.estimate - 0.7).abs() <= GAMMA, "{}", r.estimate);
}

#[test]
fn identical_distributions() {
    let n = 12;
    let mut rng = seed::rng(5);
    let table = MetricTable::from_fn(n, n, |i, j| if i == j { 0.0 } else { rng.gen_range(0.2..1.0) }).unwrap();
    let metric: Arc<dyn Metric> = Arc::new(table);
    let mu = DiscreteDistribution::uniform(n).unwrap();
    for s in 0..3 {
        let r = estimate_emd(&mu, &mu, metric.clone(), n, GAMMA, &settings(), Backend::Exact, s).unwrap();
        assert!(r.estimate <= GAMMA, "{}", r.estimate);
    }
}

#[test]
fn shifted_uniform_tracks_the_empirical_distance() {
    // μ uniform on {0..9}, ν uniform on {1..10}, d(x, y) = min(|x − y|, 1).
    let n = 11;
    let table = || MetricTable::from_fn(n, n, |x, y| x.abs_diff(y).min(1) as f64).unwrap();
    let mut a = vec![0.1; 10];
    a.push(0.0);
    let mut b = vec![0.0];
    b.extend(vec![0.1; 10]);
    let exact = exact_emd(&a, &b, table().data()).unwrap();
    assert!((exact - 0.1).abs() < 1e-9);
    let mu = DiscreteDistribution::new(a).unwrap();
    let nu = DiscreteDistribution::new(b).unwrap();
    for s in 0..4 {
        let pair = sample_empirical(&mu, &nu, n, s).unwrap();
        let dense = pair.instance(Arc::new(table())).to_dense();
        let empirical = exact_perfect(&dense).unwrap().value / pair.m() as f64;
        let r = estimate_emd(&mu, &nu, Arc::new(table()), n, GAMMA, &settings(), Backend::Exact, s).unwrap();
        assert!((r.estimate - empirical).abs() <= GAMMA, "{} vs {empirical}", r.estimate);
    }
}

#[test]
fn symmetric_up_to_two_gamma() {
    let n = 10;
    let mut rng = seed::rng(8);
    let data: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>()).collect();
    let fwd = MetricTable::new(n, n, data.clone()).unwrap();
    let back = MetricTable::from_fn(n, n, |i, j| data[j * n + i]).unwrap();
    let mu = DiscreteDistribution::new(vec![0.1; 10]).unwrap();
    let nu = DiscreteDistribution::new((1..=10).map(|i| i as f64 / 55.0).collect()).unwrap();
    let a = estimate_emd(&mu, &nu, Arc::new(fwd), n, GAMMA, &settings(), Backend::Exact, 3).unwrap();
    let b = estimate_emd(&nu, &mu, Arc::new(back), n, GAMMA, &settings(), Backend::Exact, 3).unwrap();
    assert!((a.estimate - b.estimate).abs() <= 2.0 * GAMMA);
}

#[test]
fn draws_are_counted() {
    let mu = CountingSource::new(DiscreteDistribution::uniform(7).unwrap());
    let nu = CountingSource::new(DiscreteDistribution::uniform(7).unwrap());
    let metric: Arc<dyn Metric> = Arc::new(|i: usize, j: usize| if i == j { 0.0 } else { 1.0 });
    let r = estimate_emd(&mu, &nu, metric, 7, GAMMA, &settings(), Backend::Exact, 0).unwrap();
    assert_eq!(r.samples, sample_complexity(7));
    assert_eq!((mu.draws() + nu.draws()) as usize, r.samples);
}

#[test]
fn multiplicities_average_out() {
    let mu = DiscreteDistribution::uniform(10).unwrap();
    let trials = 1000;
    let mut counts = vec![0usize; 10];
    let mut m = 0;
    for s in 0..trials {
        let pair = sample_empirical(&mu, &mu, 10, s).unwrap();
        m = pair.m();
        for &p in &pair.left {
            counts[p] += 1;
        }
    }
    assert_eq!(m, 93);
    let expect = trials as f64 * m as f64 / 10.0;
    for c in counts {
        assert!((c as f64 - expect).abs() < 0.05 * expect, "{c} vs {expect}");
    }
}

#[test]
fn masses_must_sum_to_one() {
    assert!(DiscreteDistribution::new(vec![0.5, 0.4]).is_err());
    assert!(MetricTable::new(1, 2, vec![0.5, 1.5]).is_err());
}
