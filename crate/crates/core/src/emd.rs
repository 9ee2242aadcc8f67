//! Earth mover's distance from samples, via matching with outliers on the
//! empirical distributions.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use rand::distributions::{Distribution, WeightedIndex};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::instance::BipartiteInstance;
use crate::mcm::Backend;
use crate::pipeline::{estimate_min_weight_matching, MwmReport, ReductionConfig, TemplateSettings};
use crate::seed::{self, Rng};

/// Sample access to a distribution over point ids.
pub trait DistributionSource: Send + Sync {
    fn draw(&self, rng: &mut Rng) -> Result<usize>;
}

/// Distance between a point of `μ` and a point of `ν`, in `[0, 1]`.
pub trait Metric: Send + Sync {
    fn dist(&self, p: usize, q: usize) -> f64;
}

impl<F: Fn(usize, usize) -> f64 + Send + Sync> Metric for F {
    fn dist(&self, p: usize, q: usize) -> f64 {
        self(p, q)
    }
}

/// Finitely supported distribution given by its masses.
#[derive(Clone, Debug)]
pub struct DiscreteDistribution {
    masses: Vec<f64>,
    index: WeightedIndex<f64>,
}

impl DiscreteDistribution {
    /// Masses must be non-negative and sum to 1 within `1e-9`.
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() || masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return invalid("masses must be non-empty, finite and non-negative");
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::MassMismatch(total));
        }
        let index = WeightedIndex::new(&masses).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Ok(DiscreteDistribution { masses, index })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        DiscreteDistribution::new(vec![1.0 / n.max(1) as f64; n])
    }

    pub fn point(n: usize, at: usize) -> Result<Self> {
        let mut m = vec![0.0; n];
        m[at] = 1.0;
        DiscreteDistribution::new(m)
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn support(&self) -> usize {
        self.masses.len()
    }
}

impl DistributionSource for DiscreteDistribution {
    fn draw(&self, rng: &mut Rng) -> Result<usize> {
        Ok(self.index.sample(rng))
    }
}

/// Replays a fixed sequence of draws; fails once it runs dry.
pub struct ReplaySource {
    draws: Vec<usize>,
    cursor: Mutex<usize>,
}

impl ReplaySource {
    pub fn new(draws: Vec<usize>) -> Self {
        ReplaySource { draws, cursor: Mutex::new(0) }
    }
}

impl DistributionSource for ReplaySource {
    fn draw(&self, _rng: &mut Rng) -> Result<usize> {
        let mut c = self.cursor.lock().expect("replay cursor");
        let p = *self
            .draws
            .get(*c)
            .ok_or_else(|| Error::InvalidParameter(format!("draw source exhausted after {} draws", self.draws.len())))?;
        *c += 1;
        Ok(p)
    }
}

/// Counts draws passing through.
pub struct CountingSource<S> {
    pub inner: S,
    draws: AtomicU64,
}

impl<S> CountingSource<S> {
    pub fn new(inner: S) -> Self {
        CountingSource { inner, draws: AtomicU64::new(0) }
    }

    pub fn draws(&self) -> u64 {
        self.draws.load(Ordering::Relaxed)
    }
}

impl<S: DistributionSource> DistributionSource for CountingSource<S> {
    fn draw(&self, rng: &mut Rng) -> Result<usize> {
        self.draws.fetch_add(1, Ordering::Relaxed);
        self.inner.draw(rng)
    }
}

/// Row-major `rows × cols` distance table with entries in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricTable {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl MetricTable {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return invalid(format!("metric table needs {} entries, got {}", rows * cols, data.len()));
        }
        if let Some((i, &d)) = data.iter().enumerate().find(|(_, d)| !(0.0..=1.0).contains(*d)) {
            return Err(Error::MalformedCost { u: i / cols.max(1), v: i % cols.max(1), value: d });
        }
        Ok(MetricTable { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for p in 0..rows {
            for q in 0..cols {
                data.push(f(p, q));
            }
        }
        MetricTable::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

impl Metric for MetricTable {
    fn dist(&self, p: usize, q: usize) -> f64 {
        self.data[p * self.cols + q]
    }
}

/// `m = ⌈4 n ln max(n, 2)⌉` points per side.
pub fn empirical_size(n: usize) -> usize {
    let nf = n.max(1) as f64;
    (4.0 * nf * (n.max(2) as f64).ln()).ceil() as usize
}

/// Total draws from both sources, `2m`.
pub fn sample_complexity(n: usize) -> usize {
    2 * empirical_size(n)
}

/// The two sampled multisets; duplicates stay distinct vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalPair {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl EmpiricalPair {
    pub fn m(&self) -> usize {
        self.left.len()
    }

    /// The `m × m` instance `c(i, j) = d(left[i], right[j])`.
    pub fn instance(&self, metric: Arc<dyn Metric>) -> BipartiteInstance {
        let left = self.left.clone();
        let right = self.right.clone();
        BipartiteInstance::from_fn(self.m(), move |i, j| metric.dist(left[i], right[j]).clamp(0.0, 1.0))
    }
}

pub fn sample_empirical(
    mu: &dyn DistributionSource,
    nu: &dyn DistributionSource,
    n: usize,
    seed: u64,
) -> Result<EmpiricalPair> {
    if n == 0 {
        return invalid("support bound must be at least 1");
    }
    let m = empirical_size(n);
    let mut rng = seed::rng(seed::derive(seed, "emd-mu"));
    let left = (0..m).map(|_| mu.draw(&mut rng)).collect::<Result<Vec<_>>>()?;
    let mut rng = seed::rng(seed::derive(seed, "emd-nu"));
    let right = (0..m).map(|_| nu.draw(&mut rng)).collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalPair { left, right })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmdReport {
    pub estimate: f64,
    pub n: usize,
    pub m: usize,
    pub gamma: f64,
    pub samples: usize,
    pub matching: MwmReport,
}

/// `γ′ = γ/5`; the window is `[1 − γ′, 1]`.
pub fn emd_config(gamma: f64) -> Result<ReductionConfig> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return invalid(format!("gamma must lie in (0, 1), got {gamma}"));
    }
    let g = gamma / 5.0;
    ReductionConfig::for_window(1.0 - g, 1.0, g)
}

/// Estimates `EMD(μ, ν)` within `±γ` when both supports have at most `n` points.
pub fn estimate_emd(
    mu: &dyn DistributionSource,
    nu: &dyn DistributionSource,
    metric: Arc<dyn Metric>,
    n: usize,
    gamma: f64,
    settings: &TemplateSettings,
    backend: Backend,
    seed: u64,
) -> Result<EmdReport> {
    let cfg = emd_config(gamma)?;
    let pair = sample_empirical(mu, nu, n, seed)?;
    let m = pair.m();
    let instance = Arc::new(pair.instance(metric));
    let out = estimate_min_weight_matching(&instance, &cfg, settings, backend, seed::derive(seed, "emd-matching"))?;
    Ok(EmdReport {
        estimate: out.report.estimate / m as f64,
        n,
        m,
        gamma,
        samples: 2 * m,
        matching: out.report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(sample_complexity(100), 3686);
        assert_eq!(sample_complexity(1), 6);
        assert_eq!(empirical_size(1), 3);
    }

    #[test]
    fn point_masses_repeat() {
        let mu = DiscreteDistribution::point(4, 2).unwrap();
        let pair = sample_empirical(&mu, &mu, 4, 9).unwrap();
        assert!(pair.left.iter().chain(&pair.right).all(|&p| p == 2));
    }

    #[test]
    fn replay_runs_dry() {
        let src = ReplaySource::new(vec![1, 2]);
        let mut rng = seed::rng(0);
        assert_eq!(src.draw(&mut rng).unwrap(), 1);
        assert_eq!(src.draw(&mut rng).unwrap(), 2);
        assert!(src.draw(&mut rng).is_err());
    }
}
