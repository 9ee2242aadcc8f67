//! Trimmed-mean estimate of a matching's cost from sampled matched edges.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::instance::{IntCosts, Vertex};
use crate::oracle::MatchingOracle;
use crate::seed::Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct SampleEstimate {
    /// `(n/|S|) Σ` over the kept samples.
    pub estimate: f64,
    /// Smallest discarded sample, i.e. the `⌈3γ|S|⌉`-th largest; `None` if nothing was discarded.
    pub threshold: Option<i64>,
    pub samples: usize,
    pub discarded: usize,
    /// Fraction of samples at or above the threshold.
    pub alpha_w: f64,
    /// Share of samples tied at the threshold that fell among the discarded ones.
    pub tie_cut: f64,
    pub attempts: usize,
}

impl SampleEstimate {
    /// Estimate of an empty matching: zero, nothing cut.
    pub fn empty() -> Self {
        SampleEstimate {
            estimate: 0.0,
            threshold: None,
            samples: 0,
            discarded: 0,
            alpha_w: 0.0,
            tie_cut: 0.0,
            attempts: 0,
        }
    }
}

/// Samples matched edges by rejection over `V0`, drops the `⌈3γ|S|⌉` most
/// expensive and scales the remaining sum to `n` vertices.
pub fn sample_and_estimate(
    m: &dyn MatchingOracle,
    costs: &IntCosts,
    gamma: f64,
    target: usize,
    rng: &mut Rng,
) -> Result<SampleEstimate> {
    let n = m.n();
    if n == 0 || target == 0 {
        return Err(Error::EmptyMatching);
    }
    let max_attempts = 64 * target + 16 * n;
    let mut sample = Vec::with_capacity(target);
    let mut attempts = 0;
    while sample.len() < target && attempts < max_attempts {
        attempts += 1;
        let u = rng.gen_range(0..n);
        if let Some(v) = m.mate(Vertex::left(u)) {
            if let Some(c) = costs.cost(u, v.index()) {
                sample.push(c);
            }
        }
    }
    if sample.is_empty() {
        return Err(Error::EmptyMatching);
    }
    Ok(trimmed_estimate(sample, gamma, n, attempts))
}

pub(crate) fn trimmed_estimate(mut sample: Vec<i64>, gamma: f64, n: usize, attempts: usize) -> SampleEstimate {
    let s = sample.len();
    sample.sort_unstable_by(|a, b| b.cmp(a));
    let discarded = ((3.0 * gamma * s as f64 - 1e-9).ceil() as usize).min(s);
    let threshold = (discarded > 0).then(|| sample[discarded - 1]);
    let kept: i64 = sample[discarded..].iter().sum();
    let (at_or_above, tie_cut) = match threshold {
        Some(w) => {
            let above = sample.iter().filter(|&&c| c > w).count();
            let tied = sample.iter().filter(|&&c| c == w).count();
            (above + tied, (discarded - above) as f64 / tied as f64)
        }
        None => (0, 0.0),
    };
    SampleEstimate {
        estimate: n as f64 / s as f64 * kept as f64,
        threshold,
        samples: s,
        discarded,
        alpha_w: at_or_above as f64 / s as f64,
        tie_cut,
        attempts,
    }
}
