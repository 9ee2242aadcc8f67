use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamMode {
    Paper,
    Practical,
}

/// Parameters of the iterative template.
///
/// Integral quantities that overflow `u64` saturate at `u64::MAX`, which the
/// exact backend treats as unbounded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemplateParams {
    pub mode: ParamMode,
    pub gamma: f64,
    /// Input costs lie in `[1, cost_max]`.
    pub cost_max: i64,
    /// `T`
    pub iterations: u64,
    /// `k`
    pub path_len: u64,
    pub xi: f64,
    pub delta: f64,
    /// Integer cost multiplier applied before the iterations.
    pub rescale: i64,
    pub max_samples: usize,
    pub max_forest_rounds: u64,
    pub max_augment_calls: u64,
}

pub const DEFAULT_MAX_SAMPLES: usize = 4096;
pub const DEFAULT_AUGMENT_CALLS: u64 = 64;

fn saturate(x: f64) -> u64 {
    if x.is_finite() && x < u64::MAX as f64 {
        x.ceil().max(1.0) as u64
    } else {
        u64::MAX
    }
}

fn check(gamma: f64, cost_max: i64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return invalid(format!("gamma must lie in (0, 1), got {gamma}"));
    }
    if cost_max < 1 {
        return invalid(format!("cost bound must be at least 1, got {cost_max}"));
    }
    Ok(())
}

impl TemplateParams {
    /// Constants as stated for the worst-case analysis:
    /// `T = C/γ³`, `δ = γ/T`, `k = 6000(2T+1)¹⁰/δ⁵`, `ξ = γ/(T k 2^k)`, rescale `⌈1/γ⌉`.
    pub fn paper(gamma: f64, cost_max: i64) -> Result<TemplateParams> {
        check(gamma, cost_max)?;
        let t = saturate(cost_max as f64 / gamma.powi(3));
        let tf = t as f64;
        let delta = gamma / tf;
        let r10 = (2.0 * tf + 1.0).powi(10);
        let k = saturate(6000.0 * r10 / delta.powi(5));
        let kf = k as f64;
        let xi = gamma / (tf * kf * 2f64.powf(kf.min(2048.0)));
        Ok(TemplateParams {
            mode: ParamMode::Paper,
            gamma,
            cost_max,
            iterations: t,
            path_len: k,
            xi,
            delta,
            rescale: (1.0 / gamma).ceil() as i64,
            max_samples: DEFAULT_MAX_SAMPLES,
            max_forest_rounds: saturate(2000.0 * r10 / delta.powi(5)),
            max_augment_calls: u64::MAX,
        })
    }

    /// User-set `T` and `k`; `ξ = δ = γ/T`, no cost rescale, at most `⌊k/2⌋`
    /// forest rounds so forest depth stays within `k`.
    pub fn practical(gamma: f64, cost_max: i64, iterations: u64, path_len: u64) -> Result<TemplateParams> {
        check(gamma, cost_max)?;
        if iterations == 0 {
            return invalid("T must be at least 1");
        }
        if path_len == 0 {
            return invalid("k must be at least 1");
        }
        let slack = gamma / iterations as f64;
        Ok(TemplateParams {
            mode: ParamMode::Practical,
            gamma,
            cost_max,
            iterations,
            path_len,
            xi: slack,
            delta: slack,
            rescale: 1,
            max_samples: DEFAULT_MAX_SAMPLES,
            max_forest_rounds: (path_len / 2).max(1),
            max_augment_calls: DEFAULT_AUGMENT_CALLS,
        })
    }

    pub fn with_max_samples(mut self, s: usize) -> Self {
        self.max_samples = s.max(1);
        self
    }

    pub fn with_forest_rounds(mut self, r: u64) -> Self {
        self.max_forest_rounds = r.max(1);
        self
    }

    /// Nominal sample count `⌈48 (C/γ)² ln n⌉`.
    pub fn nominal_samples(&self, n: usize) -> f64 {
        let c = self.cost_max as f64;
        (48.0 * (c / self.gamma).powi(2) * (n.max(2) as f64).ln()).ceil()
    }

    /// Upper bound on the oracle DAG depth after `T` iterations.
    pub fn depth_cap(&self) -> u64 {
        let per_iter = self
            .max_augment_calls
            .saturating_add(self.max_forest_rounds)
            .saturating_add(4);
        self.iterations.saturating_mul(per_iter.saturating_mul(2))
    }
}
