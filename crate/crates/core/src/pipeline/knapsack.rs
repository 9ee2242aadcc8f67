//! Largest matching within a cost budget, by binary search over outlier windows.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{estimate_min_weight_matching, ReductionConfig, TemplateSettings};
use crate::error::{invalid, Result};
use crate::instance::BipartiteInstance;
use crate::mcm::Backend;
use crate::seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnapsackStep {
    pub xi: f64,
    pub estimate: f64,
    pub fits: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnapsackReport {
    pub n: usize,
    pub budget: f64,
    pub gamma: f64,
    /// `ŝ`
    pub size: f64,
    pub fraction: f64,
    pub steps: Vec<KnapsackStep>,
    pub total_queries: u64,
    pub backend: String,
    pub seed: u64,
}

/// `{γ/4, γ/2, …}` up to and including 1.
pub fn knapsack_grid(gamma: f64) -> Vec<f64> {
    let step = gamma / 4.0;
    let count = (1.0 / step - 1e-9).ceil() as usize;
    (1..=count).map(|i| (i as f64 * step).min(1.0)).collect()
}

/// `ŝ` with `|ŝ − |M*|| ≤ γn`, where `M*` is a largest matching of cost at most `budget`.
///
/// Grid point `ξ` runs the estimator on the window `(ξ − γ/4, ξ)` and fits when
/// the estimate is at most the budget; the largest fitting `ξ` is found by binary search.
pub fn estimate_knapsack(
    instance: &Arc<BipartiteInstance>,
    budget: f64,
    gamma: f64,
    settings: &TemplateSettings,
    backend: Backend,
    seed: u64,
) -> Result<KnapsackReport> {
    if !(budget >= 0.0) {
        return invalid(format!("budget must be non-negative, got {budget}"));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return invalid(format!("gamma must lie in (0, 1), got {gamma}"));
    }
    let n = instance.n();
    if n == 0 {
        return invalid("empty instance");
    }
    let q0 = instance.query_count();
    let grid = knapsack_grid(gamma);
    let mut steps = Vec::new();
    let probe = |i: usize, steps: &mut Vec<KnapsackStep>| -> Result<bool> {
        let xi = grid[i];
        let cfg = ReductionConfig::for_window((xi - gamma / 4.0).max(0.0), xi, gamma)?;
        let out = estimate_min_weight_matching(instance, &cfg, settings, backend, seed::derive_index(seed, i as u64))?;
        let fits = out.report.estimate <= budget;
        steps.push(KnapsackStep { xi, estimate: out.report.estimate, fits });
        Ok(fits)
    };
    // Invariant: grid[lo] fits (lo = None means nothing fits), grid[hi] does not.
    let mut lo: Option<usize> = None;
    let mut hi = grid.len();
    while hi > lo.map_or(0, |l| l + 1) {
        let low = lo.map_or(0, |l| l + 1);
        let mid = low + (hi - low) / 2;
        if probe(mid, &mut steps)? {
            lo = Some(mid);
        } else {
            hi = mid;
        }
    }
    let fraction = lo.map_or(0.0, |i| grid[i]);
    Ok(KnapsackReport {
        n,
        budget,
        gamma,
        size: fraction * n as f64,
        fraction,
        steps,
        total_queries: instance.query_count() - q0,
        backend: backend.name().to_string(),
        seed,
    })
}
