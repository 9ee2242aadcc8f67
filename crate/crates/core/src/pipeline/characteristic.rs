//! The characteristic cost `w̄` used to scale rounding.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::ReductionConfig;
use crate::error::{Error, Result};
use crate::instance::CostOracle;
use crate::mcm::{Matcher, ThresholdView};
use crate::seed::Rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicCost {
    pub w_bar: f64,
    pub samples: usize,
    pub ladder: usize,
    /// Ladder position of `w̄`; `None` when no rung qualified and the smallest was used.
    pub index: Option<usize>,
    pub matcher_calls: u64,
    /// The sorted, deduplicated sample.
    #[serde(skip)]
    pub rungs: Vec<f64>,
}

/// Largest sampled cost `w` with `μ(G_{≤γw}) < (β − 2γ) n`, found by binary search
/// over `⌈n ln n / γ⌉` uniformly sampled costs.
pub fn find_characteristic_cost(
    costs: &dyn CostOracle<Cost = f64>,
    cfg: &ReductionConfig,
    matcher: &mut Matcher,
    rng: &mut Rng,
) -> Result<CharacteristicCost> {
    let n = costs.n();
    if n == 0 {
        return Err(Error::InvalidParameter("empty instance".into()));
    }
    let gamma = cfg.gamma;
    let s = ((n as f64 * (n as f64).ln() / gamma).ceil() as usize).max(1);
    let mut ladder: Vec<f64> = (0..s)
        .filter_map(|_| costs.cost(rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    ladder.sort_by(f64::total_cmp);
    ladder.dedup();
    let calls_before = matcher.stats().calls;
    let limit = (cfg.beta - 2.0 * gamma) * n as f64;
    let small = |w: f64, matcher: &mut Matcher| {
        let view = ThresholdView { costs, w: gamma * w };
        (matcher.approx_match(&view, gamma).0 as f64) < limit
    };
    let index = if !small(ladder[0], matcher) {
        None
    } else {
        let (mut lo, mut hi) = (0usize, ladder.len());
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if small(ladder[mid], matcher) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    };
    Ok(CharacteristicCost {
        w_bar: ladder[index.unwrap_or(0)],
        samples: s,
        ladder: ladder.len(),
        index,
        matcher_calls: matcher.stats().calls - calls_before,
        rungs: ladder,
    })
}

/// Smallest rung `w ≤ cap` with `μ(G_{≤w}) ≥ size`; `cap` if none qualifies.
pub fn reach_cost(
    costs: &dyn CostOracle<Cost = f64>,
    rungs: &[f64],
    size: usize,
    cap: f64,
    matcher: &mut Matcher,
) -> f64 {
    let end = rungs.partition_point(|&w| w <= cap);
    let mut big = |w: f64| matcher.approx_match(&ThresholdView { costs, w }, 0.0).0 >= size;
    let (mut lo, mut hi) = (0usize, end);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if big(rungs[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if lo < end {
        rungs[lo]
    } else {
        cap
    }
}
