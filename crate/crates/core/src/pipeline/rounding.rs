//! Thresholding and integer rounding of real costs.

use crate::instance::CostOracle;

/// `c̄ = ⌈2c / (γ² w)⌉ + 1`; satisfies `c ≤ (γ² w / 2) c̄ ≤ c + γ² w`.
pub fn round_cost(c: f64, gamma: f64, w: f64) -> i64 {
    (2.0 * c / (gamma * gamma * w)).ceil() as i64 + 1
}

/// Real value of one rounded unit, `γ² w / 2`.
pub fn unit(gamma: f64, w: f64) -> f64 {
    gamma * gamma * w / 2.0
}

/// Bound `C` on rounded costs of edges with `c ≤ w`.
pub fn levels_for_gamma(gamma: f64) -> i64 {
    (2.0 / (gamma * gamma)).ceil() as i64 + 2
}

/// Rounding parameter whose costs fit in `levels` integer values.
pub fn gamma_for_levels(levels: i64) -> f64 {
    let l = levels.max(4) as f64;
    (2.0 / (l - 2.0)).sqrt()
}

/// `G_{≤w}`: costs above `w` become non-edges.
pub struct ThresholdCosts<O> {
    pub inner: O,
    pub w: f64,
}

impl<O: CostOracle<Cost = f64>> CostOracle for ThresholdCosts<O> {
    type Cost = f64;

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn cost(&self, u: usize, v: usize) -> Option<f64> {
        self.inner.cost(u, v).filter(|&c| c <= self.w)
    }
}

pub struct RoundedCosts<O> {
    pub inner: O,
    pub gamma: f64,
    pub w: f64,
}

impl<O: CostOracle<Cost = f64>> CostOracle for RoundedCosts<O> {
    type Cost = i64;

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn cost(&self, u: usize, v: usize) -> Option<i64> {
        self.inner.cost(u, v).map(|c| round_cost(c, self.gamma, self.w))
    }
}
