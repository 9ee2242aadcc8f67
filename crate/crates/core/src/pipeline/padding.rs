//! Dummy padding that turns a partial-matching question into a perfect one.

use std::sync::Arc;

use crate::instance::{CostOracle, Vertex};
use crate::oracle::MatchingOracle;

/// Dummies per side, `(1 − β + ξ) n`, rounded up.
pub fn dummy_count(n: usize, beta: f64, xi: f64) -> usize {
    ((1.0 - beta + xi) * n as f64 - 1e-9).ceil().max(0.0) as usize
}

/// `ĉ − (2 − 2β + ξ) n`.
pub fn unpad_estimate(c_hat: f64, n: usize, beta: f64, xi: f64) -> f64 {
    c_hat - (2.0 - 2.0 * beta + xi) * n as f64
}

/// Real vertices keep their costs, dummy–real pairs cost `dummy_cost`,
/// dummy–dummy pairs are non-edges.
pub struct PaddedCosts<O: CostOracle> {
    pub inner: O,
    pub dummies: usize,
    pub dummy_cost: O::Cost,
}

impl<O: CostOracle> PaddedCosts<O> {
    pub fn new(inner: O, dummies: usize, dummy_cost: O::Cost) -> Self {
        PaddedCosts { inner, dummies, dummy_cost }
    }

    pub fn real(&self) -> usize {
        self.inner.n()
    }
}

impl<O: CostOracle> CostOracle for PaddedCosts<O> {
    type Cost = O::Cost;

    fn n(&self) -> usize {
        self.inner.n() + self.dummies
    }

    fn cost(&self, u: usize, v: usize) -> Option<O::Cost> {
        let n = self.inner.n();
        match (u < n, v < n) {
            (true, true) => self.inner.cost(u, v),
            (false, false) => None,
            _ => Some(self.dummy_cost),
        }
    }
}

/// Restriction of a padded matching to real vertices.
pub struct UnpaddedMatching {
    pub base: Arc<dyn MatchingOracle>,
    pub real: usize,
}

impl MatchingOracle for UnpaddedMatching {
    fn n(&self) -> usize {
        self.real
    }

    fn mate(&self, v: Vertex) -> Option<Vertex> {
        if v.index() >= self.real {
            return None;
        }
        self.base.mate(v).filter(|w| w.index() < self.real)
    }

    fn depth(&self) -> usize {
        self.base.depth() + 1
    }
}
