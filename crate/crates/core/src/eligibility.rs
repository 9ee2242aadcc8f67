//! 1-feasibility and eligibility of edges under a potential and a matching.

use crate::instance::{CostOracle, Vertex};
use crate::oracle::{MatchingOracle, PotentialOracle};

/// Orientation of an eligible edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Non-matched edge, directed `V0 → V1`.
    Forward,
    /// Matched edge, directed `V1 → V0`.
    Backward,
}

/// Eligibility from raw values.
pub fn eligible_values(cost: Option<i64>, phi_sum: i64, matched: bool) -> Option<Orientation> {
    let c = cost?;
    if matched {
        (phi_sum == c).then_some(Orientation::Backward)
    } else {
        (phi_sum == c + 1).then_some(Orientation::Forward)
    }
}

/// 1-feasibility from raw values. Non-edges are vacuously feasible.
pub fn feasible_values(cost: Option<i64>, phi_sum: i64, matched: bool) -> bool {
    match cost {
        None => true,
        Some(c) if matched => phi_sum == c,
        Some(c) => phi_sum <= c + 1,
    }
}

/// Eligibility view over `(c, φ, M)`.
pub struct Eligibility<'a> {
    pub costs: &'a dyn CostOracle<Cost = i64>,
    pub phi: &'a dyn PotentialOracle,
    pub matching: &'a dyn MatchingOracle,
}

impl<'a> Eligibility<'a> {
    pub fn new(
        costs: &'a dyn CostOracle<Cost = i64>,
        phi: &'a dyn PotentialOracle,
        matching: &'a dyn MatchingOracle,
    ) -> Self {
        Eligibility { costs, phi, matching }
    }

    fn parts(&self, u: usize, v: usize) -> (Option<i64>, i64, bool) {
        let lu = Vertex::left(u);
        let rv = Vertex::right(v);
        let matched = self.matching.mate(lu) == Some(rv);
        (self.costs.cost(u, v), self.phi.eval(lu) + self.phi.eval(rv), matched)
    }

    pub fn orientation(&self, u: usize, v: usize) -> Option<Orientation> {
        let (c, s, m) = self.parts(u, v);
        eligible_values(c, s, m)
    }

    pub fn is_eligible(&self, u: usize, v: usize) -> bool {
        self.orientation(u, v).is_some()
    }

    /// Edge of the forward graph: non-matched, eligible, `V0 → V1`.
    pub fn is_forward(&self, u: usize, v: usize) -> bool {
        self.orientation(u, v) == Some(Orientation::Forward)
    }

    pub fn is_one_feasible(&self, u: usize, v: usize) -> bool {
        let (c, s, m) = self.parts(u, v);
        feasible_values(c, s, m)
    }
}
