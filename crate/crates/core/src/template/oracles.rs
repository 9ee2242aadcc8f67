//! Oracles built by the template iterations.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::instance::{CostOracle, IntCosts, Vertex};
use crate::seed::unit_hash;
use crate::oracle::{
    BoolMemo, ExplicitMatching, IntMemo, MatchingOracle, MembershipOracle, PotentialOracle,
};

/// Template-side cost adapter: bounds check, integer rescale, query tally.
pub struct TemplateCosts {
    inner: Arc<IntCosts>,
    scale: i64,
    cost_max: i64,
    queries: AtomicU64,
    malformed: Mutex<Option<(usize, usize, i64)>>,
}

impl TemplateCosts {
    pub fn new(inner: Arc<IntCosts>, scale: i64, cost_max: i64) -> Self {
        TemplateCosts { inner, scale, cost_max, queries: AtomicU64::new(0), malformed: Mutex::new(None) }
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn malformed(&self) -> Option<(usize, usize, i64)> {
        *self.malformed.lock().unwrap()
    }

    fn convert(&self, u: usize, v: usize, c: Option<i64>) -> Option<i64> {
        let c = c?;
        if c < 1 || c > self.cost_max {
            let mut slot = self.malformed.lock().unwrap();
            slot.get_or_insert((u, v, c));
        }
        Some(c * self.scale)
    }

    /// Scaled cost without touching the tally.
    pub fn peek(&self, u: usize, v: usize) -> Option<i64> {
        self.inner.cost(u, v).map(|c| c * self.scale)
    }
}

impl CostOracle for TemplateCosts {
    type Cost = i64;

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn cost(&self, u: usize, v: usize) -> Option<i64> {
        self.queries.fetch_add(1, Ordering::Relaxed);
        let c = self.inner.cost(u, v);
        self.convert(u, v, c)
    }
}

/// `F_0`: the free vertices of `V0`.
pub struct FreeLeft {
    pub matching: Arc<dyn MatchingOracle>,
}

impl MembershipOracle for FreeLeft {
    fn contains(&self, v: Vertex) -> bool {
        v.is_left() && self.matching.mate(v).is_none()
    }

    fn depth(&self) -> usize {
        self.matching.depth() + 1
    }
}

/// One forest-growth round:
/// `F' = F ∪ M_t(F)` followed by `F'' = F' ∪ M_in(F')`.
pub struct ForestGrowth {
    prev: Arc<dyn MembershipOracle>,
    round: Arc<ExplicitMatching>,
    m_in: Arc<dyn MatchingOracle>,
    memo_prime: BoolMemo,
    memo: BoolMemo,
    depth: usize,
}

impl ForestGrowth {
    pub fn new(
        prev: Arc<dyn MembershipOracle>,
        round: Arc<ExplicitMatching>,
        m_in: Arc<dyn MatchingOracle>,
    ) -> Self {
        let n = m_in.n();
        let depth = prev.depth().max(m_in.depth()) + 1;
        ForestGrowth { prev, round, m_in, memo_prime: BoolMemo::new(n), memo: BoolMemo::new(n), depth }
    }

    fn in_prime(&self, v: Vertex) -> bool {
        self.memo_prime.get_or(v, || {
            self.prev.contains(v) || self.round.mate(v).is_some_and(|w| self.prev.contains(w))
        })
    }
}

impl MembershipOracle for ForestGrowth {
    fn contains(&self, v: Vertex) -> bool {
        self.memo.get_or(v, || {
            self.in_prime(v) || self.m_in.mate(v).is_some_and(|w| self.in_prime(w))
        })
    }

    fn depth(&self) -> usize {
        self.depth
    }
}

/// `A = (F ∩ V0) ∪ (V1 \ F)`.
pub struct ForwardDomain {
    pub forest: Arc<dyn MembershipOracle>,
}

impl MembershipOracle for ForwardDomain {
    fn contains(&self, v: Vertex) -> bool {
        self.forest.contains(v) == v.is_left()
    }

    fn depth(&self) -> usize {
        self.forest.depth() + 1
    }
}

/// Potential after augmentation: a `V1` vertex drops by one when its new
/// matched edge was a non-matched eligible edge before.
pub struct Step1Potential {
    phi_in: Arc<dyn PotentialOracle>,
    m_out: Arc<dyn MatchingOracle>,
    costs: Arc<IntCosts>,
    memo: IntMemo,
    range: usize,
    depth: usize,
}

impl Step1Potential {
    pub fn new(
        phi_in: Arc<dyn PotentialOracle>,
        m_out: Arc<dyn MatchingOracle>,
        costs: Arc<IntCosts>,
        range: usize,
    ) -> Self {
        let n = m_out.n();
        let depth = phi_in.depth().max(m_out.depth()) + 1;
        Step1Potential { phi_in, m_out, costs, memo: IntMemo::new(n), range, depth }
    }
}

impl PotentialOracle for Step1Potential {
    fn eval(&self, v: Vertex) -> i64 {
        if v.is_left() {
            return self.phi_in.eval(v);
        }
        self.memo.get_or(v, || {
            let base = self.phi_in.eval(v);
            match self.m_out.mate(v) {
                None => base,
                Some(u) => match self.costs.cost(u.index(), v.index()) {
                    Some(c) if c + 1 == self.phi_in.eval(u) + base => base - 1,
                    _ => base,
                },
            }
        })
    }

    fn range_bound(&self) -> usize {
        self.range
    }

    fn depth(&self) -> usize {
        self.depth
    }
}

/// Potential after forest growth: `+1` on `F ∩ V0`, `−1` on `F ∩ V1`.
pub struct Step2Potential {
    phi_in: Arc<dyn PotentialOracle>,
    forest: Arc<dyn MembershipOracle>,
    memo: IntMemo,
    range: usize,
    depth: usize,
}

impl Step2Potential {
    pub fn new(
        phi_in: Arc<dyn PotentialOracle>,
        forest: Arc<dyn MembershipOracle>,
        n: usize,
        range: usize,
    ) -> Self {
        let depth = phi_in.depth().max(forest.depth()) + 1;
        Step2Potential { phi_in, forest, memo: IntMemo::new(n), range, depth }
    }
}

impl PotentialOracle for Step2Potential {
    fn eval(&self, v: Vertex) -> i64 {
        self.memo.get_or(v, || {
            let base = self.phi_in.eval(v);
            match (self.forest.contains(v), v.is_left()) {
                (false, _) => base,
                (true, true) => base + 1,
                (true, false) => base - 1,
            }
        })
    }

    fn range_bound(&self) -> usize {
        self.range
    }

    fn depth(&self) -> usize {
        self.depth
    }
}

/// `M^ALG`: the base matching without its most expensive edges.
///
/// Edges above the threshold are cut; edges tied at it are cut when a hash of
/// the pair falls below `tie_cut`, so the cut share tracks the discarded share.
pub struct ThresholdedMatching {
    base: Arc<dyn MatchingOracle>,
    costs: Arc<IntCosts>,
    threshold: Option<i64>,
    tie_cut: f64,
    seed: u64,
}

impl ThresholdedMatching {
    pub fn new(
        base: Arc<dyn MatchingOracle>,
        costs: Arc<IntCosts>,
        threshold: Option<i64>,
        tie_cut: f64,
        seed: u64,
    ) -> Self {
        ThresholdedMatching { base, costs, threshold, tie_cut, seed }
    }

    /// `None` means no edge is cut.
    pub fn threshold(&self) -> Option<i64> {
        self.threshold
    }

    pub fn tie_cut(&self) -> f64 {
        self.tie_cut
    }

    pub fn keeps(&self, u: usize, v: usize, c: i64) -> bool {
        match self.threshold {
            None => true,
            Some(w) if c < w => true,
            Some(w) if c == w => unit_hash(self.seed, u as u64, v as u64) >= self.tie_cut,
            Some(_) => false,
        }
    }
}

impl MatchingOracle for ThresholdedMatching {
    fn n(&self) -> usize {
        self.base.n()
    }

    fn mate(&self, v: Vertex) -> Option<Vertex> {
        let w = self.base.mate(v)?;
        if self.threshold.is_none() {
            return Some(w);
        }
        let (l, r) = if v.is_left() { (v, w) } else { (w, v) };
        match self.costs.cost(l.index(), r.index()) {
            Some(c) if self.keeps(l.index(), r.index(), c) => Some(w),
            _ => None,
        }
    }

    fn depth(&self) -> usize {
        self.base.depth() + 1
    }
}
