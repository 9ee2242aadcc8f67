//! Large matchings in the forward graph, one potential bucket at a time.

use std::collections::BTreeMap;

use super::{FnView, Matcher};
use crate::instance::{CostOracle, Vertex};
use crate::oracle::{ExplicitMatching, MatchingOracle, MembershipOracle, PotentialOracle};

pub struct ForwardRequest<'a> {
    pub costs: &'a dyn CostOracle<Cost = i64>,
    pub phi: &'a dyn PotentialOracle,
    pub matching: &'a dyn MatchingOracle,
    pub domain: &'a dyn MembershipOracle,
    pub delta_in: f64,
    pub epsilon: f64,
    /// Costs lie in `[1, cost_max]`; buckets outside that window are skipped.
    pub cost_max: i64,
}

pub struct ForwardOutcome {
    pub matching: ExplicitMatching,
    pub bucket: (i64, i64),
    pub buckets_tried: usize,
}

impl Matcher {
    /// Scans potential buckets `(i, j)` in increasing order and returns the first
    /// large matching among forward edges from `φ⁻¹(i) ∩ A ∩ V0` to `φ⁻¹(j) ∩ A ∩ V1`.
    pub fn large_matching_forward(&mut self, req: &ForwardRequest<'_>) -> Option<ForwardOutcome> {
        let n = req.costs.n();
        let mut mate_left = vec![u32::MAX; n];
        let mut left: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut right: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for x in 0..n {
            let l = Vertex::left(x);
            if req.domain.contains(l) {
                left.entry(req.phi.eval(l)).or_default().push(x);
                if let Some(v) = req.matching.mate(l) {
                    mate_left[x] = v.index() as u32;
                }
            }
            let r = Vertex::right(x);
            if req.domain.contains(r) {
                right.entry(req.phi.eval(r)).or_default().push(x);
            }
        }
        let range = req.phi.range_bound().max(1) as f64;
        let inner = req.delta_in / (range * range);
        let mut tried = 0;
        for (&i, ls) in &left {
            for (&j, rs) in &right {
                let target = i + j - 1;
                if target < 1 || target > req.cost_max {
                    continue;
                }
                tried += 1;
                let costs = req.costs;
                let mate_left = &mate_left;
                let view = FnView {
                    n,
                    f: |u: usize, v: usize| {
                        mate_left[u] != v as u32 && costs.cost(u, v) == Some(target)
                    },
                };
                if let Some(m) = self.large_match(&view, ls, rs, inner, req.epsilon) {
                    return Some(ForwardOutcome { matching: m, bucket: (i, j), buckets_tried: tried });
                }
            }
        }
        None
    }
}
