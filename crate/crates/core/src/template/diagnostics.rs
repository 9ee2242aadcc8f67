//! Full-scan invariants, for desk-scale runs only.

use std::collections::HashMap;

use super::oracles::TemplateCosts;
use super::IterationRecord;
use crate::baseline;
use crate::eligibility::feasible_values;
use crate::instance::Vertex;
use crate::oracle::{ExplicitMatching, MatchingOracle, PotentialOracle};

/// Explicit copy of the step-2 forest: depth and root of every member.
pub struct DeskForest {
    depth: Vec<Option<u32>>,
    root: Vec<u32>,
}

impl DeskForest {
    pub fn new(m_in: &dyn MatchingOracle) -> Self {
        let n = m_in.n();
        let mut depth = vec![None; 2 * n];
        let mut root = vec![u32::MAX; 2 * n];
        for u in 0..n {
            let l = Vertex::left(u);
            if m_in.mate(l).is_none() {
                depth[l.slot()] = Some(0);
                root[l.slot()] = u as u32;
            }
        }
        DeskForest { depth, root }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.depth[v.slot()].is_some()
    }

    fn adopt(&mut self, child: Vertex, parent: Vertex) {
        let d = self.depth[parent.slot()].map_or(0, |d| d + 1);
        self.depth[child.slot()] = Some(d);
        self.root[child.slot()] = self.root[parent.slot()];
    }

    pub fn grow(&mut self, round: &ExplicitMatching, m_in: &dyn MatchingOracle) {
        let n = round.n();
        let mut added = Vec::new();
        for u in 0..n {
            let l = Vertex::left(u);
            if !self.contains(l) {
                continue;
            }
            if let Some(v) = round.mate_of_left(u) {
                let r = Vertex::right(v);
                if !self.contains(r) {
                    added.push((r, l));
                }
            }
        }
        for &(c, p) in &added {
            self.adopt(c, p);
        }
        for slot in 0..2 * n {
            let x = Vertex::from_raw(slot as u32);
            if !self.contains(x) {
                continue;
            }
            if let Some(y) = m_in.mate(x) {
                if !self.contains(y) {
                    self.adopt(y, x);
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        self.depth.iter().filter(|d| d.is_some()).count()
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().flatten().copied().max().unwrap_or(0) as usize
    }

    pub fn max_component(&self) -> usize {
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for (slot, d) in self.depth.iter().enumerate() {
            if d.is_some() {
                *counts.entry(self.root[slot]).or_default() += 1;
            }
        }
        counts.values().copied().max().unwrap_or(0)
    }
}

/// Edges violating 1-feasibility under `(φ, M)`.
pub fn broken_edges(
    n: usize,
    cost: impl Fn(usize, usize) -> Option<i64>,
    phi: &dyn PotentialOracle,
    m: &dyn MatchingOracle,
) -> Vec<(usize, usize)> {
    let phi_l: Vec<i64> = (0..n).map(|u| phi.eval(Vertex::left(u))).collect();
    let phi_r: Vec<i64> = (0..n).map(|v| phi.eval(Vertex::right(v))).collect();
    let mate: Vec<Option<usize>> = (0..n).map(|u| m.mate(Vertex::left(u)).map(Vertex::index)).collect();
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let c = cost(u, v);
            if c.is_none() {
                continue;
            }
            if !feasible_values(c, phi_l[u] + phi_r[v], mate[u] == Some(v)) {
                out.push((u, v));
            }
        }
    }
    out
}

pub(super) fn fill_desk(
    record: &mut IterationRecord,
    forest: &DeskForest,
    m: &dyn MatchingOracle,
    phi: &dyn PotentialOracle,
    costs: &TemplateCosts,
    t: u64,
) {
    use crate::instance::CostOracle;
    let n = costs.n();
    let mut free = 0;
    let mut off = 0;
    let mut spurious = 0;
    for x in 0..n {
        let l = Vertex::left(x);
        if m.mate(l).is_none() {
            free += 1;
            if phi.eval(l) != t as i64 {
                off += 1;
            }
        }
        let r = Vertex::right(x);
        if m.mate(r).is_none() && phi.eval(r) != 0 {
            spurious += 1;
        }
    }
    let broken = broken_edges(n, |u, v| costs.peek(u, v), phi, m);
    record.free_left = Some(free);
    record.potential_violations = Some(off);
    record.spurious = Some(spurious);
    record.broken_cover = Some(baseline::min_vertex_cover(n, &broken).len());
    record.forest_size = Some(forest.size());
    record.forest_depth = Some(forest.max_depth());
    record.forest_component = Some(forest.max_component());
}
