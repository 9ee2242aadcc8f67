//! Lazy matching, membership and potential oracles.
//!
//! Oracles are immutable once built. Later layers hold `Arc`s to earlier ones,
//! so a run forms a DAG of oracles. Per-vertex answers are memoized with atomics.

use std::collections::HashMap;
use std::sync::atomic::{AtomicI64, AtomicU32, AtomicU8, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::Vertex;

pub trait MatchingOracle: Send + Sync {
    fn n(&self) -> usize;

    fn mate(&self, v: Vertex) -> Option<Vertex>;

    fn size_hint(&self) -> Option<usize> {
        None
    }

    /// Number of oracle layers below and including this one.
    fn depth(&self) -> usize {
        1
    }
}

pub trait MembershipOracle: Send + Sync {
    fn contains(&self, v: Vertex) -> bool;

    fn depth(&self) -> usize {
        1
    }
}

pub trait PotentialOracle: Send + Sync {
    fn eval(&self, v: Vertex) -> i64;

    /// Size of an integer window containing every value this oracle returns.
    fn range_bound(&self) -> usize;

    fn depth(&self) -> usize {
        1
    }
}

const MATE_UNKNOWN: u32 = u32::MAX;
const MATE_NONE: u32 = u32::MAX - 1;

pub(crate) struct MateMemo(Vec<AtomicU32>);

impl MateMemo {
    pub(crate) fn new(n: usize) -> Self {
        MateMemo((0..2 * n).map(|_| AtomicU32::new(MATE_UNKNOWN)).collect())
    }

    pub(crate) fn get_or(&self, v: Vertex, f: impl FnOnce() -> Option<Vertex>) -> Option<Vertex> {
        let slot = &self.0[v.slot()];
        match slot.load(Ordering::Relaxed) {
            MATE_UNKNOWN => {
                let m = f();
                slot.store(m.map_or(MATE_NONE, Vertex::raw), Ordering::Relaxed);
                m
            }
            MATE_NONE => None,
            raw => Some(Vertex::from_raw(raw)),
        }
    }
}

pub(crate) struct BoolMemo(Vec<AtomicU8>);

impl BoolMemo {
    pub(crate) fn new(n: usize) -> Self {
        BoolMemo((0..2 * n).map(|_| AtomicU8::new(0)).collect())
    }

    pub(crate) fn get_or(&self, v: Vertex, f: impl FnOnce() -> bool) -> bool {
        let slot = &self.0[v.slot()];
        match slot.load(Ordering::Relaxed) {
            0 => {
                let b = f();
                slot.store(if b { 2 } else { 1 }, Ordering::Relaxed);
                b
            }
            s => s == 2,
        }
    }
}

pub(crate) struct IntMemo(Vec<AtomicI64>);

impl IntMemo {
    pub(crate) fn new(n: usize) -> Self {
        IntMemo((0..2 * n).map(|_| AtomicI64::new(i64::MIN)).collect())
    }

    pub(crate) fn get_or(&self, v: Vertex, f: impl FnOnce() -> i64) -> i64 {
        let slot = &self.0[v.slot()];
        match slot.load(Ordering::Relaxed) {
            i64::MIN => {
                let x = f();
                slot.store(x, Ordering::Relaxed);
                x
            }
            x => x,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EmptyMatching {
    pub n: usize,
}

impl MatchingOracle for EmptyMatching {
    fn n(&self) -> usize {
        self.n
    }

    fn mate(&self, _v: Vertex) -> Option<Vertex> {
        None
    }

    fn size_hint(&self) -> Option<usize> {
        Some(0)
    }
}

/// A fully materialized matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitMatching {
    left: Vec<u32>,
    right: Vec<u32>,
    size: usize,
}

impl ExplicitMatching {
    pub fn empty(n: usize) -> Self {
        ExplicitMatching { left: vec![MATE_NONE; n], right: vec![MATE_NONE; n], size: 0 }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = ExplicitMatching::empty(n);
        for &(u, v) in pairs {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!("pair ({u}, {v}) out of range")));
            }
            if m.left[u] != MATE_NONE || m.right[v] != MATE_NONE {
                return Err(Error::InvalidParameter(format!("pair ({u}, {v}) is not disjoint")));
            }
            m.link(u, v);
        }
        Ok(m)
    }

    /// Reads every vertex of `m`.
    pub fn materialize(m: &dyn MatchingOracle) -> Self {
        let n = m.n();
        let mut out = ExplicitMatching::empty(n);
        for u in 0..n {
            if let Some(v) = m.mate(Vertex::left(u)) {
                out.link(u, v.index());
            }
        }
        out
    }

    pub(crate) fn link(&mut self, u: usize, v: usize) {
        self.left[u] = v as u32;
        self.right[v] = u as u32;
        self.size += 1;
    }

    pub(crate) fn unlink_left(&mut self, u: usize) {
        let v = self.left[u];
        if v != MATE_NONE {
            self.right[v as usize] = MATE_NONE;
            self.left[u] = MATE_NONE;
            self.size -= 1;
        }
    }

    pub fn n(&self) -> usize {
        self.left.len()
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn mate_of_left(&self, u: usize) -> Option<usize> {
        match self.left[u] {
            MATE_NONE => None,
            v => Some(v as usize),
        }
    }

    pub fn mate_of_right(&self, v: usize) -> Option<usize> {
        match self.right[v] {
            MATE_NONE => None,
            u => Some(u as usize),
        }
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n()).filter_map(|u| self.mate_of_left(u).map(|v| (u, v))).collect()
    }
}

impl MatchingOracle for ExplicitMatching {
    fn n(&self) -> usize {
        self.left.len()
    }

    fn mate(&self, v: Vertex) -> Option<Vertex> {
        if v.is_left() {
            self.mate_of_left(v.index()).map(Vertex::right)
        } else {
            self.mate_of_right(v.index()).map(Vertex::left)
        }
    }

    fn size_hint(&self) -> Option<usize> {
        Some(self.size)
    }
}

/// `base` with a sparse set of re-mated vertices on top.
pub struct OverlayMatching {
    base: Arc<dyn MatchingOracle>,
    changes: HashMap<u32, u32>,
    size: Option<usize>,
    depth: usize,
    memo: MateMemo,
}

impl OverlayMatching {
    /// `base ⊕ paths`, where each path lists its new matched pairs `(u, v)`.
    pub fn augment(base: Arc<dyn MatchingOracle>, new_pairs: &[(usize, usize)], paths: usize) -> Self {
        let n = base.n();
        let mut changes = HashMap::with_capacity(new_pairs.len() * 2);
        for &(u, v) in new_pairs {
            changes.insert(Vertex::left(u).raw(), Vertex::right(v).raw());
            changes.insert(Vertex::right(v).raw(), Vertex::left(u).raw());
        }
        let size = base.size_hint().map(|s| s + paths);
        let depth = base.depth() + 1;
        OverlayMatching { base, changes, size, depth, memo: MateMemo::new(n) }
    }
}

impl MatchingOracle for OverlayMatching {
    fn n(&self) -> usize {
        self.base.n()
    }

    fn mate(&self, v: Vertex) -> Option<Vertex> {
        self.memo.get_or(v, || match self.changes.get(&v.raw()) {
            Some(&raw) => Some(Vertex::from_raw(raw)),
            None => self.base.mate(v),
        })
    }

    fn size_hint(&self) -> Option<usize> {
        self.size
    }

    fn depth(&self) -> usize {
        self.depth
    }
}

/// Membership oracle given by a closure.
pub struct PredicateSet<F> {
    f: F,
}

impl<F: Fn(Vertex) -> bool + Send + Sync> PredicateSet<F> {
    pub fn new(f: F) -> Self {
        PredicateSet { f }
    }
}

impl<F: Fn(Vertex) -> bool + Send + Sync> MembershipOracle for PredicateSet<F> {
    fn contains(&self, v: Vertex) -> bool {
        (self.f)(v)
    }
}

pub struct FullSet;

impl MembershipOracle for FullSet {
    fn contains(&self, _v: Vertex) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ZeroPotential;

impl PotentialOracle for ZeroPotential {
    fn eval(&self, _v: Vertex) -> i64 {
        0
    }

    fn range_bound(&self) -> usize {
        1
    }
}

/// Checks that `m` answers symmetrically and never pairs a side with itself.
pub fn check_matching_symmetry(m: &dyn MatchingOracle) -> Result<()> {
    for i in 0..m.n() {
        for v in [Vertex::left(i), Vertex::right(i)] {
            if let Some(w) = m.mate(v) {
                if w.is_left() == v.is_left() {
                    return Err(Error::Infeasible(format!("{v:?} matched within its side to {w:?}")));
                }
                if m.mate(w) != Some(v) {
                    return Err(Error::Infeasible(format!("mate({v:?}) = {w:?} is not symmetric")));
                }
            }
        }
    }
    Ok(())
}
