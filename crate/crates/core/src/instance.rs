//! Bipartite cost instances and the cost-access interface.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// `V0`
    Left,
    /// `V1`
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A vertex of `V0 ∪ V1`, packed as `index << 1 | side`.
///
/// The packed value doubles as a dense slot in `0..2n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex(u32);

impl Vertex {
    pub const fn left(i: usize) -> Vertex {
        Vertex((i as u32) << 1)
    }

    pub const fn right(i: usize) -> Vertex {
        Vertex(((i as u32) << 1) | 1)
    }

    pub fn new(side: Side, i: usize) -> Vertex {
        match side {
            Side::Left => Vertex::left(i),
            Side::Right => Vertex::right(i),
        }
    }

    pub const fn from_raw(raw: u32) -> Vertex {
        Vertex(raw)
    }

    pub const fn raw(self) -> u32 {
        self.0
    }

    pub const fn slot(self) -> usize {
        self.0 as usize
    }

    pub const fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub const fn is_left(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn side(self) -> Side {
        if self.is_left() {
            Side::Left
        } else {
            Side::Right
        }
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.is_left() { 'L' } else { 'R' };
        write!(f, "{}{}", tag, self.index())
    }
}

/// Partial cost access over `V0 × V1`; `None` marks a non-edge.
pub trait CostOracle: Send + Sync {
    type Cost: Copy + PartialOrd + fmt::Debug + Send + Sync;

    fn n(&self) -> usize;

    fn cost(&self, u: usize, v: usize) -> Option<Self::Cost>;
}

impl<T: CostOracle + ?Sized> CostOracle for &T {
    type Cost = T::Cost;

    fn n(&self) -> usize {
        (**self).n()
    }

    fn cost(&self, u: usize, v: usize) -> Option<T::Cost> {
        (**self).cost(u, v)
    }
}

impl<T: CostOracle + ?Sized> CostOracle for Arc<T> {
    type Cost = T::Cost;

    fn n(&self) -> usize {
        (**self).n()
    }

    fn cost(&self, u: usize, v: usize) -> Option<T::Cost> {
        (**self).cost(u, v)
    }
}

pub type IntCosts = dyn CostOracle<Cost = i64>;
pub type RealCosts = dyn CostOracle<Cost = f64>;

/// Raw source of a complete real cost function.
pub trait CostSource: Send + Sync {
    fn n(&self) -> usize;

    fn cost(&self, u: usize, v: usize) -> f64;
}

/// Row-major dense cost matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseCosts {
    n: usize,
    data: Vec<f64>,
}

impl DenseCosts {
    pub fn new(n: usize, data: Vec<f64>) -> Result<DenseCosts> {
        if data.len() != n * n {
            return Err(Error::Format(format!(
                "expected {} entries, found {}",
                n * n,
                data.len()
            )));
        }
        for (idx, &value) in data.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::MalformedCost { u: idx / n.max(1), v: idx % n.max(1), value });
            }
        }
        Ok(DenseCosts { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<DenseCosts> {
        let mut data = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                data.push(f(u, v));
            }
        }
        DenseCosts::new(n, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.data[u * self.n + v]
    }
}

impl CostSource for DenseCosts {
    fn n(&self) -> usize {
        self.n
    }

    fn cost(&self, u: usize, v: usize) -> f64 {
        self.data[u * self.n + v]
    }
}

/// Cost source backed by a closure.
pub struct FnCosts<F> {
    n: usize,
    f: F,
}

impl<F: Fn(usize, usize) -> f64 + Send + Sync> FnCosts<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnCosts { n, f }
    }
}

impl<F: Fn(usize, usize) -> f64 + Send + Sync> CostSource for FnCosts<F> {
    fn n(&self) -> usize {
        self.n
    }

    fn cost(&self, u: usize, v: usize) -> f64 {
        (self.f)(u, v)
    }
}

/// A bipartite instance `G = (V0 ∪ V1, c)` with `|V0| = |V1| = n`.
///
/// Every cost access goes through [`BipartiteInstance::cost_at`] and bumps the
/// query counter exactly once.
pub struct BipartiteInstance {
    source: Arc<dyn CostSource>,
    queries: AtomicU64,
}

impl BipartiteInstance {
    pub fn new(source: Arc<dyn CostSource>) -> Self {
        BipartiteInstance { source, queries: AtomicU64::new(0) }
    }

    pub fn dense(costs: DenseCosts) -> Self {
        BipartiteInstance::new(Arc::new(costs))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64 + Send + Sync + 'static) -> Self {
        BipartiteInstance::new(Arc::new(FnCosts::new(n, f)))
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn cost_at(&self, u: usize, v: usize) -> f64 {
        self.queries.fetch_add(1, Ordering::Relaxed);
        let c = self.source.cost(u, v);
        debug_assert!(c.is_finite() && c >= 0.0, "cost({u}, {v}) = {c}");
        c
    }

    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn reset_query_count(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    pub fn source(&self) -> &Arc<dyn CostSource> {
        &self.source
    }

    /// Reads the full matrix through the counter (`n²` queries).
    pub fn read_dense(&self) -> DenseCosts {
        let n = self.n();
        let mut data = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                data.push(self.cost_at(u, v));
            }
        }
        DenseCosts { n, data }
    }

    /// Reads the full matrix without touching the query counter.
    pub fn to_dense(&self) -> DenseCosts {
        let n = self.n();
        let mut data = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                data.push(self.source.cost(u, v));
            }
        }
        DenseCosts { n, data }
    }
}

impl CostOracle for BipartiteInstance {
    type Cost = f64;

    fn n(&self) -> usize {
        self.source.n()
    }

    fn cost(&self, u: usize, v: usize) -> Option<f64> {
        Some(self.cost_at(u, v))
    }
}

impl fmt::Debug for BipartiteInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BipartiteInstance")
            .field("n", &self.n())
            .field("queries", &self.query_count())
            .finish()
    }
}
