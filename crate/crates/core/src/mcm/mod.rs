//! Maximum-cardinality-matching primitives behind a backend switch.
//!
//! `Exact` materializes matchings with Hopcroft–Karp and reads every pair it
//! needs. `Sampled` builds matchings from random probes under a hard per-call
//! probe budget.

mod augment;
mod forward;
pub(crate) mod hk;
mod sampled;

use serde::{Deserialize, Serialize};

use crate::instance::{CostOracle, Vertex};
use crate::oracle::{ExplicitMatching, MembershipOracle};
use crate::seed::{rng, Rng};

pub use augment::{AugmentOutcome, AugmentRequest};
pub use forward::ForwardRequest;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Sampled { epsilon: f64 },
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Sampled { .. } => "sampled",
        }
    }
}

/// Per-call probe budget.
///
/// `Exact` may read the whole matrix. `Sampled` gets `⌈n^(2-ε)⌉`, capped at `n²`.
pub fn backend_query_budget(n: usize, backend: Backend) -> u64 {
    if n == 0 {
        return 0;
    }
    let full = (n as u64) * (n as u64);
    match backend {
        Backend::Exact => full,
        Backend::Sampled { epsilon } => {
            let nf = n as f64;
            let b = nf.powf(2.0 - epsilon).ceil() as u64;
            b.clamp(1, full)
        }
    }
}

/// Edge predicate over `V0 × V1`, addressed by side indices.
pub trait EdgeView: Sync {
    fn n(&self) -> usize;

    fn has_edge(&self, u: usize, v: usize) -> bool;
}

/// `G_{≤w}`: edges of cost at most `w`.
pub struct ThresholdView<'a> {
    pub costs: &'a dyn CostOracle<Cost = f64>,
    pub w: f64,
}

impl EdgeView for ThresholdView<'_> {
    fn n(&self) -> usize {
        self.costs.n()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        matches!(self.costs.cost(u, v), Some(c) if c <= self.w)
    }
}

pub struct FnView<F> {
    pub n: usize,
    pub f: F,
}

impl<F: Fn(usize, usize) -> bool + Sync> EdgeView for FnView<F> {
    fn n(&self) -> usize {
        self.n
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.f)(u, v)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MatcherStats {
    pub calls: u64,
    pub probes: u64,
    pub max_call_probes: u64,
    /// Largest `probes / budget` seen in one call.
    pub max_budget_ratio: f64,
    pub budget_violations: u64,
}

/// Stateful front end to the backends; owns the RNG and the probe tally.
pub struct Matcher {
    backend: Backend,
    rng: Rng,
    stats: MatcherStats,
}

/// Probe counter for a single backend call.
pub(crate) struct CallProbes {
    pub used: u64,
    pub budget: u64,
}

impl CallProbes {
    pub(crate) fn exhausted(&self) -> bool {
        self.used >= self.budget
    }

    pub(crate) fn probe(&mut self, view: &dyn EdgeView, u: usize, v: usize) -> Option<bool> {
        if self.used >= self.budget {
            return None;
        }
        self.used += 1;
        Some(view.has_edge(u, v))
    }
}

impl Matcher {
    pub fn new(backend: Backend, seed: u64) -> Self {
        Matcher { backend, rng: rng(seed), stats: MatcherStats::default() }
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn stats(&self) -> &MatcherStats {
        &self.stats
    }

    pub(crate) fn begin(&mut self, n: usize) -> CallProbes {
        CallProbes { used: 0, budget: backend_query_budget(n, self.backend) }
    }

    pub(crate) fn finish(&mut self, call: CallProbes) {
        self.stats.calls += 1;
        self.stats.probes += call.used;
        self.stats.max_call_probes = self.stats.max_call_probes.max(call.used);
        if call.budget > 0 {
            let ratio = call.used as f64 / call.budget as f64;
            self.stats.max_budget_ratio = self.stats.max_budget_ratio.max(ratio);
        }
        if call.used > call.budget {
            self.stats.budget_violations += 1;
        }
    }

    fn matching_on(
        &mut self,
        view: &dyn EdgeView,
        left: &[usize],
        right: &[usize],
        call: &mut CallProbes,
    ) -> ExplicitMatching {
        let n = view.n();
        match self.backend {
            Backend::Exact => {
                let mut adj: Vec<Vec<u32>> = vec![Vec::new(); left.len()];
                for (a, &u) in left.iter().enumerate() {
                    for (b, &v) in right.iter().enumerate() {
                        if call.probe(view, u, v) == Some(true) {
                            adj[a].push(b as u32);
                        }
                    }
                }
                let mates = hk::hopcroft_karp(left.len(), right.len(), &adj, None);
                let mut m = ExplicitMatching::empty(n);
                for (a, &b) in mates.iter().enumerate() {
                    if b != u32::MAX {
                        m.link(left[a], right[b as usize]);
                    }
                }
                m
            }
            Backend::Sampled { .. } => {
                sampled::sampled_matching(view, left, right, call, &mut self.rng)
            }
        }
    }

    /// Matching of `view` with its size as the estimate of `μ(view)`.
    pub fn approx_match(&mut self, view: &dyn EdgeView, _epsilon: f64) -> (usize, ExplicitMatching) {
        let n = view.n();
        let all: Vec<usize> = (0..n).collect();
        let mut call = self.begin(n);
        let m = self.matching_on(view, &all, &all, &mut call);
        self.finish(call);
        (m.len(), m)
    }

    /// A matching of `view[left ∪ right]` of size at least `δ_out·n`, or `None`.
    ///
    /// `Exact` answers `None` only when `μ < δ_in·n`.
    pub fn large_match(
        &mut self,
        view: &dyn EdgeView,
        left: &[usize],
        right: &[usize],
        delta_in: f64,
        _epsilon: f64,
    ) -> Option<ExplicitMatching> {
        let n = view.n();
        let mut call = self.begin(n);
        call.budget = call.budget.min((left.len() * right.len()) as u64);
        let m = self.matching_on(view, left, right, &mut call);
        self.finish(call);
        let need = match self.backend {
            Backend::Exact => delta_in * n as f64,
            Backend::Sampled { .. } => large_match_delta_out(delta_in) * n as f64,
        };
        (!m.is_empty() && m.len() as f64 >= need).then_some(m)
    }

    /// [`Matcher::large_match`] with the vertex set given by a membership oracle.
    pub fn large_match_in(
        &mut self,
        view: &dyn EdgeView,
        a: &dyn MembershipOracle,
        delta_in: f64,
        epsilon: f64,
    ) -> Option<ExplicitMatching> {
        let n = view.n();
        let left: Vec<usize> = (0..n).filter(|&u| a.contains(Vertex::left(u))).collect();
        let right: Vec<usize> = (0..n).filter(|&v| a.contains(Vertex::right(v))).collect();
        self.large_match(view, &left, &right, delta_in, epsilon)
    }
}

/// Guarantee of a large-matching call: `δ_in⁵ / 2000`.
pub fn large_match_delta_out(delta_in: f64) -> f64 {
    delta_in.powi(5) / 2000.0
}

/// Guarantee of the forward variant over `R` potential values: `δ_in⁵ / (2000 R¹⁰)`.
pub fn forward_delta_out(delta_in: f64, range: usize) -> f64 {
    large_match_delta_out(delta_in / (range as f64).powi(2))
}
