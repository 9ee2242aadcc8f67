//! Short augmenting paths in the eligibility graph.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{Backend, CallProbes, Matcher};
use crate::eligibility::{eligible_values, Orientation};
use crate::instance::{CostOracle, Vertex};
use crate::oracle::{MatchingOracle, OverlayMatching, PotentialOracle};

pub struct AugmentRequest<'a> {
    pub costs: &'a dyn CostOracle<Cost = i64>,
    pub phi: &'a dyn PotentialOracle,
    pub matching: &'a Arc<dyn MatchingOracle>,
    /// Longest path length `k`, in edges.
    pub max_len: u64,
    pub xi: f64,
}

pub struct AugmentOutcome {
    pub matching: Arc<dyn MatchingOracle>,
    pub paths: usize,
    /// `by_length[i]` counts paths with `2i + 1` edges.
    pub by_length: Vec<usize>,
}

struct Search<'a, 'r> {
    req: &'r AugmentRequest<'a>,
    n: usize,
    call: &'r mut CallProbes,
    phi_l: Vec<Option<i64>>,
    phi_r: Vec<Option<i64>>,
    mate_l: Vec<Option<Option<usize>>>,
    mate_r: Vec<Option<Option<usize>>>,
    adj: Vec<Option<Vec<u32>>>,
    back: Vec<i8>,
    used_l: Vec<bool>,
    used_r: Vec<bool>,
    stack_l: Vec<bool>,
    stack_r: Vec<bool>,
    dead: HashSet<(u32, u64)>,
    cut: bool,
}

impl<'a, 'r> Search<'a, 'r> {
    fn new(req: &'r AugmentRequest<'a>, call: &'r mut CallProbes) -> Self {
        let n = req.costs.n();
        Search {
            req,
            n,
            call,
            phi_l: vec![None; n],
            phi_r: vec![None; n],
            mate_l: vec![None; n],
            mate_r: vec![None; n],
            adj: vec![None; n],
            back: vec![-1; n],
            used_l: vec![false; n],
            used_r: vec![false; n],
            stack_l: vec![false; n],
            stack_r: vec![false; n],
            dead: HashSet::new(),
            cut: false,
        }
    }

    fn phi_l(&mut self, u: usize) -> i64 {
        *self.phi_l[u].get_or_insert_with(|| self.req.phi.eval(Vertex::left(u)))
    }

    fn phi_r(&mut self, v: usize) -> i64 {
        *self.phi_r[v].get_or_insert_with(|| self.req.phi.eval(Vertex::right(v)))
    }

    fn mate_l(&mut self, u: usize) -> Option<usize> {
        *self.mate_l[u].get_or_insert_with(|| self.req.matching.mate(Vertex::left(u)).map(Vertex::index))
    }

    fn mate_r(&mut self, v: usize) -> Option<usize> {
        *self.mate_r[v].get_or_insert_with(|| self.req.matching.mate(Vertex::right(v)).map(Vertex::index))
    }

    /// Probes `(u, v)` as a non-matched edge.
    fn forward(&mut self, u: usize, v: usize) -> Option<bool> {
        if self.call.exhausted() {
            return None;
        }
        self.call.used += 1;
        let c = self.req.costs.cost(u, v);
        let s = self.phi_l(u) + self.phi_r(v);
        Some(eligible_values(c, s, false) == Some(Orientation::Forward))
    }

    /// Whether the matched edge at `v` is eligible.
    fn backward(&mut self, v: usize) -> Option<bool> {
        match self.back[v] {
            0 => return Some(false),
            1 => return Some(true),
            _ => {}
        }
        let w = self.mate_r(v)?;
        if self.call.exhausted() {
            return None;
        }
        self.call.used += 1;
        let c = self.req.costs.cost(w, v);
        let s = self.phi_l(w) + self.phi_r(v);
        let ok = eligible_values(c, s, true) == Some(Orientation::Backward);
        self.back[v] = ok as i8;
        Some(ok)
    }

    fn ensure_adjacency(&mut self, u: usize) -> usize {
        if let Some(a) = &self.adj[u] {
            return a.len();
        }
        let own = self.mate_l(u);
        let mut list = Vec::new();
        for v in 0..self.n {
            if own == Some(v) {
                continue;
            }
            if self.forward(u, v) == Some(true) {
                list.push(v as u32);
            }
        }
        let len = list.len();
        self.adj[u] = Some(list);
        len
    }

    /// Lowest-id-first search for a path with exactly `rem` edges from `u`.
    fn dfs(&mut self, u: usize, rem: u64, path: &mut Vec<(usize, usize)>) -> bool {
        if self.dead.contains(&(u as u32, rem)) {
            return false;
        }
        self.stack_l[u] = true;
        let degree = self.ensure_adjacency(u);
        for i in 0..degree {
            let v = self.adj[u].as_ref().map_or(0, |a| a[i] as usize);
            if self.used_r[v] || self.stack_r[v] {
                continue;
            }
            match self.mate_r(v) {
                None => {
                    if rem == 1 {
                        path.push((u, v));
                        self.stack_l[u] = false;
                        return true;
                    }
                }
                Some(w) => {
                    if self.used_l[w] || self.stack_l[w] {
                        continue;
                    }
                    if self.backward(v) != Some(true) {
                        continue;
                    }
                    if rem < 3 {
                        self.cut = true;
                        continue;
                    }
                    self.stack_r[v] = true;
                    let found = self.dfs(w, rem - 2, path);
                    self.stack_r[v] = false;
                    if found {
                        path.push((u, v));
                        self.stack_l[u] = false;
                        return true;
                    }
                }
            }
        }
        self.stack_l[u] = false;
        self.dead.insert((u as u32, rem));
        false
    }

    fn claim(&mut self, path: &[(usize, usize)]) {
        for &(u, v) in path {
            self.used_l[u] = true;
            self.used_r[v] = true;
        }
    }
}

fn succeeded(by_length: &[usize], xi: f64, n: usize, k: u64) -> bool {
    let need = xi * n as f64 / k as f64;
    by_length.iter().any(|&c| c >= 1 && c as f64 >= need)
}

impl Matcher {
    /// Node-disjoint short augmenting paths in the eligibility graph of `(φ, M)`.
    ///
    /// Returns `M ⊕ P` when some single length contributes at least `ξn/k`
    /// paths, `None` otherwise.
    pub fn augment_eligible(&mut self, req: &AugmentRequest<'_>) -> Option<AugmentOutcome> {
        let n = req.costs.n();
        if n == 0 || req.max_len == 0 {
            return None;
        }
        let mut call = self.begin(n);
        let (pairs, by_length) = match self.backend {
            Backend::Exact => exact_paths(req, &mut call),
            Backend::Sampled { .. } => {
                let rng = &mut self.rng;
                sampled_paths(req, &mut call, rng)
            }
        };
        self.finish(call);
        if !succeeded(&by_length, req.xi, n, req.max_len) {
            return None;
        }
        let paths: usize = by_length.iter().sum();
        let matching: Arc<dyn MatchingOracle> =
            Arc::new(OverlayMatching::augment(req.matching.clone(), &pairs, paths));
        Some(AugmentOutcome { matching, paths, by_length })
    }
}

fn exact_paths(req: &AugmentRequest<'_>, call: &mut CallProbes) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut s = Search::new(req, call);
    let n = s.n;
    let free: Vec<usize> = (0..n).filter(|&u| s.mate_l(u).is_none()).collect();
    let longest = req.max_len.min(2 * n as u64 - 1);
    let mut pairs = Vec::new();
    let mut by_length = Vec::new();
    let mut len = 1u64;
    while len <= longest {
        s.dead.clear();
        s.cut = false;
        let mut count = 0;
        for &u in &free {
            if s.used_l[u] {
                continue;
            }
            let mut path = Vec::new();
            if s.dfs(u, len, &mut path) {
                s.claim(&path);
                pairs.extend_from_slice(&path);
                count += 1;
            }
        }
        by_length.push(count);
        if !s.cut {
            break;
        }
        len += 2;
    }
    (pairs, by_length)
}

fn sampled_paths(
    req: &AugmentRequest<'_>,
    call: &mut CallProbes,
    rng: &mut crate::seed::Rng,
) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut s = Search::new(req, call);
    let n = s.n;
    let mut free: Vec<usize> = (0..n).filter(|&u| s.mate_l(u).is_none()).collect();
    free.shuffle(rng);
    let mut pairs = Vec::new();
    let mut by_length = vec![0usize; if req.max_len >= 3 { 2 } else { 1 }];
    if free.is_empty() {
        return (pairs, by_length);
    }
    let per_vertex = (s.call.budget / (2 * free.len() as u64)).max(1);
    'outer: for &u in &free {
        for _ in 0..per_vertex {
            let v = rng.gen_range(0..n);
            if s.used_r[v] {
                continue;
            }
            match s.forward(u, v) {
                None => break 'outer,
                Some(false) => continue,
                Some(true) => {}
            }
            match s.mate_r(v) {
                None => {
                    s.claim(&[(u, v)]);
                    pairs.push((u, v));
                    by_length[0] += 1;
                    break;
                }
                Some(w) => {
                    if req.max_len < 3 || s.used_l[w] {
                        continue;
                    }
                    match s.backward(v) {
                        None => break 'outer,
                        Some(false) => continue,
                        Some(true) => {}
                    }
                    let mut done = false;
                    for _ in 0..per_vertex.min(64) {
                        let v2 = rng.gen_range(0..n);
                        if v2 == v || s.used_r[v2] || s.mate_r(v2).is_some() {
                            continue;
                        }
                        match s.forward(w, v2) {
                            None => break 'outer,
                            Some(true) => {
                                s.claim(&[(u, v), (w, v2)]);
                                pairs.push((u, v));
                                pairs.push((w, v2));
                                by_length[1] += 1;
                                done = true;
                                break;
                            }
                            Some(false) => {}
                        }
                    }
                    if done {
                        break;
                    }
                }
            }
        }
    }
    (pairs, by_length)
}
