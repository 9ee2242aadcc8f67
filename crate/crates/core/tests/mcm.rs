use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;
use submatch::baseline::max_matching_size;
use submatch::eligibility::eligible_values;
use submatch::mcm::{backend_query_budget, AugmentRequest, FnView, ForwardRequest, Matcher};
use submatch::oracle::{check_matching_symmetry, ExplicitMatching, FullSet, MatchingOracle, PotentialOracle, PredicateSet};
use submatch::{Backend, CostOracle, Vertex};

struct Table {
    left: Vec<i64>,
    right: Vec<i64>,
}

impl PotentialOracle for Table {
    fn eval(&self, v: Vertex) -> i64 {
        if v.is_left() {
            self.left[v.index()]
        } else {
            self.right[v.index()]
        }
    }

    fn range_bound(&self) -> usize {
        let all = self.left.iter().chain(&self.right);
        (all.clone().max().unwrap() - all.min().unwrap() + 1) as usize
    }
}

struct Matrix(usize, Vec<i64>);

impl CostOracle for Matrix {
    type Cost = i64;

    fn n(&self) -> usize {
        self.0
    }

    fn cost(&self, u: usize, v: usize) -> Option<i64> {
        Some(self.1[u * self.0 + v])
    }
}

fn exact() -> Matcher {
    Matcher::new(Backend::Exact, 0)
}

#[test]
fn approx_match_examples() {
    let mut m = exact();
    let empty = FnView { n: 6, f: |_: usize, _: usize| false };
    assert_eq!(m.approx_match(&empty, 0.1).0, 0);
    let diagonal = FnView { n: 8, f: |u: usize, v: usize| u == v };
    assert_eq!(m.approx_match(&diagonal, 0.1).0, 8);
    let complete = FnView { n: 5, f: |_: usize, _: usize| true };
    let (size, matching) = m.approx_match(&complete, 0.2);
    assert_eq!(size, 5);
    check_matching_symmetry(&matching).unwrap();
}

#[test]
fn large_match_examples() {
    let mut m = exact();
    let diagonal = FnView { n: 20, f: |u: usize, v: usize| u == v };
    let all: Vec<usize> = (0..20).collect();
    assert!(m.large_match(&diagonal, &[], &[], 0.1, 0.1).is_none());
    let empty = FnView { n: 20, f: |_: usize, _: usize| false };
    assert!(m.large_match(&empty, &all, &all, 0.1, 0.1).is_none());
    let got = m.large_match(&diagonal, &all, &all, 0.5, 0.1).unwrap();
    assert_eq!(got.len(), 20);
    let half = PredicateSet::new(|v: Vertex| v.index() < 10);
    assert_eq!(m.large_match_in(&diagonal, &half, 0.5, 0.1).unwrap().len(), 10);
    let quarter = PredicateSet::new(|v: Vertex| v.index() < 5);
    assert!(m.large_match_in(&diagonal, &quarter, 0.5, 0.1).is_none());
}

#[test]
fn forward_matching_examples() {
    let n = 10;
    let costs = Matrix(n, vec![1; n * n]);
    let phi = Table { left: vec![2; n], right: vec![0; n] };
    let none = ExplicitMatching::empty(n);
    let mut m = exact();
    let req = ForwardRequest {
        costs: &costs,
        phi: &phi,
        matching: &none,
        domain: &FullSet,
        delta_in: 0.3,
        epsilon: 0.1,
        cost_max: 1,
    };
    assert_eq!(m.large_matching_forward(&req).unwrap().matching.len(), 10);
    let left_only = PredicateSet::new(|v: Vertex| v.is_left());
    let req = ForwardRequest { domain: &left_only, ..req };
    assert!(m.large_matching_forward(&req).is_none());
    let flat = Table { left: vec![0; n], right: vec![0; n] };
    let req = ForwardRequest { phi: &flat, domain: &FullSet, ..req };
    assert!(m.large_matching_forward(&req).is_none());
}

#[test]
fn augment_examples() {
    let n = 10;
    let costs = Matrix(n, vec![1; n * n]);
    let phi = Table { left: vec![2; n], right: vec![0; n] };
    let mut m = exact();
    let perfect: Arc<dyn MatchingOracle> =
        Arc::new(ExplicitMatching::from_pairs(n, &(0..n).map(|i| (i, i)).collect::<Vec<_>>()).unwrap());
    let req = AugmentRequest { costs: &costs, phi: &phi, matching: &perfect, max_len: 1, xi: 0.3 };
    assert!(m.augment_eligible(&req).is_none());
    let none: Arc<dyn MatchingOracle> = Arc::new(ExplicitMatching::empty(n));
    let req = AugmentRequest { matching: &none, ..req };
    let out = m.augment_eligible(&req).unwrap();
    assert!(out.paths >= 3);
    assert_eq!(out.paths, 10);
}

/// One eligible path `u0 → v1 → u1 → v2` with `(u1, v1)` matched.
fn single_path() -> (Matrix, Table, Arc<dyn MatchingOracle>) {
    let n = 10;
    let mut c = vec![5; n * n];
    for (u, v) in [(0, 1), (1, 1), (1, 2)] {
        c[u * n + v] = 1;
    }
    let mut left = vec![0; n];
    let mut right = vec![0; n];
    left[0] = 2;
    left[1] = 1;
    right[2] = 1;
    let m: Arc<dyn MatchingOracle> = Arc::new(ExplicitMatching::from_pairs(n, &[(1, 1)]).unwrap());
    (Matrix(n, c), Table { left, right }, m)
}

#[test]
fn single_path_is_augmented_when_slack_allows() {
    let (costs, phi, m_in) = single_path();
    let req = AugmentRequest { costs: &costs, phi: &phi, matching: &m_in, max_len: 3, xi: 0.05 };
    let out = exact().augment_eligible(&req).unwrap();
    assert_eq!(out.paths, 1);
    assert_eq!(out.by_length, vec![0, 1]);
    assert_eq!(out.matching.mate(Vertex::left(0)), Some(Vertex::right(1)));
    assert_eq!(out.matching.mate(Vertex::left(1)), Some(Vertex::right(2)));
    let req = AugmentRequest { xi: 0.5, ..req };
    assert!(exact().augment_eligible(&req).is_none());
    let req = AugmentRequest { xi: 0.05, max_len: 1, ..req };
    assert!(exact().augment_eligible(&req).is_none());
}

#[test]
fn budgets() {
    assert_eq!(backend_query_budget(100, Backend::Exact), 10_000);
    assert_eq!(backend_query_budget(0, Backend::Exact), 0);
    assert_eq!(backend_query_budget(0, Backend::Sampled { epsilon: 0.5 }), 0);
    assert_eq!(backend_query_budget(10_000, Backend::Sampled { epsilon: 0.5 }), 1_000_000);
    assert_eq!(backend_query_budget(10, Backend::Sampled { epsilon: 0.0 }), 100);
}

fn random_instance() -> impl Strategy<Value = (usize, Vec<i64>, Vec<i64>, Vec<i64>, Vec<(usize, usize)>)> {
    (2usize..8).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(1i64..4, n * n),
            proptest::collection::vec(0i64..5, n),
            proptest::collection::vec(-2i64..3, n),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_flat_map(move |perm| {
                proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=n)
                    .prop_map(move |us| us.into_iter().map(|u| (u, perm[u])).collect::<Vec<_>>())
            }),
        )
    })
}

/// `M_out ⊕ M_in` splits into vertex-disjoint odd paths of length at most `k`,
/// each between `M_in`-free vertices, along eligible edges of `(φ, M_in)`.
fn check_augmentation(
    n: usize,
    costs: &Matrix,
    phi: &Table,
    m_in: &ExplicitMatching,
    m_out: &dyn MatchingOracle,
    k: usize,
    paths: usize,
) -> Result<(), TestCaseError> {
    let before: HashSet<(usize, usize)> = m_in.pairs().into_iter().collect();
    let after: HashSet<(usize, usize)> =
        (0..n).filter_map(|u| m_out.mate(Vertex::left(u)).map(|v| (u, v.index()))).collect();
    prop_assert_eq!(after.len(), before.len() + paths);
    let diff: Vec<(usize, usize)> = before.symmetric_difference(&after).copied().collect();
    for &(u, v) in &diff {
        let matched = before.contains(&(u, v));
        let sum = phi.left[u] + phi.right[v];
        prop_assert!(eligible_values(costs.cost(u, v), sum, matched).is_some(), "({}, {}) not eligible", u, v);
    }
    let mut deg = vec![0usize; 2 * n];
    for &(u, v) in &diff {
        deg[u] += 1;
        deg[n + v] += 1;
    }
    prop_assert!(deg.iter().all(|&d| d <= 2));
    let mut seen = vec![false; diff.len()];
    let mut components = 0;
    for start in 0..diff.len() {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        let mut edges = 0;
        let mut verts = HashSet::new();
        while let Some(e) = stack.pop() {
            if seen[e] {
                continue;
            }
            seen[e] = true;
            edges += 1;
            let (u, v) = diff[e];
            verts.insert(u);
            verts.insert(n + v);
            for (f, &(a, b)) in diff.iter().enumerate() {
                if !seen[f] && (a == u || b == v) {
                    stack.push(f);
                }
            }
        }
        prop_assert!(edges % 2 == 1 && edges <= k, "component with {} edges", edges);
        for x in verts {
            if deg[x] == 1 {
                let free = if x < n { m_in.mate_of_left(x).is_none() } else { m_in.mate_of_right(x - n).is_none() };
                prop_assert!(free);
            }
        }
    }
    prop_assert_eq!(components, paths);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn augmentations_are_eligible_disjoint_paths(
        (n, c, l, r, pairs) in random_instance(),
        k in prop::sample::select(vec![1u64, 3, 5]),
        sampled in any::<bool>(),
    ) {
        let costs = Matrix(n, c);
        let phi = Table { left: l, right: r };
        let m_in = ExplicitMatching::from_pairs(n, &pairs).unwrap();
        let shared: Arc<dyn MatchingOracle> = Arc::new(m_in.clone());
        let backend = if sampled { Backend::Sampled { epsilon: 0.2 } } else { Backend::Exact };
        let mut matcher = Matcher::new(backend, n as u64);
        let req = AugmentRequest { costs: &costs, phi: &phi, matching: &shared, max_len: k, xi: 0.01 };
        if let Some(out) = matcher.augment_eligible(&req) {
            check_matching_symmetry(&*out.matching).unwrap();
            check_augmentation(n, &costs, &phi, &m_in, &*out.matching, k as usize, out.paths)?;
        }
        prop_assert_eq!(matcher.stats().budget_violations, 0);
    }

    #[test]
    fn exact_large_match_is_complete(n in 1usize..9, edges in proptest::collection::vec((0usize..9, 0usize..9), 0..30), delta in 0.05f64..0.9) {
        let edges: Vec<_> = edges.into_iter().filter(|&(u, v)| u < n && v < n).collect();
        let set: HashSet<_> = edges.iter().copied().collect();
        let view = FnView { n, f: |u: usize, v: usize| set.contains(&(u, v)) };
        let all: Vec<usize> = (0..n).collect();
        let mu = max_matching_size(n, &edges);
        let got = exact().large_match(&view, &all, &all, delta, 0.1);
        prop_assert_eq!(got.is_none(), (mu as f64) < delta * n as f64 || mu == 0);
        if let Some(m) = got {
            check_matching_symmetry(&m).unwrap();
            prop_assert!(m.pairs().iter().all(|e| set.contains(e)));
        }
    }

    #[test]
    fn sampled_matchings_are_valid_and_in_budget(n in 2usize..60, density in 0.0f64..1.0, salt in any::<u64>()) {
        let view = FnView { n, f: move |u: usize, v: usize| submatch::seed::unit_hash(salt, u as u64, v as u64) < density };
        let mut m = Matcher::new(Backend::Sampled { epsilon: 0.3 }, salt);
        let (size, matching) = m.approx_match(&view, 0.1);
        check_matching_symmetry(&matching).unwrap();
        prop_assert_eq!(size, matching.len());
        prop_assert!(matching.pairs().iter().all(|&(u, v)| (view.f)(u, v)));
        let budget = backend_query_budget(n, Backend::Sampled { epsilon: 0.3 });
        prop_assert!(m.stats().max_call_probes <= budget);
        prop_assert_eq!(m.stats().budget_violations, 0);
    }
}
