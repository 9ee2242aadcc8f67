use std::sync::Arc;

use proptest::prelude::*;
use submatch::baseline::exact_perfect;
use submatch::eligibility::{Eligibility, Orientation};
use submatch::generators::Generator;
use submatch::instance::FnCosts;
use submatch::io::{read_binary, read_text, write_binary, write_text};
use submatch::oracle::{check_matching_symmetry, ExplicitMatching, PotentialOracle};
use submatch::{BipartiteInstance, CostOracle, DenseCosts, Vertex};

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

struct Flat(usize, i64);

impl CostOracle for Flat {
    type Cost = i64;

    fn n(&self) -> usize {
        self.0
    }

    fn cost(&self, _u: usize, _v: usize) -> Option<i64> {
        Some(self.1)
    }
}

fn pot(l: i64, r: i64) -> Table {
    Table { left: vec![l], right: vec![r] }
}

#[test]
fn one_feasibility_examples() {
    let empty = ExplicitMatching::empty(1);
    let matched = ExplicitMatching::from_pairs(1, &[(0, 0)]).unwrap();
    assert!(Eligibility::new(&Flat(1, 1), &pot(0, 0), &empty).is_one_feasible(0, 0));
    assert!(!Eligibility::new(&Flat(1, 1), &pot(2, 1), &empty).is_one_feasible(0, 0));
    assert!(Eligibility::new(&Flat(1, 2), &pot(1, 1), &matched).is_one_feasible(0, 0));
}

#[test]
fn eligibility_examples() {
    let empty = ExplicitMatching::empty(1);
    let matched = ExplicitMatching::from_pairs(1, &[(0, 0)]).unwrap();
    let phi = pot(1, 0);
    let e = Eligibility::new(&Flat(1, 0), &phi, &empty);
    assert_eq!(e.orientation(0, 0), Some(Orientation::Forward));
    assert!(e.is_forward(0, 0));
    let e = Eligibility::new(&Flat(1, 1), &phi, &matched);
    assert_eq!(e.orientation(0, 0), Some(Orientation::Backward));
    assert!(!e.is_forward(0, 0));
    assert!(!Eligibility::new(&Flat(1, 5), &pot(0, 0), &empty).is_eligible(0, 0));
}

#[test]
fn query_counter() {
    let inst = Generator::Uniform.instance(10, 4).unwrap();
    assert_eq!(inst.query_count(), 0);
    inst.cost_at(0, 0);
    inst.cost_at(0, 0);
    assert_eq!(inst.query_count(), 2);
    inst.reset_query_count();
    exact_perfect(&inst.read_dense()).unwrap();
    assert_eq!(inst.query_count(), 100);
    inst.to_dense();
    assert_eq!(inst.query_count(), 100);
}

#[test]
fn counter_is_exact_under_concurrent_reads() {
    let inst = Arc::new(BipartiteInstance::new(Arc::new(FnCosts::new(50, |u, v| (u * v) as f64))));
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let inst = inst.clone();
            std::thread::spawn(move || {
                for u in 0..50 {
                    for v in 0..50 {
                        inst.cost_at(u, v);
                    }
                }
            })
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
    assert_eq!(inst.query_count(), 4 * 2500);
}

#[test]
fn vertex_encoding() {
    let l = Vertex::left(7);
    let r = Vertex::right(7);
    assert!(l.is_left() && !r.is_left());
    assert_eq!((l.index(), r.index()), (7, 7));
    assert_ne!(l, r);
    assert_eq!(Vertex::from_raw(r.raw()), r);
}

#[test]
fn explicit_matching_rejects_overlap() {
    assert!(ExplicitMatching::from_pairs(3, &[(0, 1), (2, 1)]).is_err());
    assert!(ExplicitMatching::from_pairs(3, &[(0, 3)]).is_err());
    let m = ExplicitMatching::from_pairs(3, &[(0, 2), (1, 0)]).unwrap();
    check_matching_symmetry(&m).unwrap();
    assert_eq!(m.len(), 2);
}

#[test]
fn text_format() {
    let c = read_text("2\n0.5 1\n0 0.25\n".as_bytes()).unwrap();
    assert_eq!(c.data(), &[0.5, 1.0, 0.0, 0.25]);
    assert!(read_text("2\n1 2\n".as_bytes()).is_err());
    assert!(read_text("1\n-1\n".as_bytes()).is_err());
    assert!(read_text("".as_bytes()).is_err());
}

#[test]
fn binary_layout() {
    let c = DenseCosts::new(1, vec![2.5]).unwrap();
    let mut buf = Vec::new();
    write_binary(&c, &mut buf).unwrap();
    let mut want = b"SUBM1".to_vec();
    want.extend(1u64.to_le_bytes());
    want.extend(2.5f64.to_le_bytes());
    assert_eq!(buf, want);
    assert!(read_binary(&b"SUBM2"[..]).is_err());
}

fn small_potentials() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>, Vec<usize>)> {
    (1usize..6).prop_flat_map(|n| {
        (
            proptest::collection::vec(-3i64..4, n),
            proptest::collection::vec(-3i64..4, n),
            proptest::collection::vec(1i64..5, n * n),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
    })
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

proptest! {
    #[test]
    fn io_round_trips(n in 0usize..6, seed in any::<u64>()) {
        let c = Generator::Uniform.instance(n, seed).unwrap().to_dense();
        let mut text = Vec::new();
        write_text(&c, &mut text).unwrap();
        prop_assert_eq!(read_text(&text[..]).unwrap(), c.clone());
        let mut bin = Vec::new();
        write_binary(&c, &mut bin).unwrap();
        prop_assert_eq!(read_binary(&bin[..]).unwrap(), c);
    }

    #[test]
    fn matched_eligible_edges_are_feasible((l, r, c, perm) in small_potentials(), half in any::<bool>()) {
        let n = l.len();
        let pairs: Vec<_> = perm.iter().enumerate().filter(|(u, _)| half || u % 2 == 0).map(|(u, &v)| (u, v)).collect();
        let m = ExplicitMatching::from_pairs(n, &pairs).unwrap();
        let costs = Matrix(n, c.clone());
        let phi = Table { left: l.clone(), right: r.clone() };
        let e = Eligibility::new(&costs, &phi, &m);
        for u in 0..n {
            for v in 0..n {
                let matched = pairs.contains(&(u, v));
                let sum = l[u] + r[v];
                let cost = c[u * n + v];
                prop_assert_eq!(e.is_eligible(u, v), if matched { sum == cost } else { sum == cost + 1 });
                if matched && e.is_eligible(u, v) {
                    prop_assert!(e.is_one_feasible(u, v));
                }
                prop_assert!(!(matched && e.is_forward(u, v)));
            }
        }
    }

    #[test]
    fn generators_are_deterministic(n in 1usize..8, seed in any::<u64>(), which in 0usize..4) {
        let g = [Generator::Uniform, Generator::Euclidean { d: 2 }, Generator::OneTwoMetric { p: 0.3 }, Generator::Permutation][which];
        let a = g.instance(n, seed).unwrap().to_dense();
        let b = g.instance(n, seed).unwrap().to_dense();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.data().iter().all(|&x| x.is_finite() && x >= 0.0));
    }
}

#[test]
fn euclidean_costs_are_point_distances() {
    let e = submatch::generators::EuclideanCosts::generate(3, 2, 11);
    let inst = Generator::Euclidean { d: 2 }.instance(3, 11).unwrap();
    for u in 0..3 {
        for v in 0..3 {
            let (a, b) = (&e.left[u], &e.right[v]);
            let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
            assert!((inst.cost_at(u, v) - d).abs() < 1e-12);
        }
    }
}

#[test]
fn permutation_plants_a_free_perfect_matching() {
    let c = Generator::Permutation.instance(9, 2).unwrap().to_dense();
    assert_eq!(exact_perfect(&c).unwrap().value, 0.0);
}

#[test]
fn emd_file_formats() {
    use submatch::io::{parse_distribution, parse_draws, parse_metric};
    let masses = parse_distribution("# mu\n0 0.25\n2 0.5 # trailing\n\n0 0.25\n").unwrap();
    assert_eq!(masses, vec![0.5, 0.0, 0.5]);
    assert!(parse_distribution("").is_err());
    assert!(parse_distribution("0 x\n").is_err());
    assert!(parse_distribution("0 0.5 1\n").is_err());
    assert_eq!(parse_draws("1 2\n# skip\n 3\n").unwrap(), vec![1, 2, 3]);
    assert!(parse_draws("1 -2").is_err());
    assert_eq!(parse_metric("2 3\n0 0.5 1\n1 1 0\n").unwrap(), (2, 3, vec![0.0, 0.5, 1.0, 1.0, 1.0, 0.0]));
    assert_eq!(parse_metric("1\n0.3\n").unwrap(), (1, 1, vec![0.3]));
    assert!(parse_metric("2 2\n0 1\n").is_err());
    assert!(parse_metric("2 2\n0 1\n1\n").is_err());
}
