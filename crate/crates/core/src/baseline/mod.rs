//! Exact reference solvers.
//!
//! These read the full cost matrix and share no code with the query-bounded
//! machinery. Costs are scaled to integers at `10⁻⁹` resolution.

mod cover;
mod mcmf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::DenseCosts;
use mcmf::MinCostFlow;

pub use cover::{max_matching_size, min_vertex_cover};

pub const MAX_N: usize = 2000;
pub const SCALE: f64 = 1e9;

pub fn to_scaled(c: f64) -> i64 {
    (c * SCALE).round() as i64
}

/// Node potentials proving optimality: every residual arc of the
/// `s → V0 → V1 → t` network has non-negative reduced cost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub source: i64,
    pub left: Vec<i64>,
    pub right: Vec<i64>,
    pub sink: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub value: f64,
    pub scaled_value: i128,
    pub witness: Vec<(usize, usize)>,
    pub certificate: Certificate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// Matching size for a fraction of `n` vertices.
pub fn size_for_fraction(fraction: f64, n: usize, rounding: Rounding) -> usize {
    let x = fraction * n as f64;
    let k = match rounding {
        Rounding::Down => (x + 1e-9).floor(),
        Rounding::Up => (x - 1e-9).ceil(),
    };
    (k.max(0.0) as usize).min(n)
}

/// Minimum-weight matching with exactly `k` edges. Infinite entries are non-edges.
pub fn min_weight_k_matching(costs: &DenseCosts, k: usize) -> Result<ExactResult> {
    min_weight_k_matching_matrix(costs.n(), costs.data(), k)
}

pub fn min_weight_k_matching_matrix(n: usize, costs: &[f64], k: usize) -> Result<ExactResult> {
    if n > MAX_N {
        return Err(Error::TooLarge { n, cap: MAX_N });
    }
    if costs.len() != n * n {
        return Err(Error::InvalidParameter("cost matrix is not n × n".into()));
    }
    if k > n {
        return Err(Error::Infeasible(format!("k = {k} exceeds n = {n}")));
    }
    let s = 2 * n;
    let t = 2 * n + 1;
    let mut g = MinCostFlow::new(2 * n + 2);
    for u in 0..n {
        g.add_edge(s, u, 1, 0);
        g.add_edge(n + u, t, 1, 0);
    }
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let c = costs[u * n + v];
            if c.is_finite() {
                if c < 0.0 {
                    return Err(Error::MalformedCost { u, v, value: c });
                }
                arcs.push((g.add_edge(u, n + v, 1, to_scaled(c)), u, v));
            }
        }
    }
    let (flow, total) = g.run(s, t, k as i64);
    if flow < k as i64 {
        return Err(Error::Infeasible(format!("no matching with {k} edges (max {flow})")));
    }
    let witness: Vec<(usize, usize)> =
        arcs.iter().filter(|&&(id, _, _)| g.flow_on(id) > 0).map(|&(_, u, v)| (u, v)).collect();
    debug_assert!(g.potentials_feasible());
    let certificate = Certificate {
        source: g.pot[s],
        left: g.pot[..n].to_vec(),
        right: g.pot[n..2 * n].to_vec(),
        sink: g.pot[t],
    };
    let value = witness.iter().map(|&(u, v)| costs[u * n + v]).sum();
    Ok(ExactResult { value, scaled_value: total, witness, certificate })
}

/// Checks the witness and the certificate against the matrix.
///
/// Returns the dual objective, which equals the scaled primal value.
pub fn verify_k_matching(n: usize, costs: &[f64], result: &ExactResult) -> Result<i128> {
    let fail = |msg: String| Err(Error::Infeasible(msg));
    let mut mate_l = vec![usize::MAX; n];
    let mut mate_r = vec![usize::MAX; n];
    let mut primal: i128 = 0;
    for &(u, v) in &result.witness {
        if mate_l[u] != usize::MAX || mate_r[v] != usize::MAX {
            return fail(format!("witness reuses a vertex at ({u}, {v})"));
        }
        let c = costs[u * n + v];
        if !c.is_finite() {
            return fail(format!("witness uses non-edge ({u}, {v})"));
        }
        mate_l[u] = v;
        mate_r[v] = u;
        primal += to_scaled(c) as i128;
    }
    let cert = &result.certificate;
    let (ps, pt) = (cert.source, cert.sink);
    for u in 0..n {
        let pu = cert.left[u];
        let ok = if mate_l[u] == usize::MAX { ps - pu >= 0 } else { pu - ps >= 0 };
        if !ok {
            return fail(format!("source arc at left {u} has negative reduced cost"));
        }
        let pv = cert.right[u];
        let ok = if mate_r[u] == usize::MAX { pv - pt >= 0 } else { pt - pv >= 0 };
        if !ok {
            return fail(format!("sink arc at right {u} has negative reduced cost"));
        }
    }
    let mut slack: i128 = 0;
    for u in 0..n {
        for v in 0..n {
            let c = costs[u * n + v];
            if !c.is_finite() {
                continue;
            }
            let reduced = to_scaled(c) + cert.left[u] - cert.right[v];
            if mate_l[u] == v {
                if reduced != 0 {
                    return fail(format!("matched edge ({u}, {v}) is not tight"));
                }
            } else if reduced < 0 {
                return fail(format!("edge ({u}, {v}) has negative reduced cost"));
            }
        }
    }
    let k = result.witness.len() as i128;
    slack += k * (pt - ps) as i128;
    for u in 0..n {
        if mate_l[u] != usize::MAX {
            slack -= (cert.left[u] - ps) as i128;
        }
        if mate_r[u] != usize::MAX {
            slack -= (pt - cert.right[u]) as i128;
        }
    }
    if slack != primal || primal != result.scaled_value {
        return fail(format!("dual {slack} differs from primal {primal}"));
    }
    Ok(slack)
}

/// `c(M^fraction)`: cheapest matching on `fraction · n` vertices.
pub fn min_weight_fraction(costs: &DenseCosts, fraction: f64, rounding: Rounding) -> Result<ExactResult> {
    min_weight_k_matching(costs, size_for_fraction(fraction, costs.n(), rounding))
}

/// `c(M^k)` for every `k` from 0 to the maximum matching size, from one
/// successive-shortest-path run (each augmentation adds one edge).
pub fn k_sweep(costs: &DenseCosts) -> Result<Vec<f64>> {
    let n = costs.n();
    if n > MAX_N {
        return Err(Error::TooLarge { n, cap: MAX_N });
    }
    let (s, t) = (2 * n, 2 * n + 1);
    let mut g = MinCostFlow::new(2 * n + 2);
    for u in 0..n {
        g.add_edge(s, u, 1, 0);
        g.add_edge(n + u, t, 1, 0);
        for v in 0..n {
            let c = costs.get(u, v);
            if c.is_finite() {
                g.add_edge(u, n + v, 1, to_scaled(c));
            }
        }
    }
    let mut out = vec![0.0];
    g.run_steps(s, t, n as i64, |_, total| out.push(total as f64 / SCALE));
    Ok(out)
}

/// Largest `k` with `c(M^k) ≤ budget`, given a [`k_sweep`].
pub fn largest_within_budget(sweep: &[f64], budget: f64) -> usize {
    sweep.iter().rposition(|&c| c <= budget + 1e-9).unwrap_or(0)
}

/// Exact optimal transport cost between two discrete distributions.
///
/// `metric` is row-major `mu.len() × nu.len()`.
pub fn exact_emd(mu: &[f64], nu: &[f64], metric: &[f64]) -> Result<f64> {
    let (a, b) = (mu.len(), nu.len());
    if metric.len() != a * b {
        return Err(Error::InvalidParameter("metric table has the wrong shape".into()));
    }
    for masses in [mu, nu] {
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > 1e-12 || masses.iter().any(|&m| !(m >= 0.0)) {
            return Err(Error::MassMismatch(sum));
        }
    }
    let units = |masses: &[f64]| -> Vec<i64> {
        let mut q: Vec<i64> = masses.iter().map(|&m| (m * SCALE).round() as i64).collect();
        let drift = SCALE as i64 - q.iter().sum::<i64>();
        if let Some(big) = (0..q.len()).max_by_key(|&i| q[i]) {
            q[big] += drift;
        }
        q
    };
    let (qa, qb) = (units(mu), units(nu));
    let s = a + b;
    let t = a + b + 1;
    let mut g = MinCostFlow::new(a + b + 2);
    for (i, &m) in qa.iter().enumerate() {
        g.add_edge(s, i, m, 0);
    }
    for (j, &m) in qb.iter().enumerate() {
        g.add_edge(a + j, t, m, 0);
    }
    for i in 0..a {
        for j in 0..b {
            let c = metric[i * b + j];
            if !c.is_finite() || c < 0.0 {
                return Err(Error::MalformedCost { u: i, v: j, value: c });
            }
            g.add_edge(i, a + j, SCALE as i64, to_scaled(c));
        }
    }
    let (flow, total) = g.run(s, t, SCALE as i64);
    if flow != SCALE as i64 {
        return Err(Error::Infeasible("transport did not route all mass".into()));
    }
    Ok(total as f64 / (SCALE * SCALE))
}

/// Exact min-weight perfect matching of a dense instance read in full.
pub fn exact_perfect(costs: &DenseCosts) -> Result<ExactResult> {
    min_weight_k_matching(costs, costs.n())
}
