//! WebAssembly bindings for the browser demo.
//!
//! Each export takes plain numbers and strings and returns a JSON string.

use std::sync::Arc;

use serde::Serialize;
use submatch::baseline::{exact_emd, k_sweep, largest_within_budget, size_for_fraction, Rounding};
use submatch::emd::{estimate_emd, DiscreteDistribution, MetricTable};
use submatch::generators::Generator;
use submatch::io::{parse_distribution, parse_metric};
use submatch::pipeline::{estimate_knapsack, estimate_min_weight_matching, ReductionConfig, TemplateSettings};
use submatch::{Backend, Vertex};
use wasm_bindgen::prelude::*;

/// Largest instance for which the demo also runs the exact baseline and ships the matrix.
pub const EXACT_CAP: usize = 300;
const MATRIX_CAP: usize = 60;

type Outcome = Result<String, String>;

fn text<E: ToString>(e: E) -> String {
    e.to_string()
}

fn to_js(r: Outcome) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[derive(Serialize)]
struct Sandwich {
    lower: f64,
    upper: f64,
}

#[derive(Serialize)]
struct MatchingView {
    n: usize,
    estimate: f64,
    matched_fraction: f64,
    queries: u64,
    query_fraction: f64,
    w_bar: f64,
    levels: i64,
    iterations_run: u64,
    exact: Option<Sandwich>,
    /// Row-major costs, for small instances only.
    costs: Option<Vec<f64>>,
    pairs: Vec<(usize, usize)>,
}

#[allow(clippy::too_many_arguments)]
pub fn matching_json(
    generator: &str,
    n: usize,
    alpha: f64,
    beta: f64,
    gamma: f64,
    iterations: u32,
    k: u32,
    seed: u32,
) -> Outcome {
    let g: Generator = generator.parse().map_err(text)?;
    let instance = Arc::new(g.instance(n, seed as u64).map_err(text)?);
    let cfg = ReductionConfig::for_window(alpha, beta, gamma).map_err(text)?;
    let settings = TemplateSettings::practical(iterations as u64, k as u64);
    let out = estimate_min_weight_matching(&instance, &cfg, &settings, Backend::Exact, seed as u64).map_err(text)?;
    let r = &out.report;
    let exact = if n <= EXACT_CAP {
        let sweep = k_sweep(&instance.to_dense()).map_err(text)?;
        let at = |f: f64, rounding| sweep[size_for_fraction(f, n, rounding).min(sweep.len() - 1)];
        Some(Sandwich { lower: at(alpha, Rounding::Up), upper: at(beta, Rounding::Down) })
    } else {
        None
    };
    let pairs = (0..n)
        .filter_map(|u| out.matching.mate(Vertex::left(u)).map(|v| (u, v.index())))
        .collect();
    let view = MatchingView {
        n,
        estimate: r.estimate,
        matched_fraction: r.matched_fraction,
        queries: r.total_queries,
        query_fraction: r.total_queries as f64 / (n * n) as f64,
        w_bar: r.w_bar,
        levels: r.levels,
        iterations_run: r.iterations_run,
        exact,
        costs: (n <= MATRIX_CAP).then(|| instance.to_dense().data().to_vec()),
        pairs,
    };
    serde_json::to_string(&view).map_err(text)
}

#[derive(Serialize)]
struct EmdView {
    estimate: f64,
    exact: f64,
    samples: usize,
    queries: u64,
}

pub fn emd_json(mu: &str, nu: &str, metric: &str, gamma: f64, seed: u32) -> Outcome {
    let (rows, cols, data) = parse_metric(metric).map_err(text)?;
    let a = parse_distribution(mu).map_err(text)?;
    let b = parse_distribution(nu).map_err(text)?;
    if a.len() > rows || b.len() > cols {
        return Err(format!("the metric is {rows} × {cols} but the points need {} × {}", a.len(), b.len()));
    }
    let table = Arc::new(MetricTable::new(rows, cols, data).map_err(text)?);
    let support = a.len().max(b.len());
    let (mut pa, mut pb) = (a.clone(), b.clone());
    pa.resize(rows, 0.0);
    pb.resize(cols, 0.0);
    let exact = exact_emd(&pa, &pb, table.data()).map_err(text)?;
    let mu = DiscreteDistribution::new(a).map_err(text)?;
    let nu = DiscreteDistribution::new(b).map_err(text)?;
    let settings = TemplateSettings::practical(20, 5);
    let r = estimate_emd(&mu, &nu, table, support, gamma, &settings, Backend::Exact, seed as u64).map_err(text)?;
    let view = EmdView { estimate: r.estimate, exact, samples: r.samples, queries: r.matching.total_queries };
    serde_json::to_string(&view).map_err(text)
}

#[derive(Serialize)]
struct KnapsackView {
    budget: f64,
    size: f64,
    exact: Option<usize>,
    probes: usize,
    queries: u64,
}

/// `budget_fraction` is relative to the min-weight perfect matching when it is
/// known, and to `n / 2` otherwise.
pub fn knapsack_json(generator: &str, n: usize, budget_fraction: f64, gamma: f64, seed: u32) -> Outcome {
    let g: Generator = generator.parse().map_err(text)?;
    let instance = Arc::new(g.instance(n, seed as u64).map_err(text)?);
    let sweep = if n <= EXACT_CAP { Some(k_sweep(&instance.to_dense()).map_err(text)?) } else { None };
    let full = sweep.as_ref().map_or(n as f64 / 2.0, |s| s[s.len() - 1]);
    let budget = budget_fraction * full;
    let settings = TemplateSettings::practical(20, 5);
    let r = estimate_knapsack(&instance, budget, gamma, &settings, Backend::Exact, seed as u64).map_err(text)?;
    let view = KnapsackView {
        budget,
        size: r.size,
        exact: sweep.map(|s| largest_within_budget(&s, budget)),
        probes: r.steps.len(),
        queries: r.total_queries,
    };
    serde_json::to_string(&view).map_err(text)
}

#[wasm_bindgen(js_name = estimateMatching)]
#[allow(clippy::too_many_arguments)]
pub fn estimate_matching(
    generator: &str,
    n: usize,
    alpha: f64,
    beta: f64,
    gamma: f64,
    iterations: u32,
    k: u32,
    seed: u32,
) -> Result<String, JsValue> {
    to_js(matching_json(generator, n, alpha, beta, gamma, iterations, k, seed))
}

#[wasm_bindgen(js_name = estimateEmd)]
pub fn estimate_emd_js(mu: &str, nu: &str, metric: &str, gamma: f64, seed: u32) -> Result<String, JsValue> {
    to_js(emd_json(mu, nu, metric, gamma, seed))
}

#[wasm_bindgen(js_name = knapsack)]
pub fn knapsack_js(generator: &str, n: usize, budget_fraction: f64, gamma: f64, seed: u32) -> Result<String, JsValue> {
    to_js(knapsack_json(generator, n, budget_fraction, gamma, seed))
}
