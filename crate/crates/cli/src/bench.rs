//! Query-count sweeps over a grid of instance sizes.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;

use anyhow::Result;
use serde::Serialize;
use submatch::baseline::{k_sweep, size_for_fraction, Rounding};
use submatch::pipeline::{estimate_min_weight_matching, ReductionConfig};
use submatch::seed;

use crate::config::RunConfig;
use crate::run::{emit, load_instance, Verdict};

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub n: usize,
    pub seed: u64,
    pub queries: u64,
    pub estimate: f64,
    /// `c(M^α)` when `n` is within the exact cap.
    pub exact_lower: Option<f64>,
    /// `c(M^β)`
    pub exact_upper: Option<f64>,
    /// Distance from the estimate to `[c(M^α), c(M^β)]`.
    pub error: Option<f64>,
}

/// Least-squares slope of `ln queries` against `ln n`; `None` with fewer than two sizes.
pub fn fitted_slope(rows: &[Row]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((r.n as f64).ln(), (r.queries.max(1) as f64).ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    Some(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

fn point(cfg: &RunConfig, n: usize, s: u64, exact_cap: usize) -> Result<Row> {
    let spec = match cfg.instance.clone().expect("validated") {
        crate::config::InstanceSpec::Generator { generator, .. } => {
            crate::config::InstanceSpec::Generator { generator, n }
        }
        other => other,
    };
    let instance = Arc::new(load_instance(&spec, s)?);
    let red = ReductionConfig::for_window(cfg.alpha, cfg.beta, cfg.gamma)?;
    let out = estimate_min_weight_matching(&instance, &red, &cfg.settings(), cfg.backend, s)?;
    let estimate = out.report.estimate;
    let (exact_lower, exact_upper, error) = if n <= exact_cap {
        let sweep = k_sweep(&instance.to_dense())?;
        let lo = sweep[size_for_fraction(cfg.alpha, n, Rounding::Up).min(sweep.len() - 1)];
        let hi = sweep[size_for_fraction(cfg.beta, n, Rounding::Down).min(sweep.len() - 1)];
        (Some(lo), Some(hi), Some((lo - estimate).max(estimate - hi).max(0.0)))
    } else {
        (None, None, None)
    };
    Ok(Row { n, seed: s, queries: out.report.total_queries, estimate, exact_lower, exact_upper, error })
}

pub fn run(cfg: &RunConfig) -> Result<Verdict> {
    let sweep = cfg.sweep.as_ref().expect("validated");
    let jobs: Vec<(usize, u64)> = sweep
        .ns
        .iter()
        .flat_map(|&n| (0..sweep.seeds).map(move |i| (n, seed::derive_index(cfg.seed, i))))
        .collect();
    let results: Vec<Mutex<Option<Result<Row>>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = thread::available_parallelism().map_or(1, |w| w.get()).min(jobs.len());
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(n, s)) = jobs.get(i) else { break };
                *results[i].lock().unwrap() = Some(point(cfg, n, s, sweep.exact_cap));
            });
        }
    });
    let rows = results
        .into_iter()
        .map(|r| r.into_inner().unwrap().expect("every job ran"))
        .collect::<Result<Vec<Row>>>()?;
    let mut out = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for row in &rows {
        out.serialize(row)?;
    }
    if let Some(slope) = fitted_slope(&rows) {
        out.write_record(["slope", &format!("{slope:.4}")])?;
    }
    let bytes = out.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
    emit(cfg, &bytes)?;
    Ok(Verdict::Ok)
}
