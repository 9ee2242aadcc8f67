//! Command execution.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use submatch::baseline::{exact_emd, k_sweep, largest_within_budget, size_for_fraction, Rounding, MAX_N};
use submatch::emd::{estimate_emd, DiscreteDistribution, DistributionSource, EmdReport, MetricTable, ReplaySource};
use submatch::generators::{EuclideanCosts, Generator};
use submatch::io::{parse_distribution, parse_draws, parse_metric, read_instance, write_instance};
use submatch::pipeline::{
    estimate_knapsack, estimate_min_weight_matching, KnapsackReport, MwmReport, ReductionConfig, StageTimings,
};
use submatch::{BipartiteInstance, DenseCosts};

use crate::bench;
use crate::config::{Command, EmdInput, InstanceSpec, RunConfig};

/// What a successful run found.
#[derive(Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    /// The exact baseline contradicts the estimator's guarantee.
    ContractViolation,
}

pub fn execute(cfg: &RunConfig) -> Result<Verdict> {
    cfg.validate().map_err(anyhow::Error::msg)?;
    match cfg.command {
        Command::Gen => gen(cfg),
        Command::EstimateMwm => mwm(cfg),
        Command::EstimateEmd => emd(cfg),
        Command::Knapsack => knapsack(cfg),
        Command::BenchQueries => bench::run(cfg),
    }
}

pub fn emit(cfg: &RunConfig, bytes: &[u8]) -> Result<()> {
    match &cfg.out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(cfg: &RunConfig, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(cfg, text.as_bytes())
}

pub fn load_instance(spec: &InstanceSpec, seed: u64) -> Result<BipartiteInstance> {
    Ok(match spec {
        InstanceSpec::Generator { generator, n } => generator.instance(*n, seed)?,
        InstanceSpec::File { path } => {
            BipartiteInstance::dense(read_instance(path).with_context(|| format!("reading {}", path.display()))?)
        }
    })
}

#[derive(Serialize)]
struct GenSummary<'a> {
    config: &'a RunConfig,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<EuclideanCosts>,
}

fn gen(cfg: &RunConfig) -> Result<Verdict> {
    let spec = cfg.instance.as_ref().expect("validated");
    let dense = load_instance(spec, cfg.seed)?.to_dense();
    let out = cfg.out.as_deref().expect("validated");
    write_instance(out, &dense, cfg.binary).with_context(|| format!("writing {}", out.display()))?;
    let points = match spec {
        InstanceSpec::Generator { generator: Generator::Euclidean { d }, n } => {
            Some(EuclideanCosts::generate(*n, *d, cfg.seed))
        }
        _ => None,
    };
    let summary = GenSummary { config: cfg, n: dense.n(), points };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(Verdict::Ok)
}

fn strip_timings(report: &mut MwmReport, keep: bool) {
    if !keep {
        report.stage_timings = StageTimings::default();
    }
}

fn dense_for_exact(instance: &BipartiteInstance) -> Result<DenseCosts> {
    if instance.n() > MAX_N {
        bail!("--exact needs n <= {MAX_N}, got {}", instance.n());
    }
    Ok(instance.to_dense())
}

#[derive(Serialize)]
struct SandwichCheck {
    /// `c(M^α)`
    lower: f64,
    /// `c(M^(α − γ))`
    widened_lower: f64,
    /// `c(M^β)`
    upper: f64,
    holds: bool,
    widened_holds: bool,
}

#[derive(Serialize)]
struct MwmOutput<'a> {
    config: &'a RunConfig,
    report: MwmReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<SandwichCheck>,
}

fn mwm(cfg: &RunConfig) -> Result<Verdict> {
    let instance = Arc::new(load_instance(cfg.instance.as_ref().expect("validated"), cfg.seed)?);
    let red = ReductionConfig::for_window(cfg.alpha, cfg.beta, cfg.gamma)?;
    let out = estimate_min_weight_matching(&instance, &red, &cfg.settings(), cfg.backend, cfg.seed)?;
    let mut report = out.report;
    strip_timings(&mut report, cfg.timings);
    let exact = if cfg.exact {
        let n = instance.n();
        let sweep = k_sweep(&dense_for_exact(&instance)?)?;
        let at = |f: f64, r| sweep[size_for_fraction(f, n, r).min(sweep.len() - 1)];
        let (lower, upper) = (at(cfg.alpha, Rounding::Up), at(cfg.beta, Rounding::Down));
        let widened_lower = at((cfg.alpha - cfg.gamma).max(0.0), Rounding::Up);
        let est = report.estimate;
        Some(SandwichCheck {
            lower,
            widened_lower,
            upper,
            holds: lower <= est + 1e-9 && est <= upper + 1e-9,
            widened_holds: widened_lower <= est + 1e-9 && est <= upper + 1e-9,
        })
    } else {
        None
    };
    let breach = matches!(cfg.backend, submatch::Backend::Exact) && exact.as_ref().is_some_and(|e| !e.widened_holds);
    emit_json(cfg, &MwmOutput { config: cfg, report, exact })?;
    Ok(if breach { Verdict::ContractViolation } else { Verdict::Ok })
}

#[derive(Serialize)]
struct EmdOutput<'a> {
    config: &'a RunConfig,
    report: EmdReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<f64>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emd(cfg: &RunConfig) -> Result<Verdict> {
    let (rows, cols, data) = parse_metric(&read(cfg.metric.as_deref().expect("validated"))?)?;
    let table = MetricTable::new(rows, cols, data)?;
    let (mu, nu, support, masses): (Box<dyn DistributionSource>, Box<dyn DistributionSource>, usize, _) =
        match cfg.emd.as_ref().expect("validated") {
            EmdInput::Distributions { mu, nu } => {
                let a = parse_distribution(&read(mu)?)?;
                let b = parse_distribution(&read(nu)?)?;
                if a.len() > rows || b.len() > cols {
                    bail!("metric is {rows} × {cols} but the supports need {} × {}", a.len(), b.len());
                }
                let support = a.len().max(b.len());
                let (mut pa, mut pb) = (a.clone(), b.clone());
                pa.resize(rows, 0.0);
                pb.resize(cols, 0.0);
                let da = DiscreteDistribution::new(a)?;
                let db = DiscreteDistribution::new(b)?;
                (Box::new(da), Box::new(db), support, Some((pa, pb)))
            }
            EmdInput::Draws { mu, nu, support } => {
                let a = parse_draws(&read(mu)?)?;
                let b = parse_draws(&read(nu)?)?;
                if let Some(p) = a.iter().find(|&&p| p >= rows).or_else(|| b.iter().find(|&&p| p >= cols)) {
                    bail!("draw {p} lies outside the {rows} × {cols} metric");
                }
                (Box::new(ReplaySource::new(a)), Box::new(ReplaySource::new(b)), *support, None)
            }
        };
    let metric = Arc::new(table);
    let mut report = estimate_emd(&*mu, &*nu, metric.clone(), support, cfg.gamma, &cfg.settings(), cfg.backend, cfg.seed)?;
    strip_timings(&mut report.matching, cfg.timings);
    let exact = match (&masses, cfg.exact) {
        (Some((a, b)), true) => Some(exact_emd(a, b, metric.data())?),
        (None, true) => bail!("--exact needs distribution files, not draws"),
        _ => None,
    };
    let breach = matches!(cfg.backend, submatch::Backend::Exact)
        && exact.is_some_and(|e| (report.estimate - e).abs() > cfg.gamma);
    emit_json(cfg, &EmdOutput { config: cfg, report, exact })?;
    Ok(if breach { Verdict::ContractViolation } else { Verdict::Ok })
}

#[derive(Serialize)]
struct KnapsackOutput<'a> {
    config: &'a RunConfig,
    report: KnapsackReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<usize>,
}

fn knapsack(cfg: &RunConfig) -> Result<Verdict> {
    let instance = Arc::new(load_instance(cfg.instance.as_ref().expect("validated"), cfg.seed)?);
    let budget = cfg.budget.expect("validated");
    let report = estimate_knapsack(&instance, budget, cfg.gamma, &cfg.settings(), cfg.backend, cfg.seed)?;
    let exact = if cfg.exact {
        Some(largest_within_budget(&k_sweep(&dense_for_exact(&instance)?)?, budget))
    } else {
        None
    };
    let slack = cfg.gamma * instance.n() as f64;
    let breach = matches!(cfg.backend, submatch::Backend::Exact)
        && exact.is_some_and(|e| (report.size - e as f64).abs() > slack);
    emit_json(cfg, &KnapsackOutput { config: cfg, report, exact })?;
    Ok(if breach { Verdict::ContractViolation } else { Verdict::Ok })
}
