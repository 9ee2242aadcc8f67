//! Reduction from real costs with outliers to the integer template.
//!
//! Stages: characteristic cost `w̄`, threshold to `G_{≤w̄}`, integer rounding,
//! dummy padding, the template, then unpadding and scaling back.

mod characteristic;
mod knapsack;
mod padding;
mod rounding;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::instance::{BipartiteInstance, IntCosts, Vertex};
use crate::mcm::{Backend, Matcher, MatcherStats};
use crate::oracle::MatchingOracle;
use crate::seed;
use crate::template::{run_template, IterationRecord, ParamMode, TemplateOutcome, TemplateParams, TraceLevel};

pub use characteristic::{find_characteristic_cost, reach_cost, CharacteristicCost};
pub use knapsack::{estimate_knapsack, knapsack_grid, KnapsackReport};
pub use padding::{dummy_count, unpad_estimate, PaddedCosts, UnpaddedMatching};
pub use rounding::{gamma_for_levels, levels_for_gamma, round_cost, unit, RoundedCosts, ThresholdCosts};

/// Outlier window and accuracy for one reduction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Padding slack `ξ`, with `ξ > 2γ` and `β − ξ ≥ α`.
    pub xi: f64,
}

impl ReductionConfig {
    pub fn new(alpha: f64, beta: f64, gamma: f64, xi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) || alpha >= beta {
            return invalid(format!("need 0 <= alpha < beta <= 1, got {alpha}, {beta}"));
        }
        if !(gamma > 0.0 && gamma < (beta - alpha) / 4.0) {
            return invalid(format!("need 0 < gamma < (beta - alpha)/4, got {gamma}"));
        }
        if !(xi > 2.0 * gamma && beta - xi >= alpha - 1e-12) {
            return invalid(format!("need 2 gamma < xi <= beta - alpha, got {xi}"));
        }
        Ok(ReductionConfig { alpha, beta, gamma, xi })
    }

    /// `γ` clamped to `(β − α)/5` and `ξ = (β − α)/2`.
    pub fn for_window(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return invalid(format!("gamma must be positive, got {gamma}"));
        }
        let width = beta - alpha;
        ReductionConfig::new(alpha, beta, gamma.min(width / 5.0), width / 2.0)
    }
}

/// How the template inside the reduction is parameterized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemplateSettings {
    pub mode: ParamMode,
    /// `T`
    pub iterations: u64,
    /// `k`
    pub path_len: u64,
    /// Rounding levels `C`; by default the finest rounding under which the
    /// bottleneck edge of an `αn` matching is reachable in `T` iterations.
    pub levels: Option<i64>,
    pub max_samples: usize,
    pub max_forest_rounds: Option<u64>,
    pub trace: TraceLevel,
}

impl Default for TemplateSettings {
    fn default() -> Self {
        TemplateSettings {
            mode: ParamMode::Practical,
            iterations: 6,
            path_len: 5,
            levels: None,
            max_samples: crate::template::DEFAULT_MAX_SAMPLES,
            max_forest_rounds: None,
            trace: TraceLevel::Summary,
        }
    }
}

impl TemplateSettings {
    pub fn practical(iterations: u64, path_len: u64) -> Self {
        TemplateSettings { iterations, path_len, ..Default::default() }
    }

    pub fn paper() -> Self {
        TemplateSettings { mode: ParamMode::Paper, ..Default::default() }
    }

    /// `C` and the rounding parameter that realizes it, given `w̄` and the
    /// reach cost (see [`reach_cost`]).
    pub fn rounding(&self, gamma: f64, w_bar: f64, w_reach: f64) -> (i64, f64) {
        match (self.mode, self.levels) {
            (ParamMode::Paper, _) => (levels_for_gamma(gamma), gamma),
            (ParamMode::Practical, Some(c)) => (c.max(4), gamma_for_levels(c)),
            (ParamMode::Practical, None) => {
                let g = reachable_gamma(gamma, self.iterations, w_bar, w_reach);
                (levels_for_gamma(g), g)
            }
        }
    }

    fn needs_reach(&self) -> bool {
        self.mode == ParamMode::Practical && self.levels.is_none()
    }

    fn params(&self, gamma_t: f64, levels: i64) -> Result<TemplateParams> {
        let p = match self.mode {
            ParamMode::Paper => TemplateParams::paper(gamma_t / 8.0, levels)?,
            ParamMode::Practical => TemplateParams::practical(gamma_t, levels, self.iterations, self.path_len)?,
        };
        let p = p.with_max_samples(self.max_samples);
        Ok(match self.max_forest_rounds {
            Some(r) => p.with_forest_rounds(r),
            None => p,
        })
    }
}

/// Rounding parameter in `[γ, 1]` under which an edge of cost `w_reach` rounds
/// to at most `T − 2` units. An edge of rounded cost `c̄` first turns eligible
/// in iteration `c̄ + 2`, so such edges are within reach of `T` iterations:
/// `√(2 w_reach / ((T − 3) w̄))`.
pub fn reachable_gamma(gamma: f64, iterations: u64, w_bar: f64, w_reach: f64) -> f64 {
    if iterations <= 3 || !(w_bar > 0.0) {
        return 1.0f64.max(gamma);
    }
    let g = (2.0 * w_reach / ((iterations - 3) as f64 * w_bar)).sqrt();
    g.clamp(gamma, 1.0)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub characteristic_ms: f64,
    pub template_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MwmReport {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub w_bar: f64,
    pub w_reach: f64,
    #[serde(rename = "C")]
    pub levels: i64,
    pub rounding_gamma: f64,
    pub estimate: f64,
    /// Estimate before clamping at zero.
    pub raw_estimate: f64,
    pub matched_fraction: f64,
    pub total_queries: u64,
    pub backend: String,
    pub seed: u64,
    pub padded_n: usize,
    pub template_gamma: f64,
    pub iterations: u64,
    pub path_len: u64,
    pub iterations_run: u64,
    pub degenerate: bool,
    pub stage_timings: StageTimings,
    pub matcher: MatcherStats,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub trace: Vec<IterationRecord>,
}

pub struct MwmOutcome {
    pub report: MwmReport,
    /// Witness matching over the real vertices.
    pub matching: Arc<dyn MatchingOracle>,
    pub template: TemplateOutcome,
}

/// Wall-clock timer; reads zero where the platform has no clock.
#[derive(Clone, Copy)]
struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        #[cfg(not(target_arch = "wasm32"))]
        return Stopwatch(std::time::Instant::now());
        #[cfg(target_arch = "wasm32")]
        Stopwatch()
    }

    fn ms(self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed().as_secs_f64() * 1e3;
        #[cfg(target_arch = "wasm32")]
        0.0
    }
}

/// Estimates the cost of a cheap matching covering between `αn` and `βn` vertices.
pub fn estimate_min_weight_matching(
    instance: &Arc<BipartiteInstance>,
    cfg: &ReductionConfig,
    settings: &TemplateSettings,
    backend: Backend,
    seed: u64,
) -> Result<MwmOutcome> {
    let start = Stopwatch::start();
    let n = instance.n();
    if n == 0 {
        return invalid("empty instance");
    }
    let q0 = instance.query_count();

    let mut matcher = Matcher::new(backend, seed::derive(seed, "characteristic-matcher"));
    let mut rng = seed::rng(seed::derive(seed, "characteristic-sample"));
    let ch = find_characteristic_cost(&**instance, cfg, &mut matcher, &mut rng)?;
    let dummies = dummy_count(n, cfg.beta, cfg.xi);
    let w_reach = if settings.needs_reach() {
        let size = (cfg.alpha * n as f64 - 1e-9).ceil() as usize;
        reach_cost(&**instance, &ch.rungs, size, ch.w_bar, &mut matcher)
    } else {
        ch.w_bar
    };
    let characteristic_ms = start.ms();

    let (levels, gamma_r) = settings.rounding(cfg.gamma, ch.w_bar, w_reach);
    let w = if ch.w_bar > 0.0 { ch.w_bar } else { f64::MIN_POSITIVE };
    let thresholded = ThresholdCosts { inner: instance.clone(), w: ch.w_bar };
    let rounded = RoundedCosts { inner: thresholded, gamma: gamma_r, w };
    let padded: Arc<IntCosts> = Arc::new(PaddedCosts::new(rounded, dummies, 1i64));
    let padded_n = n + dummies;

    let gamma_t = cfg.xi * n as f64 / (2.0 * padded_n as f64);
    let params = settings.params(gamma_t, levels)?;
    let t0 = Stopwatch::start();
    let out = run_template(padded, &params, backend, seed::derive(seed, "template"), settings.trace)?;
    let template_ms = t0.ms();

    let raw = unpad_estimate(out.estimate, n, cfg.beta, cfg.xi) * unit(gamma_r, w);
    let matching: Arc<dyn MatchingOracle> = Arc::new(UnpaddedMatching { base: out.matching.clone(), real: n });
    let matched = (0..n).filter(|&u| matching.mate(Vertex::left(u)).is_some()).count();
    let mut stats = out.stats.clone();
    let cs = matcher.stats();
    stats.calls += cs.calls;
    stats.probes += cs.probes;
    stats.max_call_probes = stats.max_call_probes.max(cs.max_call_probes);
    stats.max_budget_ratio = stats.max_budget_ratio.max(cs.max_budget_ratio);
    stats.budget_violations += cs.budget_violations;

    let report = MwmReport {
        n,
        alpha: cfg.alpha,
        beta: cfg.beta,
        gamma: cfg.gamma,
        w_bar: ch.w_bar,
        w_reach,
        levels,
        rounding_gamma: gamma_r,
        estimate: raw.max(0.0),
        raw_estimate: raw,
        matched_fraction: matched as f64 / n as f64,
        total_queries: instance.query_count() - q0,
        backend: backend.name().to_string(),
        seed,
        padded_n,
        template_gamma: params.gamma,
        iterations: params.iterations,
        path_len: params.path_len,
        iterations_run: out.iterations_run,
        degenerate: out.degenerate,
        stage_timings: StageTimings { characteristic_ms, template_ms, total_ms: start.ms() },
        matcher: stats,
        trace: out.trace.clone(),
    };
    Ok(MwmOutcome { report, matching, template: out })
}
