//! The iterative primal-dual template.
//!
//! Each iteration augments along short eligible paths (step 1), then grows a
//! forest from the free `V0` vertices and shifts potentials on it (step 2).
//! The final matching is sampled to produce a trimmed cost estimate.

mod diagnostics;
mod estimate;
mod oracles;
mod params;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::baseline;
use crate::error::{Error, Result};
use crate::instance::{IntCosts, Vertex};
use crate::mcm::{AugmentRequest, Backend, ForwardRequest, Matcher, MatcherStats};
use crate::oracle::{EmptyMatching, ExplicitMatching, MatchingOracle, MembershipOracle, PotentialOracle, ZeroPotential};
use crate::seed;

pub use diagnostics::{broken_edges, DeskForest};
pub use estimate::{sample_and_estimate, SampleEstimate};
pub use oracles::{
    ForestGrowth, ForwardDomain, FreeLeft, Step1Potential, Step2Potential, TemplateCosts, ThresholdedMatching,
};
pub use params::{ParamMode, TemplateParams, DEFAULT_AUGMENT_CALLS, DEFAULT_MAX_SAMPLES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceLevel {
    /// Counters only.
    Summary,
    /// Also full-scan invariants; reads every pair each iteration.
    Desk,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub t: u64,
    pub augment_calls: u64,
    pub paths: usize,
    pub forest_rounds: u64,
    pub forest_cap_hit: bool,
    pub buckets_tried: usize,
    pub cost_queries: u64,
    pub probes: u64,
    pub free_left: Option<usize>,
    pub potential_violations: Option<usize>,
    pub spurious: Option<usize>,
    pub broken_cover: Option<usize>,
    pub forest_size: Option<usize>,
    pub forest_depth: Option<usize>,
    pub forest_component: Option<usize>,
}

pub struct TemplateOutcome {
    /// Estimate of the matching cost, in input cost units.
    pub estimate: f64,
    /// `M^ALG`: the final matching with the expensive tail cut off.
    pub matching: Arc<dyn MatchingOracle>,
    /// Final matching before thresholding.
    pub raw_matching: Arc<dyn MatchingOracle>,
    pub potential: Arc<dyn PotentialOracle>,
    /// Cut-off in input cost units; edges at or above it are not reported.
    pub threshold: Option<f64>,
    pub alpha_w: f64,
    pub samples: usize,
    pub discarded: usize,
    pub trace: Vec<IterationRecord>,
    /// Iterations actually run before the matching became perfect on `V0`.
    pub iterations_run: u64,
    pub degenerate: bool,
    pub stats: MatcherStats,
    pub cost_queries: u64,
    pub oracle_depth: usize,
    pub costs: Arc<IntCosts>,
}

struct Runner<'p> {
    params: &'p TemplateParams,
    costs: Arc<TemplateCosts>,
    dyn_costs: Arc<IntCosts>,
    matcher: Matcher,
    cost_max: i64,
}

impl Runner<'_> {
    fn step1(
        &mut self,
        phi_in: &Arc<dyn PotentialOracle>,
        m_in: Arc<dyn MatchingOracle>,
        record: &mut IterationRecord,
    ) -> Arc<dyn MatchingOracle> {
        let mut m = m_in;
        while record.augment_calls < self.params.max_augment_calls {
            let req = AugmentRequest {
                costs: &*self.dyn_costs,
                phi: &**phi_in,
                matching: &m,
                max_len: self.params.path_len,
                xi: self.params.xi,
            };
            record.augment_calls += 1;
            match self.matcher.augment_eligible(&req) {
                Some(out) => {
                    record.paths += out.paths;
                    m = out.matching;
                }
                None => break,
            }
        }
        m
    }

    fn step2(
        &mut self,
        phi_in: &Arc<dyn PotentialOracle>,
        m_in: &Arc<dyn MatchingOracle>,
        record: &mut IterationRecord,
        desk: Option<&mut DeskForest>,
    ) -> Arc<dyn MembershipOracle> {
        let mut forest: Arc<dyn MembershipOracle> = Arc::new(FreeLeft { matching: m_in.clone() });
        let mut desk = desk;
        loop {
            if record.forest_rounds >= self.params.max_forest_rounds {
                record.forest_cap_hit = true;
                break;
            }
            let domain = ForwardDomain { forest: forest.clone() };
            let req = ForwardRequest {
                costs: &*self.dyn_costs,
                phi: &**phi_in,
                matching: &**m_in,
                domain: &domain,
                delta_in: self.params.delta,
                epsilon: self.params.gamma,
                cost_max: self.cost_max,
            };
            let Some(out) = self.matcher.large_matching_forward(&req) else {
                break;
            };
            record.forest_rounds += 1;
            record.buckets_tried += out.buckets_tried;
            let round = Arc::new(out.matching);
            if let Some(d) = desk.as_deref_mut() {
                d.grow(&round, &**m_in);
            }
            forest = Arc::new(ForestGrowth::new(forest, round, m_in.clone()));
        }
        forest
    }
}

/// Runs the template on integer costs in `[1, C]` (`None` marks a non-edge).
pub fn run_template(
    costs: Arc<IntCosts>,
    params: &TemplateParams,
    backend: Backend,
    seed: u64,
    trace: TraceLevel,
) -> Result<TemplateOutcome> {
    let n = costs.n();
    if n == 0 {
        return Err(Error::InvalidParameter("empty instance".into()));
    }
    if (n as f64) < 1.0 / params.gamma {
        return run_degenerate(costs, params);
    }
    let scale = params.rescale.max(1);
    let tcosts = Arc::new(TemplateCosts::new(costs.clone(), scale, params.cost_max));
    let dyn_costs: Arc<IntCosts> = tcosts.clone();
    let mut runner = Runner {
        params,
        costs: tcosts.clone(),
        dyn_costs: dyn_costs.clone(),
        matcher: Matcher::new(backend, seed::derive(seed, "template-matcher")),
        cost_max: params.cost_max.saturating_mul(scale),
    };

    let mut m: Arc<dyn MatchingOracle> = Arc::new(EmptyMatching { n });
    let mut phi: Arc<dyn PotentialOracle> = Arc::new(ZeroPotential);
    let mut records = Vec::new();
    let mut iterations_run = 0;
    for t in 1..=params.iterations {
        let mut record = IterationRecord { t, ..Default::default() };
        let m1 = runner.step1(&phi, m.clone(), &mut record);
        let range1 = (2 * t) as usize;
        let phi1: Arc<dyn PotentialOracle> =
            Arc::new(Step1Potential::new(phi.clone(), m1.clone(), dyn_costs.clone(), range1));
        let mut desk = (trace == TraceLevel::Desk).then(|| DeskForest::new(&*m1));
        let forest = runner.step2(&phi1, &m1, &mut record, desk.as_mut());
        let phi2: Arc<dyn PotentialOracle> = Arc::new(Step2Potential::new(phi1, forest, n, range1 + 1));
        if let Some((u, v, c)) = runner.costs.malformed() {
            return Err(Error::MalformedCost { u, v, value: c as f64 });
        }
        m = m1;
        phi = phi2;
        iterations_run = t;
        record.cost_queries = runner.costs.queries();
        record.probes = runner.matcher.stats().probes;
        let free = (0..n).filter(|&u| m.mate(Vertex::left(u)).is_none()).count();
        if let Some(d) = desk {
            diagnostics::fill_desk(&mut record, &d, &*m, &*phi, &runner.costs, t);
        }
        records.push(record);
        if free == 0 {
            break;
        }
    }

    let mut rng = seed::rng(seed::derive(seed, "template-sample"));
    let target = (params.nominal_samples(n).min(params.max_samples as f64) as usize).max(1);
    let est = match sample_and_estimate(&*m, &*dyn_costs, params.gamma, target, &mut rng) {
        Err(Error::EmptyMatching) => SampleEstimate::empty(),
        other => other?,
    };
    let thresholded: Arc<dyn MatchingOracle> =
        Arc::new(ThresholdedMatching::new(
        m.clone(),
        dyn_costs.clone(),
        est.threshold,
        est.tie_cut,
        seed::derive(seed, "template-ties"),
    ));
    let s = scale as f64;
    Ok(TemplateOutcome {
        estimate: est.estimate / s,
        matching: thresholded,
        raw_matching: m,
        oracle_depth: phi.depth(),
        potential: phi,
        threshold: est.threshold.map(|w| w as f64 / s),
        alpha_w: est.alpha_w,
        samples: est.samples,
        discarded: est.discarded,
        trace: records,
        iterations_run,
        degenerate: false,
        stats: runner.matcher.stats().clone(),
        cost_queries: runner.costs.queries(),
        costs: dyn_costs,
    })
}

/// Small instances are solved exactly: min-weight matching of maximum cardinality.
fn run_degenerate(costs: Arc<IntCosts>, params: &TemplateParams) -> Result<TemplateOutcome> {
    let n = costs.n();
    let mut dense = vec![f64::INFINITY; n * n];
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if let Some(c) = costs.cost(u, v) {
                if c < 1 || c > params.cost_max {
                    return Err(Error::MalformedCost { u, v, value: c as f64 });
                }
                dense[u * n + v] = c as f64;
                edges.push((u, v));
            }
        }
    }
    let k = baseline::max_matching_size(n, &edges);
    let exact = baseline::min_weight_k_matching_matrix(n, &dense, k)?;
    let m = ExplicitMatching::from_pairs(n, &exact.witness)?;
    let m: Arc<dyn MatchingOracle> = Arc::new(m);
    Ok(TemplateOutcome {
        estimate: exact.value,
        matching: m.clone(),
        raw_matching: m,
        potential: Arc::new(ZeroPotential),
        threshold: None,
        alpha_w: 0.0,
        samples: 0,
        discarded: 0,
        trace: Vec::new(),
        iterations_run: 0,
        degenerate: true,
        stats: MatcherStats::default(),
        cost_queries: (n * n) as u64,
        oracle_depth: 1,
        costs,
    })
}
