//! Serializable run configuration; every command is a function of it.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use submatch::generators::Generator;
use submatch::pipeline::TemplateSettings;
use submatch::template::{ParamMode, TraceLevel};
use submatch::Backend;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Gen,
    EstimateMwm,
    EstimateEmd,
    Knapsack,
    BenchQueries,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceSpec {
    Generator { generator: Generator, n: usize },
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EmdInput {
    /// `point mass` files.
    Distributions { mu: PathBuf, nu: PathBuf },
    /// Files of recorded draws, replayed in order.
    Draws { mu: PathBuf, nu: PathBuf, support: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub ns: Vec<usize>,
    pub seeds: u64,
    /// Largest `n` compared against the exact baseline.
    pub exact_cap: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emd: Option<EmdInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    pub backend: Backend,
    pub seed: u64,
    pub params: ParamMode,
    #[serde(rename = "T")]
    pub iterations: u64,
    pub k: u64,
    #[serde(default)]
    pub exact: bool,
    #[serde(default)]
    pub desk: bool,
    #[serde(default)]
    pub timings: bool,
    #[serde(default)]
    pub binary: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn settings(&self) -> TemplateSettings {
        let base = match self.params {
            ParamMode::Paper => TemplateSettings::paper(),
            ParamMode::Practical => TemplateSettings::practical(self.iterations, self.k),
        };
        let trace = if self.desk { TraceLevel::Desk } else { TraceLevel::Summary };
        TemplateSettings { trace, ..base }
    }

    pub fn validate(&self) -> Result<(), String> {
        let unit = |name: &str, x: f64| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(format!("--{name} must lie in [0, 1], got {x}"))
            }
        };
        unit("alpha", self.alpha)?;
        unit("beta", self.beta)?;
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(format!("--gamma must lie in (0, 1), got {}", self.gamma));
        }
        if let Backend::Sampled { epsilon } = self.backend {
            if !(0.0..1.0).contains(&epsilon) {
                return Err(format!("--epsilon must lie in [0, 1), got {epsilon}"));
            }
        }
        if self.params == ParamMode::Practical && (self.iterations == 0 || self.k == 0) {
            return Err("--T and --k must be positive".into());
        }
        if let Some(b) = self.budget {
            if !(b >= 0.0 && b.is_finite()) {
                return Err(format!("--budget must be a non-negative number, got {b}"));
            }
        }
        let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(format!("{what} is required")) };
        match self.command {
            Command::Gen => need(self.instance.is_some() && self.out.is_some(), "an instance and --out")?,
            Command::EstimateMwm => {
                need(self.instance.is_some(), "an instance")?;
                if self.alpha >= self.beta {
                    return Err(format!("need --alpha < --beta, got {} and {}", self.alpha, self.beta));
                }
            }
            Command::Knapsack => need(self.instance.is_some() && self.budget.is_some(), "an instance and --budget")?,
            Command::EstimateEmd => need(self.emd.is_some() && self.metric.is_some(), "μ, ν and --metric")?,
            Command::BenchQueries => {
                let sweep = self.sweep.as_ref().ok_or("a sweep grid is required")?;
                if sweep.ns.is_empty() || sweep.ns.iter().any(|&n| n < 2) {
                    return Err("sweep sizes must be at least 2".into());
                }
                if sweep.seeds == 0 {
                    return Err("--seeds must be positive".into());
                }
                need(matches!(self.instance, Some(InstanceSpec::Generator { .. })), "a generator")?;
            }
        }
        Ok(())
    }
}
