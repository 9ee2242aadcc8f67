//! Sublinear-query estimation of min-weight bipartite matchings with outliers.
//!
//! The estimator runs a primal-dual template over lazily composed oracles:
//! matchings, vertex sets and potentials are never materialized, only queried.
//! On top of it sit a reduction from real costs with an outlier window
//! ([`pipeline`]), an earth mover's distance estimator ([`emd`]) and an exact
//! min-cost-flow baseline used for validation ([`baseline`]).
//!
//! ```
//! use std::sync::Arc;
//! use submatch::generators::Generator;
//! use submatch::mcm::Backend;
//! use submatch::pipeline::{estimate_min_weight_matching, ReductionConfig, TemplateSettings};
//!
//! let inst = Arc::new(Generator::Uniform.instance(40, 7).unwrap());
//! let cfg = ReductionConfig::for_window(0.85, 1.0, 0.05).unwrap();
//! let out = estimate_min_weight_matching(&inst, &cfg, &TemplateSettings::practical(20, 5), Backend::Exact, 1).unwrap();
//! assert!(out.report.estimate >= 0.0);
//! ```

pub mod baseline;
pub mod eligibility;
pub mod emd;
pub mod error;
pub mod generators;
pub mod instance;
pub mod io;
pub mod mcm;
pub mod oracle;
pub mod pipeline;
pub mod seed;
pub mod template;

pub use error::{Error, Result};
pub use instance::{BipartiteInstance, CostOracle, DenseCosts, Side, Vertex};
pub use mcm::Backend;
