//! Synthetic instance families.
//!
//! Every family is a deterministic function of `(n, seed)`; costs are computed
//! on demand so large instances never materialize.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{BipartiteInstance, CostSource};
use crate::seed::{self, unit_hash};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Generator {
    /// Independent uniform costs in `[0, 1)`.
    Uniform,
    /// Distances between uniform points in `[0, 1]^d`.
    Euclidean { d: usize },
    /// Cost 1 on edges of a random bipartite graph with density `p`, 2 elsewhere.
    OneTwoMetric { p: f64 },
    /// Cost 0 on a planted random perfect matching, 1 elsewhere.
    Permutation,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Uniform => write!(f, "uniform"),
            Generator::Euclidean { d } => write!(f, "euclidean({d})"),
            Generator::OneTwoMetric { p } => write!(f, "one-two-metric({p})"),
            Generator::Permutation => write!(f, "permutation"),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    /// Accepts `uniform`, `euclidean(2)`, `euclidean:2`, `one-two-metric(0.5)`, `permutation`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.find(['(', ':']) {
            Some(i) => (&s[..i], Some(s[i + 1..].trim_end_matches(')'))),
            None => (s, None),
        };
        let bad = || Error::InvalidParameter(format!("unknown generator `{s}`"));
        let g = match (name, arg) {
            ("uniform", None) => Generator::Uniform,
            ("permutation", None) => Generator::Permutation,
            ("euclidean", a) => Generator::Euclidean { d: a.map_or(Ok(2), str::parse).map_err(|_| bad())? },
            ("one-two-metric", a) => Generator::OneTwoMetric { p: a.map_or(Ok(0.5), str::parse).map_err(|_| bad())? },
            _ => return Err(bad()),
        };
        g.validate()?;
        Ok(g)
    }
}

impl Generator {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Generator::Euclidean { d } if d == 0 => Err(Error::InvalidParameter("euclidean needs d >= 1".into())),
            Generator::OneTwoMetric { p } if !(0.0..=1.0).contains(&p) => {
                Err(Error::InvalidParameter(format!("density must lie in [0, 1], got {p}")))
            }
            _ => Ok(()),
        }
    }

    pub fn source(&self, n: usize, seed: u64) -> Result<Arc<dyn CostSource>> {
        self.validate()?;
        Ok(match *self {
            Generator::Uniform => Arc::new(HashCosts { n, seed }),
            Generator::Euclidean { d } => Arc::new(EuclideanCosts::generate(n, d, seed)),
            Generator::OneTwoMetric { p } => Arc::new(OneTwoCosts { n, p, seed }),
            Generator::Permutation => Arc::new(PlantedCosts::generate(n, seed)),
        })
    }

    pub fn instance(&self, n: usize, seed: u64) -> Result<BipartiteInstance> {
        Ok(BipartiteInstance::new(self.source(n, seed)?))
    }
}

pub struct HashCosts {
    pub n: usize,
    pub seed: u64,
}

impl CostSource for HashCosts {
    fn n(&self) -> usize {
        self.n
    }

    fn cost(&self, u: usize, v: usize) -> f64 {
        unit_hash(self.seed, u as u64, v as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EuclideanCosts {
    pub d: usize,
    pub left: Vec<Vec<f64>>,
    pub right: Vec<Vec<f64>>,
}

impl EuclideanCosts {
    pub fn generate(n: usize, d: usize, seed: u64) -> Self {
        let mut rng = seed::rng(seed::derive(seed, "euclidean"));
        let points = |rng: &mut seed::Rng| -> Vec<Vec<f64>> {
            (0..n).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect()).collect()
        };
        let left = points(&mut rng);
        let right = points(&mut rng);
        EuclideanCosts { d, left, right }
    }
}

impl CostSource for EuclideanCosts {
    fn n(&self) -> usize {
        self.left.len()
    }

    fn cost(&self, u: usize, v: usize) -> f64 {
        self.left[u].iter().zip(&self.right[v]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

pub struct OneTwoCosts {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl CostSource for OneTwoCosts {
    fn n(&self) -> usize {
        self.n
    }

    fn cost(&self, u: usize, v: usize) -> f64 {
        if unit_hash(self.seed, u as u64, v as u64) < self.p {
            1.0
        } else {
            2.0
        }
    }
}

pub struct PlantedCosts {
    pub perm: Vec<usize>,
}

impl PlantedCosts {
    pub fn generate(n: usize, seed: u64) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut seed::rng(seed::derive(seed, "permutation")));
        PlantedCosts { perm }
    }
}

impl CostSource for PlantedCosts {
    fn n(&self) -> usize {
        self.perm.len()
    }

    fn cost(&self, u: usize, v: usize) -> f64 {
        if self.perm[u] == v {
            0.0
        } else {
            1.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        assert_eq!("uniform".parse::<Generator>().unwrap(), Generator::Uniform);
        assert_eq!("euclidean(3)".parse::<Generator>().unwrap(), Generator::Euclidean { d: 3 });
        assert_eq!("euclidean:1".parse::<Generator>().unwrap(), Generator::Euclidean { d: 1 });
        assert_eq!("one-two-metric(0.25)".parse::<Generator>().unwrap(), Generator::OneTwoMetric { p: 0.25 });
        assert!("one-two-metric(2)".parse::<Generator>().is_err());
        assert!("gaussian".parse::<Generator>().is_err());
        for g in [Generator::Uniform, Generator::Euclidean { d: 2 }, Generator::Permutation] {
            assert_eq!(g.to_string().parse::<Generator>().unwrap(), g);
        }
    }

    #[test]
    fn one_two_values() {
        let src = Generator::OneTwoMetric { p: 0.5 }.source(10, 3).unwrap();
        for u in 0..10 {
            for v in 0..10 {
                let c = src.cost(u, v);
                assert!(c == 1.0 || c == 2.0);
            }
        }
    }
}
