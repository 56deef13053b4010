use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::geometry::point::QPoint;
use crate::join::{GroundSet, Instance, Label, MatroidSpec};
use crate::rng::SplitMix64;
use crate::topology::Budget;

/// Matroid family for generated instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatroidChoice {
    /// Color classes with the configured sizes.
    Partition,
    /// `sum(classes)` points under the uniform matroid of this rank.
    Uniform(usize),
    /// `sum(classes)` points labeled from 0 with these bases.
    Bases(Vec<Vec<Label>>),
}

/// What a campaign run does with its instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analyze,
    Search,
    Certify,
    Verify,
    Render,
}

/// Parameters of a generated campaign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub dimension: usize,
    /// Class sizes; under a uniform matroid only their sum matters.
    pub classes: Vec<usize>,
    pub matroid: MatroidChoice,
    pub bound: i64,
    pub seed: u64,
    pub count: u64,
    /// Nerve dimension cap; `dimension + 1` when absent.
    pub cap: Option<usize>,
    pub budget: Budget,
    pub mode: Mode,
    /// Filtration tolerance.
    pub tolerance: f64,
    /// Drop basis simplices contained in another before building the nerve.
    #[serde(default)]
    pub prune: bool,
}

impl SearchConfig {
    pub fn new(dimension: usize, classes: Vec<usize>) -> Self {
        SearchConfig {
            dimension,
            classes,
            matroid: MatroidChoice::Partition,
            bound: 10,
            seed: 0,
            count: 1,
            cap: None,
            budget: Budget::default(),
            mode: Mode::Analyze,
            tolerance: 1e-9,
            prune: false,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_bound(mut self, bound: i64) -> Self {
        self.bound = bound;
        self
    }

    pub fn with_count(mut self, count: u64) -> Self {
        self.count = count;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension < 1 {
            return input("dimension must be at least 1");
        }
        if self.classes.is_empty() || self.classes.contains(&0) {
            return input("need at least one class, each of positive size");
        }
        if self.bound < 1 {
            return input("coordinate bound must be at least 1");
        }
        if let MatroidChoice::Uniform(r) = self.matroid {
            let n: usize = self.classes.iter().sum();
            if r < 1 || r > n {
                return input(format!("uniform rank {r} outside 1..={n}"));
            }
        }
        if self.cap.is_some_and(|c| c < 1) {
            return input("nerve cap must be at least 1");
        }
        if !(self.tolerance > 0.0) {
            return input("tolerance must be positive");
        }
        Ok(())
    }

    pub fn effective_cap(&self) -> usize {
        self.cap.unwrap_or(self.dimension + 1)
    }

    /// SHA-256 of the compact JSON form.
    pub fn digest(&self) -> String {
        crate::join::hex_digest(serde_json::to_string(self).expect("config serializes").as_bytes())
    }
}

/// Instance `index` of the campaign: integer points uniform in `[-B, B]^d`.
pub fn generate_instance(config: &SearchConfig, index: u64) -> Result<Instance> {
    config.validate()?;
    let mut rng = SplitMix64::for_index(config.seed, index);
    let d = config.dimension;
    let mut point = || QPoint::from_ints(&(0..d).map(|_| rng.symmetric(config.bound)).collect::<Vec<_>>());
    match config.matroid {
        MatroidChoice::Partition => {
            let classes = config.classes.iter().map(|&s| (0..s).map(|_| point()).collect()).collect();
            Instance::from_classes(d, classes)
        }
        MatroidChoice::Uniform(r) => {
            let n: usize = config.classes.iter().sum();
            Instance::uniform(d, (0..n).map(|_| point()).collect(), r)
        }
        MatroidChoice::Bases(ref bases) => {
            let n: usize = config.classes.iter().sum();
            let points = (0..n as Label).map(|l| (l, point())).collect();
            Instance::new(GroundSet::new(d, points)?, MatroidSpec::Bases { bases: bases.clone() })
        }
    }
}

/// Partition instance from integer coordinates, labeled consecutively.
pub fn partition_instance(dimension: usize, classes: &[&[&[i64]]]) -> Result<Instance> {
    Instance::from_classes(
        dimension,
        classes.iter().map(|c| c.iter().map(|p| QPoint::from_ints(p)).collect()).collect(),
    )
}

/// The labels of class `i` under consecutive labeling.
pub fn class_labels(instance: &Instance, i: usize) -> Option<Vec<Label>> {
    match instance.matroid() {
        MatroidSpec::Partition { classes } => classes.get(i).cloned(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinism_and_bounds() {
        let cfg = SearchConfig::new(1, vec![5, 5]).with_seed(7).with_bound(1);
        let a = generate_instance(&cfg, 3).unwrap();
        assert_eq!(a, generate_instance(&cfg, 3).unwrap());
        assert_ne!(a, generate_instance(&cfg, 4).unwrap());
        for p in a.ground().points() {
            assert!(p[0].abs() <= crate::rational::Rational::one());
        }
        let mut bad = cfg.clone();
        bad.bound = 0;
        assert!(generate_instance(&bad, 0).is_err());
    }

    #[test]
    fn uniform_choice() {
        let mut cfg = SearchConfig::new(2, vec![10]);
        cfg.matroid = MatroidChoice::Uniform(7);
        let inst = generate_instance(&cfg, 0).unwrap();
        assert_eq!(inst.full_rank(), 7);
        assert_eq!(inst.ground().len(), 10);
    }
}
