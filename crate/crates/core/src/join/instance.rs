use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::matroid::{Combinations, Label, MatroidSpec, Oracle};
use crate::error::{input, Error, Result};
use crate::geometry::point::QPoint;

/// Labeled points in `R^d`. Positions are sorted by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    dimension: usize,
    labels: Vec<Label>,
    points: Vec<QPoint>,
}

impl GroundSet {
    pub fn new(dimension: usize, points: BTreeMap<Label, QPoint>) -> Result<Self> {
        if dimension == 0 {
            return input("dimension must be at least 1");
        }
        if points.is_empty() {
            return input("ground set is empty");
        }
        let (labels, points): (Vec<_>, Vec<_>) = points.into_iter().unzip();
        crate::geometry::point::check_dims(dimension, &points)?;
        Ok(GroundSet { dimension, labels, points })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn points(&self) -> &[QPoint] {
        &self.points
    }

    pub fn index_of(&self, label: Label) -> Result<usize> {
        self.labels.binary_search(&label).map_err(|_| Error::Input(format!("unknown label {label}")))
    }

    pub fn point(&self, label: Label) -> Result<&QPoint> {
        Ok(&self.points[self.index_of(label)?])
    }
}

/// A ground set with a matroid on it.
#[derive(Clone, Debug)]
pub struct Instance {
    ground: GroundSet,
    spec: MatroidSpec,
    oracle: Oracle,
    bases: OnceLock<Vec<Vec<usize>>>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.spec == other.spec
    }
}

/// On-disk instance layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub dimension: usize,
    pub points: BTreeMap<Label, QPoint>,
    pub matroid: MatroidSpec,
}

impl Instance {
    pub fn new(ground: GroundSet, matroid: MatroidSpec) -> Result<Self> {
        let oracle = Oracle::resolve(&matroid, ground.labels())?;
        Ok(Instance { ground, spec: matroid, oracle, bases: OnceLock::new() })
    }

    /// Color classes labeled consecutively from 0, class by class.
    pub fn from_classes(dimension: usize, classes: Vec<Vec<QPoint>>) -> Result<Self> {
        let mut points = BTreeMap::new();
        let mut label_classes = Vec::with_capacity(classes.len());
        let mut next: Label = 0;
        for class in classes {
            let mut lc = Vec::with_capacity(class.len());
            for p in class {
                points.insert(next, p);
                lc.push(next);
                next += 1;
            }
            label_classes.push(lc);
        }
        Self::new(GroundSet::new(dimension, points)?, MatroidSpec::Partition { classes: label_classes })
    }

    /// Points labeled `0..n` under the uniform matroid of the given rank.
    pub fn uniform(dimension: usize, points: Vec<QPoint>, rank: usize) -> Result<Self> {
        let points = points.into_iter().enumerate().map(|(i, p)| (i as Label, p)).collect();
        Self::new(GroundSet::new(dimension, points)?, MatroidSpec::Uniform { rank })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn matroid(&self) -> &MatroidSpec {
        &self.spec
    }

    pub fn dimension(&self) -> usize {
        self.ground.dimension
    }

    pub fn is_partition(&self) -> bool {
        matches!(self.spec, MatroidSpec::Partition { .. })
    }

    /// Number of color classes, for partition matroids.
    pub fn class_count(&self) -> Option<usize> {
        match &self.oracle {
            Oracle::Partition { classes, .. } => Some(classes.len()),
            _ => None,
        }
    }

    /// Class members as ground indices, for partition matroids.
    pub(crate) fn class_indices(&self) -> Option<&[Vec<usize>]> {
        match &self.oracle {
            Oracle::Partition { classes, .. } => Some(classes),
            _ => None,
        }
    }

    /// Points of class `i` (0-based), for partition matroids.
    pub fn class_points(&self, i: usize) -> Option<Vec<QPoint>> {
        self.class_indices()?.get(i).map(|c| self.points_at(c))
    }

    pub(crate) fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    /// `r(E)`.
    pub fn full_rank(&self) -> usize {
        self.oracle.rank()
    }

    pub(crate) fn indices(&self, labels: &[Label]) -> Result<Vec<usize>> {
        let mut idx = labels.iter().map(|&l| self.ground.index_of(l)).collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    pub(crate) fn labels_at(&self, idx: &[usize]) -> Vec<Label> {
        idx.iter().map(|&i| self.ground.labels[i]).collect()
    }

    pub(crate) fn points_at(&self, idx: &[usize]) -> Vec<QPoint> {
        idx.iter().map(|&i| self.ground.points[i].clone()).collect()
    }

    pub fn points_of(&self, labels: &[Label]) -> Result<Vec<QPoint>> {
        Ok(self.points_at(&self.indices(labels)?))
    }

    pub fn is_independent(&self, labels: &[Label]) -> Result<bool> {
        let idx = self.indices(labels)?;
        Ok(idx.len() == labels.len() && self.oracle.is_independent(&idx))
    }

    pub(crate) fn independent_idx(&self, idx: &[usize]) -> bool {
        self.oracle.is_independent(idx)
    }

    /// Bases as ground indices, lexicographic; computed once.
    pub(crate) fn bases_idx(&self) -> &[Vec<usize>] {
        self.bases.get_or_init(|| self.oracle.bases(self.ground.len()))
    }

    /// Number of bases without enumerating them.
    pub fn basis_count(&self) -> usize {
        self.oracle.basis_count(self.ground.len())
    }

    /// Vertex lists of the basis simplices, in basis order.
    pub fn basis_simplices(&self) -> Vec<Vec<QPoint>> {
        self.bases_idx().iter().map(|b| self.points_at(b)).collect()
    }

    /// Independent index sets of size at most `max`, shortlex.
    pub(crate) fn independent_idx_sets(&self, max: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        let n = self.ground.len();
        (0..=max.min(self.full_rank()))
            .flat_map(move |k| Combinations::new(n, k))
            .filter(move |s| self.oracle.is_independent(s))
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            dimension: self.dimension(),
            points: self.ground.labels.iter().copied().zip(self.ground.points.iter().cloned()).collect(),
            matroid: self.spec.clone(),
        }
    }

    pub fn from_file(file: InstanceFile) -> Result<Self> {
        Self::new(GroundSet::new(file.dimension, file.points)?, file.matroid)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// SHA-256 of the compact JSON form, hex encoded.
    pub fn digest(&self) -> String {
        let compact = serde_json::to_string(&self.to_file()).expect("instance serializes");
        hex_digest(compact.as_bytes())
    }
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
