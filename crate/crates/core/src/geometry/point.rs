use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::rational::Rational;

/// A point of `Q^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QPoint(Vec<Rational>);

impl QPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        QPoint(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QPoint(coords.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        QPoint(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut p = Self::origin(dim);
        p.0[axis] = Rational::one();
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn add(&self, other: &QPoint) -> QPoint {
        QPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QPoint) -> QPoint {
        QPoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> QPoint {
        QPoint(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> QPoint {
        QPoint(self.0.iter().map(|a| -a).collect())
    }

    pub fn dot(&self, other: &QPoint) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    /// `a + t (b - a)`.
    pub fn lerp(a: &QPoint, b: &QPoint, t: &Rational) -> QPoint {
        QPoint(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x + &(t * &(y - x)))
                .collect(),
        )
    }

    /// `Σ w_i p_i`; the caller is responsible for the weights summing to one.
    pub fn combination<'a>(points: impl IntoIterator<Item = &'a QPoint>, weights: &[Rational]) -> QPoint {
        let mut it = points.into_iter().zip(weights);
        let (p0, w0) = it.next().expect("empty combination");
        let mut acc = p0.scale(w0);
        for (p, w) in it {
            for (a, c) in acc.0.iter_mut().zip(&p.0) {
                *a += &(c * w);
            }
        }
        acc
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Rational::to_f64).collect()
    }
}

impl Index<usize> for QPoint {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Debug for QPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c:?}")?;
        }
        f.write_str(")")
    }
}

/// Checks that every point has dimension `dim`.
pub fn check_dims<'a>(dim: usize, points: impl IntoIterator<Item = &'a QPoint>) -> Result<()> {
    for p in points {
        if p.dim() != dim {
            return input(format!("point {p:?} has dimension {}, expected {dim}", p.dim()));
        }
    }
    Ok(())
}

/// The affine hyperplane `{x : <normal, x> = offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: QPoint,
    pub offset: Rational,
}

impl Hyperplane {
    pub fn new(normal: QPoint, offset: Rational) -> Result<Self> {
        if normal.is_origin() {
            return input("hyperplane normal must be nonzero");
        }
        Ok(Hyperplane { normal, offset })
    }

    /// `<normal, p> - offset`: positive on the open positive side.
    pub fn eval(&self, p: &QPoint) -> Rational {
        &self.normal.dot(p) - &self.offset
    }

    /// True if every point of `positive` lies strictly on the positive side and
    /// `negative` strictly on the negative side.
    pub fn strictly_separates(&self, positive: &[QPoint], negative: &QPoint) -> bool {
        !self.normal.is_origin()
            && self.eval(negative).is_negative()
            && positive.iter().all(|a| self.eval(a).is_positive())
    }
}
