//! Nearest point of a convex hull (Wolfe's minimum-norm-point algorithm).
//!
//! Generic over the scalar so the same routine serves exact rational
//! separation and the floating-point distance probes. With exact scalars the
//! tolerance is zero and the algorithm terminates with the exact nearest point.

use crate::rational::Rational;

pub trait Scalar: Clone + PartialOrd {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn abs(&self) -> Self;
    /// Values at or below this magnitude are treated as zero.
    fn eps() -> Self;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn abs(&self) -> Self {
        Rational::abs(self)
    }
    fn eps() -> Self {
        Rational::zero()
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn eps() -> Self {
        1e-13
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

/// Nearest point of `conv(points)` to `query`.
#[derive(Clone, Debug)]
pub struct NearestPoint<T> {
    pub point: Vec<T>,
    /// Barycentric weights over `points` (zero for unused ones).
    pub weights: Vec<T>,
    pub dist_sq: T,
}

/// Solves `[G 1; 1^T 0] [a; -l] = [0; 1]` for the affine minimizer weights.
fn affine_minimizer<T: Scalar>(corral: &[Vec<T>]) -> Option<Vec<T>> {
    let k = corral.len();
    let n = k + 1;
    let mut m: Vec<Vec<T>> = vec![vec![T::zero(); n + 1]; n];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = dot(&corral[i], &corral[j]);
        }
        m[i][k] = T::one();
        m[k][i] = T::one();
    }
    m[k][n] = T::one();
    // Gaussian elimination with partial pivoting by magnitude.
    for col in 0..n {
        let mut piv = None;
        let mut best = T::eps();
        for (r, row) in m.iter().enumerate().skip(col) {
            let a = row[col].abs();
            if a > best {
                best = a;
                piv = Some(r);
            }
        }
        let piv = piv?;
        m.swap(col, piv);
        let pr = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col {
                continue;
            }
            let f = row[col].div(&pr[col]);
            if f.abs() <= T::zero() {
                continue;
            }
            for c in col..=n {
                row[c] = row[c].sub(&f.mul(&pr[c]));
            }
        }
    }
    Some((0..k).map(|i| m[i][n].div(&m[i][i])).collect())
}

/// Wolfe's algorithm on `points - query`.
pub fn nearest_point<T: Scalar>(points: &[Vec<T>], query: &[T]) -> Option<NearestPoint<T>> {
    if points.is_empty() {
        return None;
    }
    let shifted: Vec<Vec<T>> = points
        .iter()
        .map(|p| p.iter().zip(query).map(|(a, b)| a.sub(b)).collect())
        .collect();
    let norms: Vec<T> = shifted.iter().map(|p| dot(p, p)).collect();

    let mut start = 0;
    for i in 1..shifted.len() {
        if norms[i] < norms[start] {
            start = i;
        }
    }
    let mut corral: Vec<usize> = vec![start];
    let mut w: Vec<T> = vec![T::one()];
    let mut x = shifted[start].clone();

    let combine = |idx: &[usize], wts: &[T]| -> Vec<T> {
        let d = query.len();
        let mut acc = vec![T::zero(); d];
        for (&i, wi) in idx.iter().zip(wts) {
            for (a, c) in acc.iter_mut().zip(&shifted[i]) {
                *a = a.add(&c.mul(wi));
            }
        }
        acc
    };

    // Each major cycle strictly lowers |x|; the cap only guards float runs.
    for _ in 0..10_000 {
        let xx = dot(&x, &x);
        if xx <= T::eps() {
            break;
        }
        let mut best = None;
        let mut best_val = xx.sub(&T::eps().mul(&xx.add(&T::one())));
        for (i, p) in shifted.iter().enumerate() {
            let v = dot(&x, p);
            if v < best_val {
                best_val = v;
                best = Some(i);
            }
        }
        let Some(j) = best else { break };
        if corral.contains(&j) {
            break;
        }
        corral.push(j);
        w.push(T::zero());

        loop {
            let pts: Vec<Vec<T>> = corral.iter().map(|&i| shifted[i].clone()).collect();
            let Some(alpha) = affine_minimizer(&pts) else {
                // Numerically dependent corral; keep the current iterate.
                corral.pop();
                w.pop();
                return Some(finish(points.len(), &corral, &w, &x, query));
            };
            if alpha.iter().all(|a| *a > T::eps()) {
                w = alpha;
                x = combine(&corral, &w);
                break;
            }
            let mut theta: Option<T> = None;
            for (wi, ai) in w.iter().zip(&alpha) {
                if *ai <= T::eps() {
                    let den = wi.sub(ai);
                    if den > T::zero() {
                        let t = wi.div(&den);
                        if theta.as_ref().map_or(true, |th| t < *th) {
                            theta = Some(t);
                        }
                    }
                }
            }
            let theta = theta.unwrap_or_else(T::zero);
            let one_minus = T::one().sub(&theta);
            for (wi, ai) in w.iter_mut().zip(&alpha) {
                *wi = theta.mul(ai).add(&one_minus.mul(wi));
            }
            // Drop vanished weights (at least one).
            let mut keep_c = Vec::new();
            let mut keep_w = Vec::new();
            for (&c, wi) in corral.iter().zip(&w) {
                if *wi > T::eps() {
                    keep_c.push(c);
                    keep_w.push(wi.clone());
                }
            }
            if keep_c.len() == corral.len() {
                // Float stall: drop the smallest weight.
                let mut lo = 0;
                for i in 1..keep_w.len() {
                    if keep_w[i] < keep_w[lo] {
                        lo = i;
                    }
                }
                keep_c.remove(lo);
                keep_w.remove(lo);
            }
            let total = keep_w.iter().fold(T::zero(), |a, b| a.add(b));
            corral = keep_c;
            w = keep_w.iter().map(|v| v.div(&total)).collect();
            x = combine(&corral, &w);
        }
    }
    Some(finish(points.len(), &corral, &w, &x, query))
}

fn finish<T: Scalar>(n: usize, corral: &[usize], w: &[T], x: &[T], query: &[T]) -> NearestPoint<T> {
    let mut weights = vec![T::zero(); n];
    for (&i, wi) in corral.iter().zip(w) {
        weights[i] = wi.clone();
    }
    NearestPoint {
        point: x.iter().zip(query).map(|(a, b)| a.add(b)).collect(),
        weights,
        dist_sq: dot(x, x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    #[test]
    fn nearest_on_segment_interior() {
        let pts = vec![q(&[0, 2]), q(&[2, 0])];
        let r = nearest_point(&pts, &q(&[0, 0])).unwrap();
        assert_eq!(r.point, q(&[1, 1]));
        assert_eq!(r.dist_sq, Rational::from_integer(2));
        assert_eq!(r.weights, vec![Rational::new(1, 2), Rational::new(1, 2)]);
    }

    #[test]
    fn inside_gives_zero() {
        let pts = vec![q(&[1, 0]), q(&[-1, 1]), q(&[-1, -1]), q(&[-1, -1])];
        let r = nearest_point(&pts, &q(&[0, 0])).unwrap();
        assert!(r.dist_sq.is_zero());
    }

    #[test]
    fn float_matches_exact() {
        let pts = vec![q(&[3, 1, 0]), q(&[4, -2, 5]), q(&[2, 2, 2]), q(&[5, 5, -1])];
        let exact = nearest_point(&pts, &q(&[0, 0, 0])).unwrap();
        let fpts: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|c| c.to_f64()).collect()).collect();
        let approx = nearest_point(&fpts, &[0.0, 0.0, 0.0]).unwrap();
        assert!((approx.dist_sq - exact.dist_sq.to_f64()).abs() < 1e-9);
    }
}
