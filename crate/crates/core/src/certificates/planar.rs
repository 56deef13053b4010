use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::geometry::convex::segment_in_union;
use crate::geometry::point::QPoint;
use crate::rational::Rational;

fn cross(u: &QPoint, v: &QPoint) -> Rational {
    &u[0] * &v[1] - &u[1] * &v[0]
}

fn on_segment(p: &QPoint, a: &QPoint, b: &QPoint) -> bool {
    let ab = b.sub(a);
    let ap = p.sub(a);
    if !cross(&ab, &ap).is_zero() {
        return false;
    }
    let t = ap.dot(&ab);
    !t.is_negative() && t <= ab.norm_sq()
}

/// A common point of two closed segments, if any. Overlapping collinear
/// segments give their lexicographically smallest common endpoint.
pub fn segment_meet(p0: &QPoint, p1: &QPoint, q0: &QPoint, q1: &QPoint) -> Option<QPoint> {
    let r = p1.sub(p0);
    let s = q1.sub(q0);
    let denom = cross(&r, &s);
    if denom.is_zero() {
        return [p0, p1, q0, q1]
            .into_iter()
            .filter(|x| on_segment(x, p0, p1) && on_segment(x, q0, q1))
            .min()
            .cloned();
    }
    let qp = q0.sub(p0);
    let t = &cross(&qp, &s) / &denom;
    let u = &cross(&qp, &r) / &denom;
    let inside = |x: &Rational| !x.is_negative() && *x <= Rational::one();
    (inside(&t) && inside(&u)).then(|| QPoint::lerp(p0, p1, &t))
}

/// Monotone in the angle between `u` and `v` under the diagonal metric `g`:
/// `-sign(cos)·cos²`. `None` for a zero vector.
fn angle_key(u: &QPoint, v: &QPoint, g: &[Rational; 2]) -> Option<Rational> {
    let dot = |a: &QPoint, b: &QPoint| &(&g[0] * &(&a[0] * &b[0])) + &(&g[1] * &(&a[1] * &b[1]));
    let uu = dot(u, u);
    let vv = dot(v, v);
    if uu.is_zero() || vv.is_zero() {
        return None;
    }
    let uv = dot(u, v);
    let c2 = &(&uv * &uv) / &(&uu * &vv);
    Some(if uv.is_positive() { -c2 } else { c2 })
}

/// Directed colorful edges `v → w`, indexed by `i·|X₂| + j`.
fn edges(x1: &[QPoint], x2: &[QPoint]) -> Vec<(QPoint, QPoint)> {
    x1.iter().flat_map(|v| x2.iter().map(move |w| (v.clone(), w.clone()))).collect()
}

fn check_classes(x1: &[QPoint], x2: &[QPoint]) -> Result<()> {
    if x1.is_empty() || x2.is_empty() {
        return input("both classes must be nonempty");
    }
    if x1.iter().chain(x2).any(|p| p.dim() != 2) {
        return input("planar star center needs points in the plane");
    }
    Ok(())
}

/// Common point of the pair of meeting colorful edges with the largest
/// angle between their directions; ties go to the lexicographically first
/// pair of edge indices.
pub fn planar_star_center(x1: &[QPoint], x2: &[QPoint]) -> Result<QPoint> {
    star_center_in_metric(x1, x2, &[Rational::one(), Rational::one()])
}

/// [`planar_star_center`] with angles measured in the metric
/// `g₀·dx² + g₁·dy²`.
pub(crate) fn star_center_in_metric(x1: &[QPoint], x2: &[QPoint], g: &[Rational; 2]) -> Result<QPoint> {
    check_classes(x1, x2)?;
    if x1.len() == 1 {
        return Ok(x1[0].clone());
    }
    if x2.len() == 1 {
        return Ok(x2[0].clone());
    }
    let e = edges(x1, x2);
    let mut best: Option<(Rational, QPoint)> = None;
    for a in 0..e.len() {
        let da = e[a].1.sub(&e[a].0);
        for b in a + 1..e.len() {
            let db = e[b].1.sub(&e[b].0);
            let Some(key) = angle_key(&da, &db, g) else { continue };
            if best.as_ref().is_some_and(|(k, _)| key.cmp(k) != Ordering::Greater) {
                continue;
            }
            if let Some(x) = segment_meet(&e[a].0, &e[a].1, &e[b].0, &e[b].1) {
                best = Some((key, x));
            }
        }
    }
    Ok(best.map_or_else(|| x1[0].clone(), |(_, x)| x))
}

/// One sampled segment from the center to a point on a colorful edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSample {
    pub target: QPoint,
    /// Inside the colorful edges plus the triangles of edge pairs sharing a
    /// vertex.
    pub in_region: bool,
    /// Inside the colorful edges alone.
    pub in_join: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarKernelReport {
    pub center: QPoint,
    pub samples: Vec<KernelSample>,
}

impl PlanarKernelReport {
    pub fn failures(&self) -> usize {
        self.samples.iter().filter(|s| !s.in_region).count()
    }

    /// Samples seen from the center through the region but not through the
    /// edges themselves.
    pub fn outside_join(&self) -> usize {
        self.samples.iter().filter(|s| s.in_region && !s.in_join).count()
    }
}

/// Checks `samples` segments from `center` to points spread over the
/// colorful edges. Failures are reported, not raised.
pub fn verify_planar_kernel(x1: &[QPoint], x2: &[QPoint], center: &QPoint, samples: usize) -> Result<PlanarKernelReport> {
    check_classes(x1, x2)?;
    let e = edges(x1, x2);
    let joins: Vec<Vec<QPoint>> = e.iter().map(|(v, w)| vec![v.clone(), w.clone()]).collect();
    let mut region = joins.clone();
    for (a, (v, w)) in e.iter().enumerate() {
        for (v2, w2) in &e[a + 1..] {
            if v == v2 {
                region.push(vec![v.clone(), w.clone(), w2.clone()]);
            } else if w == w2 {
                region.push(vec![v.clone(), v2.clone(), w.clone()]);
            }
        }
    }
    let rounds = samples.div_ceil(e.len()) as i64;
    let mut out = Vec::with_capacity(samples);
    for s in 0..samples {
        let (v, w) = &e[s % e.len()];
        let t = Rational::new((s / e.len()) as i64 + 1, rounds + 1);
        let target = QPoint::lerp(v, w, &t);
        let in_join = segment_in_union(center, &target, &joins)?;
        let in_region = in_join || segment_in_union(center, &target, &region)?;
        out.push(KernelSample { target, in_region, in_join });
    }
    Ok(PlanarKernelReport { center: center.clone(), samples: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(c: &[&[i64]]) -> Vec<QPoint> {
        c.iter().map(|p| QPoint::from_ints(p)).collect()
    }

    #[test]
    fn meeting_segments() {
        let p = |x, y| QPoint::from_ints(&[x, y]);
        assert_eq!(segment_meet(&p(-1, -1), &p(1, 1), &p(-1, 1), &p(1, -1)), Some(p(0, 0)));
        assert_eq!(segment_meet(&p(0, 0), &p(1, 0), &p(1, 0), &p(1, 5)), Some(p(1, 0)));
        assert_eq!(segment_meet(&p(0, 0), &p(1, 0), &p(0, 1), &p(1, 1)), None);
        assert_eq!(segment_meet(&p(0, 0), &p(4, 0), &p(6, 0), &p(2, 0)), Some(p(2, 0)));
        assert_eq!(segment_meet(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)), None);
        assert_eq!(segment_meet(&p(0, 0), &p(2, 2), &p(0, 2), &p(3, -1)), Some(p(1, 1)));
    }

    #[test]
    fn single_segment() {
        let a = pts(&[&[0, 0]]);
        let b = pts(&[&[3, 1]]);
        assert_eq!(planar_star_center(&a, &b).unwrap(), a[0]);
        let r = verify_planar_kernel(&a, &b, &a[0], 5).unwrap();
        assert_eq!(r.failures(), 0);
    }

    #[test]
    fn crossing_diagonals() {
        let x1 = pts(&[&[-1, -1], &[-1, 1]]);
        let x2 = pts(&[&[1, 1], &[1, -1]]);
        let c = planar_star_center(&x1, &x2).unwrap();
        assert_eq!(c, QPoint::from_ints(&[0, 0]));
        let r = verify_planar_kernel(&x1, &x2, &c, 16).unwrap();
        assert_eq!(r.failures(), 0);
        // Points on the two diagonals are seen along the edges themselves.
        assert!(r.samples.iter().enumerate().all(|(s, k)| k.in_join == (s % 4 == 0 || s % 4 == 3)));
    }

    #[test]
    fn square_takes_first_right_angle() {
        // All meeting pairs form right angles; the first pair (edges 0 and 1)
        // shares the vertex (-1,-1).
        let x1 = pts(&[&[-1, -1], &[1, 1]]);
        let x2 = pts(&[&[-1, 1], &[1, -1]]);
        assert_eq!(planar_star_center(&x1, &x2).unwrap(), QPoint::from_ints(&[-1, -1]));
    }

    #[test]
    fn brute_force_angle_order() {
        // Compare against floating-point angles on a fixed configuration.
        let x1 = pts(&[&[0, 0], &[4, 1], &[1, 5]]);
        let x2 = pts(&[&[3, 3], &[-2, 2], &[5, -1]]);
        let e = edges(&x1, &x2);
        let mut best = (-1.0f64, 0usize, 0usize);
        for a in 0..e.len() {
            for b in a + 1..e.len() {
                if segment_meet(&e[a].0, &e[a].1, &e[b].0, &e[b].1).is_none() {
                    continue;
                }
                let u = e[a].1.sub(&e[a].0).to_f64();
                let v = e[b].1.sub(&e[b].0).to_f64();
                let ang = ((u[0] * v[0] + u[1] * v[1]) / (u[0].hypot(u[1]) * v[0].hypot(v[1]))).clamp(-1.0, 1.0).acos();
                if ang > best.0 + 1e-12 {
                    best = (ang, a, b);
                }
            }
        }
        let expect = segment_meet(&e[best.1].0, &e[best.1].1, &e[best.2].0, &e[best.2].1).unwrap();
        assert_eq!(planar_star_center(&x1, &x2).unwrap(), expect);
    }

    #[test]
    fn errors() {
        assert!(planar_star_center(&[], &pts(&[&[0, 0]])).is_err());
        assert!(planar_star_center(&pts(&[&[0, 0, 0]]), &pts(&[&[0, 0, 1]])).is_err());
    }
}
