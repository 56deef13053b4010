//! Exact convexity predicates on finite point sets.
//!
//! Convex sets are always given by vertex lists; repeated and affinely
//! dependent vertices are fine, the hull of the multiset is meant.

use crate::error::{input, Result};
use crate::geometry::lp::{Domain, LinearSystem, Optimum, Relation, Sense};
use crate::geometry::min_norm::nearest_point;
use crate::geometry::point::{check_dims, Hyperplane, QPoint};
use crate::rational::Rational;

/// Axis-aligned bounding box, used as an exact necessary condition.
#[derive(Clone, Debug)]
pub struct BoundingBox {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl BoundingBox {
    pub fn of(points: &[QPoint]) -> Option<Self> {
        let first = points.first()?;
        let mut lo = first.coords().to_vec();
        let mut hi = lo.clone();
        for p in &points[1..] {
            for (k, c) in p.coords().iter().enumerate() {
                if *c < lo[k] {
                    lo[k] = c.clone();
                }
                if *c > hi[k] {
                    hi[k] = c.clone();
                }
            }
        }
        Some(BoundingBox { lo, hi })
    }

    pub fn contains(&self, p: &QPoint) -> bool {
        p.coords()
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (l, h))| l <= c && c <= h)
    }

    /// Intersection, or `None` if empty.
    pub fn meet(&self, other: &BoundingBox) -> Option<BoundingBox> {
        let lo: Vec<Rational> = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(b).clone()).collect();
        let hi: Vec<Rational> = self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(b).clone()).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            None
        } else {
            Some(BoundingBox { lo, hi })
        }
    }
}

fn common_dim(points: &[QPoint]) -> Option<usize> {
    points.first().map(QPoint::dim)
}

/// Barycentric weights `λ ≥ 0`, `Σλ = 1`, `Σ λ_i s_i = p`, or `None` if
/// `p ∉ conv S`.
pub fn in_convex_hull(p: &QPoint, set: &[QPoint]) -> Result<Option<Vec<Rational>>> {
    if set.is_empty() {
        return Ok(None);
    }
    check_dims(p.dim(), set)?;
    if let Some(i) = set.iter().position(|s| s == p) {
        let mut w = vec![Rational::zero(); set.len()];
        w[i] = Rational::one();
        return Ok(Some(w));
    }
    if !BoundingBox::of(set).unwrap().contains(p) {
        return Ok(None);
    }
    if set.len() == p.dim() + 1 {
        if let Some(lam) = barycentric(p, set) {
            return Ok(lam.iter().all(|l| !l.is_negative()).then_some(lam));
        }
    }
    let mut sys = LinearSystem::new();
    let lam = sys.add_vars(set.len(), Domain::NonNegative);
    for k in 0..p.dim() {
        let terms = lam
            .clone()
            .zip(set)
            .filter(|(_, s)| !s[k].is_zero())
            .map(|(j, s)| (j, s[k].clone()))
            .collect();
        sys.push(terms, Relation::Eq, p[k].clone());
    }
    sys.push(lam.map(|j| (j, Rational::one())).collect(), Relation::Eq, Rational::one());
    Ok(sys.feasible()?.into_witness())
}

/// Affine coordinates of `p` with respect to `d + 1` points, or `None` if the
/// points are affinely dependent.
fn barycentric(p: &QPoint, simplex: &[QPoint]) -> Option<Vec<Rational>> {
    let n = simplex.len();
    // Rows: one per coordinate plus the affine row; last column is the rhs.
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rational> = if r + 1 < n {
                simplex.iter().map(|s| s[r].clone()).collect()
            } else {
                vec![Rational::one(); n]
            };
            row.push(if r + 1 < n { p[r].clone() } else { Rational::one() });
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, piv);
        let inv = a[c][c].recip();
        for x in &mut a[c][c..] {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in c..=n {
                    let v = &a[c][k] * &f;
                    a[r][k] -= &v;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// A point common to the convex hulls of every member, or `None`.
///
/// One LP: per-member barycentric variables, with every member's combination
/// tied to the first member's, which plays the shared point.
pub fn simplices_intersect(family: &[Vec<QPoint>]) -> Result<Option<QPoint>> {
    let Some(first) = family.first() else {
        return input("empty family");
    };
    if family.iter().any(Vec::is_empty) {
        return input("family member with no vertices");
    }
    let dim = first[0].dim();
    for m in family {
        check_dims(dim, m)?;
    }
    if family.len() == 1 {
        return Ok(Some(first[0].clone()));
    }
    let mut bbox = BoundingBox::of(first).unwrap();
    for m in &family[1..] {
        match bbox.meet(&BoundingBox::of(m).unwrap()) {
            Some(b) => bbox = b,
            None => return Ok(None),
        }
    }
    Ok(intersection_lp(family)?.map(|w| QPoint::combination(first, &w[..first.len()])))
}

/// Solves the intersection LP without prefilters; returns all weights,
/// member by member.
pub(crate) fn intersection_lp(family: &[Vec<QPoint>]) -> Result<Option<Vec<Rational>>> {
    let dim = family[0][0].dim();
    let mut sys = LinearSystem::new();
    let vars: Vec<_> = family.iter().map(|m| sys.add_vars(m.len(), Domain::NonNegative)).collect();
    for v in &vars {
        sys.push(v.clone().map(|j| (j, Rational::one())).collect(), Relation::Eq, Rational::one());
    }
    for (mi, m) in family.iter().enumerate().skip(1) {
        for k in 0..dim {
            let mut terms = Vec::with_capacity(family[0].len() + m.len());
            for (j, s) in vars[0].clone().zip(&family[0]) {
                if !s[k].is_zero() {
                    terms.push((j, s[k].clone()));
                }
            }
            for (j, s) in vars[mi].clone().zip(m) {
                if !s[k].is_zero() {
                    terms.push((j, -&s[k]));
                }
            }
            sys.push(terms, Relation::Eq, Rational::zero());
        }
    }
    Ok(sys.feasible()?.into_witness())
}

/// Strictly separating hyperplane between `conv A` (positive side) and `o`.
///
/// The hyperplane returned is the perpendicular bisector of `o` and the
/// point of `conv A` nearest to it. `None` iff `o ∈ conv A`.
pub fn separating_hyperplane(set: &[QPoint], o: &QPoint) -> Result<Option<Hyperplane>> {
    check_dims(o.dim(), set)?;
    if set.is_empty() {
        // o at distance one on the negative side; A is vacuous.
        let offset = &o[0] + &Rational::one();
        return Ok(Some(Hyperplane { normal: QPoint::unit(o.dim(), 0), offset }));
    }
    let pts: Vec<Vec<Rational>> = set.iter().map(|p| p.coords().to_vec()).collect();
    let near = nearest_point(&pts, o.coords()).expect("nonempty");
    if near.dist_sq.is_zero() {
        return Ok(None);
    }
    let q = QPoint::new(near.point);
    let normal = q.sub(o);
    let mid = QPoint::lerp(o, &q, &Rational::new(1, 2));
    let offset = normal.dot(&mid);
    let h = Hyperplane { normal, offset };
    debug_assert!(h.strictly_separates(set, o));
    Ok(Some(h))
}

/// Whether the ray `{s·u : s ≥ 0}` meets `conv S`.
pub fn ray_hits_convex(direction: &QPoint, set: &[QPoint]) -> Result<bool> {
    Ok(ray_hit_parameter(direction, set)?.is_some())
}

/// The parameter `s ≥ 0` of some hit point of the ray, if any.
pub fn ray_hit_parameter(direction: &QPoint, set: &[QPoint]) -> Result<Option<Rational>> {
    if direction.is_origin() {
        return input("ray direction must be nonzero");
    }
    check_dims(direction.dim(), set)?;
    if set.is_empty() {
        return Ok(None);
    }
    let mut sys = LinearSystem::new();
    let s = sys.add_var(Domain::NonNegative);
    let lam = sys.add_vars(set.len(), Domain::NonNegative);
    for k in 0..direction.dim() {
        let mut terms: Vec<(usize, Rational)> = lam
            .clone()
            .zip(set)
            .filter(|(_, p)| !p[k].is_zero())
            .map(|(j, p)| (j, p[k].clone()))
            .collect();
        if !direction[k].is_zero() {
            terms.push((s, -&direction[k]));
        }
        sys.push(terms, Relation::Eq, Rational::zero());
    }
    sys.push(lam.map(|j| (j, Rational::one())).collect(), Relation::Eq, Rational::one());
    Ok(sys.feasible()?.into_witness().map(|w| w[s].clone()))
}

/// Exact parameter interval `{t ∈ [0,1] : a + t(b - a) ∈ conv S}`.
pub fn segment_interval(a: &QPoint, b: &QPoint, set: &[QPoint]) -> Result<Option<(Rational, Rational)>> {
    check_dims(a.dim(), set)?;
    if set.is_empty() {
        return Ok(None);
    }
    let dir = b.sub(a);
    let mut sys = LinearSystem::new();
    let t = sys.add_var(Domain::NonNegative);
    let lam = sys.add_vars(set.len(), Domain::NonNegative);
    sys.push(vec![(t, Rational::one())], Relation::Le, Rational::one());
    for k in 0..a.dim() {
        // Σ λ_i s_ik - t·dir_k = a_k
        let mut terms: Vec<(usize, Rational)> = lam
            .clone()
            .zip(set)
            .filter(|(_, p)| !p[k].is_zero())
            .map(|(j, p)| (j, p[k].clone()))
            .collect();
        if !dir[k].is_zero() {
            terms.push((t, -&dir[k]));
        }
        sys.push(terms, Relation::Eq, a[k].clone());
    }
    sys.push(lam.map(|j| (j, Rational::one())).collect(), Relation::Eq, Rational::one());
    let lo = match sys.optimize(&[(t, Rational::one())], Sense::Minimize)? {
        Optimum::Optimal { value, .. } => value,
        Optimum::Infeasible { .. } => return Ok(None),
        Optimum::Unbounded => unreachable!("t is bounded below"),
    };
    let hi = match sys.optimize(&[(t, Rational::one())], Sense::Maximize)? {
        Optimum::Optimal { value, .. } => value,
        _ => unreachable!("feasible and bounded"),
    };
    Ok(Some((lo, hi)))
}

/// Whether the closed segment `[a, b]` is covered by the union of the hulls.
pub fn segment_in_union(a: &QPoint, b: &QPoint, family: &[Vec<QPoint>]) -> Result<bool> {
    if a.dim() != b.dim() {
        return input("segment endpoints differ in dimension");
    }
    if family.is_empty() {
        return Ok(false);
    }
    let mut intervals = Vec::new();
    for m in family {
        if let Some(iv) = segment_interval(a, b, m)? {
            intervals.push(iv);
        }
    }
    Ok(intervals_cover_unit(intervals))
}

/// Closed intervals covering `[0, 1]`.
pub fn intervals_cover_unit(mut intervals: Vec<(Rational, Rational)>) -> bool {
    intervals.sort();
    let mut reach = Rational::zero();
    let mut started = false;
    for (lo, hi) in intervals {
        if lo > reach {
            break;
        }
        if !started || hi > reach {
            reach = hi.max(reach);
        }
        started = true;
        if reach >= Rational::one() {
            return true;
        }
    }
    started && reach >= Rational::one()
}

/// The dimension shared by a nonempty family, or an input error.
pub fn family_dim(family: &[Vec<QPoint>]) -> Result<usize> {
    let dim = family
        .iter()
        .find_map(|m| common_dim(m))
        .ok_or_else(|| crate::error::Error::Input("empty family".into()))?;
    for m in family {
        check_dims(dim, m)?;
    }
    Ok(dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> QPoint {
        QPoint::from_ints(c)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn hull_vertex_is_unit_weight() {
        let s = vec![p(&[3, 1]), p(&[0, 0]), p(&[5, 5])];
        assert_eq!(
            in_convex_hull(&p(&[3, 1]), &s).unwrap().unwrap(),
            vec![q(1, 1), q(0, 1), q(0, 1)]
        );
    }

    #[test]
    fn hull_barycentric_example() {
        let s = vec![p(&[1, 0]), p(&[-1, 1]), p(&[-1, -1])];
        assert_eq!(
            in_convex_hull(&p(&[0, 0]), &s).unwrap().unwrap(),
            vec![q(1, 2), q(1, 4), q(1, 4)]
        );
    }

    #[test]
    fn hull_outside_and_empty() {
        let s = vec![p(&[1, 0]), p(&[-1, 1]), p(&[-1, -1])];
        assert!(in_convex_hull(&p(&[5, 5]), &s).unwrap().is_none());
        assert!(in_convex_hull(&p(&[0, 0]), &[]).unwrap().is_none());
        assert!(in_convex_hull(&p(&[0, 0, 0]), &s).is_err());
    }

    #[test]
    fn crossing_segments_meet_at_center() {
        let fam = vec![vec![p(&[0, 0]), p(&[2, 2])], vec![p(&[0, 2]), p(&[2, 0])]];
        assert_eq!(simplices_intersect(&fam).unwrap(), Some(p(&[1, 1])));
        let single = vec![vec![p(&[4, 4]), p(&[1, 1])]];
        assert_eq!(simplices_intersect(&single).unwrap(), Some(p(&[4, 4])));
    }

    #[test]
    fn separated_triangles_do_not_meet() {
        let fam = vec![
            vec![p(&[0, 0]), p(&[4, 0]), p(&[0, 4])],
            vec![p(&[6, 0]), p(&[9, 1]), p(&[7, 5])],
        ];
        assert!(simplices_intersect(&fam).unwrap().is_none());
        // Bounding boxes overlap here, so the LP decides.
        let fam2 = vec![
            vec![p(&[0, 0]), p(&[4, 0]), p(&[0, 4])],
            vec![p(&[4, 4]), p(&[1, 4]), p(&[4, 1])],
        ];
        assert!(simplices_intersect(&fam2).unwrap().is_none());
        assert!(simplices_intersect(&[vec![p(&[0])], vec![p(&[0, 0])]]).is_err());
    }

    #[test]
    fn separation_examples() {
        let h = separating_hyperplane(&[p(&[1, 0]), p(&[2, 0])], &p(&[0, 0])).unwrap().unwrap();
        assert_eq!(h.normal, p(&[1, 0]));
        assert_eq!(h.offset, q(1, 2));
        let h = separating_hyperplane(&[p(&[1, 1])], &p(&[0, 0])).unwrap().unwrap();
        assert_eq!(h.normal, p(&[1, 1]));
        assert_eq!(h.offset, q(1, 1));
        let inside = [p(&[1, 0]), p(&[-1, 1]), p(&[-1, -1])];
        assert!(separating_hyperplane(&inside, &p(&[0, 0])).unwrap().is_none());
        let empty = separating_hyperplane(&[], &p(&[3, 4])).unwrap().unwrap();
        assert!(empty.eval(&p(&[3, 4])).is_negative());
    }

    #[test]
    fn ray_examples() {
        let tri = vec![p(&[0, 0, 0]), p(&[1, 2, 3]), p(&[-2, 1, 1])];
        assert!(ray_hits_convex(&p(&[5, 1, 1]), &tri).unwrap());
        let behind = vec![p(&[-1, 0, 0]), p(&[-1, 1, 0]), p(&[-1, 0, 1])];
        assert!(!ray_hits_convex(&p(&[1, 0, 0]), &behind).unwrap());
        let seg = vec![p(&[0, 2]), p(&[2, 0])];
        assert_eq!(ray_hit_parameter(&p(&[1, 1]), &seg).unwrap(), Some(q(1, 1)));
        assert!(ray_hits_convex(&p(&[0, 0]), &seg).is_err());
    }

    #[test]
    fn segment_cover_examples() {
        let line = |a: i64, b: i64, c: i64, d: i64| vec![QPoint::new(vec![q(a, b)]), QPoint::new(vec![q(c, d)])];
        let (a, b) = (p(&[0]), p(&[2]));
        assert!(segment_in_union(&a, &b, &[line(0, 1, 1, 1), line(1, 1, 2, 1)]).unwrap());
        assert!(!segment_in_union(&a, &b, &[line(0, 1, 1, 1), line(3, 2, 2, 1)]).unwrap());
        assert!(segment_in_union(&p(&[1, 1]), &p(&[2, 1]), &[vec![p(&[0, 0]), p(&[4, 0]), p(&[0, 4])]]).unwrap());
        assert!(!segment_in_union(&a, &b, &[]).unwrap());
        assert!(segment_in_union(&a, &a, &[line(0, 1, 1, 1)]).unwrap());
    }

    fn small_points(dim: usize, max: usize) -> impl Strategy<Value = Vec<QPoint>> {
        prop::collection::vec(prop::collection::vec(-4i64..=4, dim), 1..=max)
            .prop_map(|v| v.into_iter().map(|c| QPoint::from_ints(&c)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn hull_and_separation_are_dual(set in small_points(2, 5), o in prop::collection::vec(-4i64..=4, 2)) {
            let o = QPoint::from_ints(&o);
            let inside = in_convex_hull(&o, &set).unwrap();
            let sep = separating_hyperplane(&set, &o).unwrap();
            prop_assert_eq!(inside.is_some(), sep.is_none());
            if let Some(w) = inside {
                prop_assert_eq!(QPoint::combination(&set, &w), o.clone());
            }
            if let Some(h) = sep {
                prop_assert!(h.strictly_separates(&set, &o));
            }
        }

        #[test]
        fn simplex_fast_path_matches_lp(
            set in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 4),
            o in prop::collection::vec(-3i64..=3, 3),
        ) {
            let set: Vec<QPoint> = set.iter().map(|c| QPoint::from_ints(c)).collect();
            let o = QPoint::from_ints(&o);
            let fast = in_convex_hull(&o, &set).unwrap();
            // A repeated vertex forces the LP path.
            let mut padded = set.clone();
            padded.push(set[0].clone());
            let lp = in_convex_hull(&o, &padded).unwrap();
            prop_assert_eq!(fast.is_some(), lp.is_some());
            if let Some(w) = fast {
                prop_assert!(w.iter().all(|x| !x.is_negative()));
                prop_assert_eq!(w.iter().sum::<Rational>(), Rational::one());
                prop_assert_eq!(QPoint::combination(&set, &w), o);
            }
        }

        #[test]
        fn intersection_is_monotone(fam in prop::collection::vec(small_points(2, 3), 2..=4)) {
            if let Some(x) = simplices_intersect(&fam).unwrap() {
                for m in &fam {
                    prop_assert!(in_convex_hull(&x, m).unwrap().is_some());
                }
                for skip in 0..fam.len() {
                    let sub: Vec<_> = fam.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, m)| m.clone()).collect();
                    prop_assert!(simplices_intersect(&sub).unwrap().is_some());
                }
            }
        }
    }
}
