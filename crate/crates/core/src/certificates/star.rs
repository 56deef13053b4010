use serde::{Deserialize, Serialize};

use super::tverberg::{find_tverberg, TverbergCertificate};
use crate::error::{input, Error, Result};
use crate::geometry::convex::{in_convex_hull, intersection_lp, segment_in_union};
use crate::geometry::point::QPoint;
use crate::join::{augment, enumerate_independent, rank, Instance, Label};
use crate::rational::Rational;
use crate::rng::SplitMix64;

/// `T_part ∪ y` is independent and of full size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PigeonholeEntry {
    pub y: Vec<Label>,
    pub part: usize,
}

/// A sampled point of a basis simplex whose segment to the center was
/// checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentCheck {
    pub basis: Vec<Label>,
    pub weights: Vec<Rational>,
    pub target: QPoint,
}

/// A star center with the data proving it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarCenterReport {
    pub center: QPoint,
    pub tverberg: TverbergCertificate,
    /// One entry per independent set of size at most `d`, in shortlex order.
    pub pigeonhole: Vec<PigeonholeEntry>,
    pub segment_checks: Vec<SegmentCheck>,
}

/// Builds a star center from a Tverberg partition of an independent set of
/// size `d(d+1)+1`, then spot-checks `samples` random segments.
pub fn star_certificate(instance: &Instance, samples: usize, seed: u64) -> Result<StarCenterReport> {
    let d = instance.dimension();
    let need = d * (d + 1) + 1;
    if instance.full_rank() < need {
        return Err(Error::Precondition(format!("rank {} does not exceed d(d+1) = {}", instance.full_rank(), need - 1)));
    }
    let mut t_idx: Vec<usize> = Vec::with_capacity(need);
    for x in 0..instance.ground().len() {
        if t_idx.len() == need {
            break;
        }
        t_idx.push(x);
        if !instance.independent_idx(&t_idx) {
            t_idx.pop();
        }
    }
    if t_idx.len() < need {
        return Err(Error::Inconsistency("greedy independent set falls short of the rank".into()));
    }
    let t_labels = instance.labels_at(&t_idx);
    let local = find_tverberg(&instance.points_at(&t_idx), d + 1)?
        .ok_or_else(|| Error::Inconsistency("no Tverberg partition of d(d+1)+1 points".into()))?;
    let parts: Vec<Vec<Label>> =
        local.parts.iter().map(|p| p.iter().map(|&i| t_labels[i as usize]).collect()).collect();
    let tverberg = TverbergCertificate { parts, point: local.point, weights: local.weights };

    let mut pigeonhole = Vec::new();
    for y in enumerate_independent(instance, d) {
        let part = if instance.is_partition() {
            (0..=d).find(|&j| fits(instance, &tverberg.parts[j], &y))
        } else {
            via_augmentation(instance, &t_labels, &tverberg.parts, &y)?
        };
        match part {
            Some(j) if fits(instance, &tverberg.parts[j], &y) => pigeonhole.push(PigeonholeEntry { y, part: j }),
            _ => return Err(Error::Inconsistency(format!("no Tverberg part extends {y:?}"))),
        }
    }

    let center = tverberg.point.clone();
    let family = instance.basis_simplices();
    let bases = instance.bases_idx();
    let mut segment_checks = Vec::with_capacity(samples);
    for s in 0..samples {
        let mut rng = SplitMix64::for_index(seed, s as u64);
        let b = &bases[rng.below(bases.len() as u64) as usize];
        let raw: Vec<i64> = b.iter().map(|_| 1 + rng.below(8) as i64).collect();
        let total: i64 = raw.iter().sum();
        let weights: Vec<Rational> = raw.iter().map(|&w| Rational::new(w, total)).collect();
        let target = QPoint::combination(&instance.points_at(b), &weights);
        if !segment_in_union(&center, &target, &family)? {
            return Err(Error::Inconsistency(format!("segment from {center:?} to {target:?} leaves the join")));
        }
        segment_checks.push(SegmentCheck { basis: instance.labels_at(b), weights, target });
    }
    Ok(StarCenterReport { center, tverberg, pigeonhole, segment_checks })
}

fn fits(instance: &Instance, part: &[Label], y: &[Label]) -> bool {
    if part.iter().any(|l| y.contains(l)) {
        return false;
    }
    let mut u: Vec<Label> = part.iter().chain(y).copied().collect();
    u.sort_unstable();
    instance.is_independent(&u).unwrap_or(false)
}

/// Extends `y` from `t` to full size; the added elements miss at most `|y|`
/// elements of `t`, so some part lies inside them.
fn via_augmentation(instance: &Instance, t: &[Label], parts: &[Vec<Label>], y: &[Label]) -> Result<Option<usize>> {
    let mut cur: Vec<Label> = y.to_vec();
    let mut added: Vec<Label> = Vec::new();
    while cur.len() < t.len() {
        let x = augment(instance, &cur, t)?;
        cur.push(x);
        cur.sort_unstable();
        added.push(x);
    }
    Ok(parts.iter().position(|p| p.iter().all(|l| added.contains(l))))
}

impl StarCenterReport {
    /// Standalone check of every recorded claim.
    pub fn verify(&self, instance: &Instance) -> Result<bool> {
        let d = instance.dimension();
        let tv = &self.tverberg;
        let mut t: Vec<Label> = tv.parts.iter().flatten().copied().collect();
        t.sort_unstable();
        if tv.parts.len() != d + 1 || t.len() != d * (d + 1) + 1 || !instance.is_independent(&t)? {
            return Ok(false);
        }
        if !tv.verify_with(|l| instance.ground().point(l).ok().cloned()) || self.center != tv.point {
            return Ok(false);
        }
        let expected: Vec<Vec<Label>> = enumerate_independent(instance, d).collect();
        if expected.len() != self.pigeonhole.len() {
            return Ok(false);
        }
        for (y, e) in expected.iter().zip(&self.pigeonhole) {
            if *y != e.y || e.part > d {
                return Ok(false);
            }
            let tj = &tv.parts[e.part];
            let mut u: Vec<Label> = tj.iter().chain(y).copied().collect();
            u.sort_unstable();
            u.dedup();
            if u.len() != tj.len() + y.len() || rank(instance, &u)? != u.len() {
                return Ok(false);
            }
        }
        let family = instance.basis_simplices();
        for c in &self.segment_checks {
            if c.basis.len() != instance.full_rank() || !instance.is_independent(&c.basis)? {
                return Ok(false);
            }
            if c.weights.len() != c.basis.len()
                || c.weights.iter().any(Rational::is_negative)
                || c.weights.iter().sum::<Rational>() != Rational::one()
                || QPoint::combination(&instance.points_of(&c.basis)?, &c.weights) != c.target
            {
                return Ok(false);
            }
            if !segment_in_union(&self.center, &c.target, &family)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A point of the intersection of `conv(X \ Y)` over all colorful `Y` of size
/// `d`; any such point is a star center. `None` if the intersection is empty.
pub fn d_core_point(instance: &Instance) -> Result<Option<QPoint>> {
    if !instance.is_partition() {
        return Err(Error::Precondition("d-core points are defined for color classes".into()));
    }
    let d = instance.dimension();
    if d > instance.full_rank() {
        return input(format!("dimension {d} exceeds rank {}", instance.full_rank()));
    }
    let n = instance.ground().len();
    let mut family: Vec<Vec<QPoint>> = Vec::new();
    for y in instance.independent_idx_sets(d).filter(|y| y.len() == d) {
        let rest: Vec<usize> = (0..n).filter(|i| y.binary_search(i).is_err()).collect();
        if rest.is_empty() {
            return Ok(None);
        }
        family.push(instance.points_at(&rest));
    }
    Ok(intersection_lp(&family)?.map(|w| QPoint::combination(&family[0], &w[..family[0].len()])))
}

/// Exact check that `p` lies in `conv(X \ Y)` for every colorful `Y` of size `d`.
pub fn is_d_core_point(instance: &Instance, p: &QPoint) -> Result<bool> {
    if !instance.is_partition() {
        return Err(Error::Precondition("d-core points are defined for color classes".into()));
    }
    if p.dim() != instance.dimension() {
        return Ok(false);
    }
    let d = instance.dimension();
    let n = instance.ground().len();
    for y in instance.independent_idx_sets(d).filter(|y| y.len() == d) {
        let rest: Vec<usize> = (0..n).filter(|i| y.binary_search(i).is_err()).collect();
        if rest.is_empty() || in_convex_hull(p, &instance.points_at(&rest))?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::partition_instance;
    use crate::harness::{generate_instance, SearchConfig};

    #[test]
    fn line_with_three_classes() {
        let inst = partition_instance(1, &[&[&[0], &[7]], &[&[3]], &[&[-2], &[5]]]).unwrap();
        let r = star_certificate(&inst, 10, 1).unwrap();
        assert!(r.verify(&inst).unwrap());
        assert_eq!(r.tverberg.parts.iter().map(Vec::len).sum::<usize>(), 3);
        // On the line the join is an interval; the center must lie in it.
        assert!(r.center[0] >= Rational::from_integer(-2) && r.center[0] <= Rational::from_integer(7));
    }

    #[test]
    fn identical_singletons() {
        let p: &[i64] = &[2, -1];
        let class: &[&[i64]] = &[p];
        let classes = vec![class; 7];
        let inst = partition_instance(2, &classes).unwrap();
        let r = star_certificate(&inst, 3, 0).unwrap();
        assert_eq!(r.center, QPoint::from_ints(p));
        assert!(r.verify(&inst).unwrap());
    }

    #[test]
    fn planar_seven_classes_table_is_exhaustive() {
        let cfg = SearchConfig::new(2, vec![2; 7]).with_seed(11);
        let inst = generate_instance(&cfg, 0).unwrap();
        let r = star_certificate(&inst, 5, 3).unwrap();
        // 1 + 14 singletons + C(7,2)·4 pairs.
        assert_eq!(r.pigeonhole.len(), 1 + 14 + 84);
        assert!(r.verify(&inst).unwrap());
        let mut bad = r.clone();
        let e = bad.pigeonhole.iter_mut().find(|e| e.y.len() == 2).unwrap();
        // A part that meets y's colors cannot be recorded.
        let clash = (0..3)
            .find(|&j| !fits(&inst, &r.tverberg.parts[j], &e.y))
            .expect("some part clashes with a pair");
        e.part = clash;
        assert!(!bad.verify(&inst).unwrap());
    }

    #[test]
    fn uniform_matroid_uses_augmentation() {
        let mut cfg = SearchConfig::new(2, vec![10]).with_seed(5);
        cfg.matroid = crate::harness::MatroidChoice::Uniform(7);
        let inst = generate_instance(&cfg, 0).unwrap();
        let r = star_certificate(&inst, 5, 0).unwrap();
        assert!(r.verify(&inst).unwrap());
    }

    #[test]
    fn rank_too_small() {
        let inst = partition_instance(2, &[&[&[0, 0]], &[&[1, 0]], &[&[0, 1]]]).unwrap();
        assert!(matches!(star_certificate(&inst, 1, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn d_core_examples() {
        let same = partition_instance(2, &[&[&[1, 1], &[1, 1]], &[&[1, 1]], &[&[1, 1]]]).unwrap();
        assert_eq!(d_core_point(&same).unwrap(), Some(QPoint::from_ints(&[1, 1])));

        let line = partition_instance(1, &[&[&[0], &[10]], &[&[4], &[6]]]).unwrap();
        let x = d_core_point(&line).unwrap().unwrap();
        assert!(x[0] >= Rational::from_integer(4) && x[0] <= Rational::from_integer(6));
        assert!(is_d_core_point(&line, &x).unwrap());
        assert!(!is_d_core_point(&line, &QPoint::from_ints(&[3])).unwrap());

        // conv(X \ {a, c}) and conv(X \ {b, e}) are the two far-apart segments.
        let far = partition_instance(2, &[&[&[0, 0], &[100, 100]], &[&[1, 0]], &[&[100, 101]]]).unwrap();
        assert_eq!(d_core_point(&far).unwrap(), None);
    }

    #[test]
    fn d_core_point_lies_in_every_complement() {
        let cfg = SearchConfig::new(2, vec![2; 7]).with_seed(2).with_bound(5);
        let inst = generate_instance(&cfg, 0).unwrap();
        if let Some(x) = d_core_point(&inst).unwrap() {
            let n = inst.ground().len();
            for y in inst.independent_idx_sets(2).filter(|y| y.len() == 2) {
                let rest: Vec<usize> = (0..n).filter(|i| !y.contains(i)).collect();
                assert!(in_convex_hull(&x, &inst.points_at(&rest)).unwrap().is_some());
            }
            assert!(is_d_core_point(&inst, &x).unwrap());
        }
    }
}
