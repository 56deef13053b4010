//! Instances (color classes or matroids over labeled points) and membership
//! in their geometric join, the union of the hulls of independent sets.

mod instance;
mod matroid;

pub use instance::{GroundSet, Instance, InstanceFile};
pub use matroid::{Combinations, Label, MatroidSpec};

pub(crate) use instance::hex_digest;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::geometry::convex::in_convex_hull;
use crate::geometry::point::QPoint;
use crate::rational::Rational;

/// Rank of a label set.
pub fn rank(instance: &Instance, subset: &[Label]) -> Result<usize> {
    let idx = instance.indices(subset)?;
    Ok(instance.oracle().rank_of(&idx))
}

/// Smallest `b ∈ B \ A` with `A + b` independent.
pub fn augment(instance: &Instance, a: &[Label], b: &[Label]) -> Result<Label> {
    if !instance.is_independent(a)? || !instance.is_independent(b)? {
        return input("augment needs independent sets");
    }
    if a.len() >= b.len() {
        return input("augment needs |A| < |B|");
    }
    let ai = instance.indices(a)?;
    let bi = instance.indices(b)?;
    for &x in &bi {
        if ai.binary_search(&x).is_ok() {
            continue;
        }
        let mut trial = ai.clone();
        trial.push(x);
        trial.sort_unstable();
        if instance.independent_idx(&trial) {
            return Ok(instance.labels_at(&[x])[0]);
        }
    }
    Err(Error::Inconsistency("augmentation axiom failed".into()))
}

/// Independent sets of size at most `max_size`, by size and then
/// lexicographically.
pub fn enumerate_independent(instance: &Instance, max_size: usize) -> impl Iterator<Item = Vec<Label>> + '_ {
    instance.independent_idx_sets(max_size).map(|s| instance.labels_at(&s))
}

/// All bases in lexicographic order.
pub fn enumerate_bases(instance: &Instance) -> impl Iterator<Item = Vec<Label>> + '_ {
    instance.bases_idx().iter().map(|b| instance.labels_at(b))
}

/// An independent set whose hull contains a query point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipWitness {
    pub labels: Vec<Label>,
    pub weights: Vec<Rational>,
}

impl MembershipWitness {
    /// Exact standalone check against `p`.
    pub fn verify(&self, instance: &Instance, p: &QPoint) -> Result<bool> {
        if self.labels.is_empty()
            || self.labels.len() != self.weights.len()
            || self.labels.len() > instance.dimension() + 1
            || !instance.is_independent(&self.labels)?
            || self.weights.iter().any(Rational::is_negative)
            || self.weights.iter().sum::<Rational>() != Rational::one()
        {
            return Ok(false);
        }
        let pts = self.labels.iter().map(|&l| instance.ground().point(l).cloned()).collect::<Result<Vec<_>>>()?;
        Ok(QPoint::combination(&pts, &self.weights) == *p)
    }
}

/// Witness that `p` lies in the join, searching independent sets of size at
/// most `min(r, d+1)` in shortlex order.
pub fn join_contains(instance: &Instance, p: &QPoint) -> Result<Option<MembershipWitness>> {
    if p.dim() != instance.dimension() {
        return input(format!("query has dimension {}, instance {}", p.dim(), instance.dimension()));
    }
    for set in instance.independent_idx_sets(instance.dimension() + 1) {
        if set.is_empty() {
            continue;
        }
        let pts = instance.points_at(&set);
        if let Some(weights) = in_convex_hull(p, &pts)? {
            return Ok(Some(MembershipWitness { labels: instance.labels_at(&set), weights }));
        }
    }
    Ok(None)
}

/// Both sides of the colorful Carathéodory implication at one point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaratheodoryReport {
    /// `p ∈ conv X_i`, per class.
    pub in_class_hull: Vec<bool>,
    pub hypothesis_met: bool,
    pub witness: Option<MembershipWitness>,
}

/// If `p` is in every class hull it must be in the join; a miss is reported
/// as an inconsistency.
pub fn colorful_caratheodory_check(instance: &Instance, p: &QPoint) -> Result<CaratheodoryReport> {
    let Some(m) = instance.class_count() else {
        return Err(Error::Precondition("colorful Carathéodory needs color classes".into()));
    };
    let d = instance.dimension();
    if m < d + 1 {
        return Err(Error::Precondition(format!("{m} classes, need at least {}", d + 1)));
    }
    let mut in_class_hull = Vec::with_capacity(m);
    for i in 0..m {
        in_class_hull.push(in_convex_hull(p, &instance.class_points(i).unwrap())?.is_some());
    }
    let hypothesis_met = in_class_hull.iter().all(|&b| b);
    let witness = join_contains(instance, p)?;
    if hypothesis_met && witness.is_none() {
        return Err(Error::Inconsistency(format!("{p:?} is in every class hull but not in the join")));
    }
    Ok(CaratheodoryReport { in_class_hull, hypothesis_met, witness })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use proptest::prelude::*;

    fn labeled(dim: usize, pts: &[(Label, &[i64])], spec: MatroidSpec) -> Instance {
        let map: BTreeMap<_, _> = pts.iter().map(|(l, c)| (*l, QPoint::from_ints(c))).collect();
        Instance::new(GroundSet::new(dim, map).unwrap(), spec).unwrap()
    }

    fn line_partition(classes: &[&[(Label, i64)]]) -> Instance {
        let mut pts = Vec::new();
        let mut cls = Vec::new();
        for c in classes {
            cls.push(c.iter().map(|(l, _)| *l).collect());
            for (l, x) in c.iter() {
                pts.push((*l, vec![*x]));
            }
        }
        let refs: Vec<(Label, &[i64])> = pts.iter().map(|(l, v)| (*l, v.as_slice())).collect();
        labeled(1, &refs, MatroidSpec::Partition { classes: cls })
    }

    fn uniform(n: u32, r: usize) -> Instance {
        let pts: Vec<(Label, Vec<i64>)> = (1..=n).map(|l| (l, vec![l as i64])).collect();
        let refs: Vec<(Label, &[i64])> = pts.iter().map(|(l, v)| (*l, v.as_slice())).collect();
        labeled(1, &refs, MatroidSpec::Uniform { rank: r })
    }

    #[test]
    fn rank_examples() {
        let inst = line_partition(&[&[(1, 0), (2, 5)], &[(3, 1)]]);
        assert_eq!(rank(&inst, &[]).unwrap(), 0);
        assert_eq!(rank(&inst, &[1, 2]).unwrap(), 1);
        assert_eq!(rank(&inst, &[1, 2, 3]).unwrap(), 2);
        assert_eq!(rank(&uniform(5, 3), &[1, 2, 4, 5]).unwrap(), 3);
        assert!(rank(&inst, &[9]).is_err());
    }

    #[test]
    fn augment_examples() {
        let u = uniform(4, 2);
        assert_eq!(augment(&u, &[], &[3]).unwrap(), 3);
        assert_eq!(augment(&u, &[1], &[2, 3]).unwrap(), 2);
        let p = line_partition(&[&[(1, 0), (2, 1)], &[(3, 2)]]);
        assert_eq!(augment(&p, &[1], &[2, 3]).unwrap(), 3);
        assert!(augment(&p, &[1, 2], &[3]).is_err());
        assert!(augment(&u, &[1, 2], &[3, 4]).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let p = line_partition(&[&[(1, 0), (2, 1)], &[(3, 2)]]);
        let got: Vec<_> = enumerate_independent(&p, 2).collect();
        assert_eq!(got, vec![vec![], vec![1], vec![2], vec![3], vec![1, 3], vec![2, 3]]);
        assert_eq!(enumerate_independent(&p, 0).collect::<Vec<_>>(), vec![Vec::<Label>::new()]);
        assert_eq!(enumerate_independent(&uniform(3, 2), 2).count(), 7);

        let q = line_partition(&[&[(1, 0), (2, 1)], &[(3, 2), (4, 3)]]);
        let bases: Vec<_> = enumerate_bases(&q).collect();
        assert_eq!(bases, vec![vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4]]);
        assert_eq!(enumerate_bases(&uniform(3, 2)).collect::<Vec<_>>(), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);

        let listed = vec![vec![1, 2], vec![1, 3], vec![2, 3]];
        let e = labeled(1, &[(1, &[0]), (2, &[1]), (3, &[2])], MatroidSpec::Bases { bases: listed.clone() });
        assert_eq!(enumerate_bases(&e).collect::<Vec<_>>(), listed);
    }

    #[test]
    fn membership_examples() {
        let inst = line_partition(&[&[(1, 0)], &[(2, 2)]]);
        let w = join_contains(&inst, &QPoint::from_ints(&[2])).unwrap().unwrap();
        assert_eq!(w.labels, vec![2]);
        let w = join_contains(&inst, &QPoint::from_ints(&[1])).unwrap().unwrap();
        assert_eq!(w.labels, vec![1, 2]);
        assert_eq!(w.weights, vec![Rational::new(1, 2), Rational::new(1, 2)]);
        assert!(w.verify(&inst, &QPoint::from_ints(&[1])).unwrap());
        assert!(!w.verify(&inst, &QPoint::from_ints(&[0])).unwrap());

        // Two parallel vertical segments, one per class: the colorful segments
        // are the four segments between them, which miss (1, 5).
        let par = Instance::from_classes(
            2,
            vec![
                vec![QPoint::from_ints(&[0, 0]), QPoint::from_ints(&[0, 2])],
                vec![QPoint::from_ints(&[4, 0]), QPoint::from_ints(&[4, 2])],
            ],
        )
        .unwrap();
        assert!(join_contains(&par, &QPoint::from_ints(&[2, 3])).unwrap().is_none());
        assert!(join_contains(&par, &QPoint::from_ints(&[2, 1])).unwrap().is_some());
        assert!(join_contains(&par, &QPoint::from_ints(&[2])).is_err());
    }

    #[test]
    fn caratheodory_examples() {
        let tri = |s: i64| {
            vec![QPoint::from_ints(&[s, 0]), QPoint::from_ints(&[-1, s]), QPoint::from_ints(&[-1, -s])]
        };
        let inst = Instance::from_classes(2, vec![tri(1), tri(2), tri(3)]).unwrap();
        let rep = colorful_caratheodory_check(&inst, &QPoint::origin(2)).unwrap();
        assert!(rep.hypothesis_met);
        assert!(rep.witness.unwrap().verify(&inst, &QPoint::origin(2)).unwrap());
        let rep = colorful_caratheodory_check(&inst, &QPoint::from_ints(&[2, 0])).unwrap();
        assert!(!rep.hypothesis_met);
        assert!(colorful_caratheodory_check(&uniform(3, 2), &QPoint::from_ints(&[1])).is_err());
    }

    fn random_partition() -> impl Strategy<Value = Instance> {
        prop::collection::vec(prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..=3), 1..=4)
            .prop_map(|cls| {
                Instance::from_classes(2, cls.into_iter().map(|c| c.iter().map(|v| QPoint::from_ints(v)).collect()).collect())
                    .unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_is_monotone_and_submodular(inst in random_partition(), a in any::<u16>(), b in any::<u16>()) {
            let n = inst.ground().len();
            let pick = |m: u16| -> Vec<Label> { (0..n).filter(|i| m >> (i % 16) & 1 == 1).map(|i| i as Label).collect() };
            let (sa, sb) = (pick(a), pick(b));
            let union: Vec<Label> = { let mut u = sa.clone(); u.extend(&sb); u.sort(); u.dedup(); u };
            let inter: Vec<Label> = sa.iter().filter(|x| sb.contains(x)).copied().collect();
            let r = |s: &[Label]| rank(&inst, s).unwrap();
            prop_assert!(r(&inter) <= r(&sa) && r(&sa) <= r(&union));
            prop_assert!(r(&union) + r(&inter) <= r(&sa) + r(&sb));
        }

        #[test]
        fn join_is_union_over_bases(inst in random_partition(), q in prop::collection::vec(-3i64..=3, 2)) {
            let p = QPoint::from_ints(&q);
            let w = join_contains(&inst, &p).unwrap();
            let via_bases = inst.basis_simplices().iter().any(|b| in_convex_hull(&p, b).unwrap().is_some());
            prop_assert_eq!(w.is_some(), via_bases);
            if let Some(w) = w {
                prop_assert!(w.verify(&inst, &p).unwrap());
            }
            let product: usize = (0..inst.class_count().unwrap()).map(|i| inst.class_points(i).unwrap().len()).product();
            prop_assert_eq!(enumerate_bases(&inst).count(), product);
            prop_assert!(enumerate_bases(&inst).all(|b| b.len() == inst.full_rank()));
        }
    }
}
