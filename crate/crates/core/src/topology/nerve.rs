//! Exact nerve of a family of convex hulls, built level by level.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complex::{drop_index, Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geometry::convex::{family_dim, in_convex_hull, intersection_lp, BoundingBox};
use crate::geometry::point::QPoint;
use crate::join::Instance;

/// Resource limits for one nerve build.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_lp_calls: Option<u64>,
    pub max_faces: Option<usize>,
}

/// How candidate faces were decided.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerveStats {
    pub candidates: u64,
    /// Decided by a ground point shared by all members.
    pub shared_point: u64,
    /// Decided by a subface witness lying in the remaining member.
    pub witness_reuse: u64,
    /// Refuted by disjoint bounding boxes.
    pub box_rejects: u64,
    /// Implied by Helly's theorem: more than `d + 1` members, all facets present.
    pub helly: u64,
    /// Decided by the full intersection LP.
    pub full_lps: u64,
    /// Every LP solved, including witness-reuse checks.
    pub lp_calls: u64,
}

/// A nerve with one intersection witness per face.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub complex: SimplicialComplex,
    /// `witnesses[k][i]` lies in every member of `complex.faces(k)[i]`;
    /// absent for faces decided by Helly's theorem.
    pub witnesses: Vec<Vec<Option<QPoint>>>,
    pub stats: NerveStats,
    /// Why the build stopped below the requested cap, if it did.
    pub incomplete: Option<String>,
}

impl Nerve {
    pub fn is_complete(&self) -> bool {
        self.incomplete.is_none()
    }

    pub fn witness(&self, face: &[usize]) -> Option<&QPoint> {
        let k = face.len().checked_sub(1)?;
        let i = self.complex.faces(k).binary_search_by(|f| f.as_slice().cmp(face)).ok()?;
        self.witnesses[k][i].as_ref()
    }
}

/// Nerve of the basis simplices of `instance`, faces up to dimension `cap`.
pub fn build_nerve(instance: &Instance, cap: usize) -> Result<SimplicialComplex> {
    Ok(build_nerve_with(instance, cap, Budget::default())?.complex)
}

/// [`build_nerve`] with budgets and full build data.
pub fn build_nerve_with(instance: &Instance, cap: usize, budget: Budget) -> Result<Nerve> {
    let bases = instance.bases_idx();
    let family = instance.basis_simplices();
    nerve_of_family(&family, Some(bases), cap, budget)
}

/// Members whose hull lies in no other member's hull; of several equal hulls
/// only the first is kept. The union of the family is unchanged, so the nerve
/// of the kept members has the same homotopy type.
pub fn maximal_members(family: &[Vec<QPoint>]) -> Result<Vec<usize>> {
    let boxes = family
        .iter()
        .map(|m| BoundingBox::of(m).ok_or_else(|| Error::Input("empty family member".into())))
        .collect::<Result<Vec<_>>>()?;
    let inside = |a: usize, b: usize| -> Result<bool> {
        if !family[a].iter().all(|p| boxes[b].contains(p)) {
            return Ok(false);
        }
        for p in &family[a] {
            if in_convex_hull(p, &family[b])?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let n = family.len();
    let keep = (0..n)
        .into_par_iter()
        .map(|a| {
            for b in (0..n).filter(|&b| b != a) {
                if inside(a, b)? && !(b > a && inside(b, a)?) {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok((0..n).filter(|&i| keep[i]).collect())
}

/// [`build_nerve_with`] over the containment-maximal basis simplices only.
/// Returns their basis indices with the nerve.
pub fn build_pruned_nerve_with(instance: &Instance, cap: usize, budget: Budget) -> Result<(Vec<usize>, Nerve)> {
    let family = instance.basis_simplices();
    let kept = maximal_members(&family)?;
    let bases = instance.bases_idx();
    let sub: Vec<Vec<QPoint>> = kept.iter().map(|&i| family[i].clone()).collect();
    let ids: Vec<Vec<usize>> = kept.iter().map(|&i| bases[i].clone()).collect();
    Ok((kept, nerve_of_family(&sub, Some(&ids), cap, budget)?))
}

struct Member {
    points: Vec<QPoint>,
    bbox: BoundingBox,
    /// Sorted identities of the vertices; shared ids mean shared points.
    ids: Vec<usize>,
}

enum Decision {
    Present(QPoint),
    Absent,
    OutOfBudget,
}

struct Ctx<'a> {
    members: &'a [Member],
    lp_calls: AtomicU64,
    budget: Option<u64>,
    out_of_budget: AtomicBool,
    shared: AtomicU64,
    reuse: AtomicU64,
    boxes: AtomicU64,
    full: AtomicU64,
}

impl Ctx<'_> {
    fn take_lp(&self) -> bool {
        let n = self.lp_calls.fetch_add(1, Ordering::Relaxed) + 1;
        if self.budget.is_some_and(|b| n > b) {
            self.out_of_budget.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    /// `facet_witnesses[i]` lies in every member of `face` except `face[i]`.
    fn decide(&self, face: &[usize], facet_witnesses: &[Option<&QPoint>]) -> Result<Decision> {
        let ms: Vec<&Member> = face.iter().map(|&i| &self.members[i]).collect();
        let mut common: Vec<usize> = ms[0].ids.clone();
        for m in &ms[1..] {
            common.retain(|id| m.ids.binary_search(id).is_ok());
        }
        if let Some(&id) = common.first() {
            self.shared.fetch_add(1, Ordering::Relaxed);
            let pos = ms[0].ids.iter().position(|&x| x == id).unwrap();
            return Ok(Decision::Present(ms[0].points[pos].clone()));
        }
        let mut bbox = ms[0].bbox.clone();
        for m in &ms[1..] {
            match bbox.meet(&m.bbox) {
                Some(b) => bbox = b,
                None => {
                    self.boxes.fetch_add(1, Ordering::Relaxed);
                    return Ok(Decision::Absent);
                }
            }
        }
        for (other, w) in facet_witnesses.iter().enumerate().rev() {
            let Some(w) = w else { continue };
            if !bbox.contains(w) {
                continue;
            }
            if !self.take_lp() {
                return Ok(Decision::OutOfBudget);
            }
            if in_convex_hull(w, &ms[other].points)?.is_some() {
                self.reuse.fetch_add(1, Ordering::Relaxed);
                return Ok(Decision::Present((*w).clone()));
            }
        }
        if !self.take_lp() {
            return Ok(Decision::OutOfBudget);
        }
        self.full.fetch_add(1, Ordering::Relaxed);
        let sub: Vec<Vec<QPoint>> = ms.iter().map(|m| m.points.clone()).collect();
        Ok(match intersection_lp(&sub)? {
            Some(w) => Decision::Present(QPoint::combination(&sub[0], &w[..sub[0].len()])),
            None => Decision::Absent,
        })
    }
}

/// Nerve of an arbitrary family of vertex lists.
///
/// `ids`, if given, names each member's vertices (same length as its points);
/// equal ids across members must denote equal points. Without ids, exact
/// coordinate equality is used.
pub fn nerve_of_family(
    family: &[Vec<QPoint>],
    ids: Option<&[Vec<usize>]>,
    cap: usize,
    budget: Budget,
) -> Result<Nerve> {
    if family.is_empty() {
        return Ok(Nerve {
            complex: SimplicialComplex::new(0, cap),
            witnesses: Vec::new(),
            stats: NerveStats::default(),
            incomplete: None,
        });
    }
    let dim = family_dim(family)?;
    if family.iter().any(Vec::is_empty) {
        return Err(Error::Input("family member with no vertices".into()));
    }
    let members: Vec<Member> = match ids {
        Some(ids) => family
            .iter()
            .zip(ids)
            .map(|(pts, id)| {
                let mut order: Vec<usize> = (0..pts.len()).collect();
                order.sort_by_key(|&i| id[i]);
                Member {
                    points: order.iter().map(|&i| pts[i].clone()).collect(),
                    bbox: BoundingBox::of(pts).expect("nonempty member"),
                    ids: order.iter().map(|&i| id[i]).collect(),
                }
            })
            .collect(),
        None => {
            let mut all: Vec<&QPoint> = family.iter().flatten().collect();
            all.sort();
            all.dedup();
            family
                .iter()
                .map(|pts| {
                    let mut pairs: Vec<(usize, QPoint)> =
                        pts.iter().map(|p| (all.binary_search(&p).unwrap(), p.clone())).collect();
                    pairs.sort_by(|a, b| a.0.cmp(&b.0));
                    pairs.dedup_by(|a, b| a.0 == b.0);
                    Member {
                        bbox: BoundingBox::of(pts).expect("nonempty member"),
                        ids: pairs.iter().map(|p| p.0).collect(),
                        points: pairs.into_iter().map(|p| p.1).collect(),
                    }
                })
                .collect()
        }
    };
    let n = members.len();
    let ctx = Ctx {
        members: &members,
        lp_calls: AtomicU64::new(0),
        budget: budget.max_lp_calls,
        out_of_budget: AtomicBool::new(false),
        shared: AtomicU64::new(0),
        reuse: AtomicU64::new(0),
        boxes: AtomicU64::new(0),
        full: AtomicU64::new(0),
    };
    let mut complex = SimplicialComplex::new(n, cap);
    let mut witnesses: Vec<Vec<Option<QPoint>>> = vec![members.iter().map(|m| Some(m.points[0].clone())).collect()];
    let mut helly = 0u64;
    let mut candidates_total = 0u64;
    let mut incomplete = None;
    if budget.max_faces.is_some_and(|m| n > m) {
        incomplete = Some(format!("{n} vertices exceed the face budget"));
    }

    for k in 1..=cap {
        if incomplete.is_some() {
            break;
        }
        let prev = complex.faces(k - 1);
        if prev.is_empty() {
            break;
        }
        let prev_index = |f: &[usize]| prev.binary_search_by(|g| g.as_slice().cmp(f)).ok();
        // Candidates whose every facet is present; facet i omits vertex i.
        let mut candidates: Vec<(Face, Vec<usize>)> = Vec::new();
        for (pi, f) in prev.iter().enumerate() {
            for v in f.last().unwrap() + 1..n {
                let mut cand = f.clone();
                cand.push(v);
                let facets: Option<Vec<usize>> =
                    (0..k).map(|i| prev_index(&drop_index(&cand, i))).chain([Some(pi)]).collect();
                if let Some(facets) = facets {
                    candidates.push((cand, facets));
                }
            }
        }
        candidates_total += candidates.len() as u64;
        if k > dim {
            // Every (d+1)-subfamily lies inside a present facet.
            helly += candidates.len() as u64;
            if budget.max_faces.is_some_and(|m| complex.face_total() + candidates.len() > m) {
                incomplete = Some(format!("face budget exceeded at dimension {k}"));
                complex.set_cap(k - 1);
                break;
            }
            let level: Vec<Face> = candidates.into_iter().map(|c| c.0).collect();
            if level.is_empty() {
                break;
            }
            witnesses.push(vec![None; level.len()]);
            complex.push_level(k, level);
            continue;
        }
        let prev_w = &witnesses[k - 1];
        let decided: Vec<Result<Decision>> = candidates
            .par_iter()
            .map(|(face, facets)| {
                if ctx.out_of_budget.load(Ordering::Relaxed) {
                    return Ok(Decision::OutOfBudget);
                }
                let ws: Vec<Option<&QPoint>> = facets.iter().map(|&f| prev_w[f].as_ref()).collect();
                ctx.decide(face, &ws)
            })
            .collect();
        let mut level = Vec::new();
        let mut level_w = Vec::new();
        for ((face, _), d) in candidates.into_iter().zip(decided) {
            match d? {
                Decision::Present(w) => {
                    level.push(face);
                    level_w.push(Some(w));
                }
                Decision::Absent => {}
                Decision::OutOfBudget => {}
            }
        }
        if ctx.out_of_budget.load(Ordering::Relaxed) {
            incomplete = Some(format!("LP budget exhausted while building dimension {k}"));
            complex.set_cap(k - 1);
            break;
        }
        if budget.max_faces.is_some_and(|m| complex.face_total() + level.len() > m) {
            incomplete = Some(format!("face budget exceeded at dimension {k}"));
            complex.set_cap(k - 1);
            break;
        }
        if level.is_empty() {
            break;
        }
        complex.push_level(k, level);
        witnesses.push(level_w);
    }
    let stats = NerveStats {
        candidates: candidates_total,
        shared_point: ctx.shared.load(Ordering::Relaxed),
        witness_reuse: ctx.reuse.load(Ordering::Relaxed),
        box_rejects: ctx.boxes.load(Ordering::Relaxed),
        helly,
        full_lps: ctx.full.load(Ordering::Relaxed),
        lp_calls: ctx.lp_calls.load(Ordering::Relaxed),
    };
    Ok(Nerve { complex, witnesses, stats, incomplete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::convex::simplices_intersect;
    use crate::join::Combinations;
    use crate::topology::homology::homology;
    use proptest::prelude::*;

    fn seg(a: i64, b: i64) -> Vec<QPoint> {
        vec![QPoint::from_ints(&[a]), QPoint::from_ints(&[b])]
    }

    #[test]
    fn maximal_members_on_the_line() {
        let fam = vec![seg(0, 4), seg(1, 2), seg(4, 0), seg(3, 5), seg(5, 5)];
        assert_eq!(maximal_members(&fam).unwrap(), vec![0, 3]);
        assert!(maximal_members(&[vec![]]).is_err());
    }

    proptest! {
        #[test]
        fn pruning_preserves_the_union(ends in proptest::collection::vec((-6i64..6, -6i64..6), 1..8)) {
            let fam: Vec<Vec<QPoint>> = ends.iter().map(|&(a, b)| seg(a, b)).collect();
            let kept = maximal_members(&fam).unwrap();
            for x in -12..=12 {
                let p = QPoint::new(vec![crate::Rational::new(x, 2)]);
                let covers = |i: usize| in_convex_hull(&p, &fam[i]).unwrap().is_some();
                prop_assert_eq!((0..fam.len()).any(covers), kept.iter().any(|&i| covers(i)));
            }
        }
    }

    #[test]
    fn single_basis_is_a_point() {
        let inst = Instance::from_classes(2, vec![vec![QPoint::from_ints(&[0, 0])], vec![QPoint::from_ints(&[1, 1])]])
            .unwrap();
        let c = build_nerve(&inst, 3).unwrap();
        assert_eq!(c.counts(), vec![1]);
    }

    #[test]
    fn interval_graph_on_the_line() {
        // classes {0,2},{1,3}: bases [0,1],[0,3],[2,1],[2,3] in basis order.
        let inst = Instance::from_classes(
            1,
            vec![vec![QPoint::from_ints(&[0]), QPoint::from_ints(&[2])], vec![QPoint::from_ints(&[1]), QPoint::from_ints(&[3])]],
        )
        .unwrap();
        let n = build_nerve(&inst, 2).unwrap();
        // All four intervals contain the point 1 or 2 and pairwise overlap.
        let ivs = [(0, 1), (0, 3), (1, 2), (2, 3)];
        let want: Vec<Vec<usize>> = Combinations::new(4, 2)
            .filter(|p| ivs[p[0]].1.min(ivs[p[1]].1) >= ivs[p[0]].0.max(ivs[p[1]].0))
            .collect();
        assert_eq!(n.faces(1), want.as_slice());
    }

    #[test]
    fn witnesses_and_stats() {
        let fam = vec![seg(0, 2), seg(1, 3), seg(5, 6), seg(2, 5)];
        let nerve = nerve_of_family(&fam, None, 3, Budget::default()).unwrap();
        assert_eq!(nerve.complex.faces(1), &[vec![0, 1], vec![0, 3], vec![1, 3], vec![2, 3]]);
        assert_eq!(nerve.complex.faces(2), &[vec![0, 1, 3]]);
        for k in 0..=1 {
            for f in nerve.complex.faces(k) {
                let w = nerve.witness(f).unwrap();
                assert!(f.iter().all(|&i| in_convex_hull(w, &fam[i]).unwrap().is_some()));
            }
        }
        assert!(nerve.stats.shared_point > 0);
        let h = homology(&nerve.complex, true).unwrap();
        assert!(h.is_trivial());
    }

    #[test]
    fn budget_truncates() {
        let fam: Vec<_> = (0..6).map(|i| seg(i, i + 10)).collect();
        let nerve = nerve_of_family(&fam, None, 3, Budget { max_lp_calls: Some(3), max_faces: None }).unwrap();
        assert!(!nerve.is_complete());
        assert!(nerve.complex.cap() < 3);
        let nerve = nerve_of_family(&fam, None, 3, Budget { max_lp_calls: None, max_faces: Some(10) }).unwrap();
        assert!(!nerve.is_complete());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn matches_brute_force(fam in prop::collection::vec(
            prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..=3), 1..=6)
        ) {
            let fam: Vec<Vec<QPoint>> = fam.iter().map(|m| m.iter().map(|c| QPoint::from_ints(c)).collect()).collect();
            let nerve = nerve_of_family(&fam, None, 3, Budget::default()).unwrap();
            prop_assert!(nerve.complex.is_downward_closed());
            for k in 1..=3usize.min(fam.len() - 1) {
                let brute: Vec<Vec<usize>> = Combinations::new(fam.len(), k + 1)
                    .filter(|f| {
                        let sub: Vec<Vec<QPoint>> = f.iter().map(|&i| fam[i].clone()).collect();
                        simplices_intersect(&sub).unwrap().is_some()
                    })
                    .collect();
                prop_assert_eq!(nerve.complex.faces(k), brute.as_slice());
            }
        }
    }
}
