use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::geometry::convex::{intersection_lp, BoundingBox};
use crate::geometry::point::{check_dims, QPoint};
use crate::join::Label;
use crate::rational::Rational;

/// A partition into parts whose hulls share `point`, with one barycentric
/// witness per part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TverbergCertificate {
    pub parts: Vec<Vec<Label>>,
    pub point: QPoint,
    pub weights: Vec<Vec<Rational>>,
}

impl TverbergCertificate {
    /// Exact check with labels resolved by `lookup`.
    pub fn verify_with(&self, lookup: impl Fn(Label) -> Option<QPoint>) -> bool {
        if self.parts.len() < 2 || self.parts.len() != self.weights.len() {
            return false;
        }
        let mut seen: Vec<Label> = self.parts.iter().flatten().copied().collect();
        let total = seen.len();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != total {
            return false;
        }
        for (part, w) in self.parts.iter().zip(&self.weights) {
            if part.is_empty() || part.len() != w.len() {
                return false;
            }
            if w.iter().any(Rational::is_negative) || w.iter().sum::<Rational>() != Rational::one() {
                return false;
            }
            let Some(pts) = part.iter().map(|&l| lookup(l)).collect::<Option<Vec<_>>>() else {
                return false;
            };
            if pts.iter().any(|p| p.dim() != self.point.dim()) || QPoint::combination(&pts, w) != self.point {
                return false;
            }
        }
        true
    }

    /// Exact check where labels index into `points`.
    pub fn verify_points(&self, points: &[QPoint]) -> bool {
        self.verify_with(|l| points.get(l as usize).cloned())
    }
}

/// Set partitions of `0..n` into exactly `k` blocks, as restricted growth
/// strings in lexicographic order.
pub struct SetPartitions {
    n: usize,
    k: usize,
    a: Vec<usize>,
    started: bool,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize, k: usize) -> Self {
        SetPartitions { n, k, a: vec![0; n], started: false, done: k == 0 || k > n }
    }

    fn blocks(&self) -> usize {
        self.a.iter().max().map_or(0, |m| m + 1)
    }

    fn advance(&mut self) -> bool {
        for i in (1..self.n).rev() {
            let prefix_max = self.a[..i].iter().copied().max().unwrap_or(0);
            if self.a[i] <= prefix_max && self.a[i] + 1 < self.k {
                self.a[i] += 1;
                for x in &mut self.a[i + 1..] {
                    *x = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        loop {
            if self.started {
                if !self.advance() {
                    self.done = true;
                    return None;
                }
            } else {
                self.started = true;
            }
            if self.blocks() == self.k {
                return Some(self.a.clone());
            }
        }
    }
}

const BATCH: usize = 512;

/// First partition (canonical order) of `points` into `parts` blocks whose
/// hulls share a point. Labels in the certificate are indices into `points`.
pub fn find_tverberg(points: &[QPoint], parts: usize) -> Result<Option<TverbergCertificate>> {
    if parts < 2 {
        return input("a Tverberg partition needs at least 2 parts");
    }
    if points.len() < parts {
        return input(format!("{} points cannot form {parts} nonempty parts", points.len()));
    }
    check_dims(points[0].dim(), points)?;
    let mut iter = SetPartitions::new(points.len(), parts);
    loop {
        let batch: Vec<Vec<usize>> = iter.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            return Ok(None);
        }
        let found = batch
            .par_iter()
            .map(|rgs| try_partition(points, parts, rgs))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        if found.is_some() {
            return Ok(found);
        }
    }
}

fn try_partition(points: &[QPoint], parts: usize, rgs: &[usize]) -> Result<Option<TverbergCertificate>> {
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); parts];
    for (i, &b) in rgs.iter().enumerate() {
        blocks[b].push(i);
    }
    let family: Vec<Vec<QPoint>> = blocks.iter().map(|b| b.iter().map(|&i| points[i].clone()).collect()).collect();
    let mut bbox = BoundingBox::of(&family[0]).unwrap();
    for m in &family[1..] {
        match bbox.meet(&BoundingBox::of(m).unwrap()) {
            Some(b) => bbox = b,
            None => return Ok(None),
        }
    }
    let Some(w) = intersection_lp(&family)? else {
        return Ok(None);
    };
    let mut weights = Vec::with_capacity(parts);
    let mut at = 0;
    for b in &blocks {
        weights.push(w[at..at + b.len()].to_vec());
        at += b.len();
    }
    let point = QPoint::combination(&family[0], &weights[0]);
    let parts = blocks.into_iter().map(|b| b.into_iter().map(|i| i as Label).collect()).collect();
    Ok(Some(TverbergCertificate { parts, point, weights }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(c: &[&[i64]]) -> Vec<QPoint> {
        c.iter().map(|p| QPoint::from_ints(p)).collect()
    }

    fn stirling2(n: usize, k: usize) -> usize {
        if n == 0 && k == 0 {
            return 1;
        }
        if n == 0 || k == 0 {
            return 0;
        }
        k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)
    }

    #[test]
    fn set_partition_counts() {
        for n in 1..=8 {
            for k in 1..=n {
                let all: Vec<_> = SetPartitions::new(n, k).collect();
                assert_eq!(all.len(), stirling2(n, k), "S({n},{k})");
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(SetPartitions::new(3, 4).count(), 0);
    }

    #[test]
    fn line_of_three() {
        let p = pts(&[&[0], &[1], &[2]]);
        let c = find_tverberg(&p, 2).unwrap().unwrap();
        assert_eq!(c.parts, vec![vec![0, 2], vec![1]]);
        assert_eq!(c.point, QPoint::from_ints(&[1]));
        assert!(c.verify_points(&p));
    }

    #[test]
    fn heptagon_in_three_parts() {
        let p = pts(&[&[10, 0], &[6, 8], &[-3, 9], &[-9, 4], &[-9, -4], &[-3, -9], &[6, -8]]);
        let c = find_tverberg(&p, 3).unwrap().expect("Tverberg guarantees a partition");
        assert!(c.verify_points(&p));
        // Every partition that comes earlier in canonical order really fails.
        let first: Vec<usize> = {
            let mut rgs = vec![0; 7];
            for (b, part) in c.parts.iter().enumerate() {
                for &l in part {
                    rgs[l as usize] = b;
                }
            }
            rgs
        };
        for rgs in SetPartitions::new(7, 3).take_while(|r| *r < first) {
            let fam: Vec<Vec<QPoint>> =
                (0..3).map(|b| (0..7).filter(|&i| rgs[i] == b).map(|i| p[i].clone()).collect()).collect();
            assert!(intersection_lp(&fam).unwrap().is_none());
        }
    }

    #[test]
    fn coincident_points_and_errors() {
        let p = vec![QPoint::from_ints(&[3, 4]); 5];
        let c = find_tverberg(&p, 3).unwrap().unwrap();
        assert_eq!(c.point, QPoint::from_ints(&[3, 4]));
        assert!(find_tverberg(&p[..2], 3).is_err());
        assert!(find_tverberg(&p, 1).is_err());
    }

    #[test]
    fn tampered_certificate_fails() {
        let p = pts(&[&[0], &[1], &[2]]);
        let mut c = find_tverberg(&p, 2).unwrap().unwrap();
        c.point = QPoint::from_ints(&[2]);
        assert!(!c.verify_points(&p));
    }
}
