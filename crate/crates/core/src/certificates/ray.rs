use serde::{Deserialize, Serialize};

use super::planar::star_center_in_metric;
use crate::error::{Error, Result};
use crate::geometry::convex::{ray_hit_parameter, ray_hits_convex, separating_hyperplane};
use crate::geometry::point::{Hyperplane, QPoint};
use crate::join::{join_contains, Instance};
use crate::rational::Rational;
use crate::rng::SplitMix64;

/// Classes `i < j` whose union lies strictly on the positive side of
/// `hyperplane`, with the query point on the negative side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationCertificate {
    pub i: usize,
    pub j: usize,
    pub hyperplane: Hyperplane,
}

impl SeparationCertificate {
    pub fn verify(&self, instance: &Instance, o: &QPoint) -> bool {
        let m = instance.class_count().unwrap_or(0);
        if self.i >= self.j || self.j >= m {
            return false;
        }
        let mut pts = instance.class_points(self.i).unwrap();
        pts.extend(instance.class_points(self.j).unwrap());
        self.hyperplane.strictly_separates(&pts, o)
    }
}

fn check_partition(instance: &Instance, o: &QPoint) -> Result<usize> {
    let Some(m) = instance.class_count() else {
        return Err(Error::Precondition("separation needs color classes".into()));
    };
    let d = instance.dimension();
    if m < d + 1 {
        return Err(Error::Precondition(format!("{m} classes, need at least {}", d + 1)));
    }
    if join_contains(instance, o)?.is_some() {
        return Err(Error::Precondition(format!("{o:?} lies in the join")));
    }
    Ok(m)
}

fn pair_separator(instance: &Instance, i: usize, j: usize, o: &QPoint) -> Result<Option<Hyperplane>> {
    let mut pts = instance.class_points(i).unwrap();
    pts.extend(instance.class_points(j).unwrap());
    separating_hyperplane(&pts, o)
}

/// First pair of classes, in lexicographic order, whose union is strictly
/// separated from `o`. With `o` outside the join such a pair always exists.
pub fn strong_separation(instance: &Instance, o: &QPoint) -> Result<SeparationCertificate> {
    let m = check_partition(instance, o)?;
    for i in 0..m {
        for j in i + 1..m {
            if let Some(hyperplane) = pair_separator(instance, i, j, o)? {
                return Ok(SeparationCertificate { i, j, hyperplane });
            }
        }
    }
    Err(Error::Inconsistency(format!("{o:?} is outside the join but no pair of classes separates from it")))
}

/// A direction whose ray from the origin misses every basis simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayWitness {
    pub direction: QPoint,
    /// The separated pair the construction started from.
    pub pair: (usize, usize),
    /// 0 for the constructed direction, otherwise the jitter round.
    pub attempt: u32,
    pub jitter_seed: u64,
}

impl RayWitness {
    /// Exact check against every basis simplex.
    pub fn verify(&self, instance: &Instance) -> Result<bool> {
        if self.direction.dim() != instance.dimension() || self.direction.is_origin() {
            return Ok(false);
        }
        for b in instance.basis_simplices() {
            if ray_hit_parameter(&self.direction, &b)?.is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Jitter rounds tried after each constructed direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayBudget {
    pub retries: u32,
    pub seed: u64,
}

impl Default for RayBudget {
    fn default() -> Self {
        RayBudget { retries: 24, seed: 0x5eed_0f_7a_ce }
    }
}

/// Gnomonic chart of the plane `n·y = c` (with `c > 0`), seen from the origin.
struct Chart {
    foot: QPoint,
    u: [QPoint; 2],
    metric: [Rational; 2],
    n: QPoint,
    c: Rational,
}

fn cross3(a: &QPoint, b: &QPoint) -> QPoint {
    QPoint::new(vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ])
}

impl Chart {
    fn new(h: &Hyperplane) -> Self {
        let n = h.normal.clone();
        let k = (0..3).max_by(|&a, &b| n[a].abs().cmp(&n[b].abs()).then(b.cmp(&a))).unwrap();
        let a = (k + 1) % 3;
        let mut u1 = vec![Rational::zero(); 3];
        u1[a] = n[k].clone();
        u1[k] = -&n[a];
        let mut u1 = QPoint::new(u1);
        if u1.is_origin() {
            u1 = QPoint::unit(3, a);
        }
        let u2 = cross3(&n, &u1);
        let foot = n.scale(&(&h.offset / &n.norm_sq()));
        let metric = [u1.norm_sq(), u2.norm_sq()];
        Chart { foot, u: [u1, u2], metric, n, c: h.offset.clone() }
    }

    /// Central projection of `p` (on the positive side) into chart
    /// coordinates.
    fn project(&self, p: &QPoint) -> QPoint {
        let y = p.scale(&(&self.c / &self.n.dot(p))).sub(&self.foot);
        QPoint::new(vec![&y.dot(&self.u[0]) / &self.metric[0], &y.dot(&self.u[1]) / &self.metric[1]])
    }

    fn pullback(&self, q: &QPoint) -> QPoint {
        self.foot.add(&self.u[0].scale(&q[0])).add(&self.u[1].scale(&q[1]))
    }
}

fn misses_all(direction: &QPoint, bases: &[Vec<QPoint>]) -> Result<bool> {
    for b in bases {
        if ray_hits_convex(direction, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A ray from the origin avoiding the join of a 3-dimensional instance.
///
/// For each separated pair of classes, the pair is projected to a chart of
/// the separating plane, its planar star center is pulled back and negated,
/// and the result is verified exactly; failed candidates are perturbed by a
/// shrinking deterministic jitter. `None` once every pair and retry fails.
pub fn ray_witness(instance: &Instance, budget: RayBudget) -> Result<Option<RayWitness>> {
    if instance.dimension() != 3 {
        return Err(Error::Precondition("ray witnesses are built in dimension 3".into()));
    }
    let o = QPoint::origin(3);
    let m = check_partition(instance, &o)?;
    let bases = instance.basis_simplices();
    for i in 0..m {
        for j in i + 1..m {
            let Some(h) = pair_separator(instance, i, j, &o)? else { continue };
            let chart = Chart::new(&h);
            let xi: Vec<QPoint> = instance.class_points(i).unwrap().iter().map(|p| chart.project(p)).collect();
            let xj: Vec<QPoint> = instance.class_points(j).unwrap().iter().map(|p| chart.project(p)).collect();
            let center = star_center_in_metric(&xi, &xj, &chart.metric)?;
            let base = chart.pullback(&center).neg();
            let scale = base.coords().iter().map(Rational::abs).max().unwrap();
            let pair_code = (i as u64) << 32 | j as u64;
            for attempt in 0..=budget.retries {
                let direction = if attempt == 0 {
                    base.clone()
                } else {
                    let mut rng = SplitMix64::for_index(budget.seed ^ pair_code, attempt as u64);
                    let eps = &scale / &Rational::from_integer(1i64 << attempt.min(40));
                    let jitter: Vec<Rational> =
                        (0..3).map(|_| &eps * &Rational::new(rng.symmetric(64), 64)).collect();
                    base.add(&QPoint::new(jitter))
                };
                if direction.is_origin() {
                    continue;
                }
                if misses_all(&direction, &bases)? {
                    return Ok(Some(RayWitness { direction, pair: (i, j), attempt, jitter_seed: budget.seed }));
                }
            }
        }
    }
    Ok(None)
}

/// Whether `s·direction` stays outside the join for `samples` values of `s`
/// spread up to ten times the instance's coordinate range.
pub fn ray_spot_check(instance: &Instance, witness: &RayWitness, samples: usize) -> Result<bool> {
    let reach = instance
        .ground()
        .points()
        .iter()
        .flat_map(|p| p.coords().iter().map(Rational::abs))
        .max()
        .unwrap_or_else(Rational::one)
        + Rational::one();
    let len = witness.direction.coords().iter().map(Rational::abs).max().unwrap();
    for k in 1..=samples {
        let s = &(&reach * &Rational::new(k as i64, 10)) / &len;
        if join_contains(instance, &witness.direction.scale(&s))?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}
