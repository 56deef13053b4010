//! Floating-point probe of the offset filtration of a join's basis simplices.
//!
//! Every value here is approximate, within a published tolerance. The exact
//! nerve decides all faces at radius zero; the numeric radii only order faces
//! that appear later.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::geometry::convex::simplices_intersect;
use crate::geometry::min_norm::nearest_point;
use crate::join::Instance;
use crate::topology::complex::{drop_index, Face, SimplicialComplex};
use crate::topology::nerve::build_nerve;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiltrationOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FiltrationOptions {
    fn default() -> Self {
        FiltrationOptions { tolerance: 1e-9, max_iterations: 100_000 }
    }
}

/// Smallest `t` at which the `t`-neighborhoods of a subfamily meet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalRadiusEstimate {
    pub subfamily: Vec<usize>,
    pub radius: f64,
    pub tolerance: f64,
    /// A point within `radius` of every member.
    pub argmin: Vec<f64>,
    /// The members intersect, decided exactly; `radius` is then 0.
    pub exact_zero: bool,
    pub approximate: bool,
}

type Body = Vec<Vec<f64>>;

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn project(body: &Body, x: &[f64]) -> (Vec<f64>, f64) {
    let np = nearest_point(body, x).expect("nonempty body");
    let d = np.dist_sq.max(0.0).sqrt();
    (np.point, d)
}

/// Circumcenter of `pts` inside their affine hull, if they are affinely
/// independent.
fn circumcenter(pts: &[&Vec<f64>]) -> Option<Vec<f64>> {
    let p0 = pts[0];
    let k = pts.len() - 1;
    let v: Vec<Vec<f64>> = pts[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let mut m = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
        }
        m[i][k] = m[i][i] / 2.0;
    }
    for c in 0..k {
        let piv = (c..k).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))?;
        if m[piv][c].abs() < 1e-12 {
            return None;
        }
        m.swap(c, piv);
        for r in 0..k {
            if r != c {
                let f = m[r][c] / m[c][c];
                for j in c..=k {
                    m[r][j] -= f * m[c][j];
                }
            }
        }
    }
    let mut x = p0.clone();
    for i in 0..k {
        let l = m[i][k] / m[i][i];
        for (xj, vj) in x.iter_mut().zip(&v[i]) {
            *xj += l * vj;
        }
    }
    Some(x)
}

/// Minimum enclosing ball of a few points, by trying every support set.
fn min_enclosing_ball(pts: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let n = pts.len();
    let dim = pts[0].len();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for mask in 1u32..(1 << n) {
        let support: Vec<&Vec<f64>> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &pts[i]).collect();
        if support.len() > dim + 1 {
            continue;
        }
        let Some(c) = circumcenter(&support) else { continue };
        let r = dist(&c, support[0]);
        if best.as_ref().is_some_and(|b| b.1 <= r) {
            continue;
        }
        if pts.iter().all(|p| dist(&c, p) <= r * (1.0 + 1e-12) + 1e-15) {
            best = Some((c, r));
        }
    }
    best.expect("a single point is always enclosing")
}

/// Minimizes the largest distance to the bodies by alternating nearest-point
/// projections with minimum enclosing balls of the projections.
fn minimax_distance(bodies: &[Body], opts: &FiltrationOptions) -> (Vec<f64>, f64) {
    let dim = bodies[0][0].len();
    let count = bodies.iter().map(Vec::len).sum::<usize>() as f64;
    let mut x = vec![0.0; dim];
    for p in bodies.iter().flatten() {
        for (xi, pi) in x.iter_mut().zip(p) {
            *xi += pi / count;
        }
    }
    let mut radius = f64::INFINITY;
    for _ in 0..opts.max_iterations {
        let proj: Vec<Vec<f64>> = bodies.iter().map(|b| project(b, &x).0).collect();
        let current = proj.iter().map(|p| dist(p, &x)).fold(0.0, f64::max);
        let (c, r) = min_enclosing_ball(&proj);
        radius = current;
        if current - r <= opts.tolerance * 1e-3 {
            break;
        }
        x = c;
    }
    let final_r = bodies.iter().map(|b| project(b, &x).1).fold(0.0, f64::max);
    (x, final_r.min(radius))
}

fn bodies_of(instance: &Instance, subfamily: &[usize]) -> Result<Vec<Body>> {
    let bases = instance.bases_idx();
    subfamily
        .iter()
        .map(|&i| {
            bases.get(i).map(|b| instance.points_at(b).iter().map(|p| p.to_f64()).collect()).ok_or_else(|| {
                Error::Input(format!("basis index {i} out of range ({} bases)", bases.len()))
            })
        })
        .collect()
}

/// Critical radius of the basis simplices with the given indices.
pub fn critical_radius(instance: &Instance, subfamily: &[usize], opts: &FiltrationOptions) -> Result<CriticalRadiusEstimate> {
    if subfamily.is_empty() {
        return input("subfamily must be nonempty");
    }
    let bodies = bodies_of(instance, subfamily)?;
    let exact: Vec<_> = subfamily.iter().map(|&i| instance.points_at(&instance.bases_idx()[i])).collect();
    let (argmin, radius, exact_zero) = match simplices_intersect(&exact)? {
        Some(p) => (p.to_f64(), 0.0, true),
        None => {
            let (x, r) = minimax_distance(&bodies, opts);
            (x, r, false)
        }
    };
    Ok(CriticalRadiusEstimate {
        subfamily: subfamily.to_vec(),
        radius,
        tolerance: opts.tolerance,
        argmin,
        exact_zero,
        approximate: !exact_zero,
    })
}

fn extend(prev: &[Face], n: usize) -> Vec<Face> {
    let set: HashSet<&[usize]> = prev.iter().map(Vec::as_slice).collect();
    let mut out = Vec::new();
    for f in prev {
        for v in f.last().unwrap() + 1..n {
            let mut c = f.clone();
            c.push(v);
            if (0..c.len()).all(|i| set.contains(drop_index(&c, i).as_slice())) {
                out.push(c);
            }
        }
    }
    out
}

/// Nerve of the `t`-neighborhoods of the basis simplices, up to `cap`.
///
/// At `t = 0` this is the exact nerve. Above it, a face whose facets are
/// present is added when its critical radius is at most `t + tolerance`.
pub fn offset_nerve(instance: &Instance, t: f64, cap: usize, opts: &FiltrationOptions) -> Result<SimplicialComplex> {
    if !(t >= 0.0) {
        return input("offset radius must be nonnegative");
    }
    let exact = build_nerve(instance, cap)?;
    if t == 0.0 {
        return Ok(exact);
    }
    let n = instance.basis_count();
    let mut levels: Vec<Vec<Face>> = vec![(0..n).map(|v| vec![v]).collect()];
    for k in 1..=cap {
        let cands = extend(&levels[k - 1], n);
        let keep: Vec<Option<Face>> = cands
            .into_par_iter()
            .map(|f| {
                if exact.contains(&f) {
                    return Ok(Some(f));
                }
                let r = critical_radius(instance, &f, opts)?;
                Ok((r.radius <= t + opts.tolerance).then_some(f))
            })
            .collect::<Result<_>>()?;
        let level: Vec<Face> = keep.into_iter().flatten().collect();
        if level.is_empty() {
            break;
        }
        levels.push(level);
    }
    Ok(SimplicialComplex::with_levels(n, levels, cap))
}

/// Face with its own critical radius and the radius at which it enters the
/// filtration (the maximum over its faces).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub face: Face,
    pub radius: f64,
    pub appearance: f64,
    pub exact_zero: bool,
}

/// Every face up to the cap with its radii, sorted by appearance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiltrationTrace {
    pub vertices: usize,
    pub cap: usize,
    pub tolerance: f64,
    pub entries: Vec<TraceEntry>,
    /// Faces whose radius fell more than the tolerance below a facet's.
    pub monotonicity_violations: usize,
    pub approximate: bool,
}

impl FiltrationTrace {
    /// The offset nerve at `t`, read off the trace.
    pub fn complex_at(&self, t: f64) -> SimplicialComplex {
        let mut levels: Vec<Vec<Face>> = vec![Vec::new(); self.cap + 1];
        for e in &self.entries {
            let present = if t == 0.0 { e.exact_zero } else { e.appearance <= t + self.tolerance };
            if present {
                levels[e.face.len() - 1].push(e.face.clone());
            }
        }
        SimplicialComplex::with_levels(self.vertices, levels, self.cap)
    }
}

/// Radii of all subfamilies of at most `cap + 1` bases. Fails with a budget
/// error beyond `max_faces` subfamilies.
pub fn filtration_trace(instance: &Instance, cap: usize, opts: &FiltrationOptions, max_faces: usize) -> Result<FiltrationTrace> {
    let n = instance.basis_count();
    let mut levels: Vec<Vec<TraceEntry>> = Vec::new();
    let mut total = 0usize;
    for k in 0..=cap.min(n.saturating_sub(1)) {
        let faces: Vec<Face> = crate::join::Combinations::new(n, k + 1).collect();
        total += faces.len();
        if total > max_faces {
            return Err(Error::BudgetExceeded(format!("more than {max_faces} subfamilies")));
        }
        let radii: Vec<CriticalRadiusEstimate> =
            faces.par_iter().map(|f| critical_radius(instance, f, opts)).collect::<Result<_>>()?;
        let mut level = Vec::with_capacity(faces.len());
        for (face, r) in faces.into_iter().zip(radii) {
            let mut appearance = r.radius;
            if k > 0 {
                for i in 0..face.len() {
                    let sub = drop_index(&face, i);
                    let j = levels[k - 1].binary_search_by(|e| e.face.cmp(&sub)).unwrap();
                    appearance = appearance.max(levels[k - 1][j].appearance);
                }
            }
            level.push(TraceEntry { face, radius: r.radius, appearance, exact_zero: r.exact_zero });
        }
        levels.push(level);
    }
    let violations = levels
        .iter()
        .flatten()
        .filter(|e| e.radius + opts.tolerance < e.appearance)
        .count();
    let mut entries: Vec<TraceEntry> = levels.into_iter().flatten().collect();
    entries.sort_by(|a, b| {
        a.appearance.total_cmp(&b.appearance).then(a.face.len().cmp(&b.face.len())).then(a.face.cmp(&b.face))
    });
    Ok(FiltrationTrace {
        vertices: n,
        cap,
        tolerance: opts.tolerance,
        entries,
        monotonicity_violations: violations,
        approximate: true,
    })
}

/// Position of a probe point relative to its nearest points on the bodies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorseStatus {
    /// The point is in the union; the condition is vacuous.
    Interior,
    /// The point is outside the hull of its nearest points.
    Regular,
    /// The point is in the hull of its nearest points.
    Critical,
}

/// Nearest points of every basis simplex to `x0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosestSet {
    pub x0: Vec<f64>,
    pub per_body: Vec<Vec<f64>>,
    pub distances: Vec<f64>,
    /// Bodies within tolerance of the minimum distance.
    pub active: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorseReport {
    pub closest: ClosestSet,
    pub status: MorseStatus,
    /// Distance from `x0` to the hull of the active nearest points.
    pub hull_gap: f64,
    pub approximate: bool,
}

/// Whether `x0` lies in the hull of its nearest points on the join.
pub fn morse_probe(instance: &Instance, x0: &[f64], opts: &FiltrationOptions) -> Result<MorseReport> {
    if x0.len() != instance.dimension() {
        return input(format!("probe has dimension {}, instance {}", x0.len(), instance.dimension()));
    }
    let all: Vec<usize> = (0..instance.basis_count()).collect();
    let bodies = bodies_of(instance, &all)?;
    let (per_body, distances): (Vec<Vec<f64>>, Vec<f64>) = bodies.iter().map(|b| project(b, x0)).unzip();
    let min = distances.iter().copied().fold(f64::INFINITY, f64::min);
    let active: Vec<usize> = (0..distances.len()).filter(|&i| distances[i] <= min + opts.tolerance).collect();
    let closest = ClosestSet { x0: x0.to_vec(), per_body, distances, active };
    if min <= opts.tolerance {
        return Ok(MorseReport { closest, status: MorseStatus::Interior, hull_gap: 0.0, approximate: true });
    }
    let pts: Vec<Vec<f64>> = closest.active.iter().map(|&i| closest.per_body[i].clone()).collect();
    let (_, gap) = project(&pts, x0);
    let status = if gap <= opts.tolerance { MorseStatus::Critical } else { MorseStatus::Regular };
    Ok(MorseReport { closest, status, hull_gap: gap, approximate: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{generate_instance, partition_instance, SearchConfig};
    use crate::join::MatroidSpec;
    use proptest::prelude::*;

    fn opts() -> FiltrationOptions {
        FiltrationOptions::default()
    }

    #[test]
    fn two_points_and_three_points() {
        let inst = partition_instance(1, &[&[&[-1], &[1]]]).unwrap();
        let r = critical_radius(&inst, &[0, 1], &opts()).unwrap();
        assert!((r.radius - 1.0).abs() < 1e-9 && r.argmin[0].abs() < 1e-9);

        let inst = partition_instance(1, &[&[&[0], &[1], &[2]]]).unwrap();
        let r = critical_radius(&inst, &[0, 1, 2], &opts()).unwrap();
        assert!((r.radius - 1.0).abs() < 1e-9 && (r.argmin[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn intersecting_is_exactly_zero() {
        let inst = partition_instance(2, &[&[&[-1, -1], &[-1, 1]], &[&[1, 1], &[1, -1]]]).unwrap();
        let c = build_nerve(&inst, 3).unwrap();
        for f in c.faces(1) {
            let r = critical_radius(&inst, f, &opts()).unwrap();
            assert!(r.exact_zero && r.radius == 0.0);
        }
    }

    #[test]
    fn disjoint_segments_meet_at_half_distance() {
        // Colorful edges of a 4x2 rectangle; bases 0 and 3 are the bottom and
        // top sides, 1 and 2 the left and right ones.
        let inst = partition_instance(2, &[&[&[0, 0], &[4, 2]], &[&[4, 0], &[0, 2]]]).unwrap();
        let r = critical_radius(&inst, &[0, 3], &opts()).unwrap();
        assert!((r.radius - 1.0).abs() < 1e-9);
        let r = critical_radius(&inst, &[1, 2], &opts()).unwrap();
        assert!((r.radius - 2.0).abs() < 1e-9);
        assert_eq!(offset_nerve(&inst, 0.0, 1, &opts()).unwrap().counts(), vec![4, 4]);
        assert_eq!(offset_nerve(&inst, 0.999, 1, &opts()).unwrap().counts(), vec![4, 4]);
        assert_eq!(offset_nerve(&inst, 1.0, 1, &opts()).unwrap().counts(), vec![4, 5]);
        assert_eq!(offset_nerve(&inst, 2.0, 1, &opts()).unwrap().counts(), vec![4, 6]);
    }

    #[test]
    fn huge_radius_gives_full_simplex() {
        let cfg = SearchConfig::new(2, vec![2, 2, 1]).with_seed(4);
        let inst = generate_instance(&cfg, 0).unwrap();
        let c = offset_nerve(&inst, 1e6, 3, &opts()).unwrap();
        assert_eq!(c.counts(), vec![4, 6, 4, 1]);
    }

    #[test]
    fn trace_matches_offset_nerve() {
        let cfg = SearchConfig::new(2, vec![2, 2, 2]).with_seed(9);
        let inst = generate_instance(&cfg, 1).unwrap();
        let trace = filtration_trace(&inst, 2, &opts(), 10_000).unwrap();
        assert_eq!(trace.monotonicity_violations, 0);
        assert!(trace.entries.windows(2).all(|w| w[0].appearance <= w[1].appearance));
        for t in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
            assert_eq!(trace.complex_at(t), offset_nerve(&inst, t, 2, &opts()).unwrap(), "t = {t}");
        }
        assert_eq!(trace.complex_at(0.0), build_nerve(&inst, 2).unwrap());
    }

    #[test]
    fn morse_examples() {
        let one = partition_instance(2, &[&[&[0, 0]], &[&[2, 0]]]).unwrap();
        let r = morse_probe(&one, &[1.0, 3.0], &opts()).unwrap();
        assert_eq!(r.status, MorseStatus::Regular);
        assert_eq!(r.closest.active, vec![0]);
        assert!((r.closest.per_body[0][0] - 1.0).abs() < 1e-9);

        // Two single-point bodies with the probe at their midpoint.
        let mut pts = std::collections::BTreeMap::new();
        pts.insert(0, crate::QPoint::from_ints(&[-1, 0]));
        pts.insert(1, crate::QPoint::from_ints(&[1, 0]));
        let ground = crate::join::GroundSet::new(2, pts).unwrap();
        let two = Instance::new(ground, MatroidSpec::Partition { classes: vec![vec![0, 1]] }).unwrap();
        let r = morse_probe(&two, &[0.0, 0.0], &opts()).unwrap();
        assert_eq!(r.status, MorseStatus::Critical);
        assert_eq!(r.closest.active, vec![0, 1]);

        let r = morse_probe(&one, &[0.5, 0.0], &opts()).unwrap();
        assert_eq!(r.status, MorseStatus::Interior);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn radius_is_monotone_under_inclusion(seed in 0u64..1000) {
            let cfg = SearchConfig::new(2, vec![2, 2, 1]).with_seed(seed);
            let inst = generate_instance(&cfg, 0).unwrap();
            let big = critical_radius(&inst, &[0, 1, 2, 3], &opts()).unwrap();
            for sub in [[0usize, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
                let small = critical_radius(&inst, &sub, &opts()).unwrap();
                prop_assert!(small.radius <= big.radius + 1e-9);
            }
            // The argmin is within the radius of every member.
            for i in 0..4 {
                let (_, d) = project(&bodies_of(&inst, &[i]).unwrap()[0], &big.argmin);
                prop_assert!(d <= big.radius + 1e-9);
            }
        }
    }
}
