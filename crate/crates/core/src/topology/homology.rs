//! Integer simplicial homology through Smith normal form of boundary maps.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use super::complex::{drop_index, Face, SimplicialComplex};
use crate::error::{input, Error, Result};

/// Betti numbers and torsion for dimensions below the complex's cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub betti: Vec<usize>,
    /// Invariant factors greater than one, per dimension.
    #[serde(serialize_with = "ser_torsion", deserialize_with = "de_torsion")]
    pub torsion: Vec<Vec<BigInt>>,
    pub reduced: bool,
}

fn ser_torsion<S: Serializer>(t: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<Vec<String>> = t.iter().map(|v| v.iter().map(BigInt::to_string).collect()).collect();
    strs.serialize(s)
}

fn de_torsion<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<BigInt>>, D::Error> {
    let strs: Vec<Vec<String>> = Vec::deserialize(d)?;
    strs.into_iter()
        .map(|v| v.into_iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect())
        .collect()
}

impl HomologyReport {
    /// All Betti numbers zero and no torsion.
    pub fn is_trivial(&self) -> bool {
        self.betti.iter().all(|&b| b == 0) && self.torsion.iter().all(Vec::is_empty)
    }

    pub fn betti(&self, k: usize) -> usize {
        self.betti.get(k).copied().unwrap_or(0)
    }
}

/// Homology for every dimension below the cap.
pub fn homology(complex: &SimplicialComplex, reduced: bool) -> Result<HomologyReport> {
    if complex.cap() == 0 {
        return Ok(HomologyReport { betti: Vec::new(), torsion: Vec::new(), reduced });
    }
    homology_upto(complex, complex.cap() - 1, reduced)
}

/// Homology in dimensions `0..=max_dim`; needs `max_dim < cap`.
pub fn homology_upto(complex: &SimplicialComplex, max_dim: usize, reduced: bool) -> Result<HomologyReport> {
    if max_dim >= complex.cap() {
        return input(format!("H_{max_dim} needs faces above the dimension cap {}", complex.cap()));
    }
    let top = max_dim + 1;
    let cells = Coreduced::new(complex, top);
    // One vertex per component went first, so H_0 of what is left is zero.
    let components = cells.components;
    let chi = |n: &dyn Fn(usize) -> usize| -> i64 {
        (0..=top).map(|k| if k % 2 == 0 { n(k) as i64 } else { -(n(k) as i64) }).sum()
    };
    let chi_before = chi(&|k| complex.faces(k).len());
    let chi_after = chi(&|k| cells.alive[k].iter().filter(|&&a| a).count());
    if chi_after != chi_before - components as i64 {
        return Err(Error::Inconsistency("coreduction changed the Euler characteristic".into()));
    }
    // ranks[k] = rank of ∂_k on the surviving cells; factors[k] its invariant factors > 1.
    let mut ranks = vec![0usize; top + 1];
    let mut factors: Vec<Vec<BigInt>> = vec![Vec::new(); top + 1];
    for k in 1..=top {
        let snf = smith_invariants(cells.boundary(complex, k), cells.live(k - 1).len());
        ranks[k] = snf.len();
        factors[k] = snf.into_iter().filter(|f| !f.is_one()).collect();
    }
    let mut betti = Vec::with_capacity(top);
    let mut torsion = Vec::with_capacity(top);
    for k in 0..=max_dim {
        let n = cells.live(k).len();
        let b = n
            .checked_sub(ranks[k] + ranks[k + 1])
            .ok_or_else(|| Error::Inconsistency(format!("rank audit failed in dimension {k}")))?;
        betti.push(b);
        torsion.push(factors[k + 1].clone());
    }
    // Rank-nullity over the surviving cells.
    let sign = |k: usize, x: usize| if k % 2 == 0 { x as i64 } else { -(x as i64) };
    let lhs: i64 = betti.iter().enumerate().map(|(k, &b)| sign(k, b)).sum();
    let rhs: i64 = (0..=max_dim).map(|k| sign(k, cells.live(k).len())).sum::<i64>() + sign(top, ranks[top]);
    if lhs != rhs {
        return Err(Error::Inconsistency(format!("Euler audit failed: {lhs} != {rhs}")));
    }
    if betti[0] != 0 {
        return Err(Error::Inconsistency("relative H_0 is not zero".into()));
    }
    betti[0] = if reduced { components.saturating_sub(1) } else { components };
    Ok(HomologyReport { betti, torsion, reduced })
}

/// Cells of the skeleton up to `top` that survive coreduction.
///
/// One vertex of every component is removed, then a cell and its only
/// remaining facet are removed together while such pairs exist. Boundaries
/// restricted to the survivors have the homology of the complex relative to
/// the removed vertices.
struct Coreduced {
    alive: Vec<Vec<bool>>,
    components: usize,
}

impl Coreduced {
    fn new(complex: &SimplicialComplex, top: usize) -> Self {
        let levels: Vec<&[Face]> = (0..=top).map(|k| complex.faces(k)).collect();
        // facets[k][i*(k+1)+j]: index in level k-1 of face i with vertex j dropped.
        let facets: Vec<Vec<u32>> = (0..=top)
            .map(|k| {
                if k == 0 {
                    return Vec::new();
                }
                let lower = levels[k - 1];
                levels[k]
                    .iter()
                    .flat_map(|f| {
                        (0..f.len()).map(move |j| {
                            let sub = drop_index(f, j);
                            lower.binary_search(&sub).expect("complex is downward closed") as u32
                        })
                    })
                    .collect()
            })
            .collect();
        // Compressed coface lists: cofaces of cell i at level k are in
        // cof[k].1[cof[k].0[i]..cof[k].0[i+1]], as indices into level k+1.
        let cof: Vec<(Vec<usize>, Vec<u32>)> = (0..=top)
            .map(|k| {
                let n = levels[k].len();
                if k == top {
                    return (vec![0; n + 1], Vec::new());
                }
                let up = &facets[k + 1];
                let mut start = vec![0usize; n + 1];
                for &f in up {
                    start[f as usize + 1] += 1;
                }
                for i in 0..n {
                    start[i + 1] += start[i];
                }
                let mut fill = start.clone();
                let mut list = vec![0u32; up.len()];
                for (pos, &f) in up.iter().enumerate() {
                    list[fill[f as usize]] = (pos / (k + 2)) as u32;
                    fill[f as usize] += 1;
                }
                (start, list)
            })
            .collect();

        let mut alive: Vec<Vec<bool>> = levels.iter().map(|l| vec![true; l.len()]).collect();
        let mut live_facets: Vec<Vec<u8>> =
            levels.iter().enumerate().map(|(k, l)| vec![if k == 0 { 0 } else { (k + 1) as u8 }; l.len()]).collect();
        let mut queue: std::collections::VecDeque<(usize, usize)> = Default::default();
        let mut remove = |k: usize, i: usize, alive: &mut Vec<Vec<bool>>, queue: &mut std::collections::VecDeque<_>| {
            alive[k][i] = false;
            let (start, list) = &cof[k];
            for &t in &list[start[i]..start[i + 1]] {
                let t = t as usize;
                if alive[k + 1][t] {
                    live_facets[k + 1][t] -= 1;
                    if live_facets[k + 1][t] == 1 {
                        queue.push_back((k + 1, t));
                    }
                }
            }
        };

        let mut components = 0;
        let mut parent: Vec<usize> = (0..levels[0].len()).collect();
        if top >= 1 {
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            for e in facets[1].chunks(2) {
                let (a, b) = (find(&mut parent, e[0] as usize), find(&mut parent, e[1] as usize));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        for v in 0..levels[0].len() {
            if parent[v] == v {
                components += 1;
                remove(0, v, &mut alive, &mut queue);
            }
        }
        while let Some((k, t)) = queue.pop_front() {
            if !alive[k][t] {
                continue;
            }
            let row = &facets[k][t * (k + 1)..(t + 1) * (k + 1)];
            let Some(&s) = row.iter().find(|&&s| alive[k - 1][s as usize]) else { continue };
            if row.iter().filter(|&&s| alive[k - 1][s as usize]).count() != 1 {
                continue;
            }
            remove(k - 1, s as usize, &mut alive, &mut queue);
            if k < top {
                remove(k, t, &mut alive, &mut queue);
            } else {
                alive[k][t] = false;
            }
        }
        Coreduced { alive, components }
    }

    fn live(&self, k: usize) -> Vec<usize> {
        self.alive[k].iter().enumerate().filter(|(_, &a)| a).map(|(i, _)| i).collect()
    }

    /// ∂_k restricted to surviving cells, rows renumbered.
    fn boundary(&self, complex: &SimplicialComplex, k: usize) -> Vec<Vec<(usize, i64)>> {
        let lower = complex.faces(k - 1);
        let mut row_of = vec![usize::MAX; lower.len()];
        for (r, i) in self.live(k - 1).into_iter().enumerate() {
            row_of[i] = r;
        }
        self.live(k)
            .into_iter()
            .map(|c| {
                let f = &complex.faces(k)[c];
                let mut col: Vec<(usize, i64)> = (0..f.len())
                    .filter_map(|j| {
                        let r = row_of[lower.binary_search(&drop_index(f, j)).expect("downward closed")];
                        (r != usize::MAX).then_some((r, if j % 2 == 0 { 1 } else { -1 }))
                    })
                    .collect();
                col.sort_unstable();
                col
            })
            .collect()
    }
}

/// Nonzero invariant factors of an integer matrix given by sparse columns,
/// ascending under divisibility.
pub fn smith_invariants(columns: Vec<Vec<(usize, i64)>>, rows: usize) -> Vec<BigInt> {
    let mut m = SparseElim::new(columns, rows);
    let units = m.eliminate_units();
    let mut out = vec![BigInt::one(); units];
    out.extend(dense_snf(m.remainder()));
    out
}

type SparseRow = Vec<(usize, i64)>;

/// Sparse matrix under unit-pivot Schur complement elimination.
///
/// Rows are sorted entry lists. Column lists may hold stale row ids, which
/// are filtered on use.
struct SparseElim {
    rows: Vec<SparseRow>,
    cols: Vec<Vec<usize>>,
    dead_rows: Vec<bool>,
    dead_cols: Vec<bool>,
}

fn entry(row: &[(usize, i64)], c: usize) -> i64 {
    row.binary_search_by_key(&c, |e| e.0).map_or(0, |i| row[i].1)
}

/// `a - f·b`, or `None` on overflow.
fn axpy(a: &[(usize, i64)], f: i64, b: &[(usize, i64)]) -> Option<SparseRow> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i]);
            i += 1;
        } else {
            let d = f.checked_mul(b[j].1)?;
            let v = if ca == cb {
                i += 1;
                a[i - 1].1.checked_sub(d)?
            } else {
                d.checked_neg()?
            };
            if v != 0 {
                out.push((cb, v));
            }
            j += 1;
        }
    }
    Some(out)
}

impl SparseElim {
    fn new(columns: Vec<Vec<(usize, i64)>>, nrows: usize) -> Self {
        let mut rows: Vec<SparseRow> = vec![Vec::new(); nrows];
        let mut cols = vec![Vec::new(); columns.len()];
        for (c, col) in columns.into_iter().enumerate() {
            for (r, v) in col {
                if v != 0 {
                    rows[r].push((c, v));
                    cols[c].push(r);
                }
            }
        }
        let ncols = cols.len();
        SparseElim { rows, cols, dead_rows: vec![false; nrows], dead_cols: vec![false; ncols] }
    }

    /// Live rows with a nonzero in column `c`, deduplicated in place.
    fn column(&mut self, c: usize) -> Vec<usize> {
        let mut list = std::mem::take(&mut self.cols[c]);
        list.sort_unstable();
        list.dedup();
        list.retain(|&r| !self.dead_rows[r] && entry(&self.rows[r], c) != 0);
        self.cols[c] = list.clone();
        list
    }

    /// Pivots on ±1 entries while any remain; returns the pivot count.
    ///
    /// Columns are swept in order, sparsest row first within a column; sweeps
    /// repeat while fill-in keeps producing new units.
    fn eliminate_units(&mut self) -> usize {
        let mut count = 0;
        loop {
            let before = count;
            for c in 0..self.cols.len() {
                if self.dead_cols[c] {
                    continue;
                }
                let col = self.column(c);
                let pick = col
                    .iter()
                    .filter(|&&r| entry(&self.rows[r], c).abs() == 1)
                    .min_by_key(|&&r| self.rows[r].len())
                    .copied();
                if let Some(r) = pick {
                    if self.pivot(r, c, &col) {
                        count += 1;
                    }
                }
            }
            if count == before {
                return count;
            }
        }
    }

    /// Schur complement on the unit at (r, c); false on i64 overflow, with
    /// the matrix left untouched.
    fn pivot(&mut self, r: usize, c: usize, col: &[usize]) -> bool {
        let p = entry(&self.rows[r], c);
        let prow = std::mem::take(&mut self.rows[r]);
        let mut updates = Vec::with_capacity(col.len());
        for &i in col.iter().filter(|&&i| i != r) {
            // row_i -= (a_ic / p) row_r, and p = ±1.
            let f = entry(&self.rows[i], c) * p;
            match axpy(&self.rows[i], f, &prow) {
                Some(row) => updates.push((i, row)),
                None => {
                    self.rows[r] = prow;
                    return false;
                }
            }
        }
        for (i, row) in updates {
            for &(j, _) in &row {
                if entry(&self.rows[i], j) == 0 {
                    self.cols[j].push(i);
                }
            }
            self.rows[i] = row;
        }
        self.dead_rows[r] = true;
        self.dead_cols[c] = true;
        true
    }

    /// The nonzero part that is left, dense.
    fn remainder(&mut self) -> Vec<Vec<BigInt>> {
        let live_cols: Vec<usize> =
            (0..self.cols.len()).filter(|&c| !self.dead_cols[c] && !self.column(c).is_empty()).collect();
        let col_pos: HashMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        self.rows
            .iter()
            .enumerate()
            .filter(|(r, row)| !self.dead_rows[*r] && !row.is_empty())
            .map(|(_, row)| {
                let mut dense = vec![BigInt::zero(); live_cols.len()];
                for &(j, v) in row {
                    dense[col_pos[&j]] = BigInt::from(v);
                }
                dense
            })
            .collect()
    }
}

/// Diagonal of the Smith normal form of a dense matrix (nonzero entries only).
pub fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero magnitude in the trailing block as pivot.
        let mut piv: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && piv.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                    if a[i][t].abs() < a[t][t].abs() {
                        a.swap(t, i);
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                    if a[t][j].abs() < a[t][t].abs() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold any offending row into the pivot row.
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sparse column-major boundary ∂_k, with rows indexed by (k-1)-faces.
    fn boundary_matrix(complex: &SimplicialComplex, k: usize) -> Vec<Vec<(usize, i64)>> {
        let lower: HashMap<&[usize], usize> =
            complex.faces(k - 1).iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
        complex
            .faces(k)
            .iter()
            .map(|f| {
                let mut col: Vec<(usize, i64)> = (0..f.len())
                    .map(|i| {
                        let sub = drop_index(f, i);
                        let row = *lower.get(sub.as_slice()).expect("complex is downward closed");
                        (row, if i % 2 == 0 { 1 } else { -1 })
                    })
                    .collect();
                col.sort_unstable();
                col
            })
            .collect()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn complex(n: usize, faces: &[&[usize]], cap: usize) -> SimplicialComplex {
        let f: Vec<Vec<usize>> = faces.iter().map(|f| f.to_vec()).collect();
        SimplicialComplex::from_maximal(n, &f, cap).unwrap()
    }

    #[test]
    fn snf_of_small_matrices() {
        assert_eq!(dense_snf(vec![big(&[2, 4, 4]), big(&[-6, 6, 12]), big(&[10, -4, -16])]), big(&[2, 6, 12]));
        assert_eq!(dense_snf(vec![big(&[2, 0]), big(&[0, 3])]), big(&[1, 6]));
        assert_eq!(dense_snf(vec![big(&[0, 0])]), big(&[]));
    }

    #[test]
    fn examples() {
        let full = complex(4, &[&[0, 1, 2, 3]], 4);
        let h = homology(&full, true).unwrap();
        assert_eq!(h.betti, vec![0, 0, 0, 0]);
        assert!(h.is_trivial());

        let hollow = complex(3, &[&[0, 1], &[1, 2], &[0, 2]], 2);
        assert_eq!(homology(&hollow, false).unwrap().betti, vec![1, 1]);

        let chord = complex(4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3], &[0, 2]], 2);
        assert_eq!(homology(&chord, false).unwrap().betti, vec![1, 2]);
        assert!(homology_upto(&chord, 2, false).is_err());
    }

    #[test]
    fn sphere_and_projective_plane() {
        let sphere = complex(4, &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]], 3);
        assert_eq!(homology(&sphere, false).unwrap().betti, vec![1, 0, 1]);
        // Six-vertex real projective plane.
        let rp2: [&[usize]; 10] = [
            &[0, 1, 2], &[0, 2, 3], &[0, 3, 4], &[0, 4, 5], &[0, 1, 5],
            &[1, 2, 4], &[2, 3, 5], &[1, 3, 4], &[1, 3, 5], &[2, 4, 5],
        ];
        let h = homology(&complex(6, &rp2, 3), false).unwrap();
        assert_eq!(h.betti, vec![1, 0, 0]);
        assert_eq!(h.torsion, vec![vec![], vec![BigInt::from(2)], vec![]]);
        let h = homology(&complex(6, &rp2, 3), true).unwrap();
        assert_eq!(h.betti, vec![0, 0, 0]);
        assert!(!h.is_trivial());
    }

    #[test]
    fn boundary_squares_to_zero() {
        let full = complex(6, &[&[0, 1, 2, 3, 4, 5]], 5);
        for k in 2..=5 {
            let outer = boundary_matrix(&full, k);
            let inner = boundary_matrix(&full, k - 1);
            for col in &outer {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(r, v) in col {
                    for &(rr, w) in &inner[r] {
                        *acc.entry(rr).or_default() += v * w;
                    }
                }
                assert!(acc.values().all(|&x| x == 0));
            }
        }
    }

    /// Betti numbers and torsion straight from the unreduced boundary matrices.
    fn direct(c: &SimplicialComplex, max_dim: usize) -> (Vec<usize>, Vec<Vec<BigInt>>) {
        let snf: Vec<Vec<BigInt>> = (0..=max_dim + 1)
            .map(|k| if k == 0 { Vec::new() } else { smith_invariants(boundary_matrix(c, k), c.faces(k - 1).len()) })
            .collect();
        let betti = (0..=max_dim).map(|k| c.faces(k).len() - snf[k].len() - snf[k + 1].len()).collect();
        let torsion = (0..=max_dim).map(|k| snf[k + 1].iter().filter(|f| !f.is_one()).cloned().collect()).collect();
        (betti, torsion)
    }

    proptest::proptest! {
        #[test]
        fn coreduction_matches_direct_computation(
            tops in proptest::collection::vec(proptest::collection::btree_set(0usize..8, 1..5), 1..9),
            cap in 2usize..4,
        ) {
            let maximal: Vec<Vec<usize>> = tops.into_iter().map(|s| s.into_iter().collect()).collect();
            let c = SimplicialComplex::from_maximal(8, &maximal, cap).unwrap();
            let h = homology(&c, false).unwrap();
            let (betti, torsion) = direct(&c, cap - 1);
            proptest::prop_assert_eq!(&h.betti, &betti);
            proptest::prop_assert_eq!(&h.torsion, &torsion);
            let r = homology(&c, true).unwrap();
            proptest::prop_assert_eq!(r.betti[0] + 1, betti[0]);
        }
    }

    #[test]
    fn disconnected_and_empty() {
        let two = complex(5, &[&[0, 1, 2], &[3, 4]], 3);
        assert_eq!(homology(&two, false).unwrap().betti, vec![2, 0, 0]);
        assert_eq!(homology(&two, true).unwrap().betti, vec![1, 0, 0]);
        let empty = SimplicialComplex::new(0, 2);
        assert_eq!(homology(&empty, true).unwrap().betti, vec![0, 0]);
    }

    #[test]
    fn sparse_matches_dense_on_random_matrices() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 7) as i64 - 3
        };
        for _ in 0..40 {
            let (r, c) = (5, 6);
            let dense: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| next()).collect()).collect();
            let cols: Vec<Vec<(usize, i64)>> =
                (0..c).map(|j| (0..r).filter(|&i| dense[i][j] != 0).map(|i| (i, dense[i][j])).collect()).collect();
            let want = dense_snf(dense.iter().map(|row| big(row)).collect());
            assert_eq!(smith_invariants(cols, r), want);
        }
    }
}
