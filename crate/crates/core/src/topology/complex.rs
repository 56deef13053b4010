use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// A face is a strictly increasing vertex list.
pub type Face = Vec<usize>;

/// Abstract simplicial complex stored up to a dimension cap.
///
/// `faces[k]` holds the k-faces, sorted lexicographically. Faces above `cap`
/// are never stored; whether they exist in the full complex is unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    vertices: usize,
    faces: Vec<Vec<Face>>,
    cap: usize,
}

impl SimplicialComplex {
    /// The vertex set `0..vertices` with no higher faces yet.
    pub fn new(vertices: usize, cap: usize) -> Self {
        let faces = if vertices == 0 { Vec::new() } else { vec![(0..vertices).map(|v| vec![v]).collect()] };
        SimplicialComplex { vertices, faces, cap }
    }

    /// Downward closure of the given faces, truncated at `cap`.
    pub fn from_maximal(vertices: usize, maximal: &[Face], cap: usize) -> Result<Self> {
        let mut levels: Vec<HashSet<Face>> = vec![HashSet::new(); cap + 1];
        for f in maximal {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() || *f.last().unwrap() >= vertices {
                return input(format!("face {f:?} outside 0..{vertices}"));
            }
            let k = f.len().min(cap + 1);
            for sub in crate::join::Combinations::new(f.len(), k) {
                levels[k - 1].insert(sub.iter().map(|&i| f[i]).collect());
            }
        }
        let mut c = SimplicialComplex::new(vertices, cap);
        for k in (1..=cap).rev() {
            let below: Vec<Face> = levels[k]
                .iter()
                .flat_map(|f| (0..f.len()).map(move |i| drop_index(f, i)))
                .collect();
            levels[k - 1].extend(below);
        }
        for (k, level) in levels.into_iter().enumerate().skip(1) {
            if level.is_empty() {
                break;
            }
            let mut v: Vec<Face> = level.into_iter().collect();
            v.sort();
            c.push_level(k, v);
        }
        Ok(c)
    }

    /// Stores the given levels as they are, sorting each.
    pub(crate) fn with_levels(vertices: usize, mut levels: Vec<Vec<Face>>, cap: usize) -> Self {
        while levels.last().is_some_and(Vec::is_empty) {
            levels.pop();
        }
        for l in &mut levels {
            l.sort();
        }
        SimplicialComplex { vertices, faces: levels, cap }
    }

    /// Appends the k-faces; `k` must be one above the current top level.
    pub(crate) fn push_level(&mut self, k: usize, mut faces: Vec<Face>) {
        assert_eq!(k, self.faces.len(), "levels are added in order");
        assert!(k <= self.cap, "level above cap");
        if faces.is_empty() {
            return;
        }
        faces.sort();
        self.faces.push(faces);
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub(crate) fn set_cap(&mut self, cap: usize) {
        self.faces.truncate(cap + 1);
        self.cap = cap;
    }

    /// Highest stored dimension, or `None` if empty.
    pub fn dimension(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn faces(&self, k: usize) -> &[Face] {
        self.faces.get(k).map_or(&[], Vec::as_slice)
    }

    /// Stored face counts per dimension.
    pub fn counts(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn face_total(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        face.len().checked_sub(1).is_some_and(|k| self.faces(k).binary_search_by(|f| f.as_slice().cmp(face)).is_ok())
    }

    /// True when faces at the cap exist, so higher faces might be missing.
    pub fn cap_binding(&self) -> bool {
        !self.faces(self.cap).is_empty()
    }

    /// Alternating sum of stored face counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces.iter().enumerate().map(|(k, f)| if k % 2 == 0 { f.len() as i64 } else { -(f.len() as i64) }).sum()
    }

    /// Every stored k-face has all its (k-1)-faces stored, and levels are sorted.
    pub fn is_downward_closed(&self) -> bool {
        for k in 1..self.faces.len() {
            if !self.faces[k].windows(2).all(|w| w[0] < w[1]) {
                return false;
            }
            for f in &self.faces[k] {
                if (0..f.len()).any(|i| !self.contains(&drop_index(f, i))) {
                    return false;
                }
            }
        }
        true
    }

    /// Vertex-edge components, each as sorted vertex list, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in self.faces(1) {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..self.vertices {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// One face per line, vertices space separated; dimension then lexicographic.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for level in &self.faces {
            for f in level {
                let line: Vec<String> = f.iter().map(usize::to_string).collect();
                writeln!(s, "{}", line.join(" ")).unwrap();
            }
        }
        s
    }

    /// Inverse of [`dump`](Self::dump); the vertex count is taken from the 0-faces.
    pub fn parse_dump(text: &str, cap: usize) -> Result<Self> {
        let mut faces = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let f: Face = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| crate::error::Error::Input(format!("line {}: {e}", i + 1)))?;
            faces.push(f);
        }
        let n = faces.iter().filter(|f| f.len() == 1).count();
        let c = Self::from_maximal(n, &faces, cap)?;
        if c.face_total() != faces.len() {
            return input("dump is not downward closed or has duplicates");
        }
        Ok(c)
    }
}

pub(crate) fn drop_index(f: &[usize], i: usize) -> Face {
    let mut g = Vec::with_capacity(f.len() - 1);
    g.extend_from_slice(&f[..i]);
    g.extend_from_slice(&f[i + 1..]);
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_dump_round_trip() {
        let c = SimplicialComplex::from_maximal(4, &[vec![0, 1, 2], vec![2, 3]], 3).unwrap();
        assert_eq!(c.counts(), vec![4, 4, 1]);
        assert!(c.is_downward_closed());
        assert_eq!(c.euler_characteristic(), 1);
        assert!(!c.cap_binding());
        let text = c.dump();
        assert!(text.starts_with("0\n1\n2\n3\n0 1\n"));
        assert_eq!(SimplicialComplex::parse_dump(&text, 3).unwrap(), c);
        assert!(SimplicialComplex::parse_dump("0\n1\n0 1 2\n", 3).is_err());
    }

    #[test]
    fn truncation_and_components() {
        let c = SimplicialComplex::from_maximal(5, &[vec![0, 1, 2, 3]], 1).unwrap();
        assert_eq!(c.counts(), vec![5, 6]);
        assert!(c.cap_binding());
        assert_eq!(c.components(), vec![vec![0, 1, 2, 3], vec![4]]);
    }
}
