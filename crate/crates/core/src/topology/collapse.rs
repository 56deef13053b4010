//! Deterministic greedy elementary collapses.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::complex::{drop_index, Face, SimplicialComplex};

/// Sequence of (free face, coface) removals and what remains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseCertificate {
    pub pairs: Vec<(Face, Face)>,
    pub residual: SimplicialComplex,
}

impl CollapseCertificate {
    /// The residual is a single vertex.
    pub fn collapsed_to_point(&self) -> bool {
        self.residual.face_total() == 1
    }

    /// Replays the pairs on `input`; checks every step and the final residual.
    pub fn verify(&self, input: &SimplicialComplex) -> bool {
        let mut live = LiveFaces::new(input);
        for (sigma, tau) in &self.pairs {
            if !live.has(sigma) || !live.has(tau) || tau.len() != sigma.len() + 1 {
                return false;
            }
            if !sigma.iter().all(|v| tau.contains(v)) || live.cofaces(sigma) != vec![tau.clone()] {
                return false;
            }
            live.remove(tau);
            live.remove(sigma);
        }
        live.into_complex(input) == self.residual
    }
}

struct LiveFaces {
    set: HashSet<Face>,
    vertices: usize,
}

impl LiveFaces {
    fn new(c: &SimplicialComplex) -> Self {
        let mut set = HashSet::new();
        for k in 0..=c.dimension().unwrap_or(0) {
            set.extend(c.faces(k).iter().cloned());
        }
        LiveFaces { set, vertices: c.vertex_count() }
    }

    fn has(&self, f: &[usize]) -> bool {
        self.set.contains(f)
    }

    fn remove(&mut self, f: &[usize]) {
        self.set.remove(f);
    }

    /// Live faces one dimension up that contain `f`, lexicographic.
    fn cofaces(&self, f: &[usize]) -> Vec<Face> {
        let mut out = Vec::new();
        for v in 0..self.vertices {
            if f.binary_search(&v).is_ok() {
                continue;
            }
            let mut g = f.to_vec();
            let pos = g.partition_point(|&x| x < v);
            g.insert(pos, v);
            if self.set.contains(&g) {
                out.push(g);
            }
        }
        out
    }

    fn into_complex(self, input: &SimplicialComplex) -> SimplicialComplex {
        let mut levels: Vec<Vec<Face>> = Vec::new();
        for f in self.set {
            let k = f.len() - 1;
            if levels.len() <= k {
                levels.resize(k + 1, Vec::new());
            }
            levels[k].push(f);
        }
        // Vertex numbering follows the input even where vertices vanished.
        SimplicialComplex::with_levels(input.vertex_count(), levels, input.cap())
    }
}

/// Removes free pairs until none are left: highest dimension first, then the
/// lexicographically smallest free face.
///
/// A residual of one vertex certifies that the stored complex is collapsible.
pub fn greedy_collapse(complex: &SimplicialComplex) -> CollapseCertificate {
    // Faces get ids level by level; cof[id] lists the ids of its cofaces.
    let top = complex.dimension().unwrap_or(0);
    let mut offset = vec![0usize; top + 2];
    for k in 0..=top {
        offset[k + 1] = offset[k] + complex.faces(k).len();
    }
    let total = offset[top + 1];
    let id_of = |f: &[usize]| -> usize {
        let k = f.len() - 1;
        offset[k] + complex.faces(k).binary_search_by(|g| g.as_slice().cmp(f)).expect("closed complex")
    };
    let mut facets: Vec<Vec<usize>> = vec![Vec::new(); total];
    let mut cof: Vec<Vec<usize>> = vec![Vec::new(); total];
    for k in 1..=top {
        for (i, f) in complex.faces(k).iter().enumerate() {
            let id = offset[k] + i;
            for j in 0..f.len() {
                let sub = id_of(&drop_index(f, j));
                facets[id].push(sub);
                cof[sub].push(id);
            }
        }
    }
    let face = |id: usize| -> &Face {
        let k = offset.partition_point(|&o| o <= id) - 1;
        &complex.faces(k)[id - offset[k]]
    };
    let mut alive = vec![true; total];
    let mut live_cof: Vec<usize> = cof.iter().map(Vec::len).collect();
    // Ids order faces lexicographically within a level, so a BTreeSet of ids
    // per level yields the smallest free face first.
    let mut free: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); top + 1];
    for k in 0..top {
        for id in offset[k]..offset[k + 1] {
            if live_cof[id] == 1 {
                free[k].insert(id);
            }
        }
    }
    let mut pairs = Vec::new();
    while let Some(k) = (0..top).rev().find(|&k| !free[k].is_empty()) {
        let sigma = free[k].pop_first().unwrap();
        let tau = *cof[sigma].iter().find(|&&t| alive[t]).expect("free face has a coface");
        alive[sigma] = false;
        alive[tau] = false;
        for &f in &facets[tau] {
            if f != sigma {
                live_cof[f] -= 1;
                update(&mut free, k, f, live_cof[f]);
            }
        }
        for &f in &facets[sigma] {
            live_cof[f] -= 1;
            update(&mut free, k - 1, f, live_cof[f]);
        }
        pairs.push((face(sigma).clone(), face(tau).clone()));
    }
    let mut levels: Vec<Vec<Face>> = vec![Vec::new(); top + 1];
    for k in 0..=top {
        for id in offset[k]..offset[k + 1] {
            if alive[id] {
                levels[k].push(face(id).clone());
            }
        }
    }
    let residual = SimplicialComplex::with_levels(complex.vertex_count(), levels, complex.cap());
    CollapseCertificate { pairs, residual }
}

fn update(free: &mut [BTreeSet<usize>], k: usize, id: usize, live: usize) {
    if live == 1 {
        free[k].insert(id);
    } else {
        free[k].remove(&id);
    }
}
