//! Edge-path presentations of the fundamental group.
//!
//! An empty simplified presentation proves the group trivial. A nonempty one
//! proves nothing: the simplification is a heuristic.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Generators are edges; relator letters are `±(index + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    /// Least vertex of the component this presents.
    pub base_vertex: usize,
    pub generators: Vec<[usize; 2]>,
    pub relators: Vec<Vec<i32>>,
}

impl Presentation {
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

/// One presentation per connected component, ordered by least vertex.
pub fn pi1_presentation(complex: &SimplicialComplex) -> Result<Vec<Presentation>> {
    if complex.cap() < 2 {
        return Err(Error::Precondition("fundamental group needs the 2-skeleton (cap >= 2)".into()));
    }
    let n = complex.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in complex.faces(1) {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let mut in_tree: BTreeMap<[usize; 2], bool> = complex.faces(1).iter().map(|e| ([e[0], e[1]], false)).collect();
    let mut comp = vec![usize::MAX; n];
    let mut roots = Vec::new();
    for root in 0..n {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = roots.len();
        roots.push(root);
        comp[root] = id;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    in_tree.insert([u.min(w), u.max(w)], true);
                    queue.push_back(w);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(roots.len());
    for (id, &root) in roots.iter().enumerate() {
        let generators: Vec<[usize; 2]> =
            in_tree.iter().filter(|(e, &t)| !t && comp[e[0]] == id).map(|(e, _)| *e).collect();
        let gen_index: BTreeMap<[usize; 2], i32> =
            generators.iter().enumerate().map(|(i, e)| (*e, i as i32 + 1)).collect();
        let letter = |a: usize, b: usize| -> Option<i32> {
            let (e, s) = if a < b { ([a, b], 1) } else { ([b, a], -1) };
            gen_index.get(&e).map(|g| g * s)
        };
        let relators: Vec<Vec<i32>> = complex
            .faces(2)
            .iter()
            .filter(|t| comp[t[0]] == id)
            .map(|t| [letter(t[0], t[1]), letter(t[1], t[2]), letter(t[2], t[0])].into_iter().flatten().collect())
            .collect();
        let (gens, rels) = simplify(generators.len(), relators);
        out.push(Presentation {
            base_vertex: root,
            generators: gens.into_iter().map(|g| generators[g]).collect(),
            relators: rels,
        });
    }
    Ok(out)
}

fn reduce(word: &mut Vec<i32>) {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for &x in word.iter() {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    // Cyclic reduction.
    let mut lo = 0;
    let mut hi = out.len();
    while hi - lo >= 2 && out[lo] == -out[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    *word = out[lo..hi].to_vec();
}

/// Tietze passes; returns the surviving generator indices (0-based, into the
/// input numbering) and relators renumbered to match.
///
/// Only relators of length one or two are used to eliminate, so substituted
/// words never grow and each relator is revisited only when it mentions an
/// eliminated generator.
fn simplify(ngens: usize, mut relators: Vec<Vec<i32>>) -> (Vec<usize>, Vec<Vec<i32>>) {
    let mut alive = vec![true; ngens];
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); ngens + 1];
    let mut queue = VecDeque::new();
    for (i, r) in relators.iter_mut().enumerate() {
        reduce(r);
        for &x in r.iter() {
            occurs[x.unsigned_abs() as usize].push(i);
        }
        queue.push_back(i);
    }
    let eliminates = |r: &[i32]| r.len() == 1 || (r.len() == 2 && r[0].abs() != r[1].abs());
    while let Some(i) = queue.pop_front() {
        if !eliminates(&relators[i]) {
            continue;
        }
        let rel = std::mem::take(&mut relators[i]);
        let g = rel[0].unsigned_abs() as usize;
        // rel[0] · rest = 1, so rel[0] = rest^{-1}.
        let replacement: Option<i32> = rel.get(1).map(|&y| if rel[0] > 0 { -y } else { y });
        alive[g - 1] = false;
        let mut touched = std::mem::take(&mut occurs[g]);
        touched.sort_unstable();
        touched.dedup();
        for j in touched {
            if relators[j].is_empty() {
                continue;
            }
            let mut next = Vec::with_capacity(relators[j].len());
            for &x in &relators[j] {
                if x.unsigned_abs() as usize == g {
                    next.extend(replacement.map(|y| y * x.signum()));
                } else {
                    next.push(x);
                }
            }
            reduce(&mut next);
            if let Some(y) = replacement {
                occurs[y.unsigned_abs() as usize].push(j);
            }
            relators[j] = next;
            if eliminates(&relators[j]) {
                queue.push_back(j);
            }
        }
    }
    relators.retain(|r| !r.is_empty());
    relators.sort();
    relators.dedup();
    let kept: Vec<usize> = (0..ngens).filter(|&g| alive[g]).collect();
    let renumber: BTreeMap<i32, i32> = kept.iter().enumerate().map(|(new, &old)| (old as i32 + 1, new as i32 + 1)).collect();
    let rels = relators
        .into_iter()
        .map(|r| r.into_iter().map(|x| renumber[&x.abs()] * x.signum()).collect())
        .collect();
    (kept, rels)
}
