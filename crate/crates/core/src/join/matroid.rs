use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// Stable identity of a ground point. Coordinates may repeat; labels may not.
pub type Label = u32;

/// Which matroid lives on the ground set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatroidSpec {
    /// Color classes `X_1, ..., X_m`; independent means at most one per class.
    Partition { classes: Vec<Vec<Label>> },
    /// Every set of at most `rank` labels is independent.
    Uniform { rank: usize },
    /// The bases, listed explicitly.
    Bases { bases: Vec<Vec<Label>> },
}

/// Lexicographic `k`-subsets of `0..n`.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations { n, cur: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.n - k + i {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Index-level matroid over `0..n`, resolved from a [`MatroidSpec`].
#[derive(Clone, Debug)]
pub(crate) enum Oracle {
    Partition { class_of: Vec<usize>, classes: Vec<Vec<usize>> },
    Uniform { rank: usize },
    Bases { masks: Vec<u64>, rank: usize },
}

impl Oracle {
    /// Validates `spec` against the sorted label list.
    pub(crate) fn resolve(spec: &MatroidSpec, labels: &[Label]) -> Result<Oracle> {
        let n = labels.len();
        let index = |l: &Label| -> Result<usize> {
            labels
                .binary_search(l)
                .map_err(|_| crate::error::Error::Input(format!("unknown label {l}")))
        };
        match spec {
            MatroidSpec::Partition { classes } => {
                let mut class_of = vec![usize::MAX; n];
                let mut idx_classes = Vec::with_capacity(classes.len());
                for (c, class) in classes.iter().enumerate() {
                    if class.is_empty() {
                        return input(format!("class {} is empty", c + 1));
                    }
                    let mut members = Vec::with_capacity(class.len());
                    for l in class {
                        let i = index(l)?;
                        if class_of[i] != usize::MAX {
                            return input(format!("label {l} appears in more than one class slot"));
                        }
                        class_of[i] = c;
                        members.push(i);
                    }
                    members.sort_unstable();
                    idx_classes.push(members);
                }
                if let Some(i) = class_of.iter().position(|&c| c == usize::MAX) {
                    return input(format!("label {} belongs to no class", labels[i]));
                }
                Ok(Oracle::Partition { class_of, classes: idx_classes })
            }
            MatroidSpec::Uniform { rank } => {
                if *rank < 1 || *rank > n {
                    return input(format!("uniform rank {rank} outside 1..={n}"));
                }
                Ok(Oracle::Uniform { rank: *rank })
            }
            MatroidSpec::Bases { bases } => {
                if n > 64 {
                    return input("explicit bases support at most 64 labels");
                }
                let Some(first) = bases.first() else {
                    return input("basis list is empty");
                };
                let rank = first.len();
                if rank == 0 {
                    return input("bases must be nonempty");
                }
                let mut masks = BTreeSet::new();
                for b in bases {
                    if b.len() != rank {
                        return input("bases differ in cardinality");
                    }
                    let mut m = 0u64;
                    for l in b {
                        let bit = 1u64 << index(l)?;
                        if m & bit != 0 {
                            return input(format!("label {l} repeated in a basis"));
                        }
                        m |= bit;
                    }
                    if !masks.insert(m) {
                        return input("basis listed twice");
                    }
                }
                let all = masks.iter().fold(0u64, |a, m| a | m);
                if all.count_ones() as usize != n {
                    let loop_idx = (0..n).find(|i| all & (1 << i) == 0).unwrap();
                    return input(format!("label {} is a loop (in no basis)", labels[loop_idx]));
                }
                for &b1 in &masks {
                    for &b2 in &masks {
                        let mut only1 = b1 & !b2;
                        while only1 != 0 {
                            let x = only1 & only1.wrapping_neg();
                            only1 &= only1 - 1;
                            let mut only2 = b2 & !b1;
                            let mut ok = false;
                            while only2 != 0 {
                                let y = only2 & only2.wrapping_neg();
                                only2 &= only2 - 1;
                                if masks.contains(&((b1 & !x) | y)) {
                                    ok = true;
                                    break;
                                }
                            }
                            if !ok {
                                return input("bases violate the exchange axiom");
                            }
                        }
                    }
                }
                Ok(Oracle::Bases { masks: masks.into_iter().collect(), rank })
            }
        }
    }

    fn mask(set: &[usize]) -> u64 {
        set.iter().fold(0, |m, &i| m | (1 << i))
    }

    pub(crate) fn is_independent(&self, set: &[usize]) -> bool {
        match self {
            Oracle::Partition { class_of, classes } => {
                let mut seen = vec![false; classes.len()];
                set.iter().all(|&i| !std::mem::replace(&mut seen[class_of[i]], true))
            }
            Oracle::Uniform { rank } => set.len() <= *rank,
            Oracle::Bases { masks, .. } => {
                let s = Self::mask(set);
                masks.iter().any(|b| s & !b == 0)
            }
        }
    }

    pub(crate) fn rank_of(&self, set: &[usize]) -> usize {
        match self {
            Oracle::Partition { class_of, classes } => {
                let mut seen = vec![false; classes.len()];
                for &i in set {
                    seen[class_of[i]] = true;
                }
                seen.iter().filter(|&&s| s).count()
            }
            Oracle::Uniform { rank } => {
                let distinct: BTreeSet<_> = set.iter().collect();
                distinct.len().min(*rank)
            }
            Oracle::Bases { masks, .. } => {
                let s = Self::mask(set);
                masks.iter().map(|b| (s & b).count_ones() as usize).max().unwrap_or(0)
            }
        }
    }

    pub(crate) fn rank(&self) -> usize {
        match self {
            Oracle::Partition { classes, .. } => classes.len(),
            Oracle::Uniform { rank } | Oracle::Bases { rank, .. } => *rank,
        }
    }

    /// All bases as sorted index sets, in lexicographic order.
    pub(crate) fn bases(&self, n: usize) -> Vec<Vec<usize>> {
        match self {
            Oracle::Partition { classes, .. } => {
                let mut out = vec![Vec::new()];
                for class in classes {
                    let mut next = Vec::with_capacity(out.len() * class.len());
                    for partial in &out {
                        for &i in class {
                            let mut b: Vec<usize> = partial.clone();
                            b.push(i);
                            next.push(b);
                        }
                    }
                    out = next;
                }
                for b in &mut out {
                    b.sort_unstable();
                }
                out.sort();
                out
            }
            Oracle::Uniform { rank } => Combinations::new(n, *rank).collect(),
            Oracle::Bases { masks, .. } => {
                let mut out: Vec<Vec<usize>> = masks
                    .iter()
                    .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
                    .collect();
                out.sort();
                out
            }
        }
    }

    /// Number of bases, saturating.
    pub(crate) fn basis_count(&self, n: usize) -> usize {
        match self {
            Oracle::Partition { classes, .. } => {
                classes.iter().fold(1usize, |acc, c| acc.saturating_mul(c.len()))
            }
            Oracle::Uniform { rank } => {
                let mut c: u128 = 1;
                for i in 0..*rank as u128 {
                    c = c * (n as u128 - i) / (i + 1);
                    if c > usize::MAX as u128 {
                        return usize::MAX;
                    }
                }
                c as usize
            }
            Oracle::Bases { masks, .. } => masks.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic() {
        let c: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(c, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn rejects_bad_specs() {
        let labels = [1, 2, 3, 4];
        let bad = [
            MatroidSpec::Partition { classes: vec![vec![1, 2], vec![3]] },
            MatroidSpec::Partition { classes: vec![vec![1, 2], vec![2, 3, 4]] },
            MatroidSpec::Partition { classes: vec![vec![1, 2, 3, 4], vec![]] },
            MatroidSpec::Partition { classes: vec![vec![1, 2, 3, 9]] },
            MatroidSpec::Uniform { rank: 0 },
            MatroidSpec::Uniform { rank: 5 },
            MatroidSpec::Bases { bases: vec![vec![1, 2], vec![3]] },
            // {1,2},{3,4}: exchanging 1 out of {1,2} needs {2,3} or {2,4}.
            MatroidSpec::Bases { bases: vec![vec![1, 2], vec![3, 4]] },
            MatroidSpec::Bases { bases: vec![vec![1, 2], vec![1, 3]] },
        ];
        for spec in &bad {
            assert!(Oracle::resolve(spec, &labels).is_err(), "{spec:?}");
        }
    }

    #[test]
    fn explicit_bases_accepts_a_matroid() {
        // U_{2,4}
        let bases: Vec<Vec<Label>> =
            Combinations::new(4, 2).map(|c| c.iter().map(|&i| i as Label + 1).collect()).collect();
        let o = Oracle::resolve(&MatroidSpec::Bases { bases }, &[1, 2, 3, 4]).unwrap();
        assert_eq!(o.rank_of(&[0, 1, 2]), 2);
        assert!(o.is_independent(&[1, 3]));
        assert!(!o.is_independent(&[0, 1, 3]));
    }
}
