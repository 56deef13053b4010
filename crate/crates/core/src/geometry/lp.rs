//! Exact linear feasibility and small linear programs.
//!
//! Two-phase dense tableau simplex over [`Rational`], Dantzig pricing with a
//! switch to Bland's rule after a run of degenerate pivots. Every
//! answer carries a certificate: a witness assignment for feasible systems,
//! or a Farkas multiplier vector for infeasible ones. Both are re-checked
//! exactly in debug builds.

use std::ops::Range;

use crate::error::{input, Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    NonNegative,
    Free,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub terms: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    fn lhs(&self, x: &[Rational]) -> Rational {
        self.terms.iter().map(|(j, a)| a * &x[*j]).sum()
    }
}

/// Result of a feasibility query.
#[derive(Clone, Debug)]
pub enum LpOutcome {
    Feasible { witness: Vec<Rational> },
    /// One multiplier per constraint, applied to the constraint written in
    /// `>=` form (`Le` rows negated). Inequality multipliers are nonnegative;
    /// the combination has nonpositive coefficients on nonnegative variables,
    /// zero coefficients on free ones, and a strictly positive right-hand side.
    Infeasible { farkas: Vec<Rational> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Feasible { witness } => Some(witness),
            LpOutcome::Infeasible { .. } => None,
        }
    }

    pub fn into_witness(self) -> Option<Vec<Rational>> {
        match self {
            LpOutcome::Feasible { witness } => Some(witness),
            LpOutcome::Infeasible { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Optimum {
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
    Optimal { value: Rational, solution: Vec<Rational> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// A system of linear constraints over indexed variables.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    domains: Vec<Domain>,
    constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, domain: Domain) -> usize {
        self.domains.push(domain);
        self.domains.len() - 1
    }

    pub fn add_vars(&mut self, n: usize, domain: Domain) -> Range<usize> {
        let start = self.domains.len();
        self.domains.extend(std::iter::repeat(domain).take(n));
        start..start + n
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    /// Adds a constraint without validation; see [`LinearSystem::validate`].
    pub fn push(&mut self, terms: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { terms, relation, rhs });
    }

    pub fn validate(&self) -> Result<()> {
        for (i, c) in self.constraints.iter().enumerate() {
            if let Some((j, _)) = c.terms.iter().find(|(j, _)| *j >= self.domains.len()) {
                return input(format!(
                    "constraint {i} references variable {j}, but only {} variables exist",
                    self.domains.len()
                ));
            }
        }
        Ok(())
    }

    /// Exact re-substitution of a candidate assignment.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.domains.len() {
            return false;
        }
        if self
            .domains
            .iter()
            .zip(x)
            .any(|(d, v)| *d == Domain::NonNegative && v.is_negative())
        {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs = c.lhs(x);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
    }

    /// Exact check of a Farkas infeasibility certificate.
    pub fn refuted_by(&self, farkas: &[Rational]) -> bool {
        if farkas.len() != self.constraints.len() {
            return false;
        }
        let mut combo = vec![Rational::zero(); self.domains.len()];
        let mut rhs = Rational::zero();
        for (c, mu) in self.constraints.iter().zip(farkas) {
            if c.relation != Relation::Eq && mu.is_negative() {
                return false;
            }
            let eff = if c.relation == Relation::Le { -mu } else { mu.clone() };
            for (j, a) in &c.terms {
                combo[*j] += &(a * &eff);
            }
            rhs += &(&c.rhs * &eff);
        }
        let lhs_ok = self.domains.iter().zip(&combo).all(|(d, v)| match d {
            Domain::NonNegative => !v.is_positive(),
            Domain::Free => v.is_zero(),
        });
        lhs_ok && rhs.is_positive()
    }

    pub fn feasible(&self) -> Result<LpOutcome> {
        self.validate()?;
        let mut t = Tableau::build(self);
        let outcome = match t.phase_one() {
            Ok(()) => LpOutcome::Feasible { witness: t.solution(self) },
            Err(y) => LpOutcome::Infeasible { farkas: t.farkas_from_duals(&y) },
        };
        self.debug_check(&outcome);
        Ok(outcome)
    }

    pub fn optimize(&self, objective: &[(usize, Rational)], sense: Sense) -> Result<Optimum> {
        self.validate()?;
        if let Some((j, _)) = objective.iter().find(|(j, _)| *j >= self.domains.len()) {
            return input(format!("objective references unknown variable {j}"));
        }
        let mut t = Tableau::build(self);
        if let Err(y) = t.phase_one() {
            let farkas = t.farkas_from_duals(&y);
            debug_assert!(self.refuted_by(&farkas), "Farkas certificate failed re-check");
            return Ok(Optimum::Infeasible { farkas });
        }
        let sign = match sense {
            Sense::Minimize => Rational::one(),
            Sense::Maximize => -Rational::one(),
        };
        let costs: Vec<(usize, Rational)> = objective.iter().map(|(j, c)| (*j, c * &sign)).collect();
        if !t.phase_two(&costs) {
            return Ok(Optimum::Unbounded);
        }
        let solution = t.solution(self);
        debug_assert!(self.satisfied_by(&solution), "LP optimum failed re-substitution");
        let value: Rational = objective.iter().map(|(j, c)| c * &solution[*j]).sum();
        Ok(Optimum::Optimal { value, solution })
    }

    fn debug_check(&self, outcome: &LpOutcome) {
        if cfg!(debug_assertions) {
            let ok = match outcome {
                LpOutcome::Feasible { witness } => self.satisfied_by(witness),
                LpOutcome::Infeasible { farkas } => self.refuted_by(farkas),
            };
            if !ok {
                panic!("{}", Error::Inconsistency("LP certificate failed exact re-check".into()));
            }
        }
    }
}

/// Where a user variable lives among tableau columns.
#[derive(Clone, Copy)]
enum ColumnMap {
    Single(usize),
    Split(usize, usize),
}

struct Tableau {
    /// rows x (cols + 1); last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs, length cols + 1; the last entry is minus the objective value.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
    /// First artificial column; columns at or beyond it are artificial.
    first_artificial: usize,
    /// Initial identity column of each row and its phase-one cost.
    identity_col: Vec<(usize, bool)>,
    /// -1 if the row was negated to make its right-hand side nonnegative.
    row_sign: Vec<i32>,
    var_map: Vec<ColumnMap>,
    live: Vec<bool>,
}

impl Tableau {
    fn build(sys: &LinearSystem) -> Self {
        let mut var_map = Vec::with_capacity(sys.domains.len());
        let mut cols = 0usize;
        for d in &sys.domains {
            match d {
                Domain::NonNegative => {
                    var_map.push(ColumnMap::Single(cols));
                    cols += 1;
                }
                Domain::Free => {
                    var_map.push(ColumnMap::Split(cols, cols + 1));
                    cols += 2;
                }
            }
        }
        let m = sys.constraints.len();
        let slack_start = cols;
        let n_slack = sys.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let first_artificial = slack_start + n_slack;

        // Decide which rows need an artificial.
        let mut dense: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut slack_of_row = vec![None; m];
        let mut row_sign = vec![1; m];
        let mut next_slack = slack_start;
        for (i, c) in sys.constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); first_artificial];
            for (j, a) in &c.terms {
                match var_map[*j] {
                    ColumnMap::Single(k) => row[k] += a,
                    ColumnMap::Split(p, q) => {
                        row[p] += a;
                        row[q] -= a;
                    }
                }
            }
            let mut rhs = c.rhs.clone();
            // Normalise to g.x (>= | =) h.
            if c.relation == Relation::Le {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
                rhs = -rhs;
            }
            if c.relation != Relation::Eq {
                row[next_slack] = -Rational::one();
                slack_of_row[i] = Some(next_slack);
                next_slack += 1;
            }
            if rhs.is_negative() {
                row_sign[i] = -1;
                for v in row.iter_mut() {
                    *v = -&*v;
                }
                rhs = -rhs;
            }
            row.push(rhs);
            dense.push(row);
        }

        let mut identity_col = Vec::with_capacity(m);
        let mut n_art = 0;
        for i in 0..m {
            let usable_slack = slack_of_row[i].filter(|&s| dense[i][s].is_one());
            match usable_slack {
                Some(s) => identity_col.push((s, false)),
                None => {
                    identity_col.push((first_artificial + n_art, true));
                    n_art += 1;
                }
            }
        }
        let total = first_artificial + n_art;
        let mut rows = Vec::with_capacity(m);
        for (i, mut r) in dense.into_iter().enumerate() {
            let rhs = r.pop().unwrap();
            r.resize(total, Rational::zero());
            if identity_col[i].1 {
                r[identity_col[i].0] = Rational::one();
            }
            r.push(rhs);
            rows.push(r);
        }
        let basis = identity_col.iter().map(|(c, _)| *c).collect();

        // Phase-one reduced costs: c_j - sum over artificial rows of a_ij.
        let mut cost = vec![Rational::zero(); total + 1];
        for j in first_artificial..total {
            cost[j] = Rational::one();
        }
        for (i, r) in rows.iter().enumerate() {
            if identity_col[i].1 {
                for (cj, a) in cost.iter_mut().zip(r) {
                    if !a.is_zero() {
                        *cj -= a;
                    }
                }
            }
        }

        Tableau {
            rows,
            cost,
            basis,
            cols: total,
            first_artificial,
            identity_col,
            row_sign,
            var_map,
            live: vec![true; m],
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        if !piv.is_one() {
            let inv = piv.recip();
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..=self.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row.is_empty() {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                row[j] -= &(&f * &pivot_row[j]);
            }
        }
        let f = self.cost[c].clone();
        if !f.is_zero() {
            for &j in &nz {
                self.cost[j] -= &(&f * &pivot_row[j]);
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Simplex on the current cost row: most negative reduced cost enters,
    /// switching to Bland's rule for good after a run of degenerate pivots.
    /// `allowed` limits entering columns. Returns false if unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        const DEGENERATE_LIMIT: usize = 32;
        let mut degenerate = 0;
        loop {
            let entering = if degenerate >= DEGENERATE_LIMIT {
                (0..allowed).find(|&j| self.cost[j].is_negative())
            } else {
                (0..allowed)
                    .filter(|&j| self.cost[j].is_negative())
                    .min_by(|&a, &b| self.cost[a].cmp(&self.cost[b]).then(a.cmp(&b)))
            };
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !self.live[i] || !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.cols] / &row[c];
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                Some((r, ratio)) => {
                    if ratio.is_zero() {
                        degenerate += 1;
                    }
                    self.pivot(r, c);
                }
                None => return false,
            }
        }
    }

    /// Ok if feasible; otherwise the phase-one dual vector y (standard form).
    fn phase_one(&mut self) -> Result<(), Vec<Rational>> {
        let bounded = self.run(self.cols);
        debug_assert!(bounded, "phase one is bounded below by zero");
        let value = -&self.cost[self.cols];
        if value.is_positive() {
            // y_i = c_j - r_j on the initial identity column of row i.
            let y = self
                .identity_col
                .iter()
                .map(|&(j, art)| {
                    let c = if art { Rational::one() } else { Rational::zero() };
                    &c - &self.cost[j]
                })
                .collect();
            return Err(y);
        }
        // Drive remaining artificials out of the basis, dropping redundant rows.
        for r in 0..self.rows.len() {
            if self.basis[r] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(c) => self.pivot(r, c),
                    None => self.live[r] = false,
                }
            }
        }
        Ok(())
    }

    fn farkas_from_duals(&self, y: &[Rational]) -> Vec<Rational> {
        y.iter()
            .enumerate()
            .map(|(i, yi)| {
                if self.row_sign[i] < 0 {
                    -yi
                } else {
                    yi.clone()
                }
            })
            .collect()
    }

    /// Returns false if unbounded.
    fn phase_two(&mut self, objective: &[(usize, Rational)]) -> bool {
        let mut c = vec![Rational::zero(); self.cols + 1];
        for (j, v) in objective {
            match self.var_map[*j] {
                ColumnMap::Single(k) => c[k] += v,
                ColumnMap::Split(p, q) => {
                    c[p] += v;
                    c[q] -= v;
                }
            }
        }
        // Reduced costs relative to the current basis.
        for (i, row) in self.rows.iter().enumerate() {
            if !self.live[i] {
                continue;
            }
            let cb = c[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for (cj, a) in c.iter_mut().zip(row) {
                if !a.is_zero() {
                    *cj -= &(&cb * a);
                }
            }
        }
        self.cost = c;
        self.run(self.first_artificial)
    }

    fn solution(&self, sys: &LinearSystem) -> Vec<Rational> {
        let mut col_val = vec![Rational::zero(); self.cols];
        for (i, &b) in self.basis.iter().enumerate() {
            if self.live[i] {
                col_val[b] = self.rows[i][self.cols].clone();
            }
        }
        (0..sys.domains.len())
            .map(|v| match self.var_map[v] {
                ColumnMap::Single(k) => col_val[k].clone(),
                ColumnMap::Split(p, q) => &col_val[p] - &col_val[q],
            })
            .collect()
    }
}
