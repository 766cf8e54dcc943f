//! Dense two-phase simplex with Bland's rule.
//!
//! Variables are implicitly nonnegative. With an exact [`Scalar`] the
//! outcome is exact; with floats the tolerances of [`Scalar::epsilon`] apply.

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<S> {
    pub coeffs: Vec<(usize, S)>,
    pub relation: Relation,
    pub rhs: S,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<S> {
    Infeasible,
    Unbounded,
    Optimal { value: S, point: Vec<S> },
}

impl<S> LpOutcome<S> {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

/// `maximize c·x` subject to linear rows and `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<S> {
    num_vars: usize,
    constraints: Vec<Constraint<S>>,
    objective: Vec<(usize, S)>,
}

impl<S: Scalar> LinearProgram<S> {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            constraints: Vec::new(),
            objective: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint<S>] {
        &self.constraints
    }

    pub fn add_var(&mut self) -> usize {
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn add(&mut self, coeffs: Vec<(usize, S)>, relation: Relation, rhs: S) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.num_vars));
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn push(&mut self, c: Constraint<S>) {
        self.constraints.push(c);
    }

    pub fn truncate(&mut self, len: usize) {
        self.constraints.truncate(len);
    }

    pub fn maximize(&mut self, objective: Vec<(usize, S)>) {
        self.objective = objective;
    }

    pub fn solve(&self) -> LpOutcome<S> {
        Tableau::build(self).run(&self.objective, self.num_vars)
    }

    /// Some feasible point, if any.
    pub fn feasible_point(&self) -> Option<Vec<S>> {
        match Tableau::build(self).run(&[], self.num_vars) {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    basis: Vec<usize>,
    /// structural + slack columns; artificials come after.
    real_cols: usize,
    cols: usize,
    artificial_rows: Vec<usize>,
}

impl<S: Scalar> Tableau<S> {
    fn build(lp: &LinearProgram<S>) -> Self {
        let n = lp.num_vars;
        let slack_count = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let real_cols = n + slack_count;
        let mut rows = Vec::with_capacity(lp.constraints.len());
        let mut kinds = Vec::with_capacity(lp.constraints.len());
        let mut slack = n;
        for c in &lp.constraints {
            let mut row = vec![S::zero(); real_cols];
            for (j, a) in &c.coeffs {
                row[*j] = row[*j].clone() + a.clone();
            }
            let mut rhs = c.rhs.clone();
            let mut rel = c.relation;
            let mut slack_col = None;
            if rel != Relation::Eq {
                row[slack] = if rel == Relation::Le { S::one() } else { S::zero() - S::one() };
                slack_col = Some(slack);
                slack += 1;
            }
            if rhs < S::zero() {
                for a in row.iter_mut() {
                    *a = S::zero() - a.clone();
                }
                rhs = S::zero() - rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            row.push(rhs);
            rows.push(row);
            // a `<=` row with nonnegative rhs starts with its slack basic
            kinds.push(if rel == Relation::Le { slack_col } else { None });
        }
        let artificial_rows: Vec<usize> = kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| k.is_none())
            .map(|(i, _)| i)
            .collect();
        let cols = real_cols + artificial_rows.len();
        let mut basis = vec![0; rows.len()];
        for row in rows.iter_mut() {
            let rhs = row.pop().unwrap();
            row.resize(cols, S::zero());
            row.push(rhs);
        }
        for (i, k) in kinds.iter().enumerate() {
            if let Some(col) = k {
                basis[i] = *col;
            }
        }
        for (a, &i) in artificial_rows.iter().enumerate() {
            rows[i][real_cols + a] = S::one();
            basis[i] = real_cols + a;
        }
        Tableau {
            rows,
            basis,
            real_cols,
            cols,
            artificial_rows,
        }
    }

    fn pivot(&mut self, obj: &mut [S], r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for a in self.rows[r].iter_mut() {
            *a = a.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for (a, b) in row.iter_mut().zip(&pivot_row) {
                if !b.is_zero() {
                    *a = a.clone() - f.clone() * b.clone();
                }
            }
            if S::is_exact() {
                continue;
            }
            if row[c].is_negligible() {
                row[c] = S::zero();
            }
        }
        let f = obj[c].clone();
        if !f.is_zero() {
            for (a, b) in obj.iter_mut().zip(&pivot_row) {
                if !b.is_zero() {
                    *a = a.clone() - f.clone() * b.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex on the objective row `obj` (holding `-c`, priced out),
    /// letting only columns `< allowed` enter. `false` means unbounded.
    fn optimize(&mut self, obj: &mut [S], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| obj[j].is_negative_strict());
            let Some(c) = entering else { return true };
            let rhs = self.cols;
            let mut best: Option<(usize, S)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive_strict() {
                    continue;
                }
                let ratio = row[rhs].clone() / row[c].clone();
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
                None => return false,
                Some((r, _)) => self.pivot(obj, r, c),
            }
        }
    }

    fn priced_objective(&self, cost: &[(usize, S)]) -> Vec<S> {
        let mut obj = vec![S::zero(); self.cols + 1];
        for (j, c) in cost {
            obj[*j] = obj[*j].clone() - c.clone();
        }
        for (i, &b) in self.basis.iter().enumerate() {
            let f = obj[b].clone();
            if f.is_zero() {
                continue;
            }
            for (a, x) in obj.iter_mut().zip(&self.rows[i]) {
                *a = a.clone() - f.clone() * x.clone();
            }
        }
        obj
    }

    fn run(mut self, objective: &[(usize, S)], num_vars: usize) -> LpOutcome<S> {
        let rhs = self.cols;
        if !self.artificial_rows.is_empty() {
            let phase1: Vec<(usize, S)> = (self.real_cols..self.cols)
                .map(|j| (j, S::zero() - S::one()))
                .collect();
            let mut obj = self.priced_objective(&phase1);
            self.optimize(&mut obj, self.cols);
            if obj[rhs].is_negative_strict() {
                return LpOutcome::Infeasible;
            }
            // drive remaining artificials out of the basis
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= self.real_cols {
                    let col = (0..self.real_cols).find(|&j| !self.rows[r][j].is_negligible());
                    match col {
                        Some(c) => {
                            let mut dummy = vec![S::zero(); self.cols + 1];
                            self.pivot(&mut dummy, r, c);
                        }
                        None => {
                            self.rows.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }
        let mut obj = self.priced_objective(objective);
        if !self.optimize(&mut obj, self.real_cols) {
            return LpOutcome::Unbounded;
        }
        let mut point = vec![S::zero(); num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < num_vars {
                point[b] = self.rows[i][rhs].clone();
            }
        }
        LpOutcome::Optimal {
            value: obj[rhs].clone(),
            point,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, Rational};
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  -> 36 at (2, 6)
        let mut lp = LinearProgram::<Rational>::new(2);
        lp.add(vec![(0, q(1, 1))], Relation::Le, q(4, 1));
        lp.add(vec![(1, q(2, 1))], Relation::Le, q(12, 1));
        lp.add(vec![(0, q(3, 1)), (1, q(2, 1))], Relation::Le, q(18, 1));
        lp.maximize(vec![(0, q(3, 1)), (1, q(5, 1))]);
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                value: q(36, 1),
                point: vec![q(2, 1), q(6, 1)]
            }
        );
    }

    #[test]
    fn equalities_and_ge_rows() {
        // max x, x + y = 1, x - y >= 1/3, y >= 1/10
        let mut lp = LinearProgram::<Rational>::new(2);
        lp.add(vec![(0, q(1, 1)), (1, q(1, 1))], Relation::Eq, q(1, 1));
        lp.add(vec![(0, q(1, 1)), (1, q(-1, 1))], Relation::Ge, q(1, 3));
        lp.add(vec![(1, q(1, 1))], Relation::Ge, q(1, 10));
        lp.maximize(vec![(0, q(1, 1))]);
        let LpOutcome::Optimal { value, point } = lp.solve() else { panic!() };
        assert_eq!(value, q(9, 10));
        assert_eq!(point, vec![q(9, 10), q(1, 10)]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::<Rational>::new(1);
        lp.add(vec![(0, q(1, 1))], Relation::Ge, q(2, 1));
        lp.add(vec![(0, q(1, 1))], Relation::Le, q(1, 1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        assert!(lp.feasible_point().is_none());

        let mut lp = LinearProgram::<Rational>::new(2);
        lp.add(vec![(0, q(1, 1)), (1, q(-1, 1))], Relation::Le, q(1, 1));
        lp.maximize(vec![(1, q(1, 1))]);
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_is_normalised() {
        // -x <= -1/2 means x >= 1/2; minimise x by maximising -x
        let mut lp = LinearProgram::<Rational>::new(1);
        lp.add(vec![(0, q(-1, 1))], Relation::Le, q(-1, 2));
        lp.maximize(vec![(0, q(-1, 1))]);
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                value: q(-1, 2),
                point: vec![q(1, 2)]
            }
        );
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::<Rational>::new(2);
        lp.add(vec![(0, q(1, 1)), (1, q(1, 1))], Relation::Eq, q(1, 1));
        lp.add(vec![(0, q(2, 1)), (1, q(2, 1))], Relation::Eq, q(2, 1));
        lp.maximize(vec![(1, q(1, 1))]);
        let LpOutcome::Optimal { value, .. } = lp.solve() else { panic!() };
        assert_eq!(value, q(1, 1));
    }

    #[test]
    fn empty_program() {
        let lp = LinearProgram::<Rational>::new(3);
        assert_eq!(lp.feasible_point(), Some(vec![Rational::zero(); 3]));
    }

    #[test]
    fn float_instance_matches_exact() {
        let mut lp = LinearProgram::<f64>::new(2);
        lp.add(vec![(0, 1.0)], Relation::Le, 4.0);
        lp.add(vec![(1, 2.0)], Relation::Le, 12.0);
        lp.add(vec![(0, 3.0), (1, 2.0)], Relation::Le, 18.0);
        lp.maximize(vec![(0, 3.0), (1, 5.0)]);
        let LpOutcome::Optimal { value, .. } = lp.solve() else { panic!() };
        assert!((value - 36.0).abs() < 1e-9);
    }
}
