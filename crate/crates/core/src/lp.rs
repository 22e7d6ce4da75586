//! Exact two-phase simplex over the rationals.
//!
//! Variables are nonnegative. Pivoting follows Bland's rule, so the method
//! terminates on degenerate problems, which switch systems usually are.

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub n_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(n_vars: usize) -> Self {
        LinearProgram {
            n_vars,
            objective: vec![Rational::zero(); n_vars],
            constraints: Vec::new(),
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.n_vars);
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// Maximize `objective . x` subject to the constraints and `x >= 0`.
    pub fn maximize(&self) -> LpOutcome {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    n_orig: usize,
    n_cols: usize,
    artificial_start: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.n_vars;
        let m = lp.constraints.len();
        let n_slack = lp.constraints.iter().filter(|c| c.rel != Relation::Eq).count();
        // normalize to nonnegative right-hand sides
        let normalized: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.rel {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|x| -x).collect(), rel, -c.rhs.clone())
                } else {
                    (c.coeffs.clone(), c.rel, c.rhs.clone())
                }
            })
            .collect();
        let n_art = normalized.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let artificial_start = n + n_slack;
        let n_cols = artificial_start + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = n;
        let mut art = artificial_start;
        for (coeffs, rel, b) in normalized {
            let mut row = vec![Rational::zero(); n_cols];
            row[..n].clone_from_slice(&coeffs);
            match rel {
                Relation::Le => {
                    row[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                    row[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        Tableau {
            rows,
            rhs,
            basis,
            n_orig: n,
            n_cols,
            artificial_start,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = &*x / &p;
        }
        self.rhs[r] = &self.rhs[r] / &p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(prow.iter()) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
            self.rhs[i] = &self.rhs[i] - &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Run simplex iterations maximizing `cost` over columns `< limit`.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], limit: usize) -> bool {
        loop {
            // reduced cost of column j: cost_j - c_B . column_j
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for (i, &bv) in self.basis.iter().enumerate() {
                    if !cost[bv].is_zero() && !self.rows[i][j].is_zero() {
                        rc -= &cost[bv] * &self.rows[i][j];
                    }
                }
                if rc.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn solve(mut self, objective: &[Rational]) -> LpOutcome {
        // phase one: maximize minus the sum of artificials
        let mut cost1 = vec![Rational::zero(); self.n_cols];
        for c in cost1.iter_mut().skip(self.artificial_start) {
            *c = -Rational::one();
        }
        self.optimize(&cost1, self.n_cols);
        let infeasibility: Rational = self
            .basis
            .iter()
            .zip(self.rhs.iter())
            .filter(|(&b, _)| b >= self.artificial_start)
            .map(|(_, v)| v.clone())
            .sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive remaining (zero) artificials out of the basis
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.artificial_start {
                let col = (0..self.artificial_start).find(|&j| !self.rows[i][j].is_zero());
                match col {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        // redundant row
                        self.rows.remove(i);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        let mut cost2 = vec![Rational::zero(); self.n_cols];
        cost2[..self.n_orig].clone_from_slice(objective);
        if !self.optimize(&cost2, self.artificial_start) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); self.n_orig];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_orig {
                x[b] = self.rhs[i].clone();
            }
        }
        let value = x.iter().zip(objective.iter()).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { value, x }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(3), int(5)];
        lp.constrain(vec![int(1), int(0)], Relation::Le, int(4));
        lp.constrain(vec![int(0), int(2)], Relation::Le, int(12));
        lp.constrain(vec![int(3), int(2)], Relation::Le, int(18));
        assert_eq!(
            lp.maximize(),
            LpOutcome::Optimal {
                value: int(36),
                x: vec![int(2), int(6)]
            }
        );
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![int(1)];
        lp.constrain(vec![int(1)], Relation::Ge, int(2));
        lp.constrain(vec![int(1)], Relation::Le, int(1));
        assert_eq!(lp.maximize(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(1), int(0)];
        lp.constrain(vec![int(1), int(-1)], Relation::Eq, int(0));
        assert_eq!(lp.maximize(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_with_redundant_rows() {
        // x + y = 1 twice, max x - y
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![int(1), int(-1)];
        lp.constrain(vec![int(1), int(1)], Relation::Eq, int(1));
        lp.constrain(vec![int(2), int(2)], Relation::Eq, int(2));
        lp.constrain(vec![int(1), int(0)], Relation::Le, rat(3, 4));
        match lp.maximize() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, rat(1, 2));
                assert_eq!(x, vec![rat(3, 4), rat(1, 4)]);
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn negative_rhs_flips() {
        // -x <= -2 means x >= 2; min x = max -x -> -2
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![int(-1)];
        lp.constrain(vec![int(-1)], Relation::Le, int(-2));
        assert_eq!(
            lp.maximize(),
            LpOutcome::Optimal {
                value: int(-2),
                x: vec![int(2)]
            }
        );
    }
}
