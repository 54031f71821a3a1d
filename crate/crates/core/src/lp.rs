//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Variables are free; sign constraints must be given explicitly. The
//! objective is maximized.

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Constraint {
        Constraint { coeffs, relation, rhs }
    }

    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Constraint {
        Constraint::new(coeffs, Relation::Le, rhs)
    }

    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Constraint {
        Constraint::new(coeffs, Relation::Ge, rhs)
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Constraint {
        Constraint::new(coeffs, Relation::Eq, rhs)
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    /// A feasible point and a direction along which the objective grows
    /// without bound.
    Unbounded { point: Vec<Rational>, ray: Vec<Rational> },
    Infeasible,
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs of `cost` (maximization) for the current basis.
    fn reduced(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut red: Vec<Rational> = cost.to_vec();
        red.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, x) in self.rows[i].iter().enumerate() {
                if !x.is_zero() {
                    red[j] -= cb * x;
                }
            }
        }
        red
    }

    /// Runs Bland's rule on `cost` restricted to columns `allowed`.
    /// Returns `Err(column)` if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> std::result::Result<(), usize> {
        loop {
            let red = self.reduced(cost);
            let Some(enter) = (0..self.ncols).find(|&j| allowed[j] && red[j].is_positive()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Err(enter),
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }

    fn solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rows[i][self.ncols].clone();
        }
        x
    }
}

/// Maximizes `objective · x` over free `x` subject to `constraints`.
pub fn rational_lp(constraints: &[Constraint], objective: &[Rational]) -> LpOutcome {
    let n = objective.len();
    // columns: x+ (n), x- (n), one slack/surplus per inequality, one artificial per row needing it
    let m = constraints.len();
    let nslack = constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let mut needs_art = Vec::with_capacity(m);
    let mut normalized: Vec<(Vec<Rational>, Relation, Rational)> = Vec::with_capacity(m);
    for c in constraints {
        assert_eq!(c.coeffs.len(), n, "constraint length mismatch");
        let (coeffs, rel, rhs) = if c.rhs.is_negative() {
            let rel = match c.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            (c.coeffs.iter().map(|x| -x.clone()).collect(), rel, -c.rhs.clone())
        } else {
            (c.coeffs.clone(), c.relation, c.rhs.clone())
        };
        needs_art.push(rel != Relation::Le);
        normalized.push((coeffs, rel, rhs));
    }
    let nart = needs_art.iter().filter(|&&b| b).count();
    let ncols = 2 * n + nslack + nart;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack = 2 * n;
    let mut art = 2 * n + nslack;
    for (coeffs, rel, rhs) in normalized {
        let mut row = vec![Rational::zero(); ncols + 1];
        for (j, a) in coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[n + j] = -a.clone();
        }
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
        row[ncols] = rhs;
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, ncols };
    let art_start = 2 * n + nslack;
    if nart > 0 {
        let mut cost = vec![Rational::zero(); ncols];
        for c in cost.iter_mut().skip(art_start) {
            *c = -Rational::one();
        }
        let all = vec![true; ncols];
        t.optimize(&cost, &all).expect("phase one is bounded");
        let x = t.solution();
        if x[art_start..].iter().any(|v| !v.is_zero()) {
            return LpOutcome::Infeasible;
        }
        // drive artificial variables out of the basis, dropping redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art_start {
                if let Some(c) = (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, c);
                    i += 1;
                } else {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
    }
    let mut cost = vec![Rational::zero(); ncols];
    for j in 0..n {
        cost[j] = objective[j].clone();
        cost[n + j] = -objective[j].clone();
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| j < art_start).collect();
    let outcome = t.optimize(&cost, &allowed);
    let x = t.solution();
    let point: Vec<Rational> = (0..n).map(|j| &x[j] - &x[n + j]).collect();
    match outcome {
        Ok(()) => {
            let value = objective.iter().zip(&point).map(|(a, b)| a * b).sum();
            LpOutcome::Optimal { value, point }
        }
        Err(enter) => {
            let mut dir = vec![Rational::zero(); ncols];
            dir[enter] = Rational::one();
            for (i, &b) in t.basis.iter().enumerate() {
                dir[b] = -t.rows[i][enter].clone();
            }
            let ray = (0..n).map(|j| &dir[j] - &dir[n + j]).collect();
            LpOutcome::Unbounded { point, ray }
        }
    }
}
