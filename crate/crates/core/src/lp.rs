//! Dense two-phase simplex over exact rationals.
//!
//! Problems are tiny (a few dozen columns), so the tableau is kept dense and
//! Bland's rule is used throughout; it never cycles and needs no tolerances.

use num_traits::{Signed, Zero};

use crate::Rational;

/// `minimize c.x  subject to  A x = b, x >= 0`.
#[derive(Clone, Debug)]
pub struct StandardLp {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        solution: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    // reduced costs; last entry is minus the objective value
    z: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        if !self.z[c].is_zero() {
            let f = self.z[c].clone();
            for (x, p) in self.z.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn set_objective(&mut self, costs: &[Rational]) {
        let mut z: Vec<Rational> = costs.to_vec();
        z.resize(self.width + 1, Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (x, t) in z.iter_mut().zip(&self.rows[r]) {
                *x -= cb * t;
            }
        }
        self.z = z;
    }

    /// Runs Bland-rule iterations over columns `< allowed`. Returns false if
    /// the objective is unbounded below.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.z[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let coef = &self.rows[r][enter];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / coef;
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

pub fn solve(lp: &StandardLp) -> LpOutcome {
    let m = lp.b.len();
    let nvars = lp.c.len();
    let width = nvars + m;

    let mut rows = Vec::with_capacity(m);
    for (i, (arow, bi)) in lp.a.iter().zip(&lp.b).enumerate() {
        let flip = bi.is_negative();
        let mut row: Vec<Rational> = arow
            .iter()
            .map(|x| if flip { -x } else { x.clone() })
            .collect();
        row.resize(width + 1, Rational::zero());
        row[nvars + i] = Rational::from_integer(1.into());
        row[width] = if flip { -bi } else { bi.clone() };
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        z: Vec::new(),
        basis: (nvars..width).collect(),
        width,
    };

    // phase one: minimize the sum of artificials
    let mut phase_one = vec![Rational::zero(); width];
    for c in phase_one.iter_mut().skip(nvars) {
        *c = Rational::from_integer(1.into());
    }
    t.set_objective(&phase_one);
    t.optimize(width);
    if !t.z[width].is_zero() {
        return LpOutcome::Infeasible;
    }

    // drive artificials out of the basis, dropping redundant rows
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= nvars {
            match (0..nvars).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => {
                    t.pivot(r, j);
                    r += 1;
                }
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                }
            }
        } else {
            r += 1;
        }
    }

    let mut costs = lp.c.clone();
    costs.resize(width, Rational::zero());
    t.set_objective(&costs);
    if !t.optimize(nvars) {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![Rational::zero(); nvars];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < nvars {
            solution[b] = t.rhs(r).clone();
        }
    }
    LpOutcome::Optimal {
        value: -t.z[width].clone(),
        solution,
    }
}
