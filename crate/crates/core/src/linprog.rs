//! Exact linear feasibility over the rationals.
//!
//! A phase-one simplex with Bland's pivoting rule decides whether a system of
//! linear equations and inequalities has a real solution and returns one.
//! Cones, faces and distinguished subsets are all decided through this single
//! routine, so every answer is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Relation of a single constraint `coeffs · x (rel) rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rel: Relation,
    pub rhs: BigRational,
}

/// Feasibility problem in `vars` real unknowns. Unknowns are free unless
/// marked nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    vars: usize,
    nonneg: Vec<bool>,
    constraints: Vec<Constraint>,
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl Problem {
    /// All unknowns free.
    pub fn new(vars: usize) -> Self {
        Problem {
            vars,
            nonneg: vec![false; vars],
            constraints: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn add(&mut self, coeffs: Vec<BigRational>, rel: Relation, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.vars, "constraint length");
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// Integer-coefficient convenience form of [`Problem::add`].
    pub fn add_i64(&mut self, coeffs: &[i64], rel: Relation, rhs: i64) {
        self.add(coeffs.iter().map(|&c| q(c)).collect(), rel, q(rhs));
    }

    /// Returns a feasible point, or `None` if the system is infeasible.
    pub fn solve(&self) -> Option<Vec<BigRational>> {
        // Columns: split free variables into x+ and x-, then one slack per
        // inequality, then one artificial per row.
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.vars);
        let mut ncols = 0;
        for v in 0..self.vars {
            if self.nonneg[v] {
                col_of.push((ncols, None));
                ncols += 1;
            } else {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let n_struct = ncols;
        let m = self.constraints.len();
        let n_slack = self
            .constraints
            .iter()
            .filter(|c| c.rel != Relation::Eq)
            .count();
        let total = n_struct + n_slack + m;
        let rhs_col = total;
        let mut t: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); total + 1]; m];
        let mut basis = vec![0usize; m];
        let mut slack = n_struct;
        for (i, c) in self.constraints.iter().enumerate() {
            for (v, a) in c.coeffs.iter().enumerate() {
                let (p, n) = col_of[v];
                t[i][p] = a.clone();
                if let Some(n) = n {
                    t[i][n] = -a.clone();
                }
            }
            match c.rel {
                Relation::Le => {
                    t[i][slack] = q(1);
                    slack += 1;
                }
                Relation::Ge => {
                    t[i][slack] = q(-1);
                    slack += 1;
                }
                Relation::Eq => {}
            }
            t[i][rhs_col] = c.rhs.clone();
            if c.rhs.is_negative() {
                for x in t[i].iter_mut() {
                    *x = -x.clone();
                }
            }
            let art = n_struct + n_slack + i;
            t[i][art] = q(1);
            basis[i] = art;
        }
        let is_art = |j: usize| j >= n_struct + n_slack;

        loop {
            // Reduced cost of column j for the objective "sum of artificials".
            let entering = (0..total).find(|&j| {
                if basis.contains(&j) {
                    return false;
                }
                let mut r = if is_art(j) { q(1) } else { q(0) };
                for i in 0..m {
                    if is_art(basis[i]) {
                        r -= &t[i][j];
                    }
                }
                r.is_negative()
            });
            let Some(j) = entering else { break };
            let mut leave: Option<usize> = None;
            let mut best: Option<BigRational> = None;
            for i in 0..m {
                if !t[i][j].is_positive() {
                    continue;
                }
                let ratio = &t[i][rhs_col] / &t[i][j];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
            let r = leave.expect("phase-one objective is bounded below");
            pivot(&mut t, r, j);
            basis[r] = j;
        }

        let infeasible = (0..m).any(|i| is_art(basis[i]) && !t[i][rhs_col].is_zero());
        if infeasible {
            return None;
        }
        let mut val = vec![BigRational::zero(); total];
        for i in 0..m {
            val[basis[i]] = t[i][rhs_col].clone();
        }
        Some(
            col_of
                .iter()
                .map(|&(p, n)| match n {
                    Some(n) => &val[p] - &val[n],
                    None => val[p].clone(),
                })
                .collect(),
        )
    }

    pub fn is_feasible(&self) -> bool {
        self.solve().is_some()
    }
}

fn pivot(t: &mut [Vec<BigRational>], r: usize, j: usize) {
    let p = t[r][j].clone();
    for x in t[r].iter_mut() {
        *x = &*x / &p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[j].is_zero() {
            continue;
        }
        let f = row[j].clone();
        for (x, y) in row.iter_mut().zip(prow.iter()) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
}

/// Scales a rational vector by the lcm of its denominators and divides by
/// the gcd of the result, giving a primitive integer vector on the same ray.
pub fn primitive_integer_direction(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}
