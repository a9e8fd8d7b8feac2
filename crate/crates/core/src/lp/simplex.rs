//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems are taken in the form `min c·x  s.t.  A x = b, x ≥ 0` (or the
//! same with `max`). Every outcome carries a certificate that is re-checked
//! exactly before it is returned:
//!
//! * optimal: a primal point and a dual `y` with `Aᵀy ≤ c` (`≥` for max) and
//!   `bᵀy` equal to the optimal value;
//! * infeasible: a Farkas vector `y` with `Aᵀy ≤ 0` and `bᵀy > 0`;
//! * unbounded: a ray `d ≥ 0` with `A d = 0` and `c·d < 0` (`> 0` for max).

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use super::LpError;
use crate::exactnum::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
    pub sense: Sense,
}

impl LpProblem {
    pub fn new(
        a: Vec<Vec<Rational>>,
        b: Vec<Rational>,
        c: Vec<Rational>,
        sense: Sense,
    ) -> Result<Self, LpError> {
        let p = LpProblem { a, b, c, sense };
        p.check_dimensions()?;
        Ok(p)
    }

    pub fn num_rows(&self) -> usize {
        self.b.len()
    }

    pub fn num_cols(&self) -> usize {
        self.c.len()
    }

    fn check_dimensions(&self) -> Result<(), LpError> {
        if self.a.len() != self.b.len() {
            return Err(LpError::DimensionMismatch(format!(
                "{} matrix rows but {} right-hand sides",
                self.a.len(),
                self.b.len()
            )));
        }
        if let Some((i, row)) = self.a.iter().enumerate().find(|(_, r)| r.len() != self.c.len()) {
            return Err(LpError::DimensionMismatch(format!(
                "row {i} has {} entries but there are {} columns",
                row.len(),
                self.c.len()
            )));
        }
        Ok(())
    }

    /// Plain-text listing: the objective, then one line per row of `p/q`
    /// coefficients followed by `= b`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let join = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        let sense = match self.sense {
            Sense::Min => "min",
            Sense::Max => "max",
        };
        let _ = writeln!(out, "# {} rows x {} cols", self.num_rows(), self.num_cols());
        let _ = writeln!(out, "{sense} {}", join(&self.c));
        for (row, rhs) in self.a.iter().zip(&self.b) {
            let _ = writeln!(out, "{} = {rhs}", join(row));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational, dual: Vec<Rational> },
    Infeasible { certificate: Vec<Rational> },
    Unbounded { ray: Vec<Rational> },
}

impl LpOutcome {
    /// Re-checks the outcome's certificate against `p` with exact arithmetic.
    pub fn verify(&self, p: &LpProblem) -> Result<(), String> {
        let dot = |u: &[Rational], v: &[Rational]| -> Rational {
            u.iter().zip(v).map(|(a, b)| a * b).sum()
        };
        let col_dot = |y: &[Rational], j: usize| -> Rational {
            p.a.iter().zip(y).map(|(row, yi)| &row[j] * yi).sum()
        };
        match self {
            LpOutcome::Optimal { x, value, dual } => {
                if x.len() != p.num_cols() || dual.len() != p.num_rows() {
                    return Err("optimal: wrong vector lengths".into());
                }
                if x.iter().any(Signed::is_negative) {
                    return Err("optimal: negative primal entry".into());
                }
                if p.a.iter().zip(&p.b).any(|(row, bi)| &dot(row, x) != bi) {
                    return Err("optimal: A x ≠ b".into());
                }
                if &dot(&p.c, x) != value {
                    return Err("optimal: c·x ≠ value".into());
                }
                for j in 0..p.num_cols() {
                    let aty = col_dot(dual, j);
                    let ok = match p.sense {
                        Sense::Min => aty <= p.c[j],
                        Sense::Max => aty >= p.c[j],
                    };
                    if !ok {
                        return Err(format!("optimal: dual constraint {j} violated"));
                    }
                }
                if &dot(&p.b, dual) != value {
                    return Err("optimal: bᵀy ≠ value".into());
                }
            }
            LpOutcome::Infeasible { certificate: y } => {
                if y.len() != p.num_rows() {
                    return Err("infeasible: wrong certificate length".into());
                }
                if (0..p.num_cols()).any(|j| col_dot(y, j).is_positive()) {
                    return Err("infeasible: Aᵀy ≤ 0 violated".into());
                }
                if !dot(&p.b, y).is_positive() {
                    return Err("infeasible: bᵀy ≤ 0".into());
                }
            }
            LpOutcome::Unbounded { ray } => {
                if ray.len() != p.num_cols() || ray.iter().any(Signed::is_negative) {
                    return Err("unbounded: ray not in the nonnegative orthant".into());
                }
                if p.a.iter().any(|row| !dot(row, ray).is_zero()) {
                    return Err("unbounded: A d ≠ 0".into());
                }
                let slope = dot(&p.c, ray);
                let improving = match p.sense {
                    Sense::Min => slope.is_negative(),
                    Sense::Max => slope.is_positive(),
                };
                if !improving {
                    return Err("unbounded: ray does not improve the objective".into());
                }
            }
        }
        Ok(())
    }
}

/// Solves `p` exactly. The returned outcome has passed [`LpOutcome::verify`].
pub fn simplex_solve(p: &LpProblem) -> Result<LpOutcome, LpError> {
    p.check_dimensions()?;
    let min_cost: Vec<Rational> = match p.sense {
        Sense::Min => p.c.clone(),
        Sense::Max => p.c.iter().map(|v| -v).collect(),
    };
    let mut tab = Tableau::new(p);

    // Phase 1: minimize the sum of artificials.
    let phase1: Vec<Rational> = (0..tab.width())
        .map(|j| if j < tab.n { Rational::zero() } else { Rational::one() })
        .collect();
    tab.set_objective(&phase1);
    if let Some(j) = tab.run() {
        unreachable!("phase 1 is bounded below by 0, column {j} reported unbounded");
    }
    let infeasibility = tab.objective_value(&phase1);
    if infeasibility.is_positive() {
        let certificate = tab.row_duals(&phase1);
        let outcome = LpOutcome::Infeasible { certificate };
        return verified(outcome, p);
    }

    tab.drive_out_artificials();

    // Phase 2: the real objective; artificials never re-enter.
    let mut cost = min_cost.clone();
    cost.resize(tab.width(), Rational::zero());
    tab.set_objective(&cost);
    let outcome = match tab.run() {
        Some(entering) => LpOutcome::Unbounded { ray: tab.ray(entering) },
        None => {
            let x = tab.primal();
            let mut value = tab.objective_value(&cost);
            let mut dual = tab.row_duals(&cost);
            if p.sense == Sense::Max {
                value = -value;
                dual.iter_mut().for_each(|y| *y = -&*y);
            }
            LpOutcome::Optimal { x, value, dual }
        }
    };
    verified(outcome, p)
}

fn verified(outcome: LpOutcome, p: &LpProblem) -> Result<LpOutcome, LpError> {
    outcome.verify(p).map_err(LpError::Internal)?;
    Ok(outcome)
}

/// Rows are stored after flipping signs so that `b ≥ 0`; column `n + i` is
/// the artificial of original row `i`, so the artificial block of the
/// current tableau is the accumulated row-operation matrix.
struct Tableau {
    n: usize,
    m: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// `-1` where the original row was negated.
    signs: Vec<Rational>,
    /// Reduced costs of the structural columns.
    reduced: Vec<Rational>,
}

impl Tableau {
    fn new(p: &LpProblem) -> Self {
        let (n, m) = (p.num_cols(), p.num_rows());
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut signs = Vec::with_capacity(m);
        for (i, (row, bi)) in p.a.iter().zip(&p.b).enumerate() {
            let flip = bi.is_negative();
            let sign = if flip { -Rational::one() } else { Rational::one() };
            let mut r: Vec<Rational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
            r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            rows.push(r);
            rhs.push(if flip { -bi } else { bi.clone() });
            signs.push(sign);
        }
        Tableau { n, m, rows, rhs, basis: (n..n + m).collect(), signs, reduced: Vec::new() }
    }

    fn width(&self) -> usize {
        self.n + self.m
    }

    fn set_objective(&mut self, cost: &[Rational]) {
        self.reduced = (0..self.n)
            .map(|j| {
                let mut r = cost[j].clone();
                for (row, &bv) in self.rows.iter().zip(&self.basis) {
                    if !cost[bv].is_zero() && !row[j].is_zero() {
                        r -= &cost[bv] * &row[j];
                    }
                }
                r
            })
            .collect();
    }

    fn objective_value(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().zip(&self.rhs).map(|(&bv, v)| &cost[bv] * v).sum()
    }

    /// `y_i = sign_i · Σ_r c_{B_r} T[r][n+i]`, the simplex multipliers in
    /// terms of the original rows.
    fn row_duals(&self, cost: &[Rational]) -> Vec<Rational> {
        (0..self.m)
            .map(|i| {
                let w: Rational = self
                    .rows
                    .iter()
                    .zip(&self.basis)
                    .filter(|(_, &bv)| !cost[bv].is_zero())
                    .map(|(row, &bv)| &cost[bv] * &row[self.n + i])
                    .sum();
                w * &self.signs[i]
            })
            .collect()
    }

    fn primal(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n];
        for (&bv, v) in self.basis.iter().zip(&self.rhs) {
            if bv < self.n {
                x[bv] = v.clone();
            }
        }
        x
    }

    fn ray(&self, entering: usize) -> Vec<Rational> {
        let mut d = vec![Rational::zero(); self.n];
        d[entering] = Rational::one();
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            if bv < self.n {
                d[bv] = -&row[entering];
            }
        }
        d
    }

    /// Runs Bland-rule pivots until optimal (`None`) or an unbounded column
    /// is found (`Some(column)`).
    fn run(&mut self) -> Option<usize> {
        loop {
            let entering = self.reduced.iter().position(Signed::is_negative)?;
            let mut leave: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[entering].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &row[entering];
                let better = match &leave {
                    None => true,
                    Some((best_r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*best_r])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Some(entering);
            };
            self.pivot(r, entering);
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let support: Vec<usize> =
            (0..self.width()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for &j in &support {
                row[j] -= &factor * &pivot_row[j];
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !self.reduced[col].is_zero() {
            let factor = self.reduced[col].clone();
            for &j in support.iter().filter(|&&j| j < self.n) {
                self.reduced[j] -= &factor * &pivot_row[j];
            }
        }
        self.basis[r] = col;
    }

    /// After a successful phase 1, pivots zero-level artificials out of the
    /// basis and drops rows that are linear combinations of the others.
    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < self.n {
                r += 1;
                continue;
            }
            debug_assert!(self.rhs[r].is_zero());
            match (0..self.n).find(|&j| !self.rows[r][j].is_zero()) {
                Some(j) => {
                    self.reduced = vec![Rational::zero(); self.n];
                    self.pivot(r, j);
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.rhs.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }
}
