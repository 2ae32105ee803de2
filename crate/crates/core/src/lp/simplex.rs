//! Dense two-phase simplex with Bland's rule over an ordered field.

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Sense of a linear constraint `a . x (sense) b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub sense: Sense,
    pub rhs: T,
}

/// `maximize c . x + constant` subject to the constraints, with each
/// variable either non-negative or free.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<T> {
    pub objective: Vec<T>,
    pub constant: T,
    pub free: Vec<bool>,
    pub constraints: Vec<Constraint<T>>,
}

/// Optimal vertex with its dual multipliers.
#[derive(Clone, Debug, PartialEq)]
pub struct Optimum<T> {
    pub value: T,
    pub point: Vec<T>,
    /// One multiplier per constraint: `>= 0` for `Le`, `<= 0` for `Ge`.
    pub duals: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<T> {
    Optimal(Optimum<T>),
    Infeasible,
}

/// Largest number of pivots before giving up (Bland's rule cannot cycle,
/// so this only guards against encoding errors in huge programs).
const MAX_PIVOTS: usize = 100_000;

impl<T: Field> LinearProgram<T> {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { objective: vec![T::zero(); num_vars], constant: T::zero(), free: vec![false; num_vars], constraints: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<T>, sense: Sense, rhs: T) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::DimensionMismatch { expected: self.num_vars(), got: coeffs.len() });
        }
        self.constraints.push(Constraint { coeffs, sense, rhs });
        Ok(())
    }

    /// `a . x - b` for every constraint at `x`.
    pub fn residuals(&self, x: &[T]) -> Vec<T> {
        self.constraints.iter().map(|c| dot(&c.coeffs, x) - c.rhs.clone()).collect()
    }

    /// True when `x` satisfies every constraint and sign condition exactly.
    pub fn is_feasible(&self, x: &[T]) -> bool {
        x.len() == self.num_vars()
            && x.iter().zip(&self.free).all(|(v, &f)| f || *v >= T::zero())
            && self.constraints.iter().zip(self.residuals(x)).all(|(c, r)| match c.sense {
                Sense::Le => r <= T::zero(),
                Sense::Ge => r >= T::zero(),
                Sense::Eq => r == T::zero(),
            })
    }

    /// Check `y` as a dual certificate for the bound `value`: sign
    /// conditions, `A^T y >= c` (equality on free variables) and
    /// `b . y + constant = value`.
    pub fn verify_dual(&self, y: &[T], value: &T) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        let signs = self.constraints.iter().zip(y).all(|(c, v)| match c.sense {
            Sense::Le => *v >= T::zero(),
            Sense::Ge => *v <= T::zero(),
            Sense::Eq => true,
        });
        let columns = (0..self.num_vars()).all(|j| {
            let aty = self.constraints.iter().zip(y).fold(T::zero(), |acc, (c, v)| acc + c.coeffs[j].clone() * v.clone());
            if self.free[j] {
                aty == self.objective[j]
            } else {
                aty >= self.objective[j]
            }
        });
        let by = self.constraints.iter().zip(y).fold(self.constant.clone(), |acc, (c, v)| acc + c.rhs.clone() * v.clone());
        signs && columns && by == *value
    }

    /// Two-phase simplex. Returns [`Error::Unbounded`] when the objective
    /// is unbounded above.
    pub fn solve(&self) -> Result<Outcome<T>> {
        Tableau::build(self).run(self)
    }
}

fn dot<T: Field>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Column layout: structural columns (free variables split in two), one
/// slack or surplus per inequality, one artificial per row.
struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    artificial_start: usize,
    /// Column equal to `e_i` of the sign-normalised rows at the start.
    initial_col: Vec<usize>,
    row_sign: Vec<T>,
    /// Structural column pairs `(pos, neg)` per variable.
    var_cols: Vec<(usize, Option<usize>)>,
}

impl<T: Field> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let m = lp.constraints.len();
        let mut var_cols = Vec::with_capacity(lp.num_vars());
        let mut structural = 0;
        for &f in &lp.free {
            let pos = structural;
            structural += 1;
            let neg = f.then(|| {
                structural += 1;
                structural - 1
            });
            var_cols.push((pos, neg));
        }
        let inequalities = lp.constraints.iter().filter(|c| c.sense != Sense::Eq).count();
        let artificial_start = structural + inequalities;
        let width = artificial_start + m;
        let mut rows = vec![vec![T::zero(); width]; m];
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut initial_col = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        let mut slack = structural;
        for (i, c) in lp.constraints.iter().enumerate() {
            let flip = c.rhs < T::zero();
            let sign = if flip { -T::one() } else { T::one() };
            for (j, a) in c.coeffs.iter().enumerate() {
                let (pos, neg) = var_cols[j];
                rows[i][pos] = a.clone() * sign.clone();
                if let Some(neg) = neg {
                    rows[i][neg] = -(a.clone() * sign.clone());
                }
            }
            let sense = match (c.sense, flip) {
                (Sense::Le, true) => Sense::Ge,
                (Sense::Ge, true) => Sense::Le,
                (s, _) => s,
            };
            rhs.push(c.rhs.clone() * sign.clone());
            let art = artificial_start + i;
            rows[i][art] = T::one();
            match sense {
                Sense::Le => {
                    rows[i][slack] = T::one();
                    basis.push(slack);
                    initial_col.push(slack);
                    slack += 1;
                }
                Sense::Ge => {
                    rows[i][slack] = -T::one();
                    basis.push(art);
                    initial_col.push(art);
                    slack += 1;
                }
                Sense::Eq => {
                    basis.push(art);
                    initial_col.push(art);
                }
            }
            row_sign.push(sign);
        }
        Tableau { rows, rhs, basis, artificial_start, initial_col, row_sign, var_cols }
    }

    fn width(&self) -> usize {
        self.artificial_start + self.rows.len()
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let piv = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / piv.clone();
        }
        self.rhs[r] = self.rhs[r].clone() / piv;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][col].clone();
            if f == T::zero() {
                continue;
            }
            for j in 0..self.width() {
                let delta = f.clone() * self.rows[r][j].clone();
                if delta != T::zero() {
                    self.rows[i][j] = self.rows[i][j].clone() - delta;
                }
            }
            self.rhs[i] = self.rhs[i].clone() - f * self.rhs[r].clone();
        }
        self.basis[r] = col;
    }

    /// Reduced profits `c_j - c_B B^{-1} A_j` for a cost vector over columns.
    fn reduced(&self, cost: &[T]) -> Vec<T> {
        (0..self.width())
            .map(|j| {
                self.rows.iter().zip(&self.basis).fold(cost[j].clone(), |acc, (row, &b)| acc - cost[b].clone() * row[j].clone())
            })
            .collect()
    }

    /// Maximise `cost` over the current basis; columns where `allowed` is
    /// false never enter. Returns false on unboundedness.
    fn optimize(&mut self, cost: &[T], allowed: &dyn Fn(usize) -> bool) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            let reduced = self.reduced(cost);
            let Some(col) = (0..self.width()).find(|&j| allowed(j) && reduced[j] > T::zero()) else {
                return Ok(true);
            };
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col] > T::zero() {
                    let ratio = self.rhs[i].clone() / row[col].clone();
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, col),
            }
        }
        Err(Error::Budget(format!("simplex exceeded {MAX_PIVOTS} pivots")))
    }

    fn run(mut self, lp: &LinearProgram<T>) -> Result<Outcome<T>> {
        let width = self.width();
        let art = self.artificial_start;
        let phase1: Vec<T> = (0..width).map(|j| if j >= art { -T::one() } else { T::zero() }).collect();
        self.optimize(&phase1, &|j| j < art)?;
        let infeasibility = self.rows.iter().zip(&self.basis).zip(&self.rhs).fold(T::zero(), |acc, ((_, &b), v)| {
            if b >= art {
                acc + v.clone()
            } else {
                acc
            }
        });
        if infeasibility > T::zero() {
            return Ok(Outcome::Infeasible);
        }
        // drive zero-level artificials out where possible
        for r in 0..self.rows.len() {
            if self.basis[r] >= art {
                if let Some(col) = (0..art).find(|&j| self.rows[r][j] != T::zero()) {
                    self.pivot(r, col);
                }
            }
        }
        let mut cost = vec![T::zero(); width];
        for (j, c) in lp.objective.iter().enumerate() {
            let (pos, neg) = self.var_cols[j];
            cost[pos] = c.clone();
            if let Some(neg) = neg {
                cost[neg] = -c.clone();
            }
        }
        if !self.optimize(&cost, &|j| j < art)? {
            return Err(Error::Unbounded);
        }
        let mut column_values = vec![T::zero(); width];
        for (r, &b) in self.basis.iter().enumerate() {
            column_values[b] = self.rhs[r].clone();
        }
        let point: Vec<T> = self
            .var_cols
            .iter()
            .map(|&(pos, neg)| {
                let v = column_values[pos].clone();
                match neg {
                    Some(neg) => v - column_values[neg].clone(),
                    None => v,
                }
            })
            .collect();
        let value = dot(&lp.objective, &point) + lp.constant.clone();
        // y_i = c_B B^{-1} e_i, with B^{-1} e_i read from the initial column
        let duals = (0..self.rows.len())
            .map(|i| {
                let col = self.initial_col[i];
                let raw = self.rows.iter().zip(&self.basis).fold(T::zero(), |acc, (row, &b)| acc + cost[b].clone() * row[col].clone());
                raw * self.row_sign[i].clone()
            })
            .collect();
        Ok(Outcome::Optimal(Optimum { value, point, duals }))
    }
}
