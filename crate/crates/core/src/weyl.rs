//! Weyl differencing: the differenced polynomial, its linearization in `y`,
//! the bilinear variety over `F_p`, and the resulting minor-arc bound.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::archimedean::LatticeMasses;
use crate::arith::next_residue_vector;
use crate::error::{Error, Result};
use crate::linalg::rank_mod_p;
use crate::poly::{CubicPolynomial, SymmetricCubicTensor};
use crate::weights::WeightFunction;

/// `G(w,x;y) = g(w+x+y) - g(w+y) - g(x+y) + g(y)` together with its
/// `y`-free part `Gamma(w,x) = G - sum_i y_i B_i(w;x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferencedValue {
    pub g: BigInt,
    pub gamma: BigInt,
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(s, t)| s + t).collect()
}

fn differenced(g: &CubicPolynomial, w: &[i64], x: &[i64], y: &[i64]) -> Result<BigInt> {
    let wy = add(w, y);
    Ok(g.eval_i64(&add(&wy, x))? - g.eval_i64(&wy)? - g.eval_i64(&add(x, y))? + g.eval_i64(y)?)
}

fn linear_part(tensor: &SymmetricCubicTensor, w: &[i64], x: &[i64], y: &[i64]) -> Result<BigInt> {
    let b = tensor.bilinear_system(w, x)?;
    Ok(b.iter().zip(y).map(|(bi, &yi)| BigInt::from(*bi) * yi).sum())
}

/// Exact `G(w,x;y)` and `Gamma(w,x)`; fails if `Gamma` recomputed at
/// `y + e_1` differs.
pub fn difference_form(g: &CubicPolynomial, w: &[i64], x: &[i64], y: &[i64]) -> Result<DifferencedValue> {
    let n = g.n();
    for v in [w, x, y] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    let tensor = SymmetricCubicTensor::from_cubic(&g.cubic_part())?;
    let value = differenced(g, w, x, y)?;
    let gamma = &value - linear_part(&tensor, w, x, y)?;
    if n > 0 {
        let mut y1 = y.to_vec();
        y1[0] += 1;
        let other = differenced(g, w, x, &y1)? - linear_part(&tensor, w, x, &y1)?;
        if other != gamma {
            return Err(Error::Precondition(format!("Gamma depends on y: {gamma} vs {other}")));
        }
    }
    Ok(DifferencedValue { g: value, gamma })
}

/// Largest `p^{2n}` for which the bilinear variety is counted.
pub const BILINEAR_BUDGET: u128 = 1_000_000_000;

/// `#{(x,y) in F_p^{2n} : B_i(x;y) = 0 for all i}`, as
/// `sum_x p^{n - rank M(x)}` with `B(x;y) = M(x) y`.
pub fn bilinear_variety_count(g0: &CubicPolynomial, p: u64) -> Result<u128> {
    if !crate::arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let n = g0.n();
    let size = (p as u128).checked_pow(2 * n as u32).filter(|&s| s <= BILINEAR_BUDGET);
    if size.is_none() {
        return Err(Error::Budget(format!("{p}^{} points", 2 * n)));
    }
    let tensor = SymmetricCubicTensor::from_cubic(g0)?;
    if n == 0 {
        return Ok(1);
    }
    // parallel over the first coordinate, ordered reduction
    let counts: Vec<u128> = (0..p)
        .into_par_iter()
        .map(|first| {
            let mut x = vec![0u64; n];
            x[0] = first;
            let mut acc = 0u128;
            loop {
                let rank = rank_mod_p(&tensor.matrix_mod(&x, p), p);
                acc += (p as u128).pow((n - rank) as u32);
                if !next_residue_vector(&mut x[1..], p) {
                    break;
                }
            }
            acc
        })
        .collect();
    Ok(counts.into_iter().sum())
}

/// Inputs of the Weyl bound for `S_u(q; z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeylBoundInput {
    pub q: u64,
    pub z: f64,
    pub p: f64,
    /// `sum |c_ijk|` over the integer tensor of `6 g0`.
    pub coefficient_sum: i64,
    pub epsilon: f64,
}

impl WeylBoundInput {
    pub fn new(q: u64, z: f64, p: f64, g0: &CubicPolynomial, epsilon: f64) -> Result<Self> {
        let input = WeylBoundInput { q, z, p, coefficient_sum: coefficient_sum(g0)?, epsilon };
        input.check()?;
        Ok(input)
    }

    pub fn check(&self) -> Result<()> {
        if self.q == 0 || !(self.p >= 1.0) {
            return Err(Error::Precondition("need q >= 1 and P >= 1".into()));
        }
        if self.q as f64 > self.p.powf(1.5) {
            return Err(Error::Precondition(format!("q = {} exceeds P^(3/2)", self.q)));
        }
        if self.z.abs() > 1.0 / (self.q as f64 * self.p.powf(1.5)) {
            return Err(Error::Precondition(format!("|z| = {} exceeds 1/(q P^(3/2))", self.z)));
        }
        if self.coefficient_sum <= 0 {
            return Err(Error::Precondition("coefficient sum must be positive".into()));
        }
        Ok(())
    }
}

/// `sum |c_ijk|` of the integer tensor of `6 g0`.
pub fn coefficient_sum(g0: &CubicPolynomial) -> Result<i64> {
    let t = SymmetricCubicTensor::from_cubic(g0)?;
    let n = t.n();
    let mut acc = 0i64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                acc = acc.checked_add(t.get(i, j, k).abs()).ok_or(Error::Overflow)?;
            }
        }
    }
    Ok(acc)
}

/// `Z = (1/2) min{1, 1/(12 c q |z| P^2), P/(2q), max{q/(6 c P^2), q |z| P}}^{1/2}`.
pub fn weyl_parameter_z(input: &WeylBoundInput) -> Result<f64> {
    if input.coefficient_sum <= 0 {
        return Err(Error::Precondition("coefficient sum must be positive".into()));
    }
    Ok(z_from_braces(input.q as f64, input.z.abs(), input.p, input.coefficient_sum as f64))
}

fn z_from_braces(q: f64, z: f64, p: f64, c: f64) -> f64 {
    let inner = [
        1.0,
        1.0 / (12.0 * c * q * z * p * p),
        p / (2.0 * q),
        (q / (6.0 * c * p * p)).max(q * z * p),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    0.5 * inner.sqrt()
}

/// `||g0||^{n/8} q^{1-n/8} P^{n+eps} min{1, (|z| P^3)^{-n/8}}`.
pub fn weyl_bound_rhs(input: &WeylBoundInput, g0: &CubicPolynomial) -> Result<f64> {
    input.check()?;
    let n = g0.n() as f64;
    let norm = g0.sup_norm().to_f64().ok_or(Error::Overflow)?;
    let decay = (input.z.abs() * input.p.powi(3)).powf(-n / 8.0).min(1.0);
    Ok(norm.powf(n / 8.0) * (input.q as f64).powf(1.0 - n / 8.0) * input.p.powf(n + input.epsilon) * decay)
}

/// One grid point of the empirical Weyl-bound comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylBoundRow {
    pub p: f64,
    pub q: u64,
    pub u: i64,
    pub z: f64,
    pub sum_abs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// `|S_u(q;z)| / rhs` over `P in ps`, `q <= max_q` with `q <= P^{3/2}`,
/// `u in us` and `z = f / (q P^{3/2})` for `f in z_fractions` (`|f| <= 1`).
pub fn weyl_bound_grid(
    g: &CubicPolynomial,
    w: &WeightFunction<f64>,
    ps: &[f64],
    max_q: u64,
    us: &[i64],
    z_fractions: &[f64],
    epsilon: f64,
) -> Result<Vec<WeylBoundRow>> {
    let g0 = g.cubic_part();
    let csum = coefficient_sum(&g0)?;
    let mut rows = Vec::new();
    for &p in ps {
        let masses = LatticeMasses::new(g, w, p)?;
        for q in 1..=max_q {
            if q as f64 > p.powf(1.5) {
                break;
            }
            for &u in us {
                for &f in z_fractions {
                    let z = f.clamp(-1.0, 1.0) / (q as f64 * p.powf(1.5));
                    let input = WeylBoundInput { q, z, p, coefficient_sum: csum, epsilon };
                    let rhs = weyl_bound_rhs(&input, &g0)?;
                    let sum_abs = masses.minor_arc_sum(u, q, z).norm();
                    rows.push(WeylBoundRow { p, q, u, z, sum_abs, rhs, ratio: sum_abs / rhs });
                }
            }
        }
    }
    Ok(rows)
}
