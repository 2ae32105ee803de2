//! Exact integer linear algebra: Smith diagonal, determinant, rank mod p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::mod_inverse;

/// Invariant factors `s_1 | s_2 | ... ` of an integer matrix (length
/// `min(rows, cols)`, trailing zeros for rank deficiency).
pub fn smith_diagonal(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let k_max = rows.min(cols);
    for t in 0..k_max {
        // pivot: smallest nonzero absolute value in the remaining block
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, t, k_max);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for i in t..rows {
                        let v = &q * &a[i][t];
                        a[i][j] -= v;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold a non-divisible entry into the pivot row
            let mut fixed = true;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        for c in t..cols {
                            let v = a[i][c].clone();
                            a[t][c] += v;
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }
    finish(a, k_max, k_max)
}

fn finish(a: Vec<Vec<BigInt>>, done: usize, k_max: usize) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = (0..done).map(|i| a[i][i].abs()).collect();
    d.resize(k_max, BigInt::zero());
    d
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank over `F_p` of a matrix with entries already reduced mod `p`.
pub fn rank_mod_p(m: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows).find(|&r| a[r][c] % p != 0) else {
            continue;
        };
        a.swap(rank, r);
        let inv = mod_inverse(a[rank][c] as i64, p as i64).expect("p prime") as u64;
        for j in c..cols {
            a[rank][j] = a[rank][j] * inv % p;
        }
        for i in 0..rows {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c];
                for j in c..cols {
                    a[i][j] = (a[i][j] + p - f * a[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
