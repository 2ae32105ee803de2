use num_traits::ToPrimitive;

use super::CubicPolynomial;
use crate::error::{Error, Result};

/// Integer symmetric tensor `c_ijk` with `sum c_ijk x_i x_j x_k = 6 g0(x)`.
///
/// Each monomial `a x_i x_j x_k` of `g0` spreads over its distinct index
/// permutations: `x_i^3 -> c_iii = 6a`, `x_i^2 x_j -> 2a` on three entries,
/// `x_i x_j x_k -> a` on six entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricCubicTensor {
    n: usize,
    c: Vec<i64>,
}

impl SymmetricCubicTensor {
    pub fn from_cubic(g0: &CubicPolynomial) -> Result<Self> {
        g0.require_homogeneous()?;
        let n = g0.n();
        let mut c = vec![0i64; n * n * n];
        for (e, coeff) in g0.terms() {
            let a = coeff.to_i64().ok_or(Error::Overflow)?;
            let mut idx = Vec::with_capacity(3);
            for (i, &k) in e.0.iter().enumerate() {
                for _ in 0..k {
                    idx.push(i);
                }
            }
            let distinct = {
                let mut d = idx.clone();
                d.dedup();
                d.len()
            };
            let entry = match distinct {
                1 => a.checked_mul(6),
                2 => a.checked_mul(2),
                _ => Some(a),
            }
            .ok_or(Error::Overflow)?;
            for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
                let pos = (idx[i] * n + idx[j]) * n + idx[k];
                c[pos] = entry;
            }
        }
        Ok(SymmetricCubicTensor { n, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> i64 {
        self.c[(i * self.n + j) * self.n + k]
    }

    /// `sum c_ijk x_i x_j x_k`, which equals `6 g0(x)`.
    pub fn contract(&self, x: &[i64]) -> Result<i128> {
        self.check(x.len())?;
        let mut acc = 0i128;
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    acc += self.get(i, j, k) as i128 * x[i] as i128 * x[j] as i128 * x[k] as i128;
                }
            }
        }
        Ok(acc)
    }

    /// The bilinear forms `B_i(w; x) = sum_jk c_ijk w_j x_k`.
    pub fn bilinear_system(&self, w: &[i64], x: &[i64]) -> Result<Vec<i128>> {
        self.check(w.len())?;
        self.check(x.len())?;
        Ok((0..self.n)
            .map(|i| {
                let mut acc = 0i128;
                for j in 0..self.n {
                    if w[j] == 0 {
                        continue;
                    }
                    for k in 0..self.n {
                        acc += self.get(i, j, k) as i128 * w[j] as i128 * x[k] as i128;
                    }
                }
                acc
            })
            .collect())
    }

    /// Matrix `M(w)_ik = sum_j c_ijk w_j` reduced modulo `p`, so that
    /// `B(w; y) = M(w) y`.
    pub fn matrix_mod(&self, w: &[u64], p: u64) -> Vec<Vec<u64>> {
        let pi = p as i128;
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|k| {
                        let mut acc = 0i128;
                        for (j, &wj) in w.iter().enumerate() {
                            acc += self.get(i, j, k) as i128 * wj as i128;
                        }
                        acc.rem_euclid(pi) as u64
                    })
                    .collect()
            })
            .collect()
    }

    fn check(&self, got: usize) -> Result<()> {
        if got != self.n {
            Err(Error::DimensionMismatch { expected: self.n, got })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn entries(t: &SymmetricCubicTensor) -> Vec<((usize, usize, usize), i64)> {
        let n = t.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if t.get(i, j, k) != 0 {
                        out.push(((i, j, k), t.get(i, j, k)));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn tensor_examples() {
        let t = SymmetricCubicTensor::from_cubic(&parse_polynomial("x1^3", 2).unwrap()).unwrap();
        assert_eq!(entries(&t), vec![((0, 0, 0), 6)]);
        let t = SymmetricCubicTensor::from_cubic(&parse_polynomial("x1^2*x2", 2).unwrap()).unwrap();
        assert_eq!(entries(&t), vec![((0, 0, 1), 2), ((0, 1, 0), 2), ((1, 0, 0), 2)]);
        let t = SymmetricCubicTensor::from_cubic(&parse_polynomial("x1*x2*x3", 3).unwrap()).unwrap();
        let e = entries(&t);
        assert_eq!(e.len(), 6);
        assert!(e.iter().all(|&(_, v)| v == 1));
        assert!(SymmetricCubicTensor::from_cubic(&parse_polynomial("x1^3 + x2", 2).unwrap()).is_err());
    }

    #[test]
    fn tensor_is_symmetric_and_reproduces_six_g0() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g0 = parse_polynomial("2*x1^3 - 3*x1^2*x2 + x1*x2*x3 + 5*x2*x3^2 - x3^3 + 4*x1*x3^2", 3).unwrap();
        let t = SymmetricCubicTensor::from_cubic(&g0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let v = t.get(i, j, k);
                    assert_eq!(v, t.get(j, i, k));
                    assert_eq!(v, t.get(k, j, i));
                    assert_eq!(v, t.get(i, k, j));
                }
            }
        }
        for _ in 0..1000 {
            let x: Vec<i64> = (0..3).map(|_| rng.gen_range(-1000..=1000)).collect();
            let six = g0.eval_i64(&x).unwrap() * BigInt::from(6);
            assert_eq!(BigInt::from(t.contract(&x).unwrap()), six);
        }
    }

    #[test]
    fn bilinear_examples() {
        let fermat = parse_polynomial("x1^3 + x2^3 + x3^3", 3).unwrap();
        let t = SymmetricCubicTensor::from_cubic(&fermat).unwrap();
        let (w, x) = ([2, -3, 5], [7, 1, -4]);
        assert_eq!(t.bilinear_system(&w, &x).unwrap(), vec![84, -18, -120]);
        assert_eq!(t.bilinear_system(&[0, 0, 0], &x).unwrap(), vec![0, 0, 0]);
        assert!(t.bilinear_system(&[1, 2], &x).is_err());
    }

    #[test]
    fn bilinear_symmetry_and_hessian_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g0 = parse_polynomial("x1^3 - 2*x1^2*x2 + 3*x1*x2*x3 + x2^3 - 7*x2*x3^2 + x1*x4^2 + 2*x4^3", 4).unwrap();
        let t = SymmetricCubicTensor::from_cubic(&g0).unwrap();
        for _ in 0..300 {
            let w: Vec<i64> = (0..4).map(|_| rng.gen_range(-50..=50)).collect();
            let x: Vec<i64> = (0..4).map(|_| rng.gen_range(-50..=50)).collect();
            let b = t.bilinear_system(&w, &x).unwrap();
            assert_eq!(b, t.bilinear_system(&x, &w).unwrap());
            let wb: Vec<BigInt> = w.iter().map(|&v| BigInt::from(v)).collect();
            let (_, _, h) = g0.gradient_hessian(&wb).unwrap();
            for i in 0..4 {
                let hx: BigInt = (0..4).map(|k| &h.0[i][k] * BigInt::from(x[k])).sum();
                assert_eq!(hx, BigInt::from(b[i]));
            }
        }
    }
}
