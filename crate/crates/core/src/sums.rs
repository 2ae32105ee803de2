//! Complete cubic exponential sums modulo `q`.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{self, ext_gcd, gcd, mod_inverse, next_residue_vector};
use crate::error::{Error, Result};
use crate::linalg::smith_diagonal;
use crate::poly::{CubicPolynomial, ModPoly};
use crate::Complex64;

/// Largest `q^n` enumerated by the complete sums.
pub const RESIDUE_BUDGET: u128 = 200_000_000;
/// Largest `q^n` for which `g(y) mod q` is cached.
const CACHE_LIMIT: u128 = 4_000_000;

/// `e_q(k) = exp(2 pi i k / q)` for `k = 0..q`.
pub fn unit_roots(q: u64) -> Vec<Complex64> {
    (0..q).map(|k| Complex::from_polar(1.0, TAU * k as f64 / q as f64)).collect()
}

fn residue(v: i64, q: u64) -> u64 {
    v.rem_euclid(q as i64) as u64
}

/// Enumeration context for the complete sums of one polynomial modulo `q`.
pub struct CompleteSums {
    q: u64,
    n: usize,
    poly: ModPoly,
    roots: Vec<Complex64>,
    cache: Option<Vec<u32>>,
}

impl CompleteSums {
    pub fn new(g: &CubicPolynomial, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("modulus must be >= 1".into()));
        }
        let n = g.n();
        let size = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if size > RESIDUE_BUDGET {
            return Err(Error::Budget(format!("{q}^{n} residue vectors")));
        }
        let poly = g.reduce_mod(q);
        let mut ctx = CompleteSums { q, n, poly, roots: unit_roots(q), cache: None };
        if size <= CACHE_LIMIT {
            let mut vals = Vec::with_capacity(size as usize);
            ctx.for_each_residue(|_, m| vals.push(m as u32));
            ctx.cache = Some(vals);
        }
        Ok(ctx)
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Calls `f(y, g(y) mod q)` for `y` in lexicographic order.
    fn for_each_residue<F: FnMut(&[u64], u64)>(&self, mut f: F) {
        let mut y = vec![0u64; self.n];
        let mut idx = 0usize;
        loop {
            let m = match &self.cache {
                Some(c) => c[idx] as u64,
                None => self.poly.eval(&y),
            };
            f(&y, m);
            idx += 1;
            if !next_residue_vector(&mut y, self.q) {
                break;
            }
        }
    }

    fn frequency(&self, v: &[i64]) -> Result<Vec<u64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
        }
        Ok(v.iter().map(|&x| residue(x, self.q)).collect())
    }

    fn dot(&self, v: &[u64], y: &[u64]) -> u64 {
        let mut acc = 0u128;
        for (a, b) in v.iter().zip(y) {
            acc += *a as u128 * *b as u128;
        }
        (acc % self.q as u128) as u64
    }

    /// `T(a, q; v) = sum_{y mod q} e_q(a g(y) + v.y)`.
    pub fn t_sum(&self, a: i64, v: &[i64]) -> Result<Complex64> {
        let q = self.q;
        if gcd(a, q as i64) != 1 {
            return Err(Error::NotCoprime(a, q as i64));
        }
        let a = residue(a, q);
        let v = self.frequency(v)?;
        let mut hist = vec![0u64; q as usize];
        self.for_each_residue(|y, m| {
            let k = (arith::mul_mod(a, m, q) + self.dot(&v, y)) % q;
            hist[k as usize] += 1;
        });
        Ok(self.weighted_roots(&hist))
    }

    fn weighted_roots(&self, hist: &[u64]) -> Complex64 {
        hist.iter().zip(&self.roots).fold(Complex64::zero(), |acc, (&c, &r)| acc + r * c as f64)
    }

    /// `K(m, u; q) = sum_{gcd(a,q)=1} e_q(a m + a^{-1} u)` for `m = 0..q`.
    pub fn kloosterman_table(&self, u: i64) -> Vec<Complex64> {
        let q = self.q;
        let u = residue(u, q);
        let units: Vec<(u64, u64)> = (0..q)
            .filter_map(|a| mod_inverse(a as i64, q as i64).map(|inv| (a, inv as u64)))
            .collect();
        (0..q)
            .map(|m| {
                let mut hist = vec![0u64; q as usize];
                for &(a, inv) in &units {
                    let k = (arith::mul_mod(a, m, q) + arith::mul_mod(inv, u, q)) % q;
                    hist[k as usize] += 1;
                }
                self.weighted_roots(&hist)
            })
            .collect()
    }

    /// `S_u(q; v) = sum_{gcd(a,q)=1} e_q(a^{-1} u) T(a, q; v)`, evaluated as
    /// `sum_y e_q(v.y) K(g(y), u; q)` with a precomputed Kloosterman table.
    pub fn s_sum_with(&self, kloosterman: &[Complex64], v: &[i64]) -> Result<Complex64> {
        let q = self.q as usize;
        let v = self.frequency(v)?;
        // hist[m * q + l] = #{y : g(y) = m, v.y = l}
        let mut hist = vec![0u32; q * q];
        self.for_each_residue(|y, m| {
            hist[m as usize * q + self.dot(&v, y) as usize] += 1;
        });
        let mut total = Complex64::zero();
        for m in 0..q {
            let row = &hist[m * q..(m + 1) * q];
            if row.iter().all(|&c| c == 0) {
                continue;
            }
            let inner = row.iter().zip(&self.roots).fold(Complex64::zero(), |acc, (&c, &r)| acc + r * c as f64);
            total += kloosterman[m] * inner;
        }
        Ok(total)
    }

    pub fn s_sum(&self, u: i64, v: &[i64]) -> Result<Complex64> {
        self.s_sum_with(&self.kloosterman_table(u), v)
    }

    /// `#{y mod q : g(y) = 0 mod q}`.
    pub fn zero_count(&self) -> u64 {
        let mut c = 0;
        self.for_each_residue(|_, m| c += (m == 0) as u64);
        c
    }
}

/// `T(a, q; v)` by exhaustive enumeration.
pub fn complete_t(a: i64, q: u64, v: &[i64], g: &CubicPolynomial) -> Result<Complex64> {
    CompleteSums::new(g, q)?.t_sum(a, v)
}

/// `S_u(q; v)`.
pub fn complete_s(u: i64, q: u64, v: &[i64], g: &CubicPolynomial) -> Result<Complex64> {
    CompleteSums::new(g, q)?.s_sum(u, v)
}

/// `sum_{a mod q} T(a, q; 0)` over every residue `a`, assembled as
/// `sum_{d | q} (q/d)^n S_0(d; 0)`.
pub fn full_numerator_sum(q: u64, g: &CubicPolynomial) -> Result<Complex64> {
    let n = g.n();
    let zero = vec![0i64; n];
    let mut total = Complex64::zero();
    for d in arith::divisors(q) {
        let s = complete_s(0, d, &zero, g)?;
        total += s * ((q / d) as f64).powi(n as i32);
    }
    Ok(total)
}

/// Both sides of the twisted multiplicativity of `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicativityCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

impl MultiplicativityCheck {
    /// `residual / max(|lhs|, 1)`.
    pub fn relative(&self) -> f64 {
        self.residual / self.lhs.norm().max(1.0)
    }
}

/// Compares `S_u(rs; v)` with `S_{u rb^2}(s; rb v) S_{u sb^2}(r; sb v)`
/// where `r rb + s sb = 1`.
pub fn check_multiplicativity(r: u64, s: u64, u: i64, v: &[i64], g: &CubicPolynomial) -> Result<MultiplicativityCheck> {
    if r == 0 || s == 0 {
        return Err(Error::InvalidArgument("moduli must be >= 1".into()));
    }
    let (d, rb, sb) = ext_gcd(r as i64, s as i64);
    if d != 1 {
        return Err(Error::NotCoprime(r as i64, s as i64));
    }
    let lhs = complete_s(u, r * s, v, g)?;
    let twist = |m: u64, inv: i64| -> (i64, Vec<i64>) {
        let m = m as i128;
        let u2 = (u as i128 * inv as i128 % m * inv as i128).rem_euclid(m) as i64;
        let v2 = v.iter().map(|&x| (x as i128 * inv as i128).rem_euclid(m) as i64).collect();
        (u2, v2)
    };
    let (us, vs) = twist(s, rb);
    let (ur, vr) = twist(r, sb);
    let rhs = complete_s(us, s, &vs, g)? * complete_s(ur, r, &vr, g)?;
    Ok(MultiplicativityCheck { lhs, rhs, residual: (lhs - rhs).norm() })
}

/// Moduli up to which the kernel count enumerates.
pub const KERNEL_ENUMERATION_LIMIT: u64 = 1000;
const KERNEL_ENUMERATION_BUDGET: u128 = 10_000_000;

/// `#{y mod d : H_g(x) y = 0 mod d}`.
///
/// Enumerates for `d <= 1000` when `d^n <= 10^7`, otherwise uses the Smith
/// form: the count is `prod_i gcd(s_i, d)` (with `gcd(0, d) = d`).
pub fn hessian_kernel_count(x: &[i64], d: u64, g: &CubicPolynomial) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidArgument("modulus must be >= 1".into()));
    }
    let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
    let (_, _, h) = g.gradient_hessian(&xb)?;
    let n = g.n();
    let size = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if d <= KERNEL_ENUMERATION_LIMIT && size <= KERNEL_ENUMERATION_BUDGET {
        Ok(kernel_count_enumerated(&h.0, d))
    } else {
        Ok(kernel_count_smith(&h.0, d))
    }
}

pub fn kernel_count_enumerated(h: &[Vec<BigInt>], d: u64) -> u64 {
    let n = h.len();
    let db = BigInt::from(d);
    let hm: Vec<Vec<u64>> = h
        .iter()
        .map(|row| row.iter().map(|v| ((v % &db + &db) % &db).to_u64().unwrap()).collect())
        .collect();
    let mut y = vec![0u64; n];
    let mut count = 0;
    loop {
        if hm.iter().all(|row| row.iter().zip(&y).map(|(a, b)| *a as u128 * *b as u128).sum::<u128>() % d as u128 == 0) {
            count += 1;
        }
        if n == 0 || !next_residue_vector(&mut y, d) {
            break;
        }
    }
    count
}

pub fn kernel_count_smith(h: &[Vec<BigInt>], d: u64) -> u64 {
    let db = BigInt::from(d);
    smith_diagonal(h)
        .iter()
        .map(|s| if s.is_zero() { d } else { num_integer::Integer::gcd(s, &db).to_u64().unwrap() })
        .product()
}

/// Projective points `[v]` of `F_p^n` normalised with first nonzero entry 1.
fn normalize(v: &[u64], p: u64) -> Option<Vec<u64>> {
    let lead = *v.iter().find(|&&c| c != 0)?;
    let inv = mod_inverse(lead as i64, p as i64).unwrap() as u64;
    Some(v.iter().map(|&c| arith::mul_mod(c, inv, p)).collect())
}

/// The image of the Gauss map of `g0 = 0` over `F_p`: the classes `[grad g0(x)]`
/// for nonzero zeros `x` with nonvanishing gradient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussImage {
    pub p: u64,
    pub points: BTreeSet<Vec<u64>>,
}

impl GaussImage {
    /// Membership of `[v]`; `v = 0 mod p` counts as a member.
    pub fn contains(&self, v: &[i64]) -> bool {
        let r: Vec<u64> = v.iter().map(|&c| residue(c, self.p)).collect();
        match normalize(&r, self.p) {
            None => true,
            Some(k) => self.points.contains(&k),
        }
    }
}

pub const GAUSS_PRIME_LIMIT: u64 = 31;
pub const GAUSS_DIMENSION_LIMIT: usize = 4;

pub fn gauss_image_mod_p(g0: &CubicPolynomial, p: u64) -> Result<GaussImage> {
    g0.require_homogeneous()?;
    if !arith::is_prime(p) || p > GAUSS_PRIME_LIMIT || g0.n() > GAUSS_DIMENSION_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "Gauss image needs a prime p <= {GAUSS_PRIME_LIMIT} and n <= {GAUSS_DIMENSION_LIMIT}"
        )));
    }
    let f = g0.reduce_mod(p);
    let grads: Vec<ModPoly> = (0..g0.n()).map(|i| g0.derivative(i).reduce_mod(p)).collect();
    let mut points = BTreeSet::new();
    // scaling x by lambda scales the gradient by lambda^2, so projective x suffice
    for x in arith::projective_points(g0.n(), p) {
        if f.eval(&x) != 0 {
            continue;
        }
        let grad: Vec<u64> = grads.iter().map(|d| d.eval(&x)).collect();
        if let Some(k) = normalize(&grad, p) {
            points.insert(k);
        }
    }
    Ok(GaussImage { p, points })
}

/// Observed ratios of complete sums at primes against the prime bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeBoundRow {
    pub p: u64,
    /// `max |S_u(p;v)| / p^{(n+1)/2}`; `None` when `p | u`.
    pub ratio_generic: Option<f64>,
    /// `max |S_0(p;v)| / (p^{(n+1)/2} sqrt(f))`, `f = p` on the Gauss image.
    pub ratio_dual: Option<f64>,
    /// `max |S_u(p^2;v)| / p^{n+2}`.
    pub ratio_square: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimeBoundReport {
    pub rows: Vec<PrimeBoundRow>,
    pub skipped_bad: Vec<u64>,
}

impl PrimeBoundReport {
    pub fn max_generic(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.ratio_generic).fold(0.0, f64::max)
    }

    pub fn max_dual(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.ratio_dual).fold(0.0, f64::max)
    }

    /// Largest square-modulus ratio over primes `>= min_p`.
    pub fn max_square(&self, min_p: u64) -> f64 {
        self.rows.iter().filter(|r| r.p >= min_p).map(|r| r.ratio_square).fold(0.0, f64::max)
    }
}

/// Ratios of `|S_u(p; v)|`, `|S_0(p; v)|` and `|S_u(p^2; v)|` to the prime
/// bounds, over the primes `p <= prime_limit` at which `g0` is nonsingular
/// and the supplied frequency samples.
pub fn prime_bound_report(g: &CubicPolynomial, prime_limit: u64, u: i64, samples: &[Vec<i64>]) -> Result<PrimeBoundReport> {
    let g0 = g.cubic_part();
    let n = g.n() as i32;
    let mut rows = Vec::new();
    let mut skipped_bad = Vec::new();
    for p in arith::primes_up_to(prime_limit) {
        if g0.is_singular_mod(p)? {
            skipped_bad.push(p);
            continue;
        }
        let pf = p as f64;
        let base = pf.powf((n as f64 + 1.0) / 2.0);
        let ctx = CompleteSums::new(g, p)?;
        let ratio_generic = if u.rem_euclid(p as i64) == 0 {
            None
        } else {
            let k = ctx.kloosterman_table(u);
            let mut best = 0.0f64;
            for v in samples {
                best = best.max(ctx.s_sum_with(&k, v)?.norm() / base);
            }
            Some(best)
        };
        let ratio_dual = if p <= GAUSS_PRIME_LIMIT && g.n() <= GAUSS_DIMENSION_LIMIT {
            let image = gauss_image_mod_p(&g0, p)?;
            let k = ctx.kloosterman_table(0);
            let mut best = 0.0f64;
            for v in samples {
                let f = if image.contains(v) { pf } else { 1.0 };
                best = best.max(ctx.s_sum_with(&k, v)?.norm() / (base * f.sqrt()));
            }
            Some(best)
        } else {
            None
        };
        let sq = CompleteSums::new(g, p * p)?;
        let k = sq.kloosterman_table(u);
        let mut ratio_square = 0.0f64;
        for v in samples {
            ratio_square = ratio_square.max(sq.s_sum_with(&k, v)?.norm() / pf.powi(n + 2));
        }
        rows.push(PrimeBoundRow { p, ratio_generic, ratio_dual, ratio_square });
    }
    if rows.is_empty() {
        return Err(Error::Precondition(format!("no good primes up to {prime_limit}")));
    }
    Ok(PrimeBoundReport { rows, skipped_bad })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::phi;
    use crate::poly::parse_polynomial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn direct_t(a: i64, q: u64, v: &[i64], g: &CubicPolynomial) -> Complex64 {
        let n = g.n();
        let mut y = vec![0u64; n];
        let mut acc = Complex64::zero();
        loop {
            let yi: Vec<BigInt> = y.iter().map(|&c| BigInt::from(c)).collect();
            let gv = g.eval(&yi).unwrap();
            let dot: i64 = v.iter().zip(&y).map(|(a, b)| a * *b as i64).sum();
            let phase = (BigInt::from(a) * gv + dot) % BigInt::from(q);
            let k = phase.to_i64().unwrap().rem_euclid(q as i64);
            acc += Complex::from_polar(1.0, TAU * k as f64 / q as f64);
            if n == 0 || !next_residue_vector(&mut y, q) {
                break;
            }
        }
        acc
    }

    fn direct_s(u: i64, q: u64, v: &[i64], g: &CubicPolynomial) -> Complex64 {
        let mut acc = Complex64::zero();
        for a in 0..q as i64 {
            if let Some(inv) = mod_inverse(a, q as i64) {
                let k = (inv * u).rem_euclid(q as i64);
                acc += Complex::from_polar(1.0, TAU * k as f64 / q as f64) * direct_t(a, q, v, g);
            }
        }
        acc
    }

    fn random_poly(rng: &mut ChaCha8Rng, n: usize) -> CubicPolynomial {
        let mut g = CubicPolynomial::zero(n);
        for _ in 0..rng.gen_range(2..7) {
            let mut e = vec![0u8; n];
            for _ in 0..rng.gen_range(0..=3) {
                e[rng.gen_range(0..n)] += 1;
            }
            g.add_term(e, BigInt::from(rng.gen_range(-9..=9))).unwrap();
        }
        g
    }

    #[test]
    fn t_examples() {
        let cube = parse_polynomial("x1^3", 1).unwrap();
        assert!((complete_t(1, 1, &[0], &cube).unwrap() - 1.0).norm() < 1e-15);
        assert!(complete_t(1, 2, &[0], &cube).unwrap().norm() < 1e-12);
        assert!(complete_t(1, 3, &[0], &cube).unwrap().norm() < 1e-12);
        assert_eq!(complete_t(2, 4, &[0], &cube).unwrap_err(), Error::NotCoprime(2, 4));
    }

    #[test]
    fn s_examples() {
        let cube = parse_polynomial("x1^3", 1).unwrap();
        assert!((complete_s(5, 1, &[3], &cube).unwrap() - 1.0).norm() < 1e-15);
        assert!(complete_s(0, 3, &[0], &cube).unwrap().norm() < 1e-12);
    }

    #[test]
    fn fast_route_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..40 {
            let n = rng.gen_range(1..=2);
            let g = random_poly(&mut rng, n);
            let q = rng.gen_range(1..=24);
            let u = rng.gen_range(-30..30);
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-30..30)).collect();
            let fast = complete_s(u, q, &v, &g).unwrap();
            let slow = direct_s(u, q, &v, &g);
            assert!((fast - slow).norm() < 1e-8 * (1.0 + slow.norm()), "{g} q={q}");
            let a = (1..=q as i64).find(|&a| gcd(a, q as i64) == 1).unwrap();
            let t = complete_t(a, q, &v, &g).unwrap();
            assert!((t - direct_t(a, q, &v, &g)).norm() < 1e-9 * (1.0 + t.norm()));
        }
    }

    #[test]
    fn conjugation_and_trivial_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..40 {
            let n = rng.gen_range(1..=3);
            let g = random_poly(&mut rng, n);
            let q = rng.gen_range(2..=12u64);
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-20..20)).collect();
            let nv: Vec<i64> = v.iter().map(|x| -x).collect();
            let a = (1..q as i64).find(|&a| gcd(a, q as i64) == 1 && a * 3 % q as i64 != 0).unwrap_or(1);
            let t = complete_t(a, q, &v, &g).unwrap();
            let tc = complete_t(q as i64 - a, q, &nv, &g).unwrap();
            assert!((t.conj() - tc).norm() < 1e-9);
            let qn = (q as f64).powi(n as i32);
            assert!(t.norm() <= qn * (1.0 + 1e-12));
            let s = complete_s(rng.gen_range(-5..5), q, &v, &g).unwrap();
            assert!(s.norm() <= phi(q) as f64 * qn * (1.0 + 1e-12));
        }
    }

    #[test]
    fn orthogonality_over_all_numerators() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let n = rng.gen_range(1..=2);
            let g = random_poly(&mut rng, n);
            let q = rng.gen_range(1..=64u64);
            let total = full_numerator_sum(q, &g).unwrap();
            let zeros = CompleteSums::new(&g, q).unwrap().zero_count();
            assert!((total / q as f64 - zeros as f64).norm() < 1e-6, "{g} q={q}");
        }
    }

    #[test]
    fn multiplicativity_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let g = random_poly(&mut rng, 2);
        let c = check_multiplicativity(3, 5, 1, &[1, 2], &g).unwrap();
        assert!(c.residual <= 1e-8 * c.lhs.norm().max(1.0));
        let c = check_multiplicativity(1, 7, 3, &[1, 2], &g).unwrap();
        assert_eq!(c.residual, 0.0);
        assert_eq!(check_multiplicativity(2, 2, 1, &[1, 2], &g).unwrap_err(), Error::NotCoprime(2, 2));
        for _ in 0..20 {
            let n = rng.gen_range(1..=2);
            let g = random_poly(&mut rng, n);
            let (r, s) = loop {
                let (r, s) = (rng.gen_range(1..=12u64), rng.gen_range(1..=12u64));
                if gcd(r as i64, s as i64) == 1 {
                    break (r, s);
                }
            };
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-50..50)).collect();
            let c = check_multiplicativity(r, s, rng.gen_range(-50..50), &v, &g).unwrap();
            assert!(c.relative() < 1e-8, "{g} r={r} s={s}");
        }
    }

    #[test]
    fn kernel_examples() {
        let cube = parse_polynomial("x1^3", 1).unwrap();
        assert_eq!(hessian_kernel_count(&[4], 1, &cube).unwrap(), 1);
        assert_eq!(hessian_kernel_count(&[0], 5, &cube).unwrap(), 5);
        assert_eq!(hessian_kernel_count(&[1], 5, &cube).unwrap(), 1);
        assert_eq!(hessian_kernel_count(&[1], 12, &cube).unwrap(), 6);
    }

    #[test]
    fn kernel_enumeration_matches_smith() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..60 {
            let n = rng.gen_range(1..=3);
            let g = random_poly(&mut rng, n);
            let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
            let d = rng.gen_range(1..=if n == 3 { 40 } else { 100 });
            let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            let h = g.gradient_hessian(&xb).unwrap().2;
            let e = kernel_count_enumerated(&h.0, d);
            assert_eq!(e, kernel_count_smith(&h.0, d));
            assert_eq!((d as u128).pow(n as u32) % e as u128, 0);
        }
        let big = parse_polynomial("x1^3 + 3*x1*x2^2", 2).unwrap();
        assert_eq!(hessian_kernel_count(&[2, 0], 5000, &big).unwrap(), 16);
    }

    #[test]
    fn gauss_image_against_affine_enumeration() {
        let g0 = parse_polynomial("x1^3 + x2^3", 2).unwrap();
        let p = 7u64;
        let image = gauss_image_mod_p(&g0, p).unwrap();
        let mut oracle = BTreeSet::new();
        for a in 0..p {
            for b in 0..p {
                if (a, b) == (0, 0) || (a.pow(3) + b.pow(3)) % p != 0 {
                    continue;
                }
                let grad = [3 * a * a % p, 3 * b * b % p];
                if let Some(k) = normalize(&grad, p) {
                    oracle.insert(k);
                }
            }
        }
        assert_eq!(image.points, oracle);
        let outside = (1..p as i64).map(|t| vec![1, t]).find(|v| !image.contains(v)).unwrap();
        assert!(!image.contains(&outside));
        for v in &image.points {
            for lambda in 1..p {
                let scaled: Vec<i64> = v.iter().map(|&c| (c * lambda % p) as i64).collect();
                assert!(image.contains(&scaled));
            }
        }
        assert!(image.contains(&[0, 0]));
        assert!(gauss_image_mod_p(&g0, 37).is_err());
    }

    #[test]
    fn prime_report_runs() {
        let g = parse_polynomial("x1^3 + x2^3 + x1", 2).unwrap();
        let samples = vec![vec![0, 0], vec![1, 2], vec![3, -1]];
        let rep = prime_bound_report(&g, 13, 1, &samples).unwrap();
        assert_eq!(rep.skipped_bad, vec![3]);
        assert!(rep.max_generic().is_finite());
        // the (SP1) branch skips p | u
        let rep = prime_bound_report(&g, 7, 5, &samples).unwrap();
        assert!(rep.rows.iter().find(|r| r.p == 5).unwrap().ratio_generic.is_none());
    }
}
