//! One step of the hyperplane-section induction: singular-locus dimension
//! estimates, the slicing vector, the hyperplane lattice and the sliced
//! polynomial with its weight.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{ext_gcd, gcd, projective_size, BoxIter};
use crate::counting::count_affine_weighted;
use crate::error::{Error, Result};
use crate::linalg::{determinant, smith_diagonal};
use crate::poly::CubicPolynomial;
use crate::weights::WeightFunction;

/// Primes used when none are given.
pub const DEFAULT_PRIMES: [u64; 3] = [7, 11, 13];
/// Default bound on `|m|` in the slicing-vector search.
pub const DEFAULT_SEARCH_BOUND: i64 = 3;
/// Largest `p^n` for which projective singular points are enumerated.
pub const DIMENSION_BUDGET: u128 = 1_000_000_000;
/// Desk limits of the counting identity check.
pub const DESK_MAX_N: usize = 3;
pub const DESK_MAX_P: f64 = 12.0;

/// Estimate of `dim Sing` at one prime: the unique `s` with
/// `count in [p^s/2, 4 p^s]`, or `-1` for no singular points.
fn dimension_at_prime(count: u64, p: u64, n: usize) -> Option<i64> {
    if count == 0 {
        return Some(-1);
    }
    let c = count as f64;
    let fits: Vec<i64> = (0..n as i64 - 1)
        .filter(|&s| {
            let ps = (p as f64).powi(s as i32);
            c >= 0.5 * ps && c <= 4.0 * ps
        })
        .collect();
    (fits.len() == 1).then(|| fits[0])
}

/// Projective dimension of the singular locus of `g0 = 0`, estimated from
/// point counts of `{grad g0 = 0}` modulo each prime. All primes must give
/// the same unambiguous answer.
pub fn singular_dimension_estimate(g0: &CubicPolynomial, primes: &[u64]) -> Result<i64> {
    g0.require_homogeneous()?;
    let n = g0.n();
    if n < 2 {
        return Err(Error::Precondition("need at least two variables".into()));
    }
    if primes.len() < 3 {
        return Err(Error::Precondition("need at least three primes".into()));
    }
    if let Some(p) = primes.iter().find(|&&p| p <= 3 || !crate::arith::is_prime(p)) {
        return Err(Error::InvalidArgument(format!("{p} is not a prime above 3")));
    }
    for &p in primes {
        if (p as u128).pow(n as u32) > DIMENSION_BUDGET || projective_size(n, p) > DIMENSION_BUDGET {
            return Err(Error::Budget(format!("{p}^{n} exceeds {DIMENSION_BUDGET}")));
        }
    }
    let mut estimates = Vec::with_capacity(primes.len());
    for &p in primes {
        let count = g0.singular_point_count(p, false)?;
        match dimension_at_prime(count, p, n) {
            Some(s) => estimates.push(s),
            None => return Err(Error::Ambiguous(format!("{count} singular points mod {p} fit no dimension"))),
        }
    }
    if estimates.iter().any(|&s| s != estimates[0]) {
        return Err(Error::Ambiguous(format!("estimates {estimates:?} for primes {primes:?}")));
    }
    Ok(estimates[0])
}

fn is_primitive(m: &[i64]) -> bool {
    m.iter().fold(0i64, |g, &v| gcd(g, v)) == 1
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Unimodular `U` with `m U = (1, 0, ..., 0)`, as columns.
fn unimodular_completion(m: &[i64]) -> Result<Vec<Vec<i64>>> {
    if m.iter().all(|&v| v == 0) {
        return Err(Error::InvalidArgument("slicing vector must be nonzero".into()));
    }
    if !is_primitive(m) {
        return Err(Error::InvalidArgument(format!("{m:?} is not primitive")));
    }
    let n = m.len();
    let mut a = m.to_vec();
    let mut cols: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| i64::from(i == j)).collect()).collect();
    for i in (1..n).rev() {
        let (x, y) = (a[i - 1], a[i]);
        if y == 0 {
            continue;
        }
        let (g, s, t) = ext_gcd(x, y);
        let (left, right) = (cols[i - 1].clone(), cols[i].clone());
        let combine = |p: i64, q: i64| -> Result<Vec<i64>> {
            left.iter()
                .zip(&right)
                .map(|(&l, &r)| (p as i128 * l as i128 + q as i128 * r as i128).try_into().map_err(|_| Error::Overflow))
                .collect()
        };
        cols[i - 1] = combine(s, t)?;
        cols[i] = combine(-y / g, x / g)?;
        a[i - 1] = g;
        a[i] = 0;
    }
    if a[0] == -1 {
        cols[0].iter_mut().for_each(|v| *v = -*v);
    }
    debug_assert_eq!(dot(m, &cols[0]), 1);
    Ok(cols)
}

/// Pairwise size reduction `b_i -= round(<b_i,b_j>/<b_j,b_j>) b_j` until no
/// vector gets shorter, then ordering by length.
fn size_reduce(mut basis: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let bb = dot(&basis[j], &basis[j]);
                let mu = (dot(&basis[i], &basis[j]) as f64 / bb as f64).round() as i64;
                if mu == 0 {
                    continue;
                }
                let cand: Vec<i64> = basis[i].iter().zip(&basis[j]).map(|(&x, &y)| x - mu * y).collect();
                if dot(&cand, &cand) < dot(&basis[i], &basis[i]) {
                    basis[i] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    basis.sort_by(|a, b| dot(a, a).cmp(&dot(b, b)).then_with(|| b.cmp(a)));
    basis
}

/// Integer basis of `{y : m . y = 0}` together with a vector `u` with
/// `m . u = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneLattice {
    pub m: Vec<i64>,
    pub basis: Vec<Vec<i64>>,
    pub unit_preimage: Vec<i64>,
    /// `max_i |e_i|` (max norm).
    pub max_basis_norm: i64,
}

impl HyperplaneLattice {
    /// Gram determinant `det(E^T E)`; equals `|m|^2` (Euclidean).
    pub fn gram_determinant(&self) -> BigInt {
        let g: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|a| self.basis.iter().map(|b| BigInt::from(dot(a, b))).collect())
            .collect();
        determinant(&g)
    }

    /// Determinant of `[e_1 .. e_{n-1} u]`; `+-1` iff the basis spans the
    /// whole hyperplane lattice.
    pub fn completion_determinant(&self) -> BigInt {
        let n = self.m.len();
        let rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.basis.iter().chain(std::iter::once(&self.unit_preimage)).map(|c| BigInt::from(c[i])).collect())
            .collect();
        determinant(&rows)
    }

    /// Invariant factors of the `n x (n-1)` basis matrix; all ones iff the
    /// basis spans a saturated sublattice.
    pub fn smith_factors(&self) -> Vec<BigInt> {
        let n = self.m.len();
        let rows: Vec<Vec<BigInt>> =
            (0..n).map(|i| self.basis.iter().map(|c| BigInt::from(c[i])).collect()).collect();
        smith_diagonal(&rows)
    }

    /// Coordinates `(k, lambda)` with `x = anchor(k) + sum lambda_i e_i`.
    pub fn coordinates(&self, x: &[i64]) -> Result<(i64, Vec<i64>)> {
        let k = i64::try_from(dot(&self.m, x)).map_err(|_| Error::Overflow)?;
        let t = self.anchor(k)?;
        let diff: Vec<i64> = x.iter().zip(&t).map(|(a, b)| a - b).collect();
        let lambda = solve_in_basis(&self.basis, &diff)?;
        Ok((k, lambda))
    }

    /// Deterministic `t` with `m . t = k`: `k u` reduced against the basis.
    pub fn anchor(&self, k: i64) -> Result<Vec<i64>> {
        let mut t: Vec<i64> = self.unit_preimage.iter().map(|&u| u.checked_mul(k).ok_or(Error::Overflow)).collect::<Result<_>>()?;
        loop {
            let mut changed = false;
            for e in &self.basis {
                let mu = (dot(&t, e) as f64 / dot(e, e) as f64).round() as i64;
                if mu != 0 {
                    let cand: Vec<i64> = t.iter().zip(e).map(|(&x, &y)| x - mu * y).collect();
                    if dot(&cand, &cand) < dot(&t, &t) {
                        t = cand;
                        changed = true;
                    }
                }
            }
            if !changed {
                return Ok(t);
            }
        }
    }
}

/// Exact integer coordinates of `v` in the given columns; fails if `v` is
/// not an integer combination.
fn solve_in_basis(basis: &[Vec<i64>], v: &[i64]) -> Result<Vec<i64>> {
    let n = v.len();
    let k = basis.len();
    // augmented rows [E | v] over the rationals
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            basis.iter().map(|c| BigRational::from_integer(c[i].into())).chain(std::iter::once(BigRational::from_integer(v[i].into()))).collect()
        })
        .collect();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let Some(r) = (row..n).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, r);
        let piv = a[row][col].clone();
        for c in col..=k {
            a[row][c] = &a[row][c] / &piv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=k {
                    let d = &f * &a[row][c];
                    a[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[k].is_zero()) {
        return Err(Error::InvalidArgument("vector not in the span of the basis".into()));
    }
    let mut out = vec![0i64; k];
    for (r, &c) in pivots.iter().enumerate() {
        if !a[r][k].is_integer() {
            return Err(Error::InvalidArgument("vector not in the lattice".into()));
        }
        out[c] = a[r][k].to_integer().to_i64().ok_or(Error::Overflow)?;
    }
    Ok(out)
}

/// Basis of `{y in Z^n : m . y = 0}` from a unimodular completion of the
/// primitive vector `m`, size-reduced.
pub fn hyperplane_lattice_basis(m: &[i64]) -> Result<HyperplaneLattice> {
    let cols = unimodular_completion(m)?;
    let basis = size_reduce(cols[1..].to_vec());
    let lattice = HyperplaneLattice {
        m: m.to_vec(),
        max_basis_norm: basis.iter().flat_map(|e| e.iter().map(|v| v.abs())).max().unwrap_or(0),
        basis,
        unit_preimage: cols[0].clone(),
    };
    let unit_preimage = lattice.anchor(1)?;
    Ok(HyperplaneLattice { unit_preimage, ..lattice })
}

fn big_columns(basis: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    basis.iter().map(|c| c.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

/// `g0` restricted to `m^perp`, in the coordinates of the lattice basis.
pub fn restrict_to_hyperplane(g0: &CubicPolynomial, lattice: &HyperplaneLattice) -> Result<CubicPolynomial> {
    g0.compose_affine(&vec![BigInt::zero(); g0.n()], &big_columns(&lattice.basis))
}

/// Result of the slicing-vector search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlicingVector {
    pub m: Vec<i64>,
    /// Max norm of `m`, i.e. the search radius actually needed.
    pub norm: i64,
    pub singular_dimension: i64,
    pub sliced_dimension: i64,
}

/// Canonical primitive vectors (first nonzero entry positive) ordered by
/// max norm, then lexicographically.
fn candidates(n: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=bound).flat_map(move |r| {
        BoxIter::new(n, -r, r).filter(move |m| {
            let first_positive = m.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0);
            first_positive && m.iter().map(|v| v.abs()).max() == Some(r) && is_primitive(m)
        })
    })
}

/// First canonical primitive `m` with `|m| <= bound` whose hyperplane
/// section lowers the singular dimension by exactly one.
pub fn find_slicing_vector(g0: &CubicPolynomial, bound: i64, primes: &[u64]) -> Result<SlicingVector> {
    if bound < 1 {
        return Err(Error::InvalidArgument("search bound must be >= 1".into()));
    }
    let s = singular_dimension_estimate(g0, primes)?;
    if s < 0 {
        return Err(Error::Precondition("g0 is nonsingular; nothing to slice".into()));
    }
    for m in candidates(g0.n(), bound) {
        let lattice = hyperplane_lattice_basis(&m)?;
        let h0 = restrict_to_hyperplane(g0, &lattice)?;
        if h0.n() < 2 {
            continue;
        }
        match singular_dimension_estimate(&h0, primes) {
            Ok(d) if d == s - 1 => {
                let norm = m.iter().map(|v| v.abs()).max().unwrap_or(0);
                return Ok(SlicingVector { m, norm, singular_dimension: s, sliced_dimension: d });
            }
            Ok(_) | Err(Error::Ambiguous(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoSlicingVector(bound))
}

/// One hyperplane section `m . x = k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceData {
    pub m: Vec<i64>,
    pub k: i64,
    pub anchor: Vec<i64>,
    pub basis: Vec<Vec<i64>>,
    /// `h(u) = g(anchor + sum u_i e_i)`.
    #[serde(serialize_with = "ser_display")]
    pub h: CubicPolynomial,
    #[serde(skip)]
    pub weight: WeightFunction<f64>,
    pub p: f64,
    pub scaled_norm_g: f64,
    pub scaled_norm_h: f64,
}

fn ser_display<S: serde::Serializer>(v: &CubicPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Largest `|k|` for which the section can meet the support of `w(x/P)`.
pub fn level_bound(m: &[i64], w: &WeightFunction<f64>, p: f64) -> i64 {
    let l1: i64 = m.iter().map(|v| v.abs()).sum();
    (l1 as f64 * w.support_radius() * p).floor() as i64
}

/// The section `m . x = k`: the polynomial `h` in `n - 1` variables and the
/// weight `w0(u) = w(anchor/P + sum u_i e_i / P)` so that
/// `N_k = sum_{h(u)=0} w0(u/P)`. Returns `None` when `|k|` exceeds
/// [`level_bound`], where the section misses the support.
pub fn slice(g: &CubicPolynomial, w: &WeightFunction<f64>, m: &[i64], k: i64, p: f64) -> Result<Option<SliceData>> {
    if m.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: m.len() });
    }
    if w.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: w.n() });
    }
    if g.n() < 2 {
        return Err(Error::Precondition("slicing needs at least two variables".into()));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("P must be >= 1, got {p}")));
    }
    let lattice = hyperplane_lattice_basis(m)?;
    if k.abs() > level_bound(m, w, p) {
        return Ok(None);
    }
    let anchor = lattice.anchor(k)?;
    let offset: Vec<BigInt> = anchor.iter().map(|&v| BigInt::from(v)).collect();
    let h = g.compose_affine(&offset, &big_columns(&lattice.basis))?;
    let weight = w.compose_affine(
        &anchor.iter().map(|&v| v as f64 / p).collect::<Vec<_>>(),
        &lattice.basis.iter().map(|c| c.iter().map(|&v| v as f64).collect()).collect::<Vec<_>>(),
    )?;
    Ok(Some(SliceData {
        m: m.to_vec(),
        k,
        scaled_norm_g: g.scaled_norm(p)?,
        scaled_norm_h: h.scaled_norm(p)?,
        anchor,
        basis: lattice.basis,
        h,
        weight,
        p,
    }))
}

/// Both sides of `N_w(g; P) = sum_k N_{w0}(h_k; P)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceIdentity {
    pub direct: f64,
    pub sliced: f64,
    pub residual: f64,
    pub levels: usize,
}

pub fn verify_slice_identity(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, m: &[i64]) -> Result<SliceIdentity> {
    if g.n() > DESK_MAX_N || p > DESK_MAX_P {
        return Err(Error::Precondition(format!("desk scale needs n <= {DESK_MAX_N}, P <= {DESK_MAX_P}")));
    }
    let direct = count_affine_weighted(g, w, p)?;
    let bound = level_bound(m, w, p);
    let parts = (-bound..=bound)
        .into_par_iter()
        .map(|k| match slice(g, w, m, k, p)? {
            Some(s) => count_affine_weighted(&s.h, &s.weight, p),
            None => Ok(0.0),
        })
        .collect::<Result<Vec<f64>>>()?;
    let sliced: f64 = parts.iter().sum();
    Ok(SliceIdentity { direct, sliced, residual: (direct - sliced).abs(), levels: parts.len() })
}

/// Checks that `x -> (m . x, lambda)` is injective with exact
/// reconstruction on every point of `[-r, r]^n`.
pub fn verify_partition(lattice: &HyperplaneLattice, r: i64) -> Result<bool> {
    let n = lattice.m.len();
    let mut seen = std::collections::BTreeSet::new();
    for x in BoxIter::new(n, -r, r) {
        let (k, lambda) = lattice.coordinates(&x)?;
        let t = lattice.anchor(k)?;
        let back: Vec<i64> =
            (0..n).map(|i| t[i] + lattice.basis.iter().zip(&lambda).map(|(e, l)| e[i] * l).sum::<i64>()).collect();
        if back != x || !seen.insert((k, lambda)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `sum_i |c_i|` norm helper for reports.
pub fn euclidean_norm_squared(m: &[i64]) -> BigInt {
    m.iter().map(|&v| BigInt::from(v) * BigInt::from(v)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{box_smooth, product_weight};
    use num_traits::One;

    fn poly(s: &str, n: usize) -> CubicPolynomial {
        crate::poly::parse_polynomial(s, n).unwrap()
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(singular_dimension_estimate(&poly("x1^3+x2^3+x3^3", 3), &[7, 11, 13]).unwrap(), -1);
        assert_eq!(singular_dimension_estimate(&poly("x1^3", 3), &[5, 7, 11]).unwrap(), 1);
        assert_eq!(singular_dimension_estimate(&poly("x1^3+x2^3+x3^3", 5), &[7, 11, 13]).unwrap(), 1);
        // the cone over a nonsingular plane cubic has a single vertex
        assert_eq!(singular_dimension_estimate(&poly("x1^3+x2^3+x3^3", 4), &[7, 11, 13]).unwrap(), 0);
    }

    #[test]
    fn dimension_errors() {
        let g = poly("x1^3+x2^3+x3^3", 3);
        assert!(matches!(singular_dimension_estimate(&g, &[7, 11]), Err(Error::Precondition(_))));
        assert!(matches!(singular_dimension_estimate(&g, &[3, 7, 11]), Err(Error::InvalidArgument(_))));
        assert!(matches!(singular_dimension_estimate(&g, &[9, 7, 11]), Err(Error::InvalidArgument(_))));
        assert!(matches!(singular_dimension_estimate(&poly("x1^3+1", 3), &[7, 11, 13]), Err(Error::NotHomogeneous)));
        let big = poly("x1^3+x2^3+x3^3", 12);
        assert!(matches!(singular_dimension_estimate(&big, &[7, 11, 13]), Err(Error::Budget(_))));
    }

    #[test]
    fn dimension_at_prime_windows() {
        assert_eq!(dimension_at_prime(0, 7, 4), Some(-1));
        assert_eq!(dimension_at_prime(1, 7, 4), Some(0));
        assert_eq!(dimension_at_prime(8, 7, 4), Some(1));
        assert_eq!(dimension_at_prime(57, 7, 4), Some(2));
        // between windows for p = 11, inside two windows for p = 7
        assert_eq!(dimension_at_prime(5, 11, 4), None);
        assert_eq!(dimension_at_prime(4, 7, 4), None);
    }

    #[test]
    fn lattice_examples() {
        let l = hyperplane_lattice_basis(&[1, 0, 0]).unwrap();
        let mut b = l.basis.clone();
        b.sort();
        assert_eq!(b, vec![vec![0, 0, 1], vec![0, 1, 0]]);
        assert_eq!(l.gram_determinant(), BigInt::from(1));
        let l = hyperplane_lattice_basis(&[1, 1]).unwrap();
        assert!(l.basis == vec![vec![1, -1]] || l.basis == vec![vec![-1, 1]]);
        assert_eq!(l.gram_determinant(), BigInt::from(2));
        let l = hyperplane_lattice_basis(&[2, 3]).unwrap();
        assert!(l.basis == vec![vec![3, -2]] || l.basis == vec![vec![-3, 2]]);
        assert_eq!(l.gram_determinant(), BigInt::from(13));
        assert!(hyperplane_lattice_basis(&[0, 0]).is_err());
        assert!(hyperplane_lattice_basis(&[2, 4]).is_err());
    }

    #[test]
    fn lattice_invariants_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut tested = 0;
        while tested < 300 {
            let n = rng.gen_range(2..=5);
            let m: Vec<i64> = (0..n).map(|_| rng.gen_range(-20..=20)).collect();
            if !is_primitive(&m) {
                continue;
            }
            tested += 1;
            let l = hyperplane_lattice_basis(&m).unwrap();
            assert_eq!(l.basis.len(), n - 1);
            assert!(l.basis.iter().all(|e| dot(&m, e) == 0));
            assert_eq!(dot(&m, &l.unit_preimage), 1);
            assert_eq!(l.gram_determinant(), euclidean_norm_squared(&m));
            assert_eq!(l.completion_determinant().abs(), BigInt::one());
            assert!(l.smith_factors().iter().all(|d| d.is_one()));
            for k in [-7, 0, 3] {
                assert_eq!(dot(&m, &l.anchor(k).unwrap()), k as i128);
            }
        }
    }

    #[test]
    fn partition_property() {
        for m in [vec![1, 0], vec![1, 1], vec![2, 3], vec![1, -2, 3], vec![0, 0, 1]] {
            let l = hyperplane_lattice_basis(&m).unwrap();
            assert!(verify_partition(&l, 4).unwrap(), "{m:?}");
        }
    }

    #[test]
    fn slicing_vector_examples() {
        let g0 = poly("x1^3+x2^3+x3^3", 4);
        let sv = find_slicing_vector(&g0, 1, &DEFAULT_PRIMES).unwrap();
        assert_eq!(sv.m, vec![0, 0, 0, 1]);
        assert_eq!((sv.singular_dimension, sv.sliced_dimension, sv.norm), (0, -1, 1));
        let fermat = poly("x1^3+x2^3+x3^3", 3);
        assert!(matches!(find_slicing_vector(&fermat, 1, &DEFAULT_PRIMES), Err(Error::Precondition(_))));
        assert!(find_slicing_vector(&g0, 0, &DEFAULT_PRIMES).is_err());
    }

    #[test]
    fn slicing_lowers_dimension() {
        let g0 = poly("x1^3+x2^3+x3^3", 5);
        let sv = find_slicing_vector(&g0, DEFAULT_SEARCH_BOUND, &DEFAULT_PRIMES).unwrap();
        assert_eq!(sv.singular_dimension, 1);
        let l = hyperplane_lattice_basis(&sv.m).unwrap();
        let h0 = restrict_to_hyperplane(&g0, &l).unwrap();
        assert_eq!(singular_dimension_estimate(&h0, &DEFAULT_PRIMES).unwrap(), 0);
    }

    #[test]
    fn slice_examples() {
        let w = product_weight::<f64>(2).unwrap();
        let g = poly("x1^3+x2^3", 2);
        let s = slice(&g, &w, &[1, 1], 0, 5.0).unwrap().unwrap();
        assert!(s.h.is_zero());
        assert_eq!(s.anchor, vec![0, 0]);
        // m = (0, 1): x2 = k fixed
        let g = poly("x1^3+2*x1*x2^2-x2+4", 2);
        let s = slice(&g, &w, &[0, 1], 2, 5.0).unwrap().unwrap();
        let e = &s.basis[0];
        assert_eq!(e[1], 0);
        for u in -4i64..=4 {
            let x = [s.anchor[0] + u * e[0], s.anchor[1] + u * e[1]];
            assert_eq!(s.h.eval_i64(&[u]).unwrap(), g.eval_i64(&x).unwrap());
        }
        assert!(s.h.degree().unwrap() <= 3);
        assert!(slice(&g, &w, &[0, 1], 100, 5.0).unwrap().is_none());
        assert!(slice(&g, &w, &[0, 2], 1, 5.0).is_err());
    }

    #[test]
    fn slice_substitution_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let w = product_weight::<f64>(3).unwrap();
        let g = poly("2*x1^3-x1*x2*x3+5*x3^2-x2+7", 3);
        for _ in 0..50 {
            let m: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
            if !is_primitive(&m) {
                continue;
            }
            let k = rng.gen_range(-3..=3);
            let s = slice(&g, &w, &m, k, 4.0).unwrap().unwrap();
            for _ in 0..5 {
                let u: Vec<i64> = (0..2).map(|_| rng.gen_range(-5..=5)).collect();
                let x: Vec<i64> = (0..3).map(|i| s.anchor[i] + u[0] * s.basis[0][i] + u[1] * s.basis[1][i]).collect();
                assert_eq!(s.h.eval_i64(&u).unwrap(), g.eval_i64(&x).unwrap());
            }
            // the cubic part is g0 restricted to the hyperplane
            let h0 = s.h.cubic_part();
            let l = hyperplane_lattice_basis(&m).unwrap();
            assert_eq!(h0, restrict_to_hyperplane(&g.cubic_part(), &HyperplaneLattice { basis: s.basis.clone(), ..l }).unwrap());
        }
    }

    #[test]
    fn identity_examples() {
        let w = product_weight::<f64>(2).unwrap();
        let g = poly("x1^3-x2^3+x1*x2-1", 2);
        let id = verify_slice_identity(&g, &w, 6.0, &[1, 0]).unwrap();
        assert_eq!(id.residual, 0.0);
        let id = verify_slice_identity(&g, &w, 6.0, &[1, 1]).unwrap();
        assert!(id.residual <= 1e-9, "{id:?}");
        let g = poly("x1^3+x2^3", 2);
        let wide = box_smooth::<f64>(2, 2.0).unwrap();
        let id = verify_slice_identity(&g, &wide, 6.0, &[1, 1]).unwrap();
        assert!(id.direct > 0.0 && id.residual <= 1e-9 * id.direct.max(1.0), "{id:?}");
        let zero = WeightFunction::<f64>::zero(2);
        let id = verify_slice_identity(&g, &zero, 6.0, &[2, 3]).unwrap();
        assert_eq!((id.direct, id.sliced), (0.0, 0.0));
        assert!(verify_slice_identity(&poly("x1^3", 4), &product_weight(4).unwrap(), 3.0, &[1, 0, 0, 0]).is_err());
    }

    #[test]
    fn identity_three_variables() {
        let w = product_weight::<f64>(3).unwrap();
        let g = poly("x1^3+x2^3-x3^3+x1", 3);
        for m in [vec![1, 0, 0], vec![1, -1, 0], vec![1, 2, -1]] {
            let id = verify_slice_identity(&g, &w, 5.0, &m).unwrap();
            assert!(id.residual <= 1e-9 * id.direct.max(1.0), "{m:?}: {id:?}");
        }
    }

    #[test]
    fn scaled_norm_of_slice_stays_bounded() {
        let w = product_weight::<f64>(3).unwrap();
        let g = poly("x1^3+x2^3+x3^3-2*x1*x2*x3", 3);
        for k in -3..=3 {
            let s = slice(&g, &w, &[1, 1, 1], k, 10.0).unwrap().unwrap();
            // ||h||_P << H with a constant depending on |e_i| only
            assert!(s.scaled_norm_h <= 100.0 * s.scaled_norm_g, "{} vs {}", s.scaled_norm_h, s.scaled_norm_g);
        }
    }
}
