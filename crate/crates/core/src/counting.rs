//! Exact reference counts of zeros of cubic polynomials in boxes.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{CompiledPoly, CubicPolynomial};
use crate::scalar::{CompensatedSum, Real};
use crate::weights::WeightFunction;

/// Largest number of lattice evaluations a count may schedule.
pub const EVALUATION_BUDGET: f64 = 1e10;

/// One count together with the wall time of the enumeration that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct CountResult<V> {
    pub height: f64,
    pub value: V,
    pub seconds: f64,
}

/// Integer roots of a univariate cubic in a range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Roots {
    /// The polynomial vanishes identically.
    All,
    Some(Vec<i64>),
}

#[inline]
fn eval_cubic(c: &[i128; 4], z: i64) -> i128 {
    let z = z as i128;
    ((c[3] * z + c[2]) * z + c[1]) * z + c[0]
}

/// Integer roots in `[lo, hi]` of `c0 + c1 z + c2 z^2 + c3 z^3`, found by
/// splitting at the critical points into monotone runs, testing the sign at
/// the ends of each run, and locating the crossing by a floating estimate
/// checked exactly (integer bisection as fallback).
pub fn integer_roots(c: &[i128; 4], lo: i64, hi: i64) -> Roots {
    if c.iter().all(|v| *v == 0) {
        return Roots::All;
    }
    let mut out = Vec::new();
    if lo > hi {
        return Roots::Some(out);
    }
    let deg = (0..4).rev().find(|&k| c[k] != 0).unwrap();
    if deg == 0 {
        return Roots::Some(out);
    }
    if deg == 1 {
        let (q, r) = (-c[0]).div_rem(&c[1]);
        if r == 0 && q >= lo as i128 && q <= hi as i128 {
            out.push(q as i64);
        }
        return Roots::Some(out);
    }
    // critical points of the derivative
    let mut cuts: Vec<f64> = Vec::new();
    if deg == 2 {
        cuts.push(-(c[1] as f64) / (2.0 * c[2] as f64));
    } else {
        let (a, b, cc) = (3.0 * c[3] as f64, 2.0 * c[2] as f64, c[1] as f64);
        let disc = b * b - 4.0 * a * cc;
        if disc >= 0.0 {
            let s = disc.sqrt();
            let q = -0.5 * (b + b.signum() * s);
            if q != 0.0 {
                cuts.push(q / a);
                cuts.push(cc / q);
            } else {
                cuts.push(0.0);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    let mut bounds = vec![lo];
    for &x in &cuts {
        if !x.is_finite() {
            continue;
        }
        let k = x.floor();
        if k >= lo as f64 && k < hi as f64 {
            let k = k as i64;
            // near a critical point check neighbours directly
            for z in (k - 1).max(lo)..=(k + 2).min(hi) {
                if eval_cubic(c, z) == 0 {
                    out.push(z);
                }
            }
            bounds.push(k + 1);
        }
    }
    bounds.push(hi + 1);
    bounds.dedup();
    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1] - 1);
        if a > b {
            continue;
        }
        monotone_root(c, a, b, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    Roots::Some(out)
}

fn monotone_root(c: &[i128; 4], a: i64, b: i64, out: &mut Vec<i64>) {
    let fa = eval_cubic(c, a);
    let fb = eval_cubic(c, b);
    if fa == 0 {
        out.push(a);
    }
    if fb == 0 {
        out.push(b);
    }
    if fa.signum() * fb.signum() >= 0 {
        return;
    }
    // floating estimate by Newton from the better end
    let f = |z: f64| ((c[3] as f64 * z + c[2] as f64) * z + c[1] as f64) * z + c[0] as f64;
    let df = |z: f64| (3.0 * c[3] as f64 * z + 2.0 * c[2] as f64) * z + c[1] as f64;
    let (mut lo, mut hi) = (a as f64, b as f64);
    let mut z = 0.5 * (lo + hi);
    for _ in 0..60 {
        let fz = f(z);
        if (fz > 0.0) == (fa > 0) {
            lo = z;
        } else {
            hi = z;
        }
        let d = df(z);
        let mut next = if d != 0.0 { z - fz / d } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - z).abs() < 1e-3 || hi - lo < 0.5 {
            z = next;
            break;
        }
        z = next;
    }
    let k = z.floor() as i64;
    if k >= a && k < b {
        let (fk, fk1) = (eval_cubic(c, k), eval_cubic(c, k + 1));
        if fk.signum() * fk1.signum() <= 0 {
            if fk == 0 {
                out.push(k);
            }
            if fk1 == 0 {
                out.push(k + 1);
            }
            return;
        }
    }
    // integer bisection with f(lo) of the sign of fa
    let (mut lo, mut hi) = (a, b);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let fm = eval_cubic(c, mid);
        if fm == 0 {
            out.push(mid);
            return;
        }
        if fm.signum() == fa.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// `g` written as `sum_{i+j<=3} c_ij(prefix) y^i z^j` in its last two
/// variables, with machine-word coefficient evaluators.
struct TwoLevel {
    coeffs: Vec<(usize, usize, CompiledPoly)>,
}

impl TwoLevel {
    fn new(g: &CubicPolynomial, bound: u64) -> Result<Self> {
        g.compile(bound)?;
        let mut coeffs = Vec::new();
        for (j, pz) in g.split_last()?.into_iter().enumerate() {
            for (i, py) in pz.split_last()?.into_iter().enumerate() {
                if !py.is_zero() {
                    coeffs.push((i, j, py.compile(bound)?));
                }
            }
        }
        Ok(TwoLevel { coeffs })
    }

    /// For a fixed prefix: `a[j][i]` with `g = sum_j (sum_i a[j][i] y^i) z^j`.
    fn at_prefix(&self, prefix: &[i64]) -> [[i128; 4]; 4] {
        let mut a = [[0i128; 4]; 4];
        for (i, j, p) in &self.coeffs {
            a[*j][*i] = p.eval(prefix);
        }
        a
    }
}

#[inline]
fn horner(c: &[i128; 4], y: i64) -> i128 {
    eval_cubic(c, y)
}

fn check_budget(evaluations: f64) -> Result<()> {
    if evaluations > EVALUATION_BUDGET {
        return Err(Error::Budget(format!(
            "about {evaluations:.3e} lattice evaluations requested, limit {EVALUATION_BUDGET:.0e}"
        )));
    }
    Ok(())
}

/// Calls `visit` with every integer zero of `g` in `[-bound, bound]^n` whose
/// first coordinate lies in `first`. Requires `n >= 2`. Work is split over
/// the values of the first coordinate; results come back in that order.
fn zeros_by_first_coordinate<R, F>(g: &CubicPolynomial, bound: i64, first: (i64, i64), visit: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&mut R, &[i64]) + Sync,
    R: Default,
{
    let n = g.n();
    debug_assert!(n >= 2);
    let levels = TwoLevel::new(g, bound as u64)?;
    let tail = |x1: i64| -> R {
        let mut acc = R::default();
        let mut x = vec![0i64; n];
        if n == 2 {
            // first coordinate is y itself
            x[0] = x1;
            let a = levels.at_prefix(&[]);
            let c = [horner(&a[0], x1), horner(&a[1], x1), horner(&a[2], x1), horner(&a[3], x1)];
            emit_roots(&c, bound, &mut x, &mut acc, &visit);
            return acc;
        }
        let mid = n - 3;
        x[0] = x1;
        let mut prefix_tail = vec![-bound; mid];
        loop {
            x[1..=mid].copy_from_slice(&prefix_tail);
            let a = levels.at_prefix(&x[..n - 2]);
            for y in -bound..=bound {
                x[n - 2] = y;
                let c = [horner(&a[0], y), horner(&a[1], y), horner(&a[2], y), horner(&a[3], y)];
                emit_roots(&c, bound, &mut x, &mut acc, &visit);
            }
            if !advance(&mut prefix_tail, -bound, bound) {
                break;
            }
        }
        acc
    };
    Ok((first.0..=first.1).into_par_iter().map(tail).collect())
}

fn emit_roots<R, F: Fn(&mut R, &[i64])>(c: &[i128; 4], bound: i64, x: &mut [i64], acc: &mut R, visit: &F) {
    let n = x.len();
    match integer_roots(c, -bound, bound) {
        Roots::All => {
            for z in -bound..=bound {
                x[n - 1] = z;
                visit(acc, x);
            }
        }
        Roots::Some(rs) => {
            for z in rs {
                x[n - 1] = z;
                visit(acc, x);
            }
        }
    }
}

fn advance(v: &mut [i64], lo: i64, hi: i64) -> bool {
    for x in v.iter_mut().rev() {
        if *x < hi {
            *x += 1;
            return true;
        }
        *x = lo;
    }
    false
}

/// Every integer zero of `g` in `[-bound, bound]^n` by direct evaluation.
fn zeros_exhaustive<R, F>(g: &CubicPolynomial, bound: i64, first: (i64, i64), visit: F) -> Result<Vec<R>>
where
    R: Send + Default,
    F: Fn(&mut R, &[i64]) + Sync,
{
    let n = g.n();
    let compiled = g.compile(bound as u64)?;
    if n == 0 {
        let mut acc = R::default();
        if compiled.eval(&[]) == 0 {
            visit(&mut acc, &[]);
        }
        return Ok(vec![acc]);
    }
    Ok((first.0..=first.1)
        .into_par_iter()
        .map(|x1| {
            let mut acc = R::default();
            let mut x = vec![-bound; n];
            x[0] = x1;
            loop {
                if compiled.eval(&x) == 0 {
                    visit(&mut acc, &x);
                }
                if !advance(&mut x[1..], -bound, bound) {
                    break;
                }
            }
            acc
        })
        .collect())
}

fn is_canonical_primitive(x: &[i64]) -> bool {
    match x.iter().find(|&&v| v != 0) {
        Some(&lead) if lead > 0 => x.iter().fold(0i64, |g, &v| g.gcd(&v)) == 1,
        _ => false,
    }
}

/// Number of rational points of `C = 0` in `P^{n-1}` of height at most `p`.
pub fn count_projective(c: &CubicPolynomial, p: u64) -> Result<u64> {
    Ok(count_projective_heights(c, &[p])?[0].value)
}

/// Projective counts for several heights from one enumeration at the largest.
pub fn count_projective_heights(c: &CubicPolynomial, heights: &[u64]) -> Result<Vec<CountResult<u64>>> {
    c.require_homogeneous()?;
    let n = c.n();
    if n < 2 {
        return Err(Error::InvalidArgument("projective counts need n >= 2".into()));
    }
    if heights.is_empty() {
        return Ok(Vec::new());
    }
    if heights.contains(&0) {
        return Err(Error::InvalidArgument("height bound must be >= 1".into()));
    }
    let top = *heights.iter().max().unwrap() as i64;
    let side = (2 * top + 1) as f64;
    check_budget(side.powi(n as i32 - 1) / 2.0)?;
    let start = Instant::now();
    // canonical representatives have first coordinate >= 0
    let parts: Vec<Vec<u64>> = zeros_by_first_coordinate(c, top, (0, top), |hist: &mut Vec<u64>, x| {
        if is_canonical_primitive(x) {
            let h = x.iter().map(|v| v.unsigned_abs()).max().unwrap() as usize;
            if hist.len() <= h {
                hist.resize(h + 1, 0);
            }
            hist[h] += 1;
        }
    })?;
    let mut hist = vec![0u64; top as usize + 1];
    for part in parts {
        for (h, k) in part.into_iter().enumerate() {
            hist[h] += k;
        }
    }
    let seconds = start.elapsed().as_secs_f64();
    let mut cumulative = hist.clone();
    for h in 1..cumulative.len() {
        cumulative[h] += cumulative[h - 1];
    }
    Ok(heights
        .iter()
        .map(|&h| CountResult { height: h as f64, value: cumulative[h as usize], seconds })
        .collect())
}

/// `sum_{g(x)=0} w(x/p)` over the integer points of the support box.
///
/// `n <= 3` is enumerated exhaustively; larger `n` enumerate `n-1`
/// coordinates and extract the integer roots of the remaining cubic.
pub fn count_affine_weighted<T: Real>(g: &CubicPolynomial, w: &WeightFunction<T>, p: T) -> Result<T> {
    if w.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: w.n() });
    }
    if !(p >= T::one()) {
        return Err(Error::InvalidArgument(format!("P must be >= 1, got {p}")));
    }
    let n = g.n();
    let bound = (w.support_radius() * p).floor().to_i64().ok_or(Error::Overflow)?;
    let side = (2 * bound + 1) as f64;
    let visit = |acc: &mut Vec<T>, x: &[i64]| {
        let v = w.eval_scaled(x, p);
        if v > T::zero() {
            acc.push(v);
        }
    };
    let parts: Vec<Vec<T>> = if n <= 3 {
        check_budget(side.powi(n as i32))?;
        zeros_exhaustive(g, bound, if n == 0 { (0, 0) } else { (-bound, bound) }, visit)?
    } else {
        check_budget(side.powi(n as i32 - 1))?;
        zeros_by_first_coordinate(g, bound, (-bound, bound), visit)?
    };
    Ok(parts.into_iter().flatten().collect::<CompensatedSum<T>>().value())
}

/// Restriction of `c` to the coordinate subspace where the listed variables
/// vanish, as a polynomial in the remaining ones.
pub fn restrict_to_coordinate_subspace(c: &CubicPolynomial, zero_vars: &[usize]) -> Result<CubicPolynomial> {
    let n = c.n();
    if let Some(&i) = zero_vars.iter().find(|&&i| i >= n) {
        return Err(Error::VariableOutOfRange { index: i + 1, n });
    }
    let keep: Vec<usize> = (0..n).filter(|i| !zero_vars.contains(i)).collect();
    let columns: Vec<Vec<BigInt>> = keep
        .iter()
        .map(|&k| (0..n).map(|i| if i == k { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    c.compose_affine(&vec![BigInt::zero(); n], &columns)
}

/// Least-squares fit of `log count` against `log P`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    pub exponent: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

pub fn fit_growth(samples: &[(f64, f64)]) -> Result<GrowthFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(p, c)| *p > 0.0 && *c > 0.0)
        .map(|(p, c)| (p.ln(), c.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "growth fit needs at least 3 positive samples, got {}",
            pts.len()
        )));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("growth fit needs distinct heights".into()));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let max_residual = pts.iter().map(|p| (p.1 - intercept - exponent * p.0).abs()).fold(0.0, f64::max);
    Ok(GrowthFit { exponent, intercept, max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::BoxIter;
    use crate::poly::parse_polynomial;
    use crate::weights::product_weight;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_projective(c: &CubicPolynomial, p: i64) -> u64 {
        BoxIter::new(c.n(), -p, p)
            .filter(|x| is_canonical_primitive(x) && c.eval_i64(x).unwrap().is_zero())
            .count() as u64
    }

    fn brute_weighted(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64) -> f64 {
        let b = (w.support_radius() * p).floor() as i64;
        BoxIter::new(g.n(), -b, b)
            .filter(|x| g.eval_i64(x).unwrap().is_zero())
            .map(|x| w.eval_scaled(&x, p))
            .sum()
    }

    fn random_cubic(rng: &mut ChaCha8Rng, n: usize, homogeneous: bool) -> CubicPolynomial {
        let mut g = CubicPolynomial::zero(n);
        for _ in 0..rng.gen_range(1..7) {
            let mut e = vec![0u8; n];
            let deg = if homogeneous { 3 } else { rng.gen_range(0..=3) };
            for _ in 0..deg {
                e[rng.gen_range(0..n)] += 1;
            }
            g.add_term(e, BigInt::from(rng.gen_range(-4..=4))).unwrap();
        }
        g
    }

    #[test]
    fn integer_roots_against_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..3000 {
            // build from chosen roots sometimes, random otherwise
            let c: [i128; 4] = if rng.gen_bool(0.5) {
                let (r1, r2, r3) = (rng.gen_range(-30..=30), rng.gen_range(-30..=30), rng.gen_range(-30..=30));
                let k = rng.gen_range(1..4) * if rng.gen_bool(0.5) { 1 } else { -1 };
                let deg = rng.gen_range(1..=3);
                match deg {
                    1 => [-k * r1, k, 0, 0],
                    2 => [k * r1 * r2, -k * (r1 + r2), k, 0],
                    _ => [-k * r1 * r2 * r3, k * (r1 * r2 + r1 * r3 + r2 * r3), -k * (r1 + r2 + r3), k],
                }
            } else {
                std::array::from_fn(|_| rng.gen_range(-50..=50))
            };
            let expected: Vec<i64> = (-25..=25).filter(|&z| eval_cubic(&c, z) == 0).collect();
            match integer_roots(&c, -25, 25) {
                Roots::All => assert!(c.iter().all(|v| *v == 0)),
                Roots::Some(r) => assert_eq!(r, expected, "{c:?}"),
            }
        }
        assert_eq!(integer_roots(&[0, 0, 0, 0], -1, 1), Roots::All);
        assert_eq!(integer_roots(&[-1_000_000, 0, 0, 1], -1000, 1000), Roots::Some(vec![100]));
        assert_eq!(integer_roots(&[0, 0, 0, 1], -5, 5), Roots::Some(vec![0]));
    }

    #[test]
    fn projective_examples() {
        let fermat = parse_polynomial("x1^3 + x2^3 + x3^3", 3).unwrap();
        assert_eq!(count_projective(&fermat, 1).unwrap(), 3);
        let cube = parse_polynomial("x1^3", 2).unwrap();
        assert_eq!(count_projective(&cube, 1).unwrap(), 1);
        let none = parse_polynomial("x1^3 + 2*x2^3 + 4*x3^3", 3).unwrap();
        assert_eq!(count_projective(&none, 1).unwrap(), 0);
        assert!(count_projective(&parse_polynomial("x1^3 + x2", 2).unwrap(), 2).is_err());
    }

    #[test]
    fn projective_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..=4 {
            for _ in 0..8 {
                let c = random_cubic(&mut rng, n, true);
                let p = if n == 4 { 4 } else { 7 };
                assert_eq!(count_projective(&c, p).unwrap(), brute_projective(&c, p as i64), "{c}");
            }
        }
        let diag = parse_polynomial("x1^3 + x2^3 - x3^3 - x4^3", 4).unwrap();
        let hs = count_projective_heights(&diag, &[1, 2, 3, 5]).unwrap();
        for r in &hs {
            assert_eq!(r.value, brute_projective(&diag, r.height as i64));
        }
    }

    #[test]
    fn projective_invariances() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..6 {
            let c = random_cubic(&mut rng, 3, true);
            let base = count_projective(&c, 6).unwrap();
            assert_eq!(count_projective(&c.neg(), 6).unwrap(), base);
            assert_eq!(count_projective(&c.permute(&[2, 0, 1]).unwrap(), 6).unwrap(), base);
        }
    }

    #[test]
    fn weighted_example() {
        let g = parse_polynomial("x1^3 + x2^3 - 9", 2).unwrap();
        let w = product_weight::<f64>(2).unwrap();
        let expected = w.eval(&[1.0 / 3.0, 2.0 / 3.0]) + w.eval(&[2.0 / 3.0, 1.0 / 3.0]);
        let got = count_affine_weighted(&g, &w, 3.0).unwrap();
        assert!((got - expected).abs() < 1e-15);
        let g = parse_polynomial("x1^3 + x2^3 - 1000", 2).unwrap();
        assert_eq!(count_affine_weighted(&g, &w, 3.0).unwrap(), 0.0);
        let w3 = w.scaled(3.0).unwrap();
        let g = parse_polynomial("x1^2 - x2", 2).unwrap();
        let a = count_affine_weighted(&g, &w, 5.0).unwrap();
        let b = count_affine_weighted(&g, &w3, 5.0).unwrap();
        assert!((b - 3.0 * a).abs() < 1e-12);
    }

    #[test]
    fn weighted_root_extraction_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let w = product_weight::<f64>(4).unwrap();
        for _ in 0..10 {
            let g = random_cubic(&mut rng, 4, false);
            let got = count_affine_weighted(&g, &w, 4.0).unwrap();
            let want = brute_weighted(&g, &w, 4.0);
            assert!((got - want).abs() < 1e-12 * (1.0 + want), "{g}: {got} vs {want}");
        }
        let zero = CubicPolynomial::zero(4);
        let total = count_affine_weighted(&zero, &w, 2.5).unwrap();
        assert!((total - brute_weighted(&zero, &w, 2.5)).abs() < 1e-12);
    }

    #[test]
    fn weighted_monotone_in_weight() {
        let g = parse_polynomial("x1^2 + x2^2 - 25", 2).unwrap();
        let w = product_weight::<f64>(2).unwrap();
        let wide = crate::weights::box_smooth::<f64>(2, 2.0).unwrap();
        // w(x/2) >= w(x) pointwise on the unit box
        assert!(count_affine_weighted(&g, &wide, 6.0).unwrap() >= count_affine_weighted(&g, &w, 6.0).unwrap());
        let f32w = product_weight::<f32>(2).unwrap();
        let a = count_affine_weighted(&g, &f32w, 6.0f32).unwrap();
        let b = count_affine_weighted(&g, &w, 6.0).unwrap();
        assert!((a as f64 - b).abs() < 1e-5);
    }

    #[test]
    fn budget_guard() {
        let g = parse_polynomial("x1^3 + x2^3 + x3^3 + x4^3 + x5^3", 5).unwrap();
        assert!(matches!(count_projective(&g, 1000), Err(Error::Budget(_))));
    }

    #[test]
    fn lower_bound_family_subcount() {
        let f = parse_polynomial("x1^3 + x2*x3^2 + x2*x4^2", 4).unwrap();
        let sub = restrict_to_coordinate_subspace(&f, &[0, 1]).unwrap();
        assert!(sub.is_zero());
        assert_eq!(sub.n(), 2);
        // oracle: primitive pairs with first nonzero positive
        let p = 30i64;
        let mut pairs = 0u64;
        for a in -p..=p {
            for b in -p..=p {
                if is_canonical_primitive(&[a, b]) {
                    pairs += 1;
                }
            }
        }
        assert_eq!(count_projective(&sub, p as u64).unwrap(), pairs);
    }

    #[test]
    fn growth_fit_examples() {
        let s: Vec<(f64, f64)> = [10.0, 100.0, 1000.0].iter().map(|&p: &f64| (p, 7.0 * p * p)).collect();
        let fit = fit_growth(&s).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-9);
        assert!((fit.intercept - 7f64.ln()).abs() < 1e-9);
        let s: Vec<(f64, f64)> = [2.0, 3.0, 5.0, 8.0].iter().map(|&p: &f64| (p, p.powi(3))).collect();
        assert!((fit_growth(&s).unwrap().exponent - 3.0).abs() < 1e-9);
        assert!(fit_growth(&[(1.0, 1.0), (2.0, 0.0), (3.0, 5.0)]).is_err());
    }
}
