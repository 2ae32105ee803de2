//! Composite Gauss–Legendre rules.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Points per panel.
pub const GL_POINTS: usize = 32;

/// Nodes and weights of the `m`-point Gauss–Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on `P_m` in double precision.
pub fn gauss_legendre<T: Real>(m: usize) -> (Vec<T>, Vec<T>) {
    assert!(m >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0f64; m];
    let mut weights = vec![0.0f64; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes.into_iter().map(T::of).collect(), weights.into_iter().map(T::of).collect())
}

/// Composite rule on `[a, b]` with `panels` equal panels of `points` nodes.
pub fn composite_rule<T: Real>(a: T, b: T, panels: usize, points: usize) -> (Vec<T>, Vec<T>) {
    let (xs, ws) = gauss_legendre::<T>(points);
    let h = (b - a) / T::of(panels as f64);
    let half = h / T::of(2.0);
    let mut nodes = Vec::with_capacity(panels * points);
    let mut weights = Vec::with_capacity(panels * points);
    for k in 0..panels {
        let mid = a + h * T::of(k as f64) + half;
        for (&x, &w) in xs.iter().zip(&ws) {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
    (nodes, weights)
}

/// Deepest bisection level of [`adaptive_simpson`].
pub const SIMPSON_MAX_DEPTH: u32 = 40;

/// Adaptive Simpson integral of a complex integrand over `[a, b]`.
///
/// The tolerance is `rel_tol` times an estimate of `int |f|` from a
/// 1024-panel trapezoid, so oscillatory integrands with small net value
/// still terminate. Returns the value and the accumulated error estimate.
pub fn adaptive_simpson<T: Real, F: Fn(T) -> Complex<T>>(f: F, a: T, b: T, rel_tol: T) -> Result<(Complex<T>, T)> {
    let panels = 1024;
    let h = (b - a) / T::of(panels as f64);
    let mut l1 = T::zero();
    for k in 0..=panels {
        let weight = if k == 0 || k == panels { T::of(0.5) } else { T::one() };
        l1 = l1 + weight * f(a + h * T::of(k as f64)).norm();
    }
    let scale = (l1 * h.abs()).max(T::min_positive_value());
    let tol = rel_tol * scale;
    let fa = f(a);
    let fb = f(b);
    let m = (a + b) / T::of(2.0);
    let fm = f(m);
    let whole = (fa + fm * T::of(4.0) + fb) * ((b - a) / T::of(6.0));
    let mut err = T::zero();
    let value = simpson_step(&f, a, b, fa, fm, fb, whole, tol, SIMPSON_MAX_DEPTH, &mut err)?;
    Ok((value, err))
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<T: Real, F: Fn(T) -> Complex<T>>(
    f: &F,
    a: T,
    b: T,
    fa: Complex<T>,
    fm: Complex<T>,
    fb: Complex<T>,
    whole: Complex<T>,
    tol: T,
    depth: u32,
    err: &mut T,
) -> Result<Complex<T>> {
    let two = T::of(2.0);
    let m = (a + b) / two;
    let lm = (a + m) / two;
    let rm = (m + b) / two;
    let flm = f(lm);
    let frm = f(rm);
    let sixth = (b - a) / T::of(12.0);
    let left = (fa + flm * T::of(4.0) + fm) * sixth;
    let right = (fm + frm * T::of(4.0) + fb) * sixth;
    let delta = left + right - whole;
    // at least four levels so a symmetric integrand cannot fool the first test
    if depth + 4 <= SIMPSON_MAX_DEPTH && delta.norm() <= T::of(15.0) * tol {
        *err = *err + delta.norm() / T::of(15.0);
        return Ok(left + right + delta / T::of(15.0));
    }
    if depth == 0 {
        return Err(Error::Quadrature(delta.norm().to_f64().unwrap_or(f64::INFINITY)));
    }
    let half = tol / two;
    Ok(simpson_step(f, a, m, fa, flm, fm, left, half, depth - 1, err)?
        + simpson_step(f, m, b, fm, frm, fb, right, half, depth - 1, err)?)
}
