//! The Farey decomposition of the weighted count: main term, error
//! majorant, and the bound functionals for `S_u(q; z)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::archimedean::{kloosterman_row, LatticeMasses};
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::poly::CubicPolynomial;
use crate::qdecomp::{decompose, QDecomposition};
use crate::quadrature::adaptive_simpson;
use crate::weights::WeightFunction;
use crate::Complex64;

/// Relative tolerance of the main-term integrals.
pub const MAIN_TERM_TOLERANCE: f64 = 1e-4;
/// Largest `Q`, `P` and `n` accepted by the Farey routines.
pub const DESK_MAX_Q: u64 = 12;
pub const DESK_MAX_P: f64 = 8.0;
pub const DESK_MAX_N: usize = 2;

fn check_desk(g: &CubicPolynomial, p: f64, big_q: u64) -> Result<()> {
    if big_q == 0 || big_q > DESK_MAX_Q || !(p >= 1.0 && p <= DESK_MAX_P) || g.n() > DESK_MAX_N {
        return Err(Error::Precondition(format!(
            "desk scale needs 1 <= Q <= {DESK_MAX_Q}, 1 <= P <= {DESK_MAX_P}, n <= {DESK_MAX_N}"
        )));
    }
    Ok(())
}

/// `sum_{q <= Q} int_{|z| <= 1/(qQ)} S_0(q; z) dz` with each integral by
/// adaptive Simpson. The imaginary part vanishes by conjugate symmetry and
/// is returned for inspection.
pub fn main_term(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, big_q: u64) -> Result<Complex64> {
    check_desk(g, p, big_q)?;
    let masses = LatticeMasses::new(g, w, p)?;
    let parts: Vec<Complex64> = (1..=big_q)
        .into_par_iter()
        .map(|q| {
            let ramanujan = kloosterman_row(0, q);
            let h = 1.0 / (q * big_q) as f64;
            adaptive_simpson(|z| masses.minor_arc_sum_with(&ramanujan, q, z), -h, h, MAIN_TERM_TOLERANCE).map(|(v, _)| v)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().sum())
}

/// Number of magnitudes sampled in `1/2 <= qQ|z| <= 1`; both signs are used.
pub const MAJORANT_SAMPLES: usize = 9;

/// The `|z|` samples `(1/2 + k/(2(s-1))) / (qQ)` for `k < s`.
pub fn majorant_z_samples(q: u64, big_q: u64, samples: usize) -> Vec<f64> {
    let base = 1.0 / (q * big_q) as f64;
    let steps = samples.max(2) - 1;
    (0..samples.max(1))
        .flat_map(|k| {
            let t = base * (0.5 + 0.5 * k as f64 / steps as f64);
            [t, -t]
        })
        .collect()
}

/// `E_w = sum_{q <= Q} sum_{|u| <= q/2} max_z |S_u(q; z)| / (1 + |u|)`,
/// the inner maximum taken over [`majorant_z_samples`].
pub fn error_majorant(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, big_q: u64) -> Result<f64> {
    error_majorant_sampled(g, w, p, big_q, MAJORANT_SAMPLES)
}

/// [`error_majorant`] with a chosen number of `|z|` magnitudes.
pub fn error_majorant_sampled(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, big_q: u64, samples: usize) -> Result<f64> {
    check_desk(g, p, big_q)?;
    let masses = LatticeMasses::new(g, w, p)?;
    let jobs: Vec<(u64, i64)> = (1..=big_q)
        .flat_map(|q| {
            let half = q as i64 / 2;
            (-half..=half).map(move |u| (q, u))
        })
        .collect();
    let terms: Vec<f64> = jobs
        .par_iter()
        .map(|&(q, u)| {
            let table = kloosterman_row(u, q);
            let best = majorant_z_samples(q, big_q, samples)
                .into_iter()
                .map(|z| masses.minor_arc_sum_with(&table, q, z).norm())
                .fold(0.0, f64::max);
            best / (1 + u.abs()) as f64
        })
        .collect();
    Ok(terms.into_iter().sum())
}

/// One instance of the Farey decomposition check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaCheck {
    pub p: f64,
    pub big_q: u64,
    pub count: f64,
    pub main_term: f64,
    pub main_term_imag: f64,
    pub majorant: f64,
    /// `|N_w - main| / (Q^{-2} E_w)`.
    pub constant: f64,
}

/// `N_w`, the main term, `E_w` and the implied constant of the error term.
pub fn delta_check(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, big_q: u64) -> Result<DeltaCheck> {
    let count = crate::counting::count_affine_weighted(g, w, p)?;
    let main = main_term(g, w, p, big_q)?;
    let majorant = error_majorant(g, w, p, big_q)?;
    let scale = majorant / (big_q * big_q) as f64;
    let gap = (count - main.re).abs();
    let constant = if scale > 0.0 { gap / scale } else if gap == 0.0 { 0.0 } else { f64::INFINITY };
    Ok(DeltaCheck { p, big_q, count, main_term: main.re, main_term_imag: main.im, majorant, constant })
}

/// The functionals `V, W, M1, M2, M3, M4` bounding `S_u(q; z)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundFunctionals {
    pub q: u64,
    pub z: f64,
    pub p: f64,
    pub h: f64,
    pub n: usize,
    pub decomposition: QDecomposition,
    pub n_gcd: u64,
    pub v: f64,
    pub w: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

/// Floor applied to `V` inside `M3`.
pub const V_FLOOR: f64 = 1e-12;

/// Evaluate every functional; `M1` uses `gcd(b1, n_gcd)` and `M4` the
/// dyadic scales `R = q`, `t = |z|`.
pub fn bound_functionals(q: u64, z: f64, p: f64, h: f64, n: usize, n_gcd: u64) -> Result<BoundFunctionals> {
    if q == 0 || !(p >= 1.0) || !(h >= 1.0) || n_gcd == 0 {
        return Err(Error::Precondition("need q >= 1, P >= 1, H >= 1 and N >= 1".into()));
    }
    if !(z.abs() <= 1.0 / (q as f64 * p.powf(1.5))) {
        return Err(Error::Precondition(format!("|z| = {z} exceeds 1/(q P^(3/2))")));
    }
    let dec = decompose(q)?;
    let nf = n as f64;
    let qf = q as f64;
    let c = dec.c as f64;
    let c2d = c * c * dec.d as f64;
    let v = qf / p * (z.abs() * p.powi(3)).sqrt().max(1.0);
    let w = v + c2d.cbrt();
    let b1 = dec.b1;
    let m1 = (gcd(b1 as i64, (n_gcd % b1) as i64) as f64 / b1 as f64).sqrt();
    let m2 = c.powf(nf) * (1.0 + v / c).powf(nf - 1.5);
    let vs = v.max(V_FLOOR);
    let m3 = vs.powf(nf) * (1.0 + c2d / vs.powi(3)).powf(nf / 2.0);
    let m4 = qf.powf(3.0 * nf / 8.0) * (z.abs() * p.powi(3)).powf(-nf / 8.0).min(1.0);
    Ok(BoundFunctionals { q, z, p, h, n, decomposition: dec, n_gcd, v, w, m1, m2, m3, m4 })
}

impl BoundFunctionals {
    /// `W^n M1 + min{W^n, M2, M3}`.
    pub fn bracket(&self) -> f64 {
        let wn = self.w.powf(self.n as f64);
        wn * self.m1 + wn.min(self.m2).min(self.m3)
    }
}

/// Reporting exponent of `H`.
pub const REPORT_THETA: f64 = 1.0;
/// Reporting exponent of `P^epsilon`.
pub const REPORT_EPSILON: f64 = 0.25;

/// A grid point `(q, z, u)` of the bound comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub q: u64,
    pub z: f64,
    pub u: i64,
}

/// All `(q, z, u)` with `q <= max_q`, `u in us`, and
/// `z = f / (q P^{3/2})` for `f in z_fractions` (clamped to `[-1, 1]`).
pub fn bound_grid(max_q: u64, p: f64, us: &[i64], z_fractions: &[f64]) -> Vec<GridPoint> {
    let mut out = Vec::new();
    for q in 1..=max_q {
        for &u in us {
            for &f in z_fractions {
                out.push(GridPoint { q, z: f.clamp(-1.0, 1.0) / (q as f64 * p.powf(1.5)), u });
            }
        }
    }
    out
}

/// One row of the bound report; column order `q,z,u,V,W,M1,M2,M3,lhs,rhs,ratio`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub q: u64,
    pub z: f64,
    pub u: i64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "M1")]
    pub m1: f64,
    #[serde(rename = "M2")]
    pub m2: f64,
    #[serde(rename = "M3")]
    pub m3: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// The bound comparison over a grid and its largest ratio.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    pub max_ratio: f64,
}

/// Small primes used to screen `g0` for singularity.
const SCREEN_PRIMES: [u64; 4] = [5, 7, 11, 13];

/// `|S_u(q;z)| / (H^theta q^{1-n/2} P^{n+eps} (W^n M1 + min{W^n, M2, M3}))`
/// with `theta = 1`, `eps = 1/4`, and `M1` at `N = |u|` (`N = b1` for `u = 0`).
pub fn proposition1_report(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, h: f64, grid: &[GridPoint]) -> Result<BoundReport> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    let g0 = g.cubic_part();
    let norm = g.scaled_norm(p)?;
    if !(norm <= h && h <= p) {
        return Err(Error::Precondition(format!("need ||g||_P = {norm} <= H = {h} <= P = {p}")));
    }
    let mut smooth_somewhere = false;
    for prime in SCREEN_PRIMES {
        if !g0.is_singular_mod(prime)? {
            smooth_somewhere = true;
            break;
        }
    }
    if g0.is_zero() || !smooth_somewhere {
        return Err(Error::Precondition("cubic part is singular modulo every screening prime".into()));
    }
    let masses = LatticeMasses::new(g, w, p)?;
    let n = g.n();
    let rows: Vec<BoundRow> = grid
        .par_iter()
        .map(|pt| {
            let dec = decompose(pt.q)?;
            let n_gcd = if pt.u == 0 { dec.b1 } else { pt.u.unsigned_abs() };
            let f = bound_functionals(pt.q, pt.z, p, h, n, n_gcd)?;
            let lhs = masses.minor_arc_sum(pt.u, pt.q, pt.z).norm();
            let rhs = h.powf(REPORT_THETA)
                * (pt.q as f64).powf(1.0 - n as f64 / 2.0)
                * p.powf(n as f64 + REPORT_EPSILON)
                * f.bracket();
            Ok(BoundRow { q: pt.q, z: pt.z, u: pt.u, v: f.v, w: f.w, m1: f.m1, m2: f.m2, m3: f.m3, lhs, rhs, ratio: lhs / rhs })
        })
        .collect::<Result<_>>()?;
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(BoundReport { rows, max_ratio })
}

/// `M1` cannot exceed one and `min{W^n, M2, M3} <= W^n`, so this trivial
/// bracket dominates [`BoundFunctionals::bracket`].
pub fn trivial_bracket(f: &BoundFunctionals) -> f64 {
    2.0 * f.w.powf(f.n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_affine_weighted;
    use crate::poly::parse_polynomial;
    use crate::weights::product_weight;
    use std::f64::consts::PI;

    /// Closed form: `int_{-h}^{h} e(zm) dz = sin(2 pi m h) / (pi m)` against
    /// the Ramanujan sums `c_q(m)`.
    fn main_term_closed_form(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, big_q: u64) -> f64 {
        let masses = LatticeMasses::new(g, w, p).unwrap();
        let mut total = 0.0;
        for q in 1..=big_q {
            let h = 1.0 / (q * big_q) as f64;
            for &(m, mass) in masses.masses() {
                let ramanujan: f64 = (1..=q)
                    .filter(|&a| gcd(a as i64, q as i64) == 1)
                    .map(|a| (2.0 * PI * ((a as i128 * m).rem_euclid(q as i128)) as f64 / q as f64).cos())
                    .sum();
                let integral = if m == 0 { 2.0 * h } else { (2.0 * PI * m as f64 * h).sin() / (PI * m as f64) };
                total += mass * ramanujan * integral;
            }
        }
        total
    }

    fn setup() -> (CubicPolynomial, WeightFunction<f64>) {
        (parse_polynomial("x1^3 + x2^3 - 9", 2).unwrap(), product_weight(2).unwrap())
    }

    #[test]
    fn main_term_q1_is_twice_count() {
        let (g, w) = setup();
        let count = count_affine_weighted(&g, &w, 4.0).unwrap();
        let main = main_term(&g, &w, 4.0, 1).unwrap();
        assert!((main.re - 2.0 * count).abs() <= 2e-4 * (1.0 + count), "{main} vs {count}");
        assert!(main.im.abs() < 1e-9);
    }

    #[test]
    fn main_term_matches_closed_form() {
        let g = parse_polynomial("x1^3 - 2*x2^3 + x1*x2 - 3", 2).unwrap();
        let w = product_weight(2).unwrap();
        for big_q in [2u64, 5] {
            let main = main_term(&g, &w, 5.0, big_q).unwrap();
            let exact = main_term_closed_form(&g, &w, 5.0, big_q);
            let scale: f64 = LatticeMasses::new(&g, &w, 5.0).unwrap().masses().iter().map(|m| m.1).sum();
            assert!((main.re - exact).abs() <= 1e-4 * scale, "{} vs {exact}", main.re);
            assert!(main.im.abs() < 1e-9);
        }
        assert!(main_term(&g, &w, 9.0, 2).is_err());
        assert!(main_term(&g, &w, 5.0, 13).is_err());
    }

    #[test]
    fn majorant_examples() {
        let (g, w) = setup();
        let e1 = error_majorant(&g, &w, 4.0, 1).unwrap();
        let masses = LatticeMasses::new(&g, &w, 4.0).unwrap();
        let scan = (0..=900)
            .map(|k| 0.5 + k as f64 / 1800.0)
            .flat_map(|t| [t, -t])
            .map(|z| masses.weyl_sum(z).norm())
            .fold(0.0, f64::max);
        assert!(e1 <= scan + 1e-9 && e1 >= 0.9 * scan, "{e1} vs {scan}");
        assert!(error_majorant(&g, &w, 4.0, 3).unwrap() >= 0.0);
        assert_eq!(majorant_z_samples(2, 3, 9).len(), 18);
    }

    #[test]
    fn decomposition_trend() {
        let (g, w) = setup();
        let gaps: Vec<f64> = [1u64, 2, 4]
            .iter()
            .map(|&q| {
                let r = delta_check(&g, &w, 6.0, q).unwrap();
                (r.main_term - r.count).abs()
            })
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
        // the implied constant stays small at two heights
        for p in [6.0, 8.0] {
            let r = delta_check(&g, &w, p, 4).unwrap();
            assert!(r.constant <= 10.0, "P = {p}: {}", r.constant);
        }
    }

    #[test]
    fn functional_examples() {
        let f = bound_functionals(4, 16f64.powi(-3), 16.0, 1.0, 2, 1).unwrap();
        assert_eq!((f.decomposition.b2, f.decomposition.c, f.decomposition.d), (2, 1, 1));
        assert!((f.v - 0.25).abs() < 1e-15);
        assert!((f.w - 1.25).abs() < 1e-15);
        let f = bound_functionals(7, 0.0, 10.0, 1.0, 3, 1).unwrap();
        assert!((f.v - 0.7).abs() < 1e-15);
        let f = bound_functionals(15, 0.0, 10.0, 1.0, 3, 4).unwrap();
        assert!((f.m1 - 15f64.powf(-0.5)).abs() < 1e-15);
        let f = bound_functionals(15, 0.0, 10.0, 1.0, 3, 15).unwrap();
        assert_eq!(f.m1, 1.0);
        assert!(bound_functionals(4, 1.0, 16.0, 1.0, 2, 1).is_err());
        assert!(bound_functionals(0, 0.0, 16.0, 1.0, 2, 1).is_err());
    }

    #[test]
    fn functional_invariants() {
        for q in [1u64, 8, 12, 27, 32, 250] {
            let p = 50.0f64;
            let zmax = 1.0 / (q as f64 * p.powf(1.5));
            let mut prev_v = 0.0;
            for k in 0..=20 {
                let z = zmax * k as f64 / 20.0;
                let f = bound_functionals(q, z, p, 2.0, 5, 3).unwrap();
                let dec = f.decomposition;
                let c = dec.c as f64;
                let c2d = c * c * dec.d as f64;
                assert!(f.v >= prev_v);
                prev_v = f.v;
                assert!((f.w - (f.v + c2d.cbrt())).abs() < 1e-12);
                assert!((f.m2 / (c.powi(5) * (1.0 + f.v / c).powf(3.5)) - 1.0).abs() < 1e-12);
                assert!((f.m3 / (f.v.powi(5) * (1.0 + c2d / f.v.powi(3)).powf(2.5)) - 1.0).abs() < 1e-12);
                assert!([f.v, f.w, f.m1, f.m2, f.m3, f.m4].iter().all(|&x| x >= 0.0));
                assert!(f.bracket() <= trivial_bracket(&f) * (1.0 + 1e-12));
            }
        }
        // min{W^n, M2, M3} = W^n when c = d = 1 and V is small: M2 = (1+V)^{n-3/2} < W^n = (1+V)^n
        let f = bound_functionals(5, 0.0, 100.0, 1.0, 5, 1).unwrap();
        let wn = f.w.powi(5);
        assert!(f.m2 < wn);
        let f = bound_functionals(1, 0.0, 100.0, 1.0, 5, 1).unwrap();
        assert_eq!(f.m1, 1.0);
    }

    #[test]
    fn report_examples() {
        let g = parse_polynomial("x1^3 + 2*x2^3 - x1", 2).unwrap();
        let w = product_weight(2).unwrap();
        let grid = bound_grid(8, 16.0, &[0, 1], &[0.0, 0.5, -1.0]);
        let report = proposition1_report(&g, &w, 16.0, 2.0, &grid).unwrap();
        assert!(report.max_ratio.is_finite() && report.max_ratio > 0.0);
        for pair in report.rows.chunks(6) {
            // rows for u = 0 and u = 1 at the same (q, z) share V, W, M2, M3
            let (a, b) = (&pair[0], &pair[3]);
            assert_eq!((a.v, a.w, a.m2, a.m3), (b.v, b.w, b.m2, b.m3));
        }
        assert!(proposition1_report(&g, &w, 16.0, 2.0, &[]).is_err());
        assert!(proposition1_report(&g, &w, 16.0, 0.5, &grid).is_err());
        let singular = parse_polynomial("x1^3", 2).unwrap();
        assert!(proposition1_report(&singular, &w, 16.0, 2.0, &grid).is_err());
    }
}
