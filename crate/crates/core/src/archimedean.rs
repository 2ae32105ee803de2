//! Weighted Weyl sums, their Kloosterman averages, the oscillatory integral
//! and the identities linking them.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{self, gcd, mod_inverse, BoxIter};
use crate::error::{Error, Result};
use crate::poly::CubicPolynomial;
use crate::quadrature::{composite_rule, GL_POINTS};
use crate::scalar::CompensatedSum;
use crate::sums::CompleteSums;
use crate::weights::WeightFunction;
use crate::Complex64;

/// Largest number of lattice points a Weyl sum enumerates.
pub const LATTICE_BUDGET: f64 = 1e8;

/// `e(t) = exp(2 pi i t)`.
#[inline]
pub fn e(t: f64) -> Complex64 {
    Complex::from_polar(1.0, TAU * t)
}

/// `alpha = a/q + z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcPoint {
    pub a: i64,
    pub q: u64,
    pub z: f64,
}

impl ArcPoint {
    pub fn new(a: i64, q: u64, z: f64) -> Result<Self> {
        if q == 0 || gcd(a, q as i64) != 1 {
            return Err(Error::NotCoprime(a, q as i64));
        }
        Ok(ArcPoint { a, q, z })
    }

    pub fn alpha(&self) -> f64 {
        self.a as f64 / self.q as f64 + self.z
    }

    /// `|z| <= q^{-1} P^{-3/2}`.
    pub fn is_minor_arc_admissible(&self, p: f64) -> bool {
        self.z.abs() <= 1.0 / (self.q as f64 * p.powf(1.5))
    }
}

/// The weighted lattice points of `supp w(./P)` grouped by the value of `g`:
/// `T(alpha) = sum_m mass_m e(alpha m)`.
#[derive(Clone, Debug)]
pub struct LatticeMasses {
    masses: Vec<(i128, f64)>,
    bound: i64,
}

impl LatticeMasses {
    pub fn new(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64) -> Result<Self> {
        if w.n() != g.n() {
            return Err(Error::DimensionMismatch { expected: g.n(), got: w.n() });
        }
        if !(p >= 1.0) {
            return Err(Error::InvalidArgument(format!("P must be >= 1, got {p}")));
        }
        let n = g.n();
        let bound = (w.support_radius() * p).floor() as i64;
        if ((2 * bound + 1) as f64).powi(n as i32) > LATTICE_BUDGET {
            return Err(Error::Budget(format!("lattice box of radius {bound} in dimension {n}")));
        }
        let compiled = g.compile(bound.max(1) as u64)?;
        let mut groups: BTreeMap<i128, CompensatedSum<f64>> = BTreeMap::new();
        for x in BoxIter::new(n, -bound, bound) {
            let wv = w.eval_scaled(&x, p);
            if wv > 0.0 {
                groups.entry(compiled.eval(&x)).or_default().add(wv);
            }
        }
        Ok(LatticeMasses { masses: groups.into_iter().map(|(m, s)| (m, s.value())).collect(), bound })
    }

    /// `(g value, total weight)` pairs in increasing order of the value.
    pub fn masses(&self) -> &[(i128, f64)] {
        &self.masses
    }

    /// Radius of the enumerated box.
    pub fn box_radius(&self) -> i64 {
        self.bound
    }

    /// `max |g|` over the weighted points.
    pub fn value_bound(&self) -> i128 {
        self.masses.iter().map(|(m, _)| m.abs()).max().unwrap_or(0)
    }

    /// `T(alpha)` for real `alpha`.
    pub fn weyl_sum(&self, alpha: f64) -> Complex64 {
        self.masses.iter().fold(Complex64::zero(), |acc, &(m, w)| {
            let t = (alpha * m as f64).rem_euclid(1.0);
            acc + e(t) * w
        })
    }

    /// `T(a/q + z)` with the rational part of the phase reduced exactly.
    pub fn weyl_sum_arc(&self, arc: &ArcPoint) -> Complex64 {
        let q = arc.q as i128;
        self.masses.iter().fold(Complex64::zero(), |acc, &(m, w)| {
            let k = (arc.a as i128 * m).rem_euclid(q) as f64 / q as f64;
            let t = (arc.z * m as f64).rem_euclid(1.0);
            acc + e(k + t) * w
        })
    }

    /// `S_u(q; z) = sum_{gcd(a,q)=1} e_q(a^{-1} u) T(a/q + z)`, evaluated as
    /// `sum_m mass_m e(z m) K(m, u; q)`.
    pub fn minor_arc_sum(&self, u: i64, q: u64, z: f64) -> Complex64 {
        let table = kloosterman_row(u, q);
        self.minor_arc_sum_with(&table, q, z)
    }

    /// As [`minor_arc_sum`](Self::minor_arc_sum) with a precomputed `K(., u; q)`.
    pub fn minor_arc_sum_with(&self, kloosterman: &[Complex64], q: u64, z: f64) -> Complex64 {
        let qi = q as i128;
        self.masses.iter().fold(Complex64::zero(), |acc, &(m, w)| {
            let t = (z * m as f64).rem_euclid(1.0);
            acc + kloosterman[m.rem_euclid(qi) as usize] * e(t) * w
        })
    }

    /// `(1/M) sum_{j<M} T(j/M)`.
    pub fn dft_average(&self, m_grid: u64) -> Complex64 {
        let mg = m_grid as i128;
        let terms: Vec<Complex64> = (0..m_grid)
            .into_par_iter()
            .map(|j| {
                self.masses.iter().fold(Complex64::zero(), |acc, &(m, w)| {
                    let k = (j as i128 * m).rem_euclid(mg) as f64 / m_grid as f64;
                    acc + e(k) * w
                })
            })
            .collect();
        let re: CompensatedSum<f64> = terms.iter().map(|c| c.re).collect();
        let im: CompensatedSum<f64> = terms.iter().map(|c| c.im).collect();
        Complex::new(re.value(), im.value()) / m_grid as f64
    }
}

/// `K(m, u; q)` for `m = 0..q`.
pub fn kloosterman_row(u: i64, q: u64) -> Vec<Complex64> {
    let qi = q as i64;
    let units: Vec<(i64, i64)> = (0..qi).filter_map(|a| mod_inverse(a, qi).map(|inv| (a, inv))).collect();
    (0..qi)
        .map(|m| {
            units.iter().fold(Complex64::zero(), |acc, &(a, inv)| {
                let k = ((a as i128 * m as i128 + inv as i128 * u as i128).rem_euclid(qi as i128)) as f64;
                acc + e(k / q as f64)
            })
        })
        .collect()
}

/// `T(alpha) = sum_x w(x/P) e(alpha g(x))`.
pub fn weyl_sum(alpha: f64, g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64) -> Result<Complex64> {
    Ok(LatticeMasses::new(g, w, p)?.weyl_sum(alpha))
}

/// `S_u(q; z)`.
pub fn minor_arc_sum(u: i64, q: u64, z: f64, g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64) -> Result<Complex64> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be >= 1".into()));
    }
    Ok(LatticeMasses::new(g, w, p)?.minor_arc_sum(u, q, z))
}

/// Smallest DFT length for which the average of `T(j/M)` is exact.
pub fn orthogonality_grid(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64) -> Result<u64> {
    let bound = (w.support_radius() * p).floor().max(0.0) as u64;
    let b = g.abs_bound(bound).to_u64().ok_or(Error::Overflow)?;
    if b > (1u64 << 40) {
        return Err(Error::Overflow);
    }
    Ok(2 * b + 1)
}

/// `(1/M) sum_{j<M} T(j/M)` with `M = 2B + 1` and `B >= max |g|` on the
/// support box, which equals the weighted zero count.
pub fn orthogonality_count(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64) -> Result<f64> {
    let m = orthogonality_grid(g, w, p)?;
    orthogonality_count_with_grid(g, w, p, m)
}

/// As [`orthogonality_count`] with an explicit grid length `M > 2B`.
pub fn orthogonality_count_with_grid(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, m_grid: u64) -> Result<f64> {
    let minimum = orthogonality_grid(g, w, p)?;
    if m_grid < minimum {
        return Err(Error::InvalidArgument(format!("grid length {m_grid} below {minimum}")));
    }
    if m_grid > 100_000_000 {
        return Err(Error::Budget(format!("DFT length {m_grid}")));
    }
    Ok(LatticeMasses::new(g, w, p)?.dft_average(m_grid).re)
}

/// Convergence controls for [`oscillatory_integrals`].
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Starting panel count per axis; `None` picks one from the oscillation.
    pub panels: Option<usize>,
    pub max_doublings: u32,
    pub rel_tol: f64,
    /// Wavelengths of the phase resolved per panel.
    pub wavelengths_per_panel: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { panels: None, max_doublings: 4, rel_tol: 1e-6, wavelengths_per_panel: 8.0 }
    }
}

/// Values of `I(z; beta)` for a batch of frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralBatch {
    pub values: Vec<Complex64>,
    /// `max |I_2k - I_k|` between the final two refinements.
    pub error_estimate: f64,
    pub panels: usize,
}

/// Tensor grid samples of `w(x/P) e(z g(x))` times the quadrature weights.
fn weighted_samples(g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, z: f64, nodes: &[f64], weights: &[f64]) -> Result<Vec<Complex64>> {
    let n = g.n();
    let k = nodes.len();
    let total = k.checked_pow(n as u32).ok_or_else(|| Error::Budget("quadrature grid".into()))?;
    if total as f64 > 5e7 {
        return Err(Error::Budget(format!("quadrature grid of {total} points")));
    }
    // the grid is sampled through f64 evaluation of g
    let terms: Vec<(f64, Vec<u8>)> = g
        .terms()
        .map(|(e, c)| (c.to_f64().unwrap(), e.0.clone()))
        .collect();
    let eval = |x: &[f64]| -> f64 {
        terms.iter().map(|(c, e)| e.iter().zip(x).fold(*c, |t, (&k, &xi)| t * xi.powi(k as i32))).sum()
    };
    Ok((0..total)
        .into_par_iter()
        .map(|flat| {
            let mut idx = flat;
            let mut x = vec![0.0; n];
            let mut wt = 1.0;
            for d in (0..n).rev() {
                let i = idx % k;
                idx /= k;
                x[d] = nodes[i];
                wt *= weights[i];
            }
            let y: Vec<f64> = x.iter().map(|v| v / p).collect();
            let wv = w.eval(&y);
            if wv == 0.0 {
                Complex64::zero()
            } else {
                e((z * eval(&x)).rem_euclid(1.0)) * (wv * wt)
            }
        })
        .collect())
}

/// Contracts the sample tensor against `e(-beta_d x_d)` axis by axis.
fn contract(samples: &[Complex64], n: usize, nodes: &[f64], betas: &[Vec<f64>]) -> Vec<Complex64> {
    let k = nodes.len();
    betas
        .par_iter()
        .map(|beta| {
            // reduce the last axis first
            let mut cur: Vec<Complex64> = samples.to_vec();
            let mut len = cur.len();
            for d in (0..n).rev() {
                let phase: Vec<Complex64> = nodes.iter().map(|&x| e((-beta[d] * x).rem_euclid(1.0))).collect();
                len /= k;
                let mut next = vec![Complex64::zero(); len];
                for (i, slot) in next.iter_mut().enumerate() {
                    let row = &cur[i * k..(i + 1) * k];
                    *slot = row.iter().zip(&phase).fold(Complex64::zero(), |a, (r, p)| a + r * p);
                }
                cur = next;
            }
            cur[0]
        })
        .collect()
}

/// Separable version of [`contract`] for a product grid of frequencies
/// `beta = (f[i_1], ..., f[i_n])`, ordered lexicographically.
fn contract_grid(samples: &[Complex64], n: usize, nodes: &[f64], freqs: &[f64]) -> Vec<Complex64> {
    let k = nodes.len();
    let f = freqs.len();
    let phases: Vec<Vec<Complex64>> = freqs
        .iter()
        .map(|&b| nodes.iter().map(|&x| e((-b * x).rem_euclid(1.0))).collect())
        .collect();
    // layout: [free axes already contracted (f each)] x [remaining axes (k each)]
    let mut cur: Vec<Complex64> = samples.to_vec();
    let mut done = 1usize;
    let mut rest = k.pow(n as u32);
    for _ in 0..n {
        rest /= k;
        let mut next = vec![Complex64::zero(); done * f * rest];
        next.par_chunks_mut(f * rest).enumerate().for_each(|(a, out)| {
            for (bi, ph) in phases.iter().enumerate() {
                for r in 0..rest {
                    let mut acc = Complex64::zero();
                    for (i, p) in ph.iter().enumerate() {
                        acc += cur[(a * k + i) * rest + r] * p;
                    }
                    out[bi * rest + r] = acc;
                }
            }
        });
        cur = next;
        done *= f;
    }
    cur
}

fn initial_panels(g: &CubicPolynomial, p: f64, radius: f64, z: f64, beta_max: f64, cfg: &QuadratureConfig) -> usize {
    if let Some(k) = cfg.panels {
        return k.max(1);
    }
    let half_width = radius * p;
    // frequency of the phase z g(x) - beta.x along an axis
    let grad_bound: f64 = g
        .terms()
        .map(|(e, c)| c.to_f64().unwrap().abs() * e.degree() as f64 * half_width.powi(e.degree() as i32 - 1).max(1.0))
        .sum();
    let cycles = (z.abs() * grad_bound + beta_max) * 2.0 * half_width;
    ((cycles / cfg.wavelengths_per_panel).ceil() as usize).max(2)
}

/// `I(z; beta) = int w(x/P) e(z g(x) - beta.x) dx` for every `beta` in the batch.
pub fn oscillatory_integrals(z: f64, betas: &[Vec<f64>], g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, cfg: &QuadratureConfig) -> Result<IntegralBatch> {
    integrals_impl(z, g, w, p, cfg, betas.iter().flatten().fold(0.0, |m: f64, b| m.max(b.abs())), |s, nodes| {
        contract(s, g.n(), nodes, betas)
    })
}

/// `I(z; beta)` for all `beta` in the product grid `freqs^n` (lexicographic).
pub fn oscillatory_integral_grid(z: f64, freqs: &[f64], g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, cfg: &QuadratureConfig) -> Result<IntegralBatch> {
    integrals_impl(z, g, w, p, cfg, freqs.iter().fold(0.0, |m: f64, b| m.max(b.abs())), |s, nodes| {
        contract_grid(s, g.n(), nodes, freqs)
    })
}

fn integrals_impl<F>(z: f64, g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, cfg: &QuadratureConfig, beta_max: f64, run: F) -> Result<IntegralBatch>
where
    F: Fn(&[Complex64], &[f64]) -> Vec<Complex64>,
{
    if w.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: w.n() });
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("P must be >= 1, got {p}")));
    }
    let half = w.support_radius() * p;
    let mut panels = initial_panels(g, p, w.support_radius(), z, beta_max, cfg);
    let eval = |panels: usize| -> Result<Vec<Complex64>> {
        let (nodes, weights) = composite_rule(-half, half, panels, GL_POINTS);
        let samples = weighted_samples(g, w, p, z, &nodes, &weights)?;
        Ok(run(&samples, &nodes))
    };
    let mut prev = eval(panels)?;
    let mut err = f64::INFINITY;
    for _ in 0..cfg.max_doublings {
        panels *= 2;
        let cur = eval(panels)?;
        let scale = cur.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        err = prev.iter().zip(&cur).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        prev = cur;
        if err <= cfg.rel_tol * scale.max(f64::MIN_POSITIVE) {
            return Ok(IntegralBatch { values: prev, error_estimate: err, panels });
        }
    }
    if w.is_zero() {
        return Ok(IntegralBatch { values: prev, error_estimate: 0.0, panels });
    }
    Err(Error::Quadrature(err))
}

/// `I(z; beta)` for a single frequency, with its error estimate.
pub fn oscillatory_integral(z: f64, beta: &[f64], g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64) -> Result<(Complex64, f64)> {
    let b = oscillatory_integrals(z, &[beta.to_vec()], g, w, p, &QuadratureConfig::default())?;
    Ok((b.values[0], b.error_estimate))
}

/// `V = q P^{-1} max(1, sqrt(|z| P^3))`.
pub fn v_scale(q: u64, z: f64, p: f64) -> f64 {
    q as f64 / p * (z.abs() * p.powi(3)).sqrt().max(1.0)
}

/// `max(8, 4 ceil(4 q V / P))`.
pub fn default_truncation(q: u64, z: f64, p: f64) -> u64 {
    let v = v_scale(q, z, p);
    ((4.0 * q as f64 * v / p).ceil() as u64 * 4).max(8)
}

/// Both sides of the Poisson reconstruction of `S_u(q; z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonReport {
    pub direct: Complex64,
    pub reconstructed: Complex64,
    pub residual: f64,
    pub truncation: u64,
    pub quadrature_error: f64,
    /// Set when the truncation is below `ceil(q |z| sup|grad g|)`.
    pub warning: Option<String>,
}

pub const POISSON_MAX_Q: u64 = 8;
pub const POISSON_MAX_N: usize = 3;
pub const POISSON_MAX_P: f64 = 8.0;

/// `|S_u(q; z) - q^{-n} sum_{|v| <= truncation} S_u(q; v) I(z; v/q)|`.
pub fn poisson_residual(u: i64, q: u64, z: f64, g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, truncation: u64) -> Result<PoissonReport> {
    Ok(poisson_residuals(&[u], q, z, g, w, p, truncation)?.remove(0))
}

/// [`poisson_residual`] for several twists `u`, sharing the integrals.
pub fn poisson_residuals(us: &[i64], q: u64, z: f64, g: &CubicPolynomial, w: &WeightFunction<f64>, p: f64, truncation: u64) -> Result<Vec<PoissonReport>> {
    let n = g.n();
    if q == 0 || q > POISSON_MAX_Q || n > POISSON_MAX_N || p > POISSON_MAX_P {
        return Err(Error::Precondition(format!(
            "Poisson check limited to q <= {POISSON_MAX_Q}, n <= {POISSON_MAX_N}, P <= {POISSON_MAX_P}"
        )));
    }
    let masses = LatticeMasses::new(g, w, p)?;
    let t = truncation as i64;
    let freqs: Vec<f64> = (-t..=t).map(|v| v as f64 / q as f64).collect();
    let batch = oscillatory_integral_grid(z, &freqs, g, w, p, &QuadratureConfig::default())?;
    let sums = CompleteSums::new(g, q)?;
    let half = w.support_radius() * p;
    let grad_sup: f64 = g
        .terms()
        .map(|(e, c)| c.to_f64().unwrap().abs() * e.degree() as f64 * half.powi(e.degree() as i32 - 1).max(1.0))
        .sum();
    let needed = (q as f64 * z.abs() * grad_sup).ceil() as u64;
    let warning = (truncation < needed).then(|| format!("truncation {truncation} below the phase scale {needed}"));
    us.iter()
        .map(|&u| {
            let direct = masses.minor_arc_sum(u, q, z);
            let kloosterman = sums.kloosterman_table(u);
            // S_u(q; v) depends on v mod q only
            let mut by_residue: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
            let mut total = Complex64::zero();
            for (idx, v) in BoxIter::new(n, -t, t).enumerate() {
                let r: Vec<i64> = v.iter().map(|c| c.rem_euclid(q as i64)).collect();
                let s = match by_residue.get(&r) {
                    Some(s) => *s,
                    None => {
                        let s = sums.s_sum_with(&kloosterman, &r)?;
                        by_residue.insert(r, s);
                        s
                    }
                };
                total += s * batch.values[idx];
            }
            let reconstructed = total / (q as f64).powi(n as i32);
            Ok(PoissonReport {
                direct,
                reconstructed,
                residual: (direct - reconstructed).norm(),
                truncation,
                quadrature_error: batch.error_estimate,
                warning: warning.clone(),
            })
        })
        .collect()
}

/// `sum_{gcd(a,q)=1} |T(a/q + z)|`, the trivial bound for `S_u(q; z)`.
pub fn trivial_minor_arc_bound(masses: &LatticeMasses, q: u64, z: f64) -> f64 {
    (0..q as i64)
        .filter(|&a| gcd(a, q as i64) == 1)
        .map(|a| masses.weyl_sum_arc(&ArcPoint { a, q, z }).norm())
        .sum()
}

/// `phi(q) max_a |T(a/q + z)|`.
pub fn max_numerator_bound(masses: &LatticeMasses, q: u64, z: f64) -> f64 {
    let best = (0..q as i64)
        .filter(|&a| gcd(a, q as i64) == 1)
        .map(|a| masses.weyl_sum_arc(&ArcPoint { a, q, z }).norm())
        .fold(0.0, f64::max);
    arith::phi(q) as f64 * best
}
