//! Smooth compactly supported weights.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `exp(-1/(1-x^2))` on `|x| < 1`, zero elsewhere.
pub fn gamma_bump<T: Real>(x: T) -> T {
    let one = T::one();
    if x.abs() >= one {
        return T::zero();
    }
    let d = one - x * x;
    (-(one / d)).exp()
}

#[derive(Clone, Debug, PartialEq)]
enum Kind<T> {
    Zero,
    /// `prod gamma(x_i / radius)`.
    Product { radius: T },
    /// `factor * inner(x)`.
    Scaled { inner: Box<WeightFunction<T>>, factor: T },
    /// `inner(offset + sum u_j columns_j)`.
    Affine { inner: Box<WeightFunction<T>>, offset: Vec<T>, columns: Vec<Vec<T>> },
}

/// A non-negative smooth weight on `R^n` vanishing outside
/// `[-support_radius, support_radius]^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFunction<T> {
    n: usize,
    support_radius: T,
    kind: Kind<T>,
}

/// `w1(x) = prod gamma(x_i)`, support radius 1.
pub fn product_weight<T: Real>(n: usize) -> Result<WeightFunction<T>> {
    box_smooth(n, T::one())
}

/// `w1` rescaled to support radius `radius`.
pub fn box_smooth<T: Real>(n: usize, radius: T) -> Result<WeightFunction<T>> {
    if n < 1 {
        return Err(Error::InvalidArgument("weight dimension must be at least 1".into()));
    }
    if !(radius > T::zero()) || !radius.is_finite() {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    Ok(WeightFunction { n, support_radius: radius, kind: Kind::Product { radius } })
}

/// Parses a command-line weight name: `w1` or `box-smooth:<R>`.
pub fn weight_by_name<T: Real>(name: &str, n: usize) -> Result<WeightFunction<T>> {
    if name == "w1" {
        return product_weight(n);
    }
    if let Some(r) = name.strip_prefix("box-smooth:") {
        let r: f64 = r
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad radius in weight {name:?}")))?;
        return box_smooth(n, T::of(r));
    }
    Err(Error::InvalidArgument(format!("unknown weight {name:?}")))
}

impl<T: Real> WeightFunction<T> {
    pub fn zero(n: usize) -> Self {
        WeightFunction { n, support_radius: T::zero(), kind: Kind::Zero }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `R(w)`.
    pub fn support_radius(&self) -> T {
        self.support_radius
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            Kind::Zero => true,
            Kind::Scaled { inner, factor } => *factor == T::zero() || inner.is_zero(),
            Kind::Affine { inner, .. } => inner.is_zero(),
            Kind::Product { .. } => false,
        }
    }

    /// `c * w`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        if factor < T::zero() {
            return Err(Error::InvalidArgument("weights must stay non-negative".into()));
        }
        Ok(WeightFunction {
            n: self.n,
            support_radius: self.support_radius,
            kind: Kind::Scaled { inner: Box::new(self.clone()), factor },
        })
    }

    /// `u -> w(offset + sum_j u_j columns_j)` on `R^k`, `k = columns.len()`.
    ///
    /// The columns must be linearly independent; the support radius is
    /// bounded through the left pseudo-inverse of the column matrix.
    pub fn compose_affine(&self, offset: &[T], columns: &[Vec<T>]) -> Result<Self> {
        if offset.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: offset.len() });
        }
        if let Some(c) = columns.iter().find(|c| c.len() != self.n) {
            return Err(Error::DimensionMismatch { expected: self.n, got: c.len() });
        }
        let k = columns.len();
        let pinv_norm = pseudo_inverse_row_norm(columns)?;
        let off = offset.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let radius = if self.is_zero() {
            T::zero()
        } else {
            pinv_norm * (self.support_radius + off) * T::of(1.0 + 1e-9)
        };
        Ok(WeightFunction {
            n: k,
            support_radius: radius,
            kind: Kind::Affine {
                inner: Box::new(self.clone()),
                offset: offset.to_vec(),
                columns: columns.to_vec(),
            },
        })
    }

    pub fn eval(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.n);
        match &self.kind {
            Kind::Zero => T::zero(),
            Kind::Product { radius } => {
                let mut acc = T::one();
                for &xi in x {
                    let g = gamma_bump(xi / *radius);
                    if g == T::zero() {
                        return T::zero();
                    }
                    acc = acc * g;
                }
                acc
            }
            Kind::Scaled { inner, factor } => *factor * inner.eval(x),
            Kind::Affine { inner, offset, columns } => {
                let mut y = offset.clone();
                for (u, col) in x.iter().zip(columns) {
                    for (yi, ci) in y.iter_mut().zip(col) {
                        *yi = *yi + *u * *ci;
                    }
                }
                inner.eval(&y)
            }
        }
    }

    /// `w(x / p)`, the form in which weights enter the counts.
    pub fn eval_scaled(&self, x: &[i64], p: T) -> T {
        let y: Vec<T> = x.iter().map(|&v| T::of(v as f64) / p).collect();
        self.eval(&y)
    }

    /// Estimates `R_j(w)` for `j = 0..=max_order` on the default grid.
    pub fn derivative_bounds(&self, max_order: usize) -> Result<Vec<DerivativeEstimate<T>>> {
        (0..=max_order).map(|j| derivative_sup(self, j, &DerivativeGrid::default_for(self.n))).collect()
    }
}

/// `max_i sum_j |(E^T E)^{-1} E^T|_ij`, with `E` the matrix whose columns are given.
fn pseudo_inverse_row_norm<T: Real>(columns: &[Vec<T>]) -> Result<T> {
    let k = columns.len();
    if k == 0 {
        return Ok(T::zero());
    }
    let n = columns[0].len();
    let mut gram: Vec<Vec<f64>> = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = (0..n).map(|r| columns[i][r].to_f64().unwrap() * columns[j][r].to_f64().unwrap()).sum();
        }
    }
    let inv = invert(gram).ok_or_else(|| Error::InvalidArgument("affine columns are dependent".into()))?;
    let mut best = 0.0f64;
    for row in inv.iter() {
        let mut s = 0.0;
        for r in 0..n {
            let v: f64 = (0..k).map(|j| row[j] * columns[j][r].to_f64().unwrap()).sum();
            s += v.abs();
        }
        best = best.max(s);
    }
    Ok(T::of(best))
}

fn invert(mut a: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    let k = a.len();
    let mut inv: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for c in 0..k {
        let r = (c..k).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[r][c].abs() < 1e-12 {
            return None;
        }
        a.swap(c, r);
        inv.swap(c, r);
        let d = a[c][c];
        for j in 0..k {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for i in 0..k {
            if i != c {
                let f = a[i][c];
                for j in 0..k {
                    a[i][j] -= f * a[c][j];
                    inv[i][j] -= f * inv[c][j];
                }
            }
        }
    }
    Some(inv)
}

/// Highest derivative order with a central stencil.
pub const MAX_DERIVATIVE_ORDER: usize = 6;

/// Uniform sampling grid and difference step for [`derivative_sup`].
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeGrid {
    /// Samples per axis over `[-R(w), R(w)]`, endpoints included.
    pub points_per_axis: usize,
    /// Difference step for orders `<= 2`; higher orders use
    /// `max(step, eps^(1/(j+4)))` to limit cancellation.
    pub step: f64,
}

impl DerivativeGrid {
    /// 2001 samples per axis for `n = 1`, shrinking so that the grid has at
    /// most about `10^5` points.
    pub fn default_for(n: usize) -> Self {
        let per = if n <= 1 { 2001 } else { ((1e5f64).powf(1.0 / n as f64) as usize).max(5) | 1 };
        DerivativeGrid { points_per_axis: per, step: 1e-3 }
    }

    pub fn step_for(&self, order: usize) -> f64 {
        if order <= 2 {
            self.step
        } else {
            self.step.max(f64::EPSILON.powf(1.0 / (order as f64 + 4.0)))
        }
    }
}

/// An estimate of `R_j(w)` together with the step and grid that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeEstimate<T> {
    pub order: usize,
    pub value: T,
    pub step: f64,
    pub points_per_axis: usize,
}

/// Fornberg weights for the derivative of order `m` at 0 on the given nodes.
pub fn fd_weights(nodes: &[f64], m: usize) -> Vec<f64> {
    let np = nodes.len();
    let mut c = vec![vec![0.0f64; m + 1]; np];
    let mut c1 = 1.0;
    let mut c4 = nodes[0];
    c[0][0] = 1.0;
    for i in 1..np {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|row| row[m]).collect()
}

/// Fourth-order central stencil for the `order`-th derivative: offsets
/// `-half..=half` (in units of the step) and their weights.
pub fn central_stencil(order: usize) -> (Vec<i64>, Vec<f64>) {
    if order == 0 {
        return (vec![0], vec![1.0]);
    }
    let half = (order as i64 + 1) / 2 + 1;
    let offsets: Vec<i64> = (-half..=half).collect();
    let nodes: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
    (offsets, fd_weights(&nodes, order))
}

/// Finite-difference estimate of the mixed partial `d^alpha w` at `x`.
pub fn partial_derivative<T: Real>(w: &WeightFunction<T>, alpha: &[usize], x: &[T], step: f64) -> T {
    let stencils: Vec<(Vec<i64>, Vec<f64>)> = alpha.iter().map(|&a| central_stencil(a)).collect();
    let mut idx = vec![0usize; alpha.len()];
    let mut acc = 0.0f64;
    let mut point: Vec<T> = x.to_vec();
    loop {
        let mut coeff = 1.0;
        for (d, &i) in idx.iter().enumerate() {
            let (offs, ws) = &stencils[d];
            coeff *= ws[i];
            point[d] = x[d] + T::of(offs[i] as f64 * step);
        }
        if coeff != 0.0 {
            acc += coeff * w.eval(&point).to_f64().unwrap();
        }
        let mut d = 0;
        loop {
            if d == idx.len() {
                let scale = step.powi(alpha.iter().sum::<usize>() as i32);
                return T::of(acc / scale);
            }
            idx[d] += 1;
            if idx[d] < stencils[d].0.len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

fn multi_indices(n: usize, order: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if order == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=order).rev() {
        for mut rest in multi_indices(n - 1, order - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `R_j(w)`: the largest sampled `|d^alpha w|` over multi-indices with
/// `|alpha| = j`, using [`central_stencil`] on a uniform grid.
pub fn derivative_sup<T: Real>(w: &WeightFunction<T>, order: usize, grid: &DerivativeGrid) -> Result<DerivativeEstimate<T>> {
    if order > MAX_DERIVATIVE_ORDER {
        return Err(Error::InvalidArgument(format!(
            "derivative order {order} exceeds {MAX_DERIVATIVE_ORDER}"
        )));
    }
    if grid.points_per_axis < 2 {
        return Err(Error::InvalidArgument("derivative grid needs at least 2 points per axis".into()));
    }
    let step = grid.step_for(order);
    let estimate = |value| DerivativeEstimate { order, value, step, points_per_axis: grid.points_per_axis };
    if w.is_zero() {
        return Ok(estimate(T::zero()));
    }
    let n = w.n();
    let r = w.support_radius().to_f64().unwrap();
    let m = grid.points_per_axis;
    let coord = |i: usize| T::of(-r + 2.0 * r * i as f64 / (m - 1) as f64);
    let alphas = multi_indices(n, order);
    let mut best = T::zero();
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<T> = idx.iter().map(|&i| coord(i)).collect();
        for alpha in &alphas {
            let v = partial_derivative(w, alpha, &x, step).abs();
            if v > best {
                best = v;
            }
        }
        let mut d = 0;
        loop {
            if d == n {
                return Ok(estimate(best));
            }
            idx[d] += 1;
            if idx[d] < m {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}
