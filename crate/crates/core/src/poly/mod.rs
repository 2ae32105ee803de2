//! Integer cubic polynomials in `n` variables.
//!
//! Coefficients are arbitrary-precision integers. Machine-word evaluation is
//! only available through [`CompiledPoly`], whose constructor certifies that no
//! intermediate value can overflow on the requested box.

mod parse;
mod tensor;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, mul_mod};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub use parse::parse_polynomial;
pub use tensor::SymmetricCubicTensor;

/// Exponent tuple of a monomial. Ordered so that iteration runs in
/// graded-lexicographic order, highest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponents(pub Vec<u8>);

impl Exponents {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial of total degree at most 3 with integer coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CubicPolynomial {
    n: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

type RawPoly = BTreeMap<Vec<u8>, BigInt>;

fn raw_mul(a: &RawPoly, b: &RawPoly) -> RawPoly {
    let mut out = RawPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl CubicPolynomial {
    pub fn zero(n: usize) -> Self {
        CubicPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c.into()).expect("constant term is valid");
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed and cancelled terms dropped.
    pub fn from_terms<I, C>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u8>, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            p.add_term(e, c.into())?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, exps: Vec<u8>, c: BigInt) -> Result<()> {
        if exps.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: exps.len() });
        }
        let e = Exponents(exps);
        if e.degree() > 3 {
            return Err(Error::DegreeTooHigh(e.degree()));
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u8]) -> BigInt {
        self.terms.get(&Exponents(exps.to_vec())).cloned().unwrap_or_default()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponents::degree).max()
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        CubicPolynomial {
            n: self.n,
            terms: self.terms.iter().filter(|(e, _)| e.degree() == d).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// The homogeneous cubic part `g0`.
    pub fn cubic_part(&self) -> Self {
        self.homogeneous_part(3)
    }

    /// True when every term has degree exactly 3 (the zero polynomial included).
    pub fn is_homogeneous_cubic(&self) -> bool {
        self.terms.keys().all(|e| e.degree() == 3)
    }

    pub fn require_homogeneous(&self) -> Result<()> {
        if self.is_homogeneous_cubic() {
            Ok(())
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    /// `||g||`: the largest coefficient modulus.
    pub fn sup_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// `||g||_P = ||P^{-3} g(P x)||`, computed term by term as
    /// `max |c| P^{deg - 3}`.
    pub fn scaled_norm<T: Real>(&self, p: T) -> Result<T> {
        if !(p >= T::one()) {
            return Err(Error::Precondition("scaled norm needs P >= 1".into()));
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                let c = T::from_f64(c.abs().to_f64().unwrap_or(f64::INFINITY)).unwrap_or(T::infinity());
                c * p.powi(e.degree() as i32 - 3)
            })
            .fold(T::zero(), T::max))
    }

    /// Exact version of [`Self::scaled_norm`] for rational `P`.
    pub fn scaled_norm_exact(&self, p: &BigRational) -> Result<BigRational> {
        if *p < BigRational::one() {
            return Err(Error::Precondition("scaled norm needs P >= 1".into()));
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| BigRational::from_integer(c.abs()) / p.pow(3 - e.degree() as i32))
            .max()
            .unwrap_or_else(BigRational::zero))
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.n {
            Err(Error::DimensionMismatch { expected: self.n, got })
        } else {
            Ok(())
        }
    }

    pub fn eval(&self, x: &[BigInt]) -> Result<BigInt> {
        self.check_dim(x.len())?;
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(&e.0) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_i64(&self, x: &[i64]) -> Result<BigInt> {
        let v: Vec<BigInt> = x.iter().map(|&t| BigInt::from(t)).collect();
        self.eval(&v)
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            let k = e.0[i];
            if k > 0 {
                let mut ne = e.0.clone();
                ne[i] -= 1;
                out.add_term(ne, c * BigInt::from(k)).expect("lower degree");
            }
        }
        out
    }

    /// Exact value, gradient and Hessian at `x`.
    pub fn gradient_hessian(&self, x: &[BigInt]) -> Result<(BigInt, Vec<BigInt>, HessianMatrix)> {
        self.check_dim(x.len())?;
        let value = self.eval(x)?;
        let mut grad = Vec::with_capacity(self.n);
        let mut hess = vec![vec![BigInt::zero(); self.n]; self.n];
        for i in 0..self.n {
            let di = self.derivative(i);
            grad.push(di.eval(x)?);
            for j in i..self.n {
                let v = di.derivative(j).eval(x)?;
                hess[j][i] = v.clone();
                hess[i][j] = v;
            }
        }
        Ok((value, grad, HessianMatrix(hess)))
    }

    pub fn neg(&self) -> Self {
        CubicPolynomial { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.n);
        }
        CubicPolynomial { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.n)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.0.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Relabel variables: variable `i` of `self` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        self.check_dim(perm.len())?;
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            let mut ne = vec![0u8; self.n];
            for (i, &k) in e.0.iter().enumerate() {
                ne[perm[i]] = k;
            }
            out.add_term(ne, c.clone())?;
        }
        Ok(out)
    }

    /// Substitutes `x = offset + sum_j u_j columns[j]`, returning a polynomial
    /// in `columns.len()` variables.
    pub fn compose_affine(&self, offset: &[BigInt], columns: &[Vec<BigInt>]) -> Result<Self> {
        self.check_dim(offset.len())?;
        let m = columns.len();
        for col in columns {
            self.check_dim(col.len())?;
        }
        // x_i as a polynomial in u
        let linear: Vec<RawPoly> = (0..self.n)
            .map(|i| {
                let mut p = RawPoly::new();
                if !offset[i].is_zero() {
                    p.insert(vec![0; m], offset[i].clone());
                }
                for (j, col) in columns.iter().enumerate() {
                    if !col[i].is_zero() {
                        let mut e = vec![0u8; m];
                        e[j] = 1;
                        p.insert(e, col[i].clone());
                    }
                }
                p
            })
            .collect();
        let mut out = Self::zero(m);
        let mut unit = RawPoly::new();
        unit.insert(vec![0; m], BigInt::one());
        for (e, c) in &self.terms {
            let mut acc = unit.clone();
            for (i, &k) in e.0.iter().enumerate() {
                for _ in 0..k {
                    acc = raw_mul(&acc, &linear[i]);
                }
            }
            for (ue, uc) in acc {
                out.add_term(ue, uc * c)?;
            }
        }
        Ok(out)
    }

    /// Writes `g = sum_k a_k(x_1..x_{n-1}) x_n^k` and returns `[a_0, a_1, a_2, a_3]`.
    pub fn split_last(&self) -> Result<[CubicPolynomial; 4]> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("no variables to split".into()));
        }
        let m = self.n - 1;
        let mut parts: [CubicPolynomial; 4] = std::array::from_fn(|_| Self::zero(m));
        for (e, c) in &self.terms {
            let k = e.0[m] as usize;
            parts[k].add_term(e.0[..m].to_vec(), c.clone())?;
        }
        Ok(parts)
    }

    /// Upper bound for `|g(x)|` over `|x_i| <= r`.
    pub fn abs_bound(&self, r: u64) -> BigInt {
        let r = BigInt::from(r);
        self.terms.iter().map(|(e, c)| c.abs() * r.pow(e.degree())).sum()
    }

    /// Machine-word evaluator valid on the box `|x_i| <= max_abs`.
    pub fn compile(&self, max_abs: u64) -> Result<CompiledPoly> {
        let bound = self.abs_bound(max_abs.max(1));
        if bound > BigInt::from(1i128 << 100) {
            return Err(Error::Overflow);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((c.to_i64().ok_or(Error::Overflow)?, e.0.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(CompiledPoly { n: self.n, terms })
    }

    /// Reduction modulo `q`.
    pub fn reduce_mod(&self, q: u64) -> ModPoly {
        let qb = BigInt::from(q);
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let r = ((c % &qb) + &qb) % &qb;
                let r = r.to_u64().expect("residue fits");
                (r != 0).then(|| (r, e.0.clone()))
            })
            .collect();
        ModPoly { q, terms }
    }

    /// Primes `p <= limit` for which `grad g0` has a nonzero zero in `F_p^n`,
    /// found by exhaustive search over projective representatives.
    pub fn bad_primes(&self, limit: u64) -> Result<Vec<u64>> {
        self.require_homogeneous()?;
        if limit < 2 {
            return Err(Error::InvalidArgument("prime limit must be >= 2".into()));
        }
        let mut out = Vec::new();
        for p in arith::primes_up_to(limit) {
            if self.is_singular_mod(p)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// True when `grad g0 = 0` at some `x != 0` modulo the prime `p`.
    pub fn is_singular_mod(&self, p: u64) -> Result<bool> {
        Ok(self.singular_point_count(p, true)? > 0)
    }

    /// Number of projective points of `{grad g0 = 0}` over `F_p`, enumerated
    /// exhaustively; stops at the first hit when `first_only`.
    pub fn singular_point_count(&self, p: u64, first_only: bool) -> Result<u64> {
        const BUDGET: u128 = 200_000_000;
        if arith::projective_size(self.n, p) > BUDGET {
            return Err(Error::Budget(format!("P^{}(F_{p}) is too large to enumerate", self.n - 1)));
        }
        let grads: Vec<ModPoly> = (0..self.n).map(|i| self.derivative(i).reduce_mod(p)).collect();
        let mut count = 0u64;
        for lead in 0..self.n {
            let mut x = vec![0u64; self.n];
            x[lead] = 1;
            loop {
                if grads.iter().all(|d| d.eval(&x) == 0) {
                    count += 1;
                    if first_only {
                        return Ok(count);
                    }
                }
                if !arith::next_residue_vector(&mut x[lead + 1..], p) {
                    break;
                }
            }
        }
        Ok(count)
    }
}

impl fmt::Display for CubicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl FromStr for CubicPolynomial {
    type Err = Error;

    /// Parses with `n` equal to the largest variable index that occurs.
    fn from_str(s: &str) -> Result<Self> {
        parse::parse_auto(s)
    }
}

/// Symmetric matrix of exact second partials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HessianMatrix(pub Vec<Vec<BigInt>>);

impl HessianMatrix {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_i64(&self) -> Result<Vec<Vec<i64>>> {
        self.0
            .iter()
            .map(|row| row.iter().map(|v| v.to_i64().ok_or(Error::Overflow)).collect())
            .collect()
    }
}

/// Machine-word evaluator; see [`CubicPolynomial::compile`].
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    n: usize,
    terms: Vec<(i64, Vec<u8>)>,
}

impl CompiledPoly {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn eval(&self, x: &[i64]) -> i128 {
        let mut acc = 0i128;
        for (c, e) in &self.terms {
            let mut t = *c as i128;
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= *xi as i128;
                }
            }
            acc += t;
        }
        acc
    }
}

/// Polynomial with coefficients reduced modulo `q`.
#[derive(Clone, Debug)]
pub struct ModPoly {
    q: u64,
    terms: Vec<(u64, Vec<u8>)>,
}

impl ModPoly {
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Evaluates at a residue vector with entries in `[0, q)`.
    #[inline]
    pub fn eval(&self, x: &[u64]) -> u64 {
        let q = self.q;
        let mut acc = 0u64;
        for (c, e) in &self.terms {
            let mut t = *c;
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = mul_mod(t, *xi, q);
                }
            }
            acc += t;
            if acc >= q {
                acc -= q;
            }
        }
        acc
    }
}
