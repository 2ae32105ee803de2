//! Exact linear programming over exponent vectors: certifies that every
//! dyadic case of the minor-arc bookkeeping stays below `P^{n-2}`.

pub mod catalog;
pub mod simplex;

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Rational;

pub use catalog::{catalog, find_case};
pub use simplex::{Constraint, LinearProgram, Optimum, Outcome, Sense};

/// Coordinates of an [`ExponentVector`]: `1` then the LP variables.
pub const ONE: usize = 0;
pub const RHO: usize = 1;
pub const RHO0: usize = 2;
pub const RHO1: usize = 3;
pub const RHO2: usize = 4;
pub const RHO3: usize = 5;
pub const TAU: usize = 6;
pub const ETA: usize = 7;
pub const BASIS_LEN: usize = 8;
/// Names of the LP variables, in column order.
pub const VARIABLE_NAMES: [&str; BASIS_LEN - 1] = ["rho", "rho0", "rho1", "rho2", "rho3", "tau", "eta"];

/// Rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Exponent of `P` as an affine form in `1, log_P R, log_P R_0..R_3,
/// log_P t, log_P H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVector(pub [Rational; BASIS_LEN]);

impl ExponentVector {
    pub fn zero() -> Self {
        ExponentVector(std::array::from_fn(|_| Rational::zero()))
    }

    pub fn constant(c: Rational) -> Self {
        Self::unit(ONE) * c
    }

    pub fn unit(index: usize) -> Self {
        let mut v = Self::zero();
        v.0[index] = Rational::one();
        v
    }

    /// Value at a point given as the LP variables (without the leading 1).
    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.0[1..].iter().zip(point).fold(self.0[ONE].clone(), |acc, (c, x)| acc + c * x)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl Add for ExponentVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ExponentVector(std::array::from_fn(|i| &self.0[i] + &rhs.0[i]))
    }
}

impl Sub for ExponentVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ExponentVector {
    type Output = Self;
    fn neg(self) -> Self {
        ExponentVector(self.0.map(|c| -c))
    }
}

impl Mul<Rational> for ExponentVector {
    type Output = Self;
    fn mul(self, rhs: Rational) -> Self {
        ExponentVector(self.0.map(|c| c * &rhs))
    }
}

/// `fixed + n * per_n`: an exponent whose coefficients are affine in `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineExponent {
    pub fixed: ExponentVector,
    pub per_n: ExponentVector,
}

impl AffineExponent {
    pub fn at(&self, n: &Rational) -> ExponentVector {
        self.fixed.clone() + self.per_n.clone() * n.clone()
    }
}

impl From<ExponentVector> for AffineExponent {
    fn from(fixed: ExponentVector) -> Self {
        AffineExponent { fixed, per_n: ExponentVector::zero() }
    }
}

/// Linear constraint `lhs (sense) 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentConstraint {
    pub lhs: ExponentVector,
    pub sense: Sense,
    /// Short label used in reports and when dropping constraints.
    pub label: &'static str,
}

/// One dyadic case: maximise `objective(n)` subject to `constraints` and
/// compare with the target `n - 2`.
#[derive(Clone, Debug)]
pub struct CaseSpec {
    pub name: &'static str,
    /// Quoted text of the estimate this case encodes.
    pub anchor: &'static str,
    pub objective: AffineExponent,
    pub constraints: Vec<ExponentConstraint>,
    /// Dimensions to which the case's argument applies.
    pub n_min: u32,
    pub n_max: Option<u32>,
}

impl CaseSpec {
    pub fn applies(&self, n: u32) -> bool {
        n >= self.n_min && self.n_max.map_or(true, |m| n <= m)
    }

    /// Copy with every constraint carrying `label` removed.
    pub fn without(&self, label: &str) -> CaseSpec {
        let mut c = self.clone();
        c.constraints.retain(|k| k.label != label);
        c
    }

    /// The LP at dimension `n`, with variables in [`VARIABLE_NAMES`] order.
    pub fn program(&self, n: u32) -> LinearProgram<Rational> {
        let objective = self.objective.at(&Rational::from_integer(n.into()));
        let mut lp = LinearProgram::new(BASIS_LEN - 1);
        lp.objective = objective.0[1..].to_vec();
        lp.constant = objective.0[ONE].clone();
        lp.free[TAU - 1] = true;
        lp.free[ETA - 1] = true;
        for c in &self.constraints {
            lp.constraints.push(Constraint { coeffs: c.lhs.0[1..].to_vec(), sense: c.sense, rhs: -c.lhs.0[ONE].clone() });
        }
        lp
    }
}

/// Label of the cap `R <= P^{3/2}`.
pub const RHO_CAP: &str = "rho-cap";

/// Outcome of maximising one case at one `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseCertificate {
    pub case: String,
    pub anchor: String,
    pub n: u32,
    /// Maximum of the bound's `P`-exponent; `None` when infeasible.
    #[serde(serialize_with = "ser_opt_rational")]
    pub optimum: Option<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub target: Rational,
    /// `target - optimum`; `None` when infeasible.
    #[serde(serialize_with = "ser_opt_rational")]
    pub margin: Option<Rational>,
    #[serde(serialize_with = "ser_named_point")]
    pub vertex: Vec<Rational>,
    #[serde(serialize_with = "ser_rationals")]
    pub duals: Vec<Rational>,
    pub certified: bool,
    /// Set when the constraint set is empty (certified vacuously).
    pub infeasible: bool,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_rationals<S: serde::Serializer>(r: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(r.iter().map(ToString::to_string))
}

fn ser_named_point<S: serde::Serializer>(r: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(VARIABLE_NAMES.iter().zip(r).map(|(k, v)| (*k, v.to_string())))
}

/// Exact LP maximum of a case at dimension `n`, certified iff it is at
/// most `n - 2`. The dual multipliers are checked before returning.
pub fn certify_case(case: &CaseSpec, n: u32) -> Result<CaseCertificate> {
    if n < 4 {
        return Err(Error::Precondition(format!("n = {n} below 4")));
    }
    let lp = case.program(n);
    let target = Rational::from_integer((i64::from(n) - 2).into());
    let base = CaseCertificate {
        case: case.name.to_string(),
        anchor: case.anchor.to_string(),
        n,
        optimum: None,
        target: target.clone(),
        margin: None,
        vertex: Vec::new(),
        duals: Vec::new(),
        certified: true,
        infeasible: true,
    };
    match lp.solve()? {
        Outcome::Infeasible => Ok(base),
        Outcome::Optimal(opt) => {
            if !lp.is_feasible(&opt.point) || !lp.verify_dual(&opt.duals, &opt.value) {
                return Err(Error::Precondition(format!("{}: simplex certificate failed its own check", case.name)));
            }
            Ok(CaseCertificate {
                certified: opt.value <= target,
                margin: Some(&target - &opt.value),
                optimum: Some(opt.value),
                vertex: opt.point,
                duals: opt.duals,
                infeasible: false,
                ..base
            })
        }
    }
}

/// Certificates for every `n` in `n_lo..=n_hi`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub case: String,
    pub certificates: Vec<CaseCertificate>,
    /// Smallest certified `n` in the range.
    pub smallest_certified: Option<u32>,
    /// Smallest `n` from which on the optimum no longer uses the cap
    /// `R <= P^{3/2}` (the `R`-exponent is non-positive).
    pub cap_free_from: Option<u32>,
}

pub const SWEEP_N_MIN: u32 = 4;
pub const SWEEP_N_MAX: u32 = 60;

pub fn sweep(case: &CaseSpec, n_lo: u32, n_hi: u32) -> Result<SweepReport> {
    if n_lo < SWEEP_N_MIN || n_hi > SWEEP_N_MAX || n_lo > n_hi {
        return Err(Error::InvalidArgument(format!("n range must lie in [{SWEEP_N_MIN}, {SWEEP_N_MAX}]")));
    }
    let uncapped = case.without(RHO_CAP);
    let mut certificates = Vec::new();
    let mut cap_free_from = None;
    for n in n_lo..=n_hi {
        let cert = certify_case(case, n)?;
        let free = match certify_case(&uncapped, n) {
            Ok(u) => u.optimum == cert.optimum,
            Err(Error::Unbounded) => false,
            Err(e) => return Err(e),
        };
        cap_free_from = match (free, cap_free_from) {
            (false, _) => None,
            (true, None) => Some(n),
            (true, s) => s,
        };
        certificates.push(cert);
    }
    let smallest_certified = certificates.iter().find(|c| c.certified).map(|c| c.n);
    Ok(SweepReport { case: case.name.to_string(), certificates, smallest_certified, cap_free_from })
}

/// Weighted geometric mean `prod values_i^{weights_i}` together with the
/// check `min values <= bound`. The comparison is made exactly in logs
/// for rational weights: `min <= bound` iff `sum w_i (log v_i - log min) >= 0`.
pub fn interpolate_min(values: &[f64], weights: &[Rational]) -> Result<(f64, bool)> {
    if values.len() != weights.len() || values.is_empty() {
        return Err(Error::DimensionMismatch { expected: values.len(), got: weights.len() });
    }
    if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument("values must be positive and finite".into()));
    }
    if weights.iter().any(Signed::is_negative) || weights.iter().fold(Rational::zero(), |a, w| a + w) != Rational::one() {
        return Err(Error::InvalidArgument("weights must be non-negative and sum to 1".into()));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let log_bound: f64 = values.iter().zip(weights).map(|(v, w)| w.to_f64().unwrap_or(0.0) * v.ln()).sum();
    let excess: f64 = values.iter().zip(weights).map(|(v, w)| w.to_f64().unwrap_or(0.0) * (v.ln() - min.ln())).sum();
    let holds = excess >= 0.0;
    assert!(holds, "weighted geometric mean below the minimum");
    Ok((log_bound.exp(), holds))
}
