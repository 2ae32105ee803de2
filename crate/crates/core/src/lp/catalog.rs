//! Built-in dyadic cases. Each objective is the `P`-exponent of the
//! quoted estimate before the extreme values of `R`, `t`, `R_2`, `R_3` are
//! inserted; the LP performs that last step.

use std::ops::{Add, Mul, Sub};

use super::{
    ratio, AffineExponent, CaseSpec, ExponentConstraint, ExponentVector, Sense, ETA, ONE, RHO, RHO0, RHO1, RHO2,
    RHO3, RHO_CAP, TAU,
};
use crate::error::{Error, Result};
use crate::Rational;

impl Add for AffineExponent {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        AffineExponent { fixed: self.fixed + rhs.fixed, per_n: self.per_n + rhs.per_n }
    }
}

impl Sub for AffineExponent {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        AffineExponent { fixed: self.fixed - rhs.fixed, per_n: self.per_n - rhs.per_n }
    }
}

impl Mul<Rational> for AffineExponent {
    type Output = Self;
    fn mul(self, rhs: Rational) -> Self {
        AffineExponent { fixed: self.fixed * rhs.clone(), per_n: self.per_n * rhs }
    }
}

/// Sparse exponent vector from `(coordinate, num, den)` triples.
fn ev(terms: &[(usize, i64, i64)]) -> ExponentVector {
    terms.iter().fold(ExponentVector::zero(), |acc, &(i, a, b)| acc + ExponentVector::unit(i) * ratio(a, b))
}

/// `n * v`.
fn times_n(v: ExponentVector) -> AffineExponent {
    AffineExponent { fixed: ExponentVector::zero(), per_n: v }
}

fn fixed(v: ExponentVector) -> AffineExponent {
    v.into()
}

fn le(lhs: ExponentVector, label: &'static str) -> ExponentConstraint {
    ExponentConstraint { lhs, sense: Sense::Le, label }
}

fn eq(lhs: ExponentVector, label: &'static str) -> ExponentConstraint {
    ExponentConstraint { lhs, sense: Sense::Eq, label }
}

/// `R <= P^{3/2}`, `R ~ R_0 R_1^2 R_2^2 R_3`, `R_3 <= R_2`,
/// `t <= (R P^{3/2})^{-1}` and `H` absorbed.
fn common() -> Vec<ExponentConstraint> {
    vec![
        le(ev(&[(RHO, 1, 1), (ONE, -3, 2)]), RHO_CAP),
        eq(ev(&[(RHO, 1, 1), (RHO0, -1, 1), (RHO1, -2, 1), (RHO2, -2, 1), (RHO3, -1, 1)]), "modulus-split"),
        le(ev(&[(RHO3, 1, 1), (RHO2, -1, 1)]), "r3-below-r2"),
        le(ev(&[(TAU, 1, 1), (RHO, 1, 1), (ONE, 3, 2)]), "t-cap"),
        eq(ev(&[(ETA, 1, 1)]), "height-absorbed"),
    ]
}

/// The three ranges of `t` and the matching `log_P V`.
#[derive(Clone, Copy)]
enum Branch {
    /// `|z| ~ (RQ)^{-1}`, `V ~ R^{1/2} P^{-1/4}`.
    Edge,
    /// `t >= P^{-3}`, `V ~ R t^{1/2} P^{1/2}`.
    LargeT,
    /// `t < P^{-3}`, `V ~ R/P`.
    SmallT,
}

impl Branch {
    fn nu(self) -> ExponentVector {
        match self {
            Branch::Edge => ev(&[(RHO, 1, 2), (ONE, -1, 4)]),
            Branch::LargeT => ev(&[(RHO, 1, 1), (TAU, 1, 2), (ONE, 1, 2)]),
            Branch::SmallT => ev(&[(RHO, 1, 1), (ONE, -1, 1)]),
        }
    }

    fn constraints(self) -> Vec<ExponentConstraint> {
        let mut c = common();
        c.push(match self {
            Branch::Edge => eq(ev(&[(TAU, 1, 1), (RHO, 1, 1), (ONE, 3, 2)]), "t-edge"),
            Branch::LargeT => le(ev(&[(TAU, -1, 1), (ONE, -3, 1)]), "t-large"),
            Branch::SmallT => le(ev(&[(TAU, 1, 1), (ONE, 3, 1)]), "t-small"),
        });
        c
    }
}

/// `log_P (R_2^2 R_3)`.
fn cube() -> ExponentVector {
    ev(&[(RHO2, 2, 1), (RHO3, 1, 1)])
}

#[derive(Clone, Copy)]
enum Regime {
    Any,
    /// `V >= R_2`.
    LargeV,
    /// `(R_2^2 R_3)^{1/3} <= V < R_2`.
    MidV,
    /// `V < (R_2^2 R_3)^{1/3}`.
    SmallV,
}

fn regime(branch: Branch, r: Regime) -> Vec<ExponentConstraint> {
    let nu = branch.nu();
    let third = cube() * ratio(1, 3);
    match r {
        Regime::Any => vec![],
        Regime::LargeV => vec![le(ExponentVector::unit(RHO2) - nu, "v-above-r2")],
        Regime::MidV => vec![le(third - nu.clone(), "v-above-cube"), le(nu - ExponentVector::unit(RHO2), "v-below-r2")],
        Regime::SmallV => vec![le(nu - third, "v-below-cube")],
    }
}

struct Draft {
    name: &'static str,
    anchor: &'static str,
    branch: Branch,
    regime: Regime,
    objective: AffineExponent,
    extra: Vec<ExponentConstraint>,
    n_min: u32,
    n_max: Option<u32>,
}

impl Draft {
    fn build(self) -> CaseSpec {
        let mut constraints = self.branch.constraints();
        constraints.extend(regime(self.branch, self.regime));
        constraints.extend(self.extra);
        CaseSpec {
            name: self.name,
            anchor: self.anchor,
            objective: self.objective,
            constraints,
            n_min: self.n_min,
            n_max: self.n_max,
        }
    }
}

fn draft(name: &'static str, anchor: &'static str, branch: Branch, regime: Regime, objective: AffineExponent) -> Draft {
    Draft { name, anchor, branch, regime, objective, extra: vec![], n_min: 5, n_max: None }
}

fn sigma2_cases() -> Vec<Draft> {
    let b = Branch::Edge;
    let nu = b.nu();
    // P^{n-3} W^n / R^{n/2-3/2}
    let prefactor_a = fixed(ev(&[(ONE, -3, 1), (RHO, 3, 2)])) + times_n(ev(&[(ONE, 1, 1), (RHO, -1, 2)]));
    // P^{n-3} R^{1-n/2} R_0 R_1 R_2^{1/2} R_3^{1/2} (summed over q)
    let prefactor_b = fixed(ev(&[(ONE, -3, 1), (RHO, 1, 1), (RHO0, 1, 1), (RHO1, 1, 1), (RHO2, 1, 2), (RHO3, 1, 2)]))
        + times_n(ev(&[(ONE, 1, 1), (RHO, -1, 2)]));
    // P^{n-3} R^{2-n/2} / (R_2^{3/2} R_3^{1/2})
    let prefactor_alg = fixed(ev(&[(ONE, -3, 1), (RHO, 2, 1), (RHO2, -3, 2), (RHO3, -1, 2)])) + times_n(ev(&[(ONE, 1, 1), (RHO, -1, 2)]));
    let weyl = fixed(ev(&[(ONE, -3, 1), (RHO, 2, 1)])) + times_n(ev(&[(ONE, 13, 16)]));
    let poisson = fixed(ev(&[(ONE, -3, 1), (RHO, 4, 3)])) + times_n(ev(&[(ONE, 9, 8), (RHO, -1, 4)]));
    let mut small_n5 = draft("sigma2b-small-v-n5", "we take $R\\leq P^{3/2}$ to deduce that", b, Regime::SmallV, poisson.clone());
    small_n5.n_max = Some(5);
    let mut small_weyl = draft(
        "sigma2b-small-v-weyl",
        "the bound coming from Weyl differencing when $R<P$",
        b,
        Regime::SmallV,
        weyl,
    );
    small_weyl.extra.push(le(ev(&[(RHO, 1, 1), (ONE, -1, 1)]), "weyl-range"));
    small_weyl.n_min = 6;
    let mut small_poisson =
        draft("sigma2b-small-v-poisson", "the bound coming from Poisson summation when $R\\geq P$", b, Regime::SmallV, poisson);
    small_poisson.extra.push(le(ev(&[(RHO, -1, 1), (ONE, 1, 1)]), "poisson-range"));
    small_poisson.n_min = 6;
    vec![
        draft(
            "sigma2a-vterm",
            "This is satisfactory for $n\\geq 5$.  Finally, the term involving",
            b,
            Regime::Any,
            prefactor_a.clone() + times_n(nu.clone()),
        ),
        draft(
            "sigma2a-cubeterm",
            "When $n\\geq 9$ the exponent of $R$ is non-positive",
            b,
            Regime::Any,
            prefactor_a + times_n(cube() * ratio(1, 3)),
        ),
        draft(
            "sigma2b-large-v",
            "\\ll H^{\\theta}P^{3n/4-3/4+\\varepsilon}. This is satisfactory for $n\\geq 5$.",
            b,
            Regime::LargeV,
            // R_2^n (V/R_2)^{n-3/2}
            prefactor_b + times_n(nu.clone()) + fixed((ExponentVector::unit(RHO2) - nu.clone()) * ratio(3, 2)),
        ),
        draft(
            "sigma2b-mid-v",
            "\\min\\{M_2,M_3\\}\\leq M_2^{3/10}M_3^{7/10}",
            b,
            Regime::MidV,
            prefactor_alg + times_n(ExponentVector::unit(RHO2) * ratio(3, 10) + nu * ratio(7, 10)),
        ),
        small_n5,
        small_weyl,
        small_poisson,
    ]
}

fn sigma1a_cases() -> Vec<Draft> {
    // P^n t R^{3/2-n/2}
    let prefactor = fixed(ev(&[(TAU, 1, 1), (RHO, 3, 2)])) + times_n(ev(&[(ONE, 1, 1), (RHO, -1, 2)]));
    // A = P^n t R^{3/2-n/2} (R_2^2 R_3)^{n/3-1/6}
    let a = prefactor.clone() + times_n(cube() * ratio(1, 3)) - fixed(cube() * ratio(1, 6));
    // B = P^n R^{2-n/8} t^{1-n/8} (R_2^2 R_3)^{-2/3} P^{-3n/8}
    let b = fixed(ev(&[(RHO, 2, 1), (TAU, 1, 1)]) - cube() * ratio(2, 3)) + times_n(ev(&[(ONE, 5, 8), (RHO, -1, 8), (TAU, -1, 8)]));
    // A with R_2^{-1/2} kept, as in the t < P^{-3} display
    let a_small = prefactor.clone() + times_n(cube() * ratio(1, 3)) - fixed(ev(&[(RHO2, 1, 2)]));
    vec![
        draft(
            "sigma1a-vterm",
            "\\ll H^{\\theta}P^{3n/4-3/4+\\varepsilon} \\end{align*} to $\\Sigma_{1,a}$, since $t\\leq (RP^{3/2})^{-1}$.",
            Branch::LargeT,
            Regime::Any,
            prefactor.clone() + times_n(Branch::LargeT.nu()),
        ),
        draft(
            "sigma1a-vterm-small-t",
            "Likewise, when $t<P^{-3}$, one obtains a satisfactory contribution.",
            Branch::SmallT,
            Regime::Any,
            prefactor + times_n(Branch::SmallT.nu()),
        ),
        draft(
            "sigma1a-cubeterm",
            "We apply the basic inequality $\\min\\{A,B\\}\\leq A^{1/3}B^{2/3}$",
            Branch::LargeT,
            Regime::Any,
            a * ratio(1, 3) + b * ratio(2, 3),
        ),
        draft(
            "sigma1a-cubeterm-small-t",
            "The exponent of $R$ is non-positive when $n\\geq 8$",
            Branch::SmallT,
            Regime::Any,
            a_small,
        ),
    ]
}

fn sigma1b_cases() -> Vec<Draft> {
    // P^n t R^{2-n/2} / (R_2^{3/2} R_3^{1/2})
    let base = fixed(ev(&[(TAU, 1, 1), (RHO, 2, 1), (RHO2, -3, 2), (RHO3, -1, 2)])) + times_n(ev(&[(ONE, 1, 1), (RHO, -1, 2)]));
    let mut out = Vec::new();
    for branch in [Branch::LargeT, Branch::SmallT] {
        let nu = branch.nu();
        let large_t = matches!(branch, Branch::LargeT);
        // M_2 = R_2^{3/2} V^{n-3/2} when V >= R_2
        let m2_large = times_n(nu.clone()) + fixed((ExponentVector::unit(RHO2) - nu.clone()) * ratio(3, 2));
        let m2_m3 = times_n(ExponentVector::unit(RHO2) * ratio(3, 10) + nu.clone() * ratio(7, 10));
        let a = times_n(ExponentVector::unit(RHO2));
        let b = times_n((cube() - nu.clone()) * ratio(1, 2));
        let c = if large_t {
            // R^{3n/8} (t P^3)^{-n/8}
            times_n(ev(&[(RHO, 3, 8), (TAU, -1, 8), (ONE, -3, 8)]))
        } else {
            times_n(ev(&[(RHO, 3, 8)]))
        };
        let (large_name, mid_name) =
            if large_t { ("sigma1b-large-v", "sigma1b-mid-v") } else { ("sigma1b-final-large-v", "sigma1b-final-mid-v") };
        out.push(draft(
            large_name,
            if large_t {
                "\\ll H^{\\theta}P^{3n/4-9/8+\\varepsilon}R^{1/4}"
            } else {
                "\\ll H^{\\theta}P^{n-3+\\varepsilon} R^{n/2+1/2}/P^{n-3/2}"
            },
            branch,
            Regime::LargeV,
            base.clone() + m2_large,
        ));
        out.push(draft(
            mid_name,
            if large_t {
                "E_n\\ll P^{1/2-7n/20}R^{1/4} \\ll P^{7/8-7n/20}\\ll 1"
            } else {
                "\\ll P^{7/8-7n/40}\\ll 1"
            },
            branch,
            Regime::MidV,
            base.clone() + m2_m3,
        ));
        if large_t {
            let mut interp = draft(
                "sigma1b-small-v",
                "Taking $\\min \\{A,B,C\\}\\leq A^{1/10}B^{1/5}C^{7/10}$",
                branch,
                Regime::SmallV,
                base.clone() + a * ratio(1, 10) + b * ratio(1, 5) + c.clone() * ratio(7, 10),
            );
            interp.n_max = Some(10);
            let mut weyl = draft(
                "sigma1b-small-v-weyl",
                "when $n\\geq 11$, we instead take $\\min\\{A,B,C\\}\\leq C$",
                branch,
                Regime::SmallV,
                base.clone() + c,
            );
            weyl.n_min = 11;
            out.extend([interp, weyl]);
        } else {
            let interp_obj = base.clone() + a * ratio(1, 10) + b * ratio(11, 30) + c.clone() * ratio(8, 15);
            let mut five = draft(
                "sigma1b-final-small-v",
                "In particular we have $E_5\\ll P^{-1/12}\\ll 1$.",
                branch,
                Regime::SmallV,
                interp_obj.clone(),
            );
            five.n_max = Some(5);
            let mut large_r = draft(
                "sigma1b-final-small-v-large-r",
                "This is clearly $O(1)$ when $R\\geq P^{7/10}$",
                branch,
                Regime::SmallV,
                interp_obj,
            );
            large_r.extra.push(le(ev(&[(RHO, -1, 1), (ONE, 7, 10)]), "r-above-7/10"));
            large_r.n_min = 6;
            large_r.n_max = Some(15);
            let mut small_r = draft(
                "sigma1b-final-small-v-small-r",
                "If $6\\leq n\\leq 15$ and $R< P^{7/10}$ then clearly",
                branch,
                Regime::SmallV,
                base.clone() + c.clone(),
            );
            small_r.extra.push(le(ev(&[(RHO, 1, 1), (ONE, -7, 10)]), "r-below-7/10"));
            small_r.n_min = 6;
            small_r.n_max = Some(15);
            let mut weyl = draft(
                "sigma1b-final-small-v-weyl",
                "Alternatively, if $n\\geq 16$ then",
                branch,
                Regime::SmallV,
                base.clone() + c,
            );
            weyl.n_min = 16;
            out.extend([five, large_r, small_r, weyl]);
        }
    }
    out
}

/// Every dyadic case, in a fixed order.
pub fn catalog() -> Vec<CaseSpec> {
    sigma2_cases().into_iter().chain(sigma1a_cases()).chain(sigma1b_cases()).map(Draft::build).collect()
}

pub fn find_case(name: &str) -> Result<CaseSpec> {
    catalog().into_iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownCase(name.to_string()))
}

/// Sub-sums and the case names that together cover them at every `n`.
pub const FAMILIES: [(&str, &[&str]); 11] = [
    ("sigma2a-vterm", &["sigma2a-vterm"]),
    ("sigma2a-cubeterm", &["sigma2a-cubeterm"]),
    ("sigma2b-large-v", &["sigma2b-large-v"]),
    ("sigma2b-mid-v", &["sigma2b-mid-v"]),
    ("sigma2b-small-v", &["sigma2b-small-v-n5", "sigma2b-small-v-weyl", "sigma2b-small-v-poisson"]),
    ("sigma1a-vterm", &["sigma1a-vterm", "sigma1a-vterm-small-t"]),
    ("sigma1a-cubeterm", &["sigma1a-cubeterm", "sigma1a-cubeterm-small-t"]),
    ("sigma1b-large-v", &["sigma1b-large-v", "sigma1b-final-large-v"]),
    ("sigma1b-mid-v", &["sigma1b-mid-v", "sigma1b-final-mid-v"]),
    ("sigma1b-small-v", &["sigma1b-small-v", "sigma1b-small-v-weyl"]),
    (
        "sigma1b-final-small-v",
        &[
            "sigma1b-final-small-v",
            "sigma1b-final-small-v-large-r",
            "sigma1b-final-small-v-small-r",
            "sigma1b-final-small-v-weyl",
        ],
    ),
];

#[cfg(test)]
mod tests {
    use super::super::{certify_case, sweep};
    use super::*;

    fn r(a: i64, b: i64) -> Rational {
        ratio(a, b)
    }

    fn optimum(name: &str, n: u32) -> Rational {
        certify_case(&find_case(name).unwrap(), n).unwrap().optimum.unwrap()
    }

    #[test]
    fn catalog_shape() {
        let cases = catalog();
        assert!(cases.len() >= 14);
        let mut names: Vec<_> = cases.iter().map(|c| c.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), cases.len());
        assert!(cases.iter().all(|c| !c.anchor.is_empty()));
        for (_, members) in FAMILIES {
            for m in members {
                find_case(m).unwrap();
            }
        }
        let listed: usize = FAMILIES.iter().map(|(_, m)| m.len()).sum();
        assert_eq!(listed, cases.len());
        assert!(matches!(find_case("nope"), Err(Error::UnknownCase(_))));
    }

    #[test]
    fn families_cover_every_dimension() {
        for n in 5..=60 {
            for (family, members) in FAMILIES {
                let cases: Vec<_> = members.iter().map(|m| find_case(m).unwrap()).filter(|c| c.applies(n)).collect();
                assert!(!cases.is_empty(), "{family} uncovered at n = {n}");
            }
        }
        // split pairs share a boundary in rho
        let w = find_case("sigma2b-small-v-weyl").unwrap();
        let p = find_case("sigma2b-small-v-poisson").unwrap();
        assert!(w.constraints.iter().any(|c| c.label == "weyl-range"));
        assert!(p.constraints.iter().any(|c| c.label == "poisson-range"));
    }

    #[test]
    fn quoted_reductions() {
        for n in 5..=12u32 {
            let nn = r(n as i64, 1);
            let three_quarters = &nn * r(3, 4) - r(3, 4);
            assert_eq!(optimum("sigma2a-vterm", n), three_quarters);
            assert_eq!(optimum("sigma2b-large-v", n), three_quarters);
            assert_eq!(optimum("sigma1a-vterm", n), three_quarters);
            assert_eq!(optimum("sigma1a-vterm-small-t", n), three_quarters);
            assert_eq!(optimum("sigma1b-final-large-v", n), three_quarters);
            // large-t, V >= R_2: P^{3n/4-9/8} R^{1/4}
            assert_eq!(optimum("sigma1b-large-v", n), &nn * r(3, 4) - r(9, 8) + r(3, 8));
            // P^{n-2} P^{7/8 - 7n/40}
            let mid = &nn - r(2, 1) + r(7, 8) - &nn * r(7, 40);
            assert_eq!(optimum("sigma2b-mid-v", n), mid);
            assert_eq!(optimum("sigma1b-final-mid-v", n), mid);
            // large-t mid-V: P^{1/2 - 7n/40} R^{1/4} at R = P^{3/2}
            assert_eq!(optimum("sigma1b-mid-v", n), mid.clone());
        }
        // cube term: n-3 + (3/2 - n/6) rho
        for n in 5..=20u32 {
            let nn = r(n as i64, 1);
            let expect = if n <= 9 { &nn - r(3, 1) + (r(3, 2) - &nn * r(1, 6)) * r(3, 2) } else { &nn - r(3, 1) };
            assert_eq!(optimum("sigma2a-cubeterm", n), expect, "n = {n}");
        }
        // t < P^{-3} cube term: 3n/4 - 1 for n <= 7
        for n in 5..=7u32 {
            assert_eq!(optimum("sigma1a-cubeterm-small-t", n), r(3 * n as i64, 4) - r(1, 1));
        }
        // Sigma_{2,b} small V at n = 5: P^{11/4}
        assert_eq!(optimum("sigma2b-small-v-n5", 5), r(11, 4));
    }

    #[test]
    fn final_small_v_margin_at_five() {
        let cert = certify_case(&find_case("sigma1b-final-small-v").unwrap(), 5).unwrap();
        assert_eq!(cert.margin, Some(r(1, 12)));
        assert!(cert.certified);
    }

    #[test]
    fn vterm_has_zero_margin_at_five() {
        let cert = certify_case(&find_case("sigma2a-vterm").unwrap(), 5).unwrap();
        assert_eq!(cert.optimum, Some(r(3, 1)));
        assert_eq!(cert.margin, Some(r(0, 1)));
        assert!(cert.certified);
    }

    #[test]
    fn every_case_certified_on_its_range() {
        for case in catalog() {
            for n in 5..=40 {
                if case.applies(n) {
                    let cert = certify_case(&case, n).unwrap();
                    assert!(cert.certified, "{} fails at n = {n}: {:?}", case.name, cert.optimum);
                    assert!(!cert.infeasible, "{} infeasible at n = {n}", case.name);
                }
            }
        }
    }

    #[test]
    fn dimension_four_fails() {
        let failing: Vec<_> =
            catalog().iter().filter(|c| !certify_case(c, 4).unwrap().certified).map(|c| c.name).collect();
        assert!(failing.contains(&"sigma2a-vterm"));
    }

    #[test]
    fn thresholds() {
        let cube = sweep(&find_case("sigma2a-cubeterm").unwrap(), 4, 30).unwrap();
        assert_eq!(cube.cap_free_from, Some(9));
        assert_eq!(cube.smallest_certified, Some(5));
        let weyl = sweep(&find_case("sigma2b-small-v-weyl").unwrap(), 4, 30).unwrap();
        assert_eq!(weyl.smallest_certified, Some(6));
        assert!(weyl.certificates.iter().filter(|c| c.n >= 6).all(|c| c.certified));
        let poisson = sweep(&find_case("sigma2b-small-v-poisson").unwrap(), 4, 30).unwrap();
        assert!(poisson.certificates.iter().filter(|c| c.n >= 6).all(|c| c.certified));
        // P^{n-3} R^{4/3-n/6} with a non-positive R-exponent from n = 8
        let small_t = sweep(&find_case("sigma1a-cubeterm-small-t").unwrap(), 8, 20).unwrap();
        assert!(small_t.certificates.iter().all(|c| c.optimum.clone().unwrap() <= r(c.n as i64 - 3, 1)));
        assert!(sweep(&find_case("sigma2a-vterm").unwrap(), 3, 10).is_err());
        assert!(sweep(&find_case("sigma2a-vterm").unwrap(), 4, 61).is_err());
    }

    #[test]
    fn dropping_rho_cap_breaks_a_case() {
        let broken: Vec<_> = catalog()
            .iter()
            .filter(|c| c.applies(5))
            .filter(|c| match certify_case(&c.without(RHO_CAP), 5) {
                Err(Error::Unbounded) => true,
                Ok(cert) => !cert.certified,
                Err(e) => panic!("{e}"),
            })
            .map(|c| c.name)
            .collect();
        assert!(broken.contains(&"sigma2a-vterm"), "{broken:?}");
    }

    #[test]
    fn permuted_constraints_same_optimum() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for case in catalog() {
            for n in [5u32, 9, 17] {
                let base = certify_case(&case, n).unwrap();
                for _ in 0..3 {
                    let mut shuffled = case.clone();
                    shuffled.constraints.shuffle(&mut rng);
                    let cert = certify_case(&shuffled, n).unwrap();
                    assert_eq!(cert.optimum, base.optimum, "{}", case.name);
                }
            }
        }
    }

    #[test]
    fn vertices_satisfy_constraints_exactly() {
        for case in catalog() {
            let cert = certify_case(&case, 7).unwrap();
            for c in &case.constraints {
                let v = c.lhs.eval(&cert.vertex);
                let ok = match c.sense {
                    Sense::Le => v <= r(0, 1),
                    Sense::Ge => v >= r(0, 1),
                    Sense::Eq => v == r(0, 1),
                };
                assert!(ok, "{} violates {}", case.name, c.label);
            }
            assert_eq!(case.objective.at(&r(7, 1)).eval(&cert.vertex), cert.optimum.clone().unwrap());
        }
    }
}
