//! Command handlers: each maps its arguments onto library calls and rows.

use cubic_lab::archimedean::{default_truncation, minor_arc_sum, orthogonality_count, poisson_residuals};
use cubic_lab::counting::{count_affine_weighted, count_projective_heights, fit_growth};
use cubic_lab::delta::{bound_grid, delta_check, proposition1_report};
use cubic_lab::lp::{catalog, certify_case, find_case, CaseSpec};
use cubic_lab::poly::parse_polynomial;
use cubic_lab::qdecomp::decompose;
use cubic_lab::slicer::{find_slicing_vector, level_bound, slice, verify_slice_identity, DEFAULT_PRIMES};
use cubic_lab::sums::{check_multiplicativity, complete_s, prime_bound_report};
use cubic_lab::weights::weight_by_name;
use cubic_lab::weyl::{difference_form, weyl_bound_grid};
use cubic_lab::{CubicPolynomial, SymmetricCubicTensor, Weight};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{Command, PolyArgs, ReportKind, SampleArgs, Verify};
use crate::error::CliError;
use crate::output::{Cell, Format, Record, Report};

type CliResult<T> = Result<T, CliError>;

/// Smallest dimension covered by the case catalog.
const CATALOG_N_MIN: u32 = 5;

/// Runs one command; returns its rows and the default output format.
pub fn execute(command: &Command, seed: u64) -> CliResult<(Report, Format)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = match command {
        Command::Count { poly, heights, weight } => count(poly, heights, weight.as_deref())?,
        Command::Expsum { poly, q, u, v, z, height, weight } => expsum(poly, q, u, v.as_deref(), *z, *height, &weight.weight)?,
        Command::Verify(kind) => verify(kind, &mut rng)?,
        Command::Report(kind) => report(kind, &mut rng)?,
        Command::Qdecomp { q } => {
            let mut r = Report::new("qdecomp");
            for &q in q {
                let d = decompose(q)?;
                r.push(Record::new().with("q", d.q).with("b1", d.b1).with("b2", d.b2).with("c", d.c).with("d", d.d).with("d0", d.d0));
            }
            return Ok((r, Format::Row));
        }
        Command::Certify { case, n } => certify(case, n.clone())?,
        Command::Slice { poly, m, k, height, bound, weight } => slice_levels(poly, m.as_deref(), *k, *height, *bound, &weight.weight)?,
        Command::Growth { poly, heights } => growth(poly, heights)?,
    };
    Ok((report, Format::Csv))
}

/// Reads `--poly`, following `@path`.
pub fn load_poly(args: &PolyArgs) -> CliResult<CubicPolynomial> {
    let Some(src) = &args.poly else {
        return Err(CliError::usage("--poly is required"));
    };
    let text = match src.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?,
        None => src.clone(),
    };
    Ok(match args.n {
        Some(n) => parse_polynomial(text.trim(), n as usize)?,
        None => text.trim().parse()?,
    })
}

fn weight(name: &str, n: usize) -> CliResult<Weight> {
    Ok(weight_by_name::<f64>(name, n)?)
}

/// Exponent vectors of total degree at most three, in lexicographic order.
fn monomials(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut e = vec![0u8; n];
    loop {
        if e.iter().map(|&v| u32::from(v)).sum::<u32>() <= 3 {
            out.push(e.clone());
        }
        let Some(i) = (0..n).rev().find(|&i| e[i] < 3) else {
            return out;
        };
        e[i] += 1;
        e[i + 1..].iter_mut().for_each(|v| *v = 0);
    }
}

/// Uniform coefficients in `[-coeff, coeff]` with a nonzero cubic part.
pub fn random_cubic(rng: &mut ChaCha8Rng, n: usize, coeff: i64) -> CubicPolynomial {
    let monos = monomials(n);
    loop {
        let terms: Vec<(Vec<u8>, i64)> = monos.iter().map(|e| (e.clone(), rng.gen_range(-coeff..=coeff))).collect();
        let g = CubicPolynomial::from_terms(n, terms).expect("exponents have length n");
        if !g.cubic_part().is_zero() {
            return g;
        }
    }
}

/// The given polynomial once, or `samples` random ones.
fn instances(s: &SampleArgs, default_n: u64, rng: &mut ChaCha8Rng) -> CliResult<Vec<CubicPolynomial>> {
    if s.poly.poly.is_some() {
        return Ok(vec![load_poly(&s.poly)?]);
    }
    let n = s.poly.n.unwrap_or(default_n) as usize;
    Ok((0..s.samples).map(|_| random_cubic(rng, n, s.coeff)).collect())
}

fn integer_heights(heights: &[f64]) -> CliResult<Vec<u64>> {
    heights
        .iter()
        .map(|&p| if p.fract() == 0.0 { Ok(p as u64) } else { Err(CliError::usage(format!("projective height {p} must be an integer"))) })
        .collect()
}

fn homogeneous(poly: &PolyArgs) -> CliResult<CubicPolynomial> {
    let g = load_poly(poly)?;
    if !g.is_homogeneous_cubic() {
        return Err(CliError::usage("projective counts need a homogeneous cubic; pass --weight for the affine count"));
    }
    Ok(g)
}

fn count(poly: &PolyArgs, heights: &[f64], weight_name: Option<&str>) -> CliResult<Report> {
    let mut r = Report::new("count");
    match weight_name {
        Some(name) => {
            let g = load_poly(poly)?;
            let w = weight(name, g.n())?;
            for &p in heights {
                r.push(Record::new().with("P", p).with("count", count_affine_weighted(&g, &w, p)?));
            }
        }
        None => {
            let g = homogeneous(poly)?;
            for c in count_projective_heights(&g, &integer_heights(heights)?)? {
                r.push(Record::new().with("P", c.height).with("count", c.value));
            }
        }
    }
    Ok(r)
}

fn expsum(poly: &PolyArgs, qs: &[u64], us: &[i64], v: Option<&[i64]>, z: Option<f64>, height: Option<f64>, weight_name: &str) -> CliResult<Report> {
    let g = load_poly(poly)?;
    let mut r = Report::new("expsum");
    match (v, z, height) {
        (Some(v), _, _) => {
            for &q in qs {
                for &u in us {
                    let s = complete_s(u, q, v, &g)?;
                    r.push(Record::new().with("q", q).with("u", u).with("v", v).with("re", s.re).with("im", s.im).with("abs", s.norm()));
                }
            }
        }
        (None, Some(z), Some(p)) => {
            let w = weight(weight_name, g.n())?;
            for &q in qs {
                for &u in us {
                    let s = minor_arc_sum(u, q, z, &g, &w, p)?;
                    r.push(Record::new().with("q", q).with("u", u).with("z", z).with("P", p).with("re", s.re).with("im", s.im).with("abs", s.norm()));
                }
            }
        }
        _ => return Err(CliError::usage("expsum needs --v, or --z together with --P")),
    }
    Ok(r)
}

fn verify(kind: &Verify, rng: &mut ChaCha8Rng) -> CliResult<Report> {
    match kind {
        Verify::Orthogonality { sample, heights, weight: wn, tolerance } => {
            let mut r = Report::new("verify-orthogonality");
            for g in instances(sample, 2, rng)? {
                let w = weight(&wn.weight, g.n())?;
                for &p in heights {
                    let direct = count_affine_weighted(&g, &w, p)?;
                    let circle = orthogonality_count(&g, &w, p)?;
                    let residual = (direct - circle).abs();
                    let row = Record::new().with("poly", g.to_string()).with("P", p).with("direct", direct).with("orthogonality", circle).with("residual", residual);
                    r.push_check(row, residual <= *tolerance);
                }
            }
            Ok(r)
        }
        Verify::Poisson { poly, q, u, z, height, truncation, weight: wn, tolerance } => {
            let g = load_poly(poly)?;
            let w = weight(&wn.weight, g.n())?;
            let mut r = Report::new("verify-poisson");
            for &q in q {
                let t = truncation.unwrap_or_else(|| default_truncation(q, *z, *height));
                for (&u, rep) in u.iter().zip(poisson_residuals(u, q, *z, &g, &w, *height, t)?) {
                    if let Some(msg) = &rep.warning {
                        eprintln!("warning: q={q} u={u}: {msg}");
                    }
                    let bound = tolerance * (1.0 + rep.direct.norm());
                    let row = Record::new()
                        .with("q", q)
                        .with("u", u)
                        .with("z", *z)
                        .with("P", *height)
                        .with("truncation", rep.truncation)
                        .with("direct_abs", rep.direct.norm())
                        .with("residual", rep.residual)
                        .with("bound", bound)
                        .with("quadrature_error", rep.quadrature_error);
                    r.push_check(row, rep.residual <= bound);
                }
            }
            Ok(r)
        }
        Verify::Mult { sample, max_modulus, tolerance } => {
            let given = match &sample.poly.poly {
                Some(_) => Some(load_poly(&sample.poly)?),
                None => None,
            };
            let n = sample.poly.n.unwrap_or(2) as usize;
            let mut r = Report::new("verify-mult");
            for _ in 0..sample.samples {
                let g = match &given {
                    Some(g) => g.clone(),
                    None => random_cubic(rng, n, sample.coeff),
                };
                let (a, b) = coprime_pair(rng, *max_modulus);
                let m = *max_modulus as i64;
                let u = rng.gen_range(-m..=m);
                let v: Vec<i64> = (0..g.n()).map(|_| rng.gen_range(-m..=m)).collect();
                let check = check_multiplicativity(a, b, u, &v, &g)?;
                let rel = check.relative();
                let row = Record::new()
                    .with("poly", g.to_string())
                    .with("r", a)
                    .with("s", b)
                    .with("u", u)
                    .with("v", v.as_slice())
                    .with("lhs_abs", check.lhs.norm())
                    .with("relative_residual", rel);
                r.push_check(row, rel <= *tolerance);
            }
            Ok(r)
        }
        Verify::WeylLinearization { sample, triples, range } => {
            let mut r = Report::new("verify-weyl-linearization");
            for g in instances(sample, 3, rng)? {
                let tensor = SymmetricCubicTensor::from_cubic(&g.cubic_part())?;
                let mut failures = 0usize;
                for _ in 0..*triples {
                    let mut draw = || -> Vec<i64> { (0..g.n()).map(|_| rng.gen_range(-range..=*range)).collect() };
                    let (w, x, y, y2) = (draw(), draw(), draw(), draw());
                    if !linearization_holds(&g, &tensor, &w, &x, &y, &y2)? {
                        failures += 1;
                    }
                }
                let row = Record::new().with("poly", g.to_string()).with("triples", *triples).with("failures", failures);
                r.push_check(row, failures == 0);
            }
            Ok(r)
        }
        Verify::Delta { poly, height, big_q, weight: wn, constant } => {
            let g = load_poly(poly)?;
            let w = weight(&wn.weight, g.n())?;
            let mut r = Report::new("verify-delta");
            for &q in big_q {
                let d = delta_check(&g, &w, *height, q)?;
                let row = Record::new()
                    .with("P", d.p)
                    .with("Q", d.big_q)
                    .with("count", d.count)
                    .with("main_term", d.main_term)
                    .with("majorant", d.majorant)
                    .with("constant", d.constant);
                r.push_check(row, d.constant <= *constant);
            }
            Ok(r)
        }
        Verify::Slice { sample, height, m, weight: wn, tolerance } => {
            let mut r = Report::new("verify-slice");
            for g in instances(sample, 2, rng)? {
                let w = weight(&wn.weight, g.n())?;
                let dir = m.clone().unwrap_or_else(|| unit_vector(g.n()));
                let id = verify_slice_identity(&g, &w, *height, &dir)?;
                let row = Record::new()
                    .with("poly", g.to_string())
                    .with("m", dir.as_slice())
                    .with("P", *height)
                    .with("direct", id.direct)
                    .with("sliced", id.sliced)
                    .with("residual", id.residual)
                    .with("levels", id.levels);
                r.push_check(row, id.residual <= *tolerance);
            }
            Ok(r)
        }
    }
}

fn unit_vector(n: usize) -> Vec<i64> {
    let mut m = vec![0; n];
    m[0] = 1;
    m
}

fn coprime_pair(rng: &mut ChaCha8Rng, max: u64) -> (u64, u64) {
    loop {
        let a = rng.gen_range(1..=max);
        let b = rng.gen_range(1..=max);
        if cubic_lab::arith::gcd(a as i64, b as i64) == 1 {
            return (a, b);
        }
    }
}

/// `G(w,x;y) = sum_i y_i B_i(w;x) + Gamma(w,x)` with the same `Gamma` at a
/// second, independent `y`.
fn linearization_holds(g: &CubicPolynomial, tensor: &SymmetricCubicTensor, w: &[i64], x: &[i64], y: &[i64], y2: &[i64]) -> CliResult<bool> {
    let b = tensor.bilinear_system(w, x)?;
    let linear = |y: &[i64]| -> BigInt { b.iter().zip(y).map(|(bi, &yi)| BigInt::from(*bi) * yi).sum() };
    let (first, second) = match (difference_form(g, w, x, y), difference_form(g, w, x, y2)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Ok(false),
    };
    Ok(first.gamma == second.gamma && first.g - linear(y) == second.g - linear(y2))
}

fn report(kind: &ReportKind, rng: &mut ChaCha8Rng) -> CliResult<Report> {
    match kind {
        ReportKind::Prop1 { poly, height, big_h, q, u, z, weight: wn } => {
            let g = load_poly(poly)?;
            let w = weight(&wn.weight, g.n())?;
            let h = match big_h {
                Some(h) => *h,
                None => g.scaled_norm(*height)?.max(1.0),
            };
            let rep = proposition1_report(&g, &w, *height, h, &bound_grid(*q, *height, u, z))?;
            let mut r = Report::new("report-prop1");
            for row in rep.rows {
                r.push(
                    Record::new()
                        .with("q", row.q)
                        .with("z", row.z)
                        .with("u", row.u)
                        .with("V", row.v)
                        .with("W", row.w)
                        .with("M1", row.m1)
                        .with("M2", row.m2)
                        .with("M3", row.m3)
                        .with("lhs", row.lhs)
                        .with("rhs", row.rhs)
                        .with("ratio", row.ratio),
                );
            }
            eprintln!("max ratio {}", crate::output::format_float(rep.max_ratio));
            Ok(r)
        }
        ReportKind::WeylBound { poly, heights, q, u, z, eps, weight: wn } => {
            let g = load_poly(poly)?;
            let w = weight(&wn.weight, g.n())?;
            let mut r = Report::new("report-weyl-bound");
            for row in weyl_bound_grid(&g, &w, heights, *q, u, z, *eps)? {
                r.push(
                    Record::new()
                        .with("P", row.p)
                        .with("q", row.q)
                        .with("u", row.u)
                        .with("z", row.z)
                        .with("sum_abs", row.sum_abs)
                        .with("rhs", row.rhs)
                        .with("ratio", row.ratio),
                );
            }
            Ok(r)
        }
        ReportKind::PrimeBounds { poly, limit, u, samples } => {
            let g = load_poly(poly)?;
            let spread = (*limit * *limit) as i64;
            let vs: Vec<Vec<i64>> = (0..*samples).map(|_| (0..g.n()).map(|_| rng.gen_range(-spread..=spread)).collect()).collect();
            let rep = prime_bound_report(&g, *limit, *u, &vs)?;
            if !rep.skipped_bad.is_empty() {
                eprintln!("skipped bad primes {:?}", rep.skipped_bad);
            }
            let mut r = Report::new("report-prime-bounds");
            for row in rep.rows {
                r.push(
                    Record::new()
                        .with("p", row.p)
                        .with("ratio_generic", row.ratio_generic)
                        .with("ratio_dual", row.ratio_dual)
                        .with("ratio_square", row.ratio_square),
                );
            }
            Ok(r)
        }
    }
}

fn certify(case: &str, ns: std::ops::RangeInclusive<u32>) -> CliResult<Report> {
    let explicit = case != "all";
    let cases = if explicit { vec![find_case(case)?] } else { catalog() };
    let mut r = Report::new("certify");
    for n in ns {
        // below the smallest covered dimension, evaluate the generic cases
        let selected = |c: &&CaseSpec| explicit || c.applies(n) || (n < CATALOG_N_MIN && c.n_min == CATALOG_N_MIN);
        for entry in cases.iter().filter(selected) {
            let cert = certify_case(entry, n)?;
            let json = serde_json::to_value(&cert).map_err(|e| CliError::failure(e.to_string()))?;
            let row = Record::new()
                .with("case", cert.case.as_str())
                .with("n", n)
                .with("optimum", cert.optimum.as_ref().map(ToString::to_string))
                .with("target", cert.target.to_string())
                .with("margin", cert.margin.as_ref().map(ToString::to_string))
                .with("infeasible", cert.infeasible)
                .with("vertex", Cell::Json(json["vertex"].clone()))
                .with("duals", Cell::Json(json["duals"].clone()));
            if !cert.certified {
                eprintln!("{} not certified at n = {n}", cert.case);
            }
            r.push_check(row, cert.certified);
        }
    }
    Ok(r)
}

fn slice_levels(poly: &PolyArgs, m: Option<&[i64]>, k: Option<i64>, height: f64, bound: i64, weight_name: &str) -> CliResult<Report> {
    let g = load_poly(poly)?;
    let w = weight(weight_name, g.n())?;
    let m = match m {
        Some(m) => m.to_vec(),
        None => {
            let found = find_slicing_vector(&g.cubic_part(), bound, &DEFAULT_PRIMES)?;
            eprintln!("slicing vector {:?}: singular dimension {} -> {}", found.m, found.singular_dimension, found.sliced_dimension);
            found.m
        }
    };
    let levels: Vec<i64> = match k {
        Some(k) => vec![k],
        None => {
            let l = level_bound(&m, &w, height);
            (-l..=l).collect()
        }
    };
    let mut r = Report::new("slice");
    for k in levels {
        let row = Record::new().with("m", m.as_slice()).with("k", k);
        r.push(match slice(&g, &w, &m, k, height)? {
            Some(s) => row
                .with("anchor", s.anchor.as_slice())
                .with("h", s.h.to_string())
                .with("scaled_norm_g", s.scaled_norm_g)
                .with("scaled_norm_h", s.scaled_norm_h)
                .with("count", count_affine_weighted(&s.h, &s.weight, height)?),
            None => row.with("anchor", Cell::Null).with("h", Cell::Null).with("scaled_norm_g", Cell::Null).with("scaled_norm_h", Cell::Null).with("count", 0.0),
        });
    }
    Ok(r)
}

fn growth(poly: &PolyArgs, heights: &[f64]) -> CliResult<Report> {
    let g = homogeneous(poly)?;
    let counts = count_projective_heights(&g, &integer_heights(heights)?)?;
    let points: Vec<(f64, f64)> = counts.iter().map(|c| (c.height, c.value as f64)).collect();
    let fit = fit_growth(&points)?;
    let mut r = Report::new("growth");
    r.push(
        Record::new()
            .with("heights", Cell::Json(counts.iter().map(|c| c.height as u64).collect()))
            .with("counts", Cell::Json(counts.iter().map(|c| c.value).collect()))
            .with("exponent", fit.exponent)
            .with("intercept", fit.intercept)
            .with("max_residual", fit.max_residual),
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_count_matches_binomial() {
        assert_eq!(monomials(1).len(), 4);
        assert_eq!(monomials(2).len(), 10);
        assert_eq!(monomials(3).len(), 20);
        assert_eq!(monomials(4).len(), 35);
        assert_eq!(monomials(2)[0], vec![0, 0]);
    }

    #[test]
    fn random_cubics_are_reproducible() {
        let a = random_cubic(&mut ChaCha8Rng::seed_from_u64(9), 3, 3);
        let b = random_cubic(&mut ChaCha8Rng::seed_from_u64(9), 3, 3);
        assert_eq!(a, b);
        assert_eq!(a.degree(), Some(3));
    }

    #[test]
    fn polynomial_from_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        std::io::Write::write_all(&mut f, b"x1^3 + x2^3 - 9\n").unwrap();
        let args = PolyArgs { poly: Some(format!("@{}", f.path().display())), n: None };
        assert_eq!(load_poly(&args).unwrap().n(), 2);
        let padded = PolyArgs { poly: args.poly.clone(), n: Some(3) };
        assert_eq!(load_poly(&padded).unwrap().n(), 3);
        assert_eq!(load_poly(&PolyArgs { poly: None, n: None }).unwrap_err().code, 2);
    }

    #[test]
    fn linearization_detects_tampering() {
        let g: CubicPolynomial = "x1^3 + 2*x1*x2^2 - x2 + 5".parse().unwrap();
        let t = SymmetricCubicTensor::from_cubic(&g.cubic_part()).unwrap();
        assert!(linearization_holds(&g, &t, &[1, 2], &[-3, 1], &[4, 0], &[-2, 7]).unwrap());
        let wrong = SymmetricCubicTensor::from_cubic(&parse_polynomial("x1^3", 2).unwrap()).unwrap();
        assert!(!linearization_holds(&g, &wrong, &[1, 2], &[-3, 1], &[4, 0], &[-2, 7]).unwrap());
    }
}
