use cubic_lab::archimedean::orthogonality_count;
use cubic_lab::counting::{count_affine_weighted, count_projective};
use cubic_lab::lp::{certify_case, find_case, ratio};
use cubic_lab::qdecomp::decompose;
use cubic_lab::slicer::{singular_dimension_estimate, DEFAULT_PRIMES};
use cubic_lab::sums::complete_s;
use cubic_lab::weights::weight_by_name;
use cubic_lab::{CubicPolynomial, Weight};

#[test]
fn parse_count_and_circle_agree() {
    let g: CubicPolynomial = "x1^3 + x2^3 - 9".parse().unwrap();
    let w: Weight = weight_by_name("w1", 2).unwrap();
    let direct = count_affine_weighted(&g, &w, 6.0).unwrap();
    let circle = orthogonality_count(&g, &w, 6.0).unwrap();
    assert!((direct - circle).abs() < 1e-9);
    assert!(direct > 0.0);
}

#[test]
fn fermat_surface_has_only_trivial_small_points() {
    // x^3 + y^3 + z^3 = 0 has the three points with one zero and two opposite coordinates
    let c: CubicPolynomial = "x1^3 + x2^3 + x3^3".parse().unwrap();
    assert_eq!(count_projective(&c, 10).unwrap(), 3);
    assert_eq!(singular_dimension_estimate(&c, &DEFAULT_PRIMES).unwrap(), -1);
}

#[test]
fn complete_sum_at_modulus_one_is_one() {
    let g: CubicPolynomial = "x1^3 + 2*x1*x2^2".parse().unwrap();
    let s = complete_s(1, 1, &[4, -7], &g).unwrap();
    assert!((s.re - 1.0).abs() < 1e-12 && s.im.abs() < 1e-12);
}

#[test]
fn decomposition_and_certificate() {
    let d = decompose(720).unwrap();
    assert_eq!((d.b1, d.b2, d.c, d.d, d.d0), (5, 3, 4, 1, 1));
    let cert = certify_case(&find_case("sigma1b-final-small-v").unwrap(), 5).unwrap();
    assert!(cert.certified);
    assert_eq!(cert.margin, Some(ratio(1, 12)));
}
