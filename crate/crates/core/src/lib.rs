//! Computational laboratory for rational and integral points on cubic
//! hypersurfaces.
//!
//! The crate bundles exact reference counters, complete and incomplete cubic
//! exponential sums, the Weyl-differencing and Poisson-summation machinery
//! behind Kloosterman-refined circle-method estimates, the `q = b1 b2^2 c^2 d`
//! modulus decomposition, hyperplane slicing, and an exact rational LP that
//! certifies the dyadic exponent bookkeeping for `n >= 5`.
//!
//! Floating kernels are generic over [`Real`] and the LP over [`Field`]; the
//! aliases below fix the concrete scalar types used by the command-line tool.

pub mod arith;
pub mod archimedean;
pub mod counting;
pub mod delta;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod poly;
pub mod qdecomp;
pub mod quadrature;
pub mod scalar;
pub mod slicer;
pub mod sums;
pub mod weights;
pub mod weyl;

pub use error::{Error, Result};
pub use poly::{CubicPolynomial, Exponents, SymmetricCubicTensor};
pub use scalar::{Field, Real};

/// Exact rationals used by the exponent certificates.
pub type Rational = num_rational::BigRational;
/// Double-precision complex numbers used by every exponential sum.
pub type Complex64 = num_complex::Complex<f64>;
/// Smooth weights evaluated in double precision.
pub type Weight = weights::WeightFunction<f64>;
/// Exact simplex over the rationals.
pub type RationalLp = lp::LinearProgram<Rational>;
