//! Command table.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "cubelab", version, about = "Point counts and circle-method diagnostics for cubic hypersurfaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// Seed for every sampled instance.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format (default: csv; bare rows for qdecomp).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file of `flag = value` defaults; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct PolyArgs {
    /// Polynomial in x1..xn, or `@path` to read it from a file.
    #[arg(long)]
    pub poly: Option<String>,
    /// Number of variables (default: largest index in --poly).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=8))]
    pub n: Option<u64>,
}

#[derive(Debug, Args, Clone)]
pub struct WeightArg {
    /// `w1` or `box-smooth:<R>`.
    #[arg(long, default_value = "w1")]
    pub weight: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Projective count up to height P (homogeneous input), or the
    /// weighted affine count when --weight is given.
    Count {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long = "P", value_delimiter = ',', required = true, value_parser = positive)]
        heights: Vec<f64>,
        /// `w1` or `box-smooth:<R>`; selects the weighted affine count.
        #[arg(long)]
        weight: Option<String>,
    },
    /// Complete sum S_u(q; v) with --v, or S_u(q; z) with --z and --P.
    Expsum {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, value_delimiter = ',', required = true, value_parser = modulus)]
        q: Vec<u64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
        u: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "z")]
        v: Option<Vec<i64>>,
        #[arg(long, allow_hyphen_values = true, requires = "height")]
        z: Option<f64>,
        #[arg(long = "P", id = "height", value_parser = positive)]
        height: Option<f64>,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Numerical identity checks; exit 1 when any check fails.
    #[command(subcommand)]
    Verify(Verify),
    /// Bound comparisons with observed ratios.
    #[command(subcommand)]
    Report(ReportKind),
    /// `q,b1,b2,c,d,d0` with q = b1 b2^2 c^2 d.
    Qdecomp {
        #[arg(long, value_delimiter = ',', required = true, value_parser = modulus)]
        q: Vec<u64>,
    },
    /// Exact LP certificates of the dyadic exponent cases.
    Certify {
        /// Case name or `all`.
        #[arg(long, default_value = "all")]
        case: String,
        /// Dimension `n` or inclusive range `lo..hi`.
        #[arg(long, value_parser = dimension_range)]
        n: RangeInclusive<u32>,
    },
    /// Hyperplane sections m.x = k; searches a slicing vector when --m is absent.
    Slice {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        m: Option<Vec<i64>>,
        /// Single level (default: every level meeting the support).
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long = "P", default_value_t = 4.0, value_parser = positive)]
        height: f64,
        /// Search radius for the slicing vector.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..=20))]
        bound: i64,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Log-log slope of projective counts over a list of heights.
    Growth {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long = "P", value_delimiter = ',', required = true, value_parser = positive)]
        heights: Vec<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Circle-integral count against the direct weighted count.
    Orthogonality {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long = "P", value_delimiter = ',', default_value = "4", value_parser = positive)]
        heights: Vec<f64>,
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Poisson reconstruction of S_u(q; z); tolerance scales with 1 + |S|.
    Poisson {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, value_delimiter = ',', required = true, value_parser = modulus)]
        q: Vec<u64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
        u: Vec<i64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1e-4)]
        z: f64,
        #[arg(long = "P", default_value_t = 6.0, value_parser = positive)]
        height: f64,
        /// Frequency box radius (default: derived from q, z, P).
        #[arg(long)]
        truncation: Option<u64>,
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
    },
    /// Twisted multiplicativity of S over coprime moduli.
    Mult {
        #[command(flatten)]
        sample: SampleArgs,
        /// Largest modulus r, s drawn.
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(2..=60))]
        max_modulus: u64,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
    /// Exact linear-in-y form of the differenced polynomial.
    WeylLinearization {
        #[command(flatten)]
        sample: SampleArgs,
        /// Triples per polynomial.
        #[arg(long, default_value_t = 100)]
        triples: usize,
        /// Coordinates drawn from [-range, range].
        #[arg(long, default_value_t = 10)]
        range: i64,
    },
    /// Farey decomposition: |N_w - main| <= C Q^-2 E_w.
    Delta {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long = "P", default_value_t = 6.0, value_parser = positive)]
        height: f64,
        #[arg(long = "Q", value_delimiter = ',', default_value = "4,8", value_parser = modulus)]
        big_q: Vec<u64>,
        #[command(flatten)]
        weight: WeightArg,
        /// Admissible implied constant C.
        #[arg(long, default_value_t = 10.0)]
        constant: f64,
    },
    /// Slicing identity N_w(g) = sum_k N_w0(h_k).
    Slice {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long = "P", default_value_t = 6.0, value_parser = positive)]
        height: f64,
        /// Slicing direction (default: first unit vector).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        m: Option<Vec<i64>>,
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
}

/// A given polynomial, or `samples` random ones in `n` variables.
#[derive(Debug, Args, Clone)]
pub struct SampleArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Random instances drawn when --poly is absent.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=10_000))]
    pub samples: u64,
    /// Coefficients drawn from [-coeff, coeff].
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..=1000))]
    pub coeff: i64,
}

#[derive(Debug, Subcommand)]
pub enum ReportKind {
    /// Observed |S_u(q; z)| against the V, W, M1..M3 bound.
    Prop1 {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long = "P", default_value_t = 6.0, value_parser = positive)]
        height: f64,
        /// Height H (default: max(||g||_P, 1)).
        #[arg(long = "H", value_parser = positive)]
        big_h: Option<f64>,
        /// Largest modulus.
        #[arg(long, default_value_t = 6, value_parser = modulus)]
        q: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1")]
        u: Vec<i64>,
        /// z as fractions of 1/(q P^{3/2}).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0.5,1")]
        z: Vec<f64>,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Observed |S_u(q; z)| against the Weyl-differencing bound.
    WeylBound {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long = "P", value_delimiter = ',', default_value = "4,6", value_parser = positive)]
        heights: Vec<f64>,
        /// Largest modulus.
        #[arg(long, default_value_t = 6, value_parser = modulus)]
        q: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1")]
        u: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0.5,1")]
        z: Vec<f64>,
        #[arg(long, default_value_t = 0.25, value_parser = positive)]
        eps: f64,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Complete sums at good primes and prime squares against the prime bounds.
    PrimeBounds {
        #[command(flatten)]
        poly: PolyArgs,
        /// Largest prime.
        #[arg(long, default_value_t = 31, value_parser = clap::value_parser!(u64).range(2..=200))]
        limit: u64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        u: i64,
        /// Random frequency vectors.
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..=10_000))]
        samples: u64,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{s} must be positive"))
    }
}

fn modulus(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("{s:?} is not a positive integer")),
    }
}

fn dimension_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("{t:?} is not a dimension"));
    let range = match s.split_once("..") {
        Some((lo, hi)) => parse(lo)?..=parse(hi.trim_start_matches('='))?,
        None => {
            let n = parse(s)?;
            n..=n
        }
    };
    if range.is_empty() {
        return Err(format!("empty range {s}"));
    }
    Ok(range)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_table_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn ranges_parse() {
        assert_eq!(dimension_range("5").unwrap(), 5..=5);
        assert_eq!(dimension_range("5..40").unwrap(), 5..=40);
        assert_eq!(dimension_range("5..=7").unwrap(), 5..=7);
        assert!(dimension_range("9..5").is_err());
        assert!(dimension_range("x").is_err());
        assert!(positive("0").is_err());
        assert!(positive("-1").is_err());
        assert!(modulus("0").is_err());
    }
}
