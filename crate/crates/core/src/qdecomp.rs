//! The modulus factorization `q = b1 b2^2 c^2 d`, its dyadic census and the
//! gcd-sum estimate.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, gcd, is_square_full, tau};
use crate::error::{Error, Result};

/// `q = b1 b2^2 c^2 d` with `b1 = prod_{p || q} p`, `b2 = prod_{p^2 || q} p`,
/// `d = prod_{p^e || q, e >= 3 odd} p`, and `d0` the least divisor of `d`
/// making `c / (d d0)` square-full.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct QDecomposition {
    pub q: u64,
    pub b1: u64,
    pub b2: u64,
    pub c: u64,
    pub d: u64,
    pub d0: u64,
}

impl QDecomposition {
    /// `b = b1 b2^2`.
    pub fn b(&self) -> u64 {
        self.b1 * self.b2 * self.b2
    }

    /// Every structural invariant, with minimality of `d0` checked over all
    /// divisors of `d`.
    pub fn check(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Precondition(format!("q = {}: {what}", self.q)));
        let c2d = self.c as u128 * self.c as u128 * self.d as u128;
        if self.b() as u128 * c2d != self.q as u128 {
            return fail("reconstruction");
        }
        let squarefree = |m: u64| factorize(m).map(|f| f.iter().all(|&(_, e)| e == 1)).unwrap_or(false);
        if !squarefree(self.b1) || !squarefree(self.b2) || !squarefree(self.d) {
            return fail("b1, b2, d squarefree");
        }
        if self.c % self.d != 0 {
            return fail("d | c");
        }
        if gcd(self.b() as i64, (c2d % self.b() as u128) as i64) != 1 {
            return fail("gcd(b, c^2 d) = 1");
        }
        let witness = |d0: u64| {
            self.d % d0 == 0 && (self.c / self.d) % d0 == 0 && is_square_full(self.c / self.d / d0)
        };
        if !witness(self.d0) {
            return fail("c/(d d0) square-full");
        }
        if crate::arith::divisors(self.d).into_iter().any(|e| e < self.d0 && witness(e)) {
            return fail("d0 minimal");
        }
        Ok(())
    }
}

/// Factor `q` (trial division, `q <= 10^12`) and read off the decomposition.
pub fn decompose(q: u64) -> Result<QDecomposition> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let (mut b1, mut b2, mut c, mut d, mut d0) = (1u64, 1u64, 1u64, 1u64, 1u64);
    for (p, e) in factorize(q)? {
        match e {
            1 => b1 *= p,
            2 => b2 *= p,
            _ => {
                let odd = e % 2 == 1;
                let half = if odd { (e - 1) / 2 } else { e / 2 };
                c *= p.pow(half);
                if odd {
                    d *= p;
                    // ord_p(c/d) = half - 1
                    if half == 2 {
                        d0 *= p;
                    }
                }
            }
        }
    }
    Ok(QDecomposition { q, b1, b2, c, d, d0 })
}

/// Half-open ranges `(lo, hi]` for `q, b1, b2, c, d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CensusRanges {
    pub q: (f64, f64),
    pub b1: (f64, f64),
    pub b2: (f64, f64),
    pub c: (f64, f64),
    pub d: (f64, f64),
}

impl CensusRanges {
    /// The dyadic boxes `(R, 2R]`, `(R_i, 2R_i]`.
    pub fn dyadic(r: f64, r0: f64, r1: f64, r2: f64, r3: f64) -> Self {
        CensusRanges { q: (r, 2.0 * r), b1: (r0, 2.0 * r0), b2: (r1, 2.0 * r1), c: (r2, 2.0 * r2), d: (r3, 2.0 * r3) }
    }

    fn contains(&self, dec: &QDecomposition) -> bool {
        let inside = |(lo, hi): (f64, f64), v: u64| lo < v as f64 && v as f64 <= hi;
        inside(self.q, dec.q) && inside(self.b1, dec.b1) && inside(self.b2, dec.b2) && inside(self.c, dec.c) && inside(self.d, dec.d)
    }
}

/// Largest number of moduli a census enumerates.
pub const CENSUS_BUDGET: u64 = 10_000_000;

/// Number of `q` whose decomposition lies in all five ranges.
pub fn census_count(ranges: &CensusRanges) -> Result<u64> {
    let (lo, hi) = ranges.q;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument("census ranges must be finite".into()));
    }
    let first = (lo.max(0.0).floor() as u64) + 1;
    let last = hi.floor().max(0.0) as u64;
    if last < first {
        return Ok(0);
    }
    if last - first + 1 > CENSUS_BUDGET {
        return Err(Error::Budget(format!("{} moduli in the census", last - first + 1)));
    }
    (first..=last)
        .into_par_iter()
        .map(|q| decompose(q).map(|dec| ranges.contains(&dec) as u64))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Exact census of a dyadic box and its ratio to `R0 R1 (R2 R3)^{1/2}`.
pub fn dyadic_census(r: f64, r0: f64, r1: f64, r2: f64, r3: f64) -> Result<(u64, f64)> {
    if [r, r0, r1, r2, r3].iter().any(|&x| !(x >= 0.5)) {
        return Err(Error::Precondition("dyadic endpoints must be at least 1/2".into()));
    }
    let count = census_count(&CensusRanges::dyadic(r, r0, r1, r2, r3))?;
    Ok((count, count as f64 / (r0 * r1 * (r2 * r3).sqrt())))
}

/// One nonempty dyadic box of a census sweep; endpoints are `2^k / 2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusRow {
    pub r: f64,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub count: u64,
    pub bound_ratio: f64,
}

/// Index `k` with `x in (2^{k-1}, 2^k]`.
fn dyadic_index(x: u64) -> u32 {
    64 - (x - 1).leading_zeros()
}

/// Every nonempty dyadic box with `2R <= limit`, from one pass over the moduli.
pub fn census_sweep(limit: u64) -> Result<Vec<CensusRow>> {
    if limit < 1 {
        return Ok(Vec::new());
    }
    let top = 1u64 << (63 - limit.leading_zeros());
    if top > CENSUS_BUDGET {
        return Err(Error::Budget(format!("{top} moduli in the sweep")));
    }
    let keys: Vec<[u32; 5]> = (1..=top)
        .into_par_iter()
        .map(|q| decompose(q).map(|d| [d.q, d.b1, d.b2, d.c, d.d].map(dyadic_index)))
        .collect::<Result<_>>()?;
    let mut boxes: BTreeMap<[u32; 5], u64> = BTreeMap::new();
    for k in keys {
        *boxes.entry(k).or_default() += 1;
    }
    let lower = |k: u32| 2f64.powi(k as i32 - 1);
    Ok(boxes
        .into_iter()
        .map(|(k, count)| {
            let [r, r0, r1, r2, r3] = k.map(lower);
            CensusRow { r, r0, r1, r2, r3, count, bound_ratio: count as f64 / (r0 * r1 * (r2 * r3).sqrt()) }
        })
        .collect())
}

/// `sum_{b <= B} gcd(b, N)` and its ratio to `tau(N) B`.
pub fn gcd_sum(bound: u64, modulus: u64) -> Result<(u64, f64)> {
    if bound == 0 || modulus == 0 {
        return Err(Error::InvalidArgument("B and N must be positive".into()));
    }
    let sum: u64 = (1..=bound).map(|b| num_integer::gcd(b, modulus)).sum();
    Ok((sum, sum as f64 / (tau(modulus) * bound) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(q: u64) -> (u64, u64, u64, u64, u64) {
        let d = decompose(q).unwrap();
        (d.b1, d.b2, d.c, d.d, d.d0)
    }

    #[test]
    fn examples() {
        assert_eq!(dec(1), (1, 1, 1, 1, 1));
        assert_eq!(dec(720), (5, 3, 4, 1, 1));
        assert_eq!(dec(32), (1, 1, 4, 2, 2));
        assert_eq!(dec(8), (1, 1, 2, 2, 1));
        assert_eq!(dec(128), (1, 1, 8, 2, 1));
        assert!(decompose(0).is_err());
        assert!(matches!(decompose(2_000_000_000_000), Err(Error::Budget(_))));
    }

    #[test]
    fn invariants_up_to_1e5() {
        let failures: Vec<u64> = (1..=100_000u64).into_par_iter().filter(|&q| decompose(q).unwrap().check().is_err()).collect();
        assert!(failures.is_empty(), "{:?}", &failures[..failures.len().min(5)]);
    }

    #[test]
    fn census_examples() {
        assert_eq!(dyadic_census(0.5, 0.5, 0.5, 0.5, 0.5).unwrap(), (1, 8.0));
        // q = 4 has b2 = 2, so the box c in (1,2] with q in (2,4] is empty
        assert_eq!(dyadic_census(2.0, 0.5, 0.5, 1.0, 0.5).unwrap().0, 0);
        assert_eq!(dyadic_census(2.0, 0.5, 1.0, 0.5, 0.5).unwrap().0, 1);
        // q = 8 = 2^2 * 2 with c = d = 2
        assert_eq!(dyadic_census(4.0, 0.5, 0.5, 1.0, 1.0).unwrap(), (1, 4.0));
        assert!(dyadic_census(0.25, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn census_matches_brute_force() {
        let ranges = CensusRanges::dyadic(64.0, 0.5, 1.0, 2.0, 0.5);
        let brute = (65..=128u64)
            .filter(|&q| {
                let d = decompose(q).unwrap();
                d.b1 == 1 && (2..=2).contains(&d.b2) && (3..=4).contains(&d.c) && d.d == 1
            })
            .count() as u64;
        assert_eq!(census_count(&ranges).unwrap(), brute);
    }

    #[test]
    fn sweep_covers_all_moduli_and_agrees() {
        let rows = census_sweep(1000).unwrap();
        assert_eq!(rows.iter().map(|r| r.count).sum::<u64>(), 512);
        for row in rows.iter().step_by(7) {
            let (count, ratio) = dyadic_census(row.r, row.r0, row.r1, row.r2, row.r3).unwrap();
            assert_eq!((count, ratio), (row.count, row.bound_ratio));
        }
        let worst = rows.iter().map(|r| r.bound_ratio).fold(0.0, f64::max);
        assert!(worst.is_finite());
        let big = census_sweep(10_000).unwrap();
        let worst = big.iter().map(|r| r.bound_ratio).fold(0.0, f64::max);
        // attained by q = 1 in the all-(1/2, 1] box
        assert_eq!(worst, 8.0);
    }

    #[test]
    fn census_is_monotone() {
        let base = CensusRanges::dyadic(16.0, 2.0, 1.0, 0.5, 0.5);
        let c0 = census_count(&base).unwrap();
        for field in 0..5 {
            let mut wider = base;
            let slot = match field {
                0 => &mut wider.q,
                1 => &mut wider.b1,
                2 => &mut wider.b2,
                3 => &mut wider.c,
                _ => &mut wider.d,
            };
            slot.1 *= 2.0;
            assert!(census_count(&wider).unwrap() >= c0);
            let mut lower = base;
            let slot = match field {
                0 => &mut lower.q,
                1 => &mut lower.b1,
                2 => &mut lower.b2,
                3 => &mut lower.c,
                _ => &mut lower.d,
            };
            slot.0 /= 2.0;
            assert!(census_count(&lower).unwrap() >= c0);
        }
    }

    #[test]
    fn gcd_sums() {
        assert_eq!(gcd_sum(10, 6).unwrap(), (23, 0.575));
        assert_eq!(gcd_sum(37, 1).unwrap(), (37, 1.0));
        assert!(gcd_sum(0, 3).is_err());
    }

    #[test]
    fn gcd_sum_ratio_at_most_one() {
        let worst = (1..=1000u64)
            .into_par_iter()
            .map(|n| {
                let t = tau(n) as f64;
                let mut sum = 0u64;
                let mut worst = 0f64;
                for b in 1..=10_000u64 {
                    sum += num_integer::gcd(b, n);
                    worst = worst.max(sum as f64 / (t * b as f64));
                }
                worst
            })
            .reduce(|| 0.0, f64::max);
        assert!(worst <= 1.0, "{worst}");
    }
}
