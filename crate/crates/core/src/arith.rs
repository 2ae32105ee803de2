//! Elementary integer arithmetic shared by the modules.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Inverse of `a` modulo `m`, or `None` when `gcd(a, m) != 1`.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// All primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Largest modulus accepted by [`factorize`].
pub const FACTOR_LIMIT: u64 = 1_000_000_000_000;

/// Prime factorisation by trial division, as `(p, e)` pairs with `p` increasing.
pub fn factorize(mut n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    if n > FACTOR_LIMIT {
        return Err(Error::Budget(format!("{n} exceeds the factoring limit {FACTOR_LIMIT}")));
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Number of divisors.
pub fn tau(n: u64) -> u64 {
    factorize(n)
        .map(|f| f.iter().map(|&(_, e)| e as u64 + 1).product())
        .unwrap_or(0)
}

/// Euler's totient.
pub fn phi(n: u64) -> u64 {
    factorize(n)
        .map(|f| f.iter().fold(n, |acc, &(p, _)| acc / p * (p - 1)))
        .unwrap_or(0)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n).unwrap_or_default() {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).map(|f| f.iter().all(|&(_, e)| e == 1)).unwrap_or(false)
}

/// Square-full in the usual sense; `1` counts.
pub fn is_square_full(n: u64) -> bool {
    factorize(n).map(|f| f.iter().all(|&(_, e)| e >= 2)).unwrap_or(false)
}

/// Exact `floor(sqrt(n))`.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Odometer over `[lo, hi]^n` in lexicographic order (last coordinate fastest).
pub struct BoxIter {
    cur: Vec<i64>,
    lo: i64,
    hi: i64,
    done: bool,
}

impl BoxIter {
    pub fn new(n: usize, lo: i64, hi: i64) -> Self {
        BoxIter { cur: vec![lo; n], lo, hi, done: lo > hi }
    }
}

impl Iterator for BoxIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let mut i = self.cur.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.hi {
                self.cur[i] += 1;
                break;
            }
            self.cur[i] = self.lo;
        }
        Some(out)
    }
}

/// Advance `v` as an odometer over `[0, q)^n`; returns false after the last vector.
pub fn next_residue_vector(v: &mut [u64], q: u64) -> bool {
    for x in v.iter_mut().rev() {
        *x += 1;
        if *x < q {
            return true;
        }
        *x = 0;
    }
    false
}

/// Representatives of `P^{n-1}(F_p)`: first nonzero coordinate equal to 1.
pub fn projective_points(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let mut tail = vec![0u64; free];
        loop {
            let mut v = vec![0u64; n];
            v[lead] = 1;
            v[lead + 1..].copy_from_slice(&tail);
            out.push(v);
            if free == 0 || !next_residue_vector(&mut tail, p) {
                break;
            }
        }
    }
    out
}

/// `#P^{n-1}(F_p) = (p^n - 1)/(p - 1)`.
pub fn projective_size(n: usize, p: u64) -> u128 {
    ((p as u128).pow(n as u32) - 1) / (p as u128 - 1)
}
