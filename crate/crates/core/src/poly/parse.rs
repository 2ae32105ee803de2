//! Text format: terms `c*x<i>^<e>*...` joined by `+`/`-`.

use num_bigint::BigInt;
use num_traits::One;

use super::CubicPolynomial;
use crate::error::{Error, Result};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }
}

/// One parsed term: coefficient and `(variable index, power)` factors.
type Term = (BigInt, Vec<(usize, u32)>);

fn parse_terms(text: &str) -> Result<Vec<Term>> {
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    let mut out = Vec::new();
    let mut first = true;
    loop {
        let mut sign = BigInt::one();
        match lx.peek() {
            None if first => return lx.err("empty expression"),
            None => break,
            Some(b'+') => {
                lx.pos += 1;
            }
            Some(b'-') => {
                lx.pos += 1;
                sign = -sign;
            }
            Some(_) if first => {}
            Some(_) => return lx.err("expected '+' or '-'"),
        }
        first = false;
        let mut coeff = sign;
        let mut vars = Vec::new();
        loop {
            match lx.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let d = lx.digits()?;
                    coeff *= d.parse::<BigInt>().expect("digits");
                }
                Some(b'x') => {
                    lx.pos += 1;
                    let idx: usize = lx.digits()?.parse().map_err(|_| Error::Syntax {
                        pos: lx.pos,
                        msg: "variable index too large".into(),
                    })?;
                    if idx == 0 {
                        return lx.err("variables are numbered from x1");
                    }
                    let mut pow = 1u32;
                    if lx.peek() == Some(b'^') {
                        lx.pos += 1;
                        pow = lx.digits()?.parse().map_err(|_| Error::DegreeTooHigh(u32::MAX))?;
                    }
                    vars.push((idx, pow));
                }
                _ => return lx.err("expected a coefficient or a variable"),
            }
            if lx.peek() == Some(b'*') {
                lx.pos += 1;
            } else {
                break;
            }
        }
        out.push((coeff, vars));
    }
    Ok(out)
}

fn assemble(terms: Vec<Term>, n: usize) -> Result<CubicPolynomial> {
    let mut poly = CubicPolynomial::zero(n);
    for (c, vars) in terms {
        let mut exps = vec![0u32; n];
        for (idx, pow) in vars {
            if idx > n {
                return Err(Error::VariableOutOfRange { index: idx, n });
            }
            exps[idx - 1] = exps[idx - 1].saturating_add(pow);
        }
        let deg: u32 = exps.iter().fold(0u32, |a, &e| a.saturating_add(e));
        if deg > 3 {
            return Err(Error::DegreeTooHigh(deg));
        }
        poly.add_term(exps.into_iter().map(|e| e as u8).collect(), c)?;
    }
    Ok(poly)
}

/// Parses a polynomial in the variables `x1..xn`.
pub fn parse_polynomial(text: &str, n: usize) -> Result<CubicPolynomial> {
    assemble(parse_terms(text)?, n)
}

/// Parses with `n` taken from the largest variable index present.
pub(super) fn parse_auto(text: &str) -> Result<CubicPolynomial> {
    let terms = parse_terms(text)?;
    let n = terms.iter().flat_map(|(_, v)| v.iter().map(|&(i, _)| i)).max().unwrap_or(0);
    assemble(terms, n)
}
