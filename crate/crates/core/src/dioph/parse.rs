//! Parser for polynomials in `t` over `Q(zeta_m)`, such as `zeta^2*t - 1/2`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::cyclo::{Cyc, CycloField};
use super::poly::Poly;
use super::{DiophError, TPoly};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    field: &'a Arc<CycloField>,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> DiophError {
        DiophError::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let n = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if n == 0 {
            return None;
        }
        self.pos += n;
        rest[..n].parse().ok()
    }

    fn expr(&mut self) -> Result<TPoly, DiophError> {
        let mut acc = if self.eat('-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<TPoly, DiophError> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<TPoly, DiophError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let n = self.integer().ok_or_else(|| self.err("expected an exponent"))?;
        let n: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
        Ok(base.pow(n, &Cyc::int(self.field, 1)))
    }

    fn atom(&mut self) -> Result<TPoly, DiophError> {
        if self.eat('(') {
            let e = self.expr()?;
            return if self.eat(')') { Ok(e) } else { Err(self.err("expected ')'")) };
        }
        if self.eat('-') {
            return Ok(self.atom()?.neg());
        }
        if let Some(n) = self.integer() {
            let mut v = BigRational::from_integer(n);
            if self.eat('/') {
                let d = self.integer().ok_or_else(|| self.err("expected a denominator"))?;
                if d == BigInt::from(0) {
                    return Err(self.err("zero denominator"));
                }
                v /= BigRational::from_integer(d);
            }
            return Ok(TPoly::constant(Cyc::rational(self.field, v)));
        }
        let rest = &self.src[self.pos..];
        if rest.starts_with("zeta") {
            self.pos += 4;
            return Ok(TPoly::constant(Cyc::zeta_pow(self.field, 1)));
        }
        if rest.starts_with('t') {
            self.pos += 1;
            return Ok(Poly::monomial(Cyc::int(self.field, 1), 1));
        }
        Err(self.err("unexpected input"))
    }
}

/// Parses a polynomial in `t` whose coefficients may involve `zeta`.
pub fn parse_tpoly(src: &str, field: &Arc<CycloField>) -> Result<TPoly, DiophError> {
    let mut p = Parser { src, pos: 0, field };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dioph::fmt_tpoly;

    #[test]
    fn round_trips() {
        let k = CycloField::new(3);
        for (src, shown) in [("t^2 - 1/2", "t^2 - 1/2"), ("-(zeta + 1)*t", "(zeta + 1)*t"), ("zeta^3", "1"), ("0", "0")] {
            let p = parse_tpoly(src, &k).unwrap();
            let expected = if src.starts_with("-(") { format!("-{shown}") } else { shown.to_string() };
            assert_eq!(fmt_tpoly(&p), expected, "{src}");
        }
        // zeta^2 = -zeta - 1 in Q(zeta_3)
        assert_eq!(parse_tpoly("zeta^2", &k).unwrap(), parse_tpoly("-zeta - 1", &k).unwrap());
        assert!(parse_tpoly("t +", &k).is_err());
        assert!(parse_tpoly("1/0", &k).is_err());
        assert!(parse_tpoly("x", &k).is_err());
    }
}
