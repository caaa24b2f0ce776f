//! Dense univariate polynomials over an exact field.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact field elements. Elements that need context to build a zero or a one
/// produce them from an existing element.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;

    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    fn of_int(&self, k: i64) -> Self {
        let one = self.one_like();
        let mut acc = self.zero_like();
        for _ in 0..k.unsigned_abs() {
            acc = acc.plus(&one);
        }
        if k < 0 {
            acc.negated()
        } else {
            acc
        }
    }
}

impl Coeff for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn of_int(&self, k: i64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }
}

/// Coefficients from the constant term up, without trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Poly::new(vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut v = vec![c.zero_like(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= o.coeffs.len() { (self, o) } else { (o, self) };
        let mut v = long.coeffs.clone();
        for (a, b) in v.iter_mut().zip(&short.coeffs) {
            *a = a.plus(b);
        }
        Poly::new(v)
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(C::negated).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (Some(a0), false) = (self.coeffs.first(), o.is_zero()) else {
            return Poly::zero();
        };
        let mut v = vec![a0.zero_like(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].plus(&a.times(b));
            }
        }
        Poly::new(v)
    }

    pub fn scale(&self, c: &C) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn pow(&self, n: u32, one: &C) -> Self {
        let mut acc = Poly::constant(one.clone());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.lead().expect("division by the zero polynomial");
        let inv = dl.inverse().expect("nonzero leading coefficient");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![dl.zero_like(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].times(&inv);
            if !c.is_zero() {
                for (j, b) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].minus(&c.times(b));
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Scaled to leading coefficient one, with the removed factor.
    pub fn monic(&self) -> (Option<C>, Self) {
        match self.lead() {
            None => (None, Poly::zero()),
            Some(l) => (Some(l.clone()), self.scale(&l.inverse().expect("nonzero leading coefficient"))),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic().1
    }

    /// `(g, s)` with `g` the monic gcd and `s * self = g` modulo `o`.
    pub fn gcd_cofactor(&self, o: &Self) -> (Self, Self) {
        let one = match self.lead().or(o.lead()) {
            Some(c) => c.one_like(),
            None => return (Poly::zero(), Poly::zero()),
        };
        let (mut a, mut b) = (self.clone(), o.clone());
        let (mut sa, mut sb) = (Poly::constant(one), Poly::zero());
        while !b.is_zero() {
            let (q, r) = a.div_rem(&b);
            let s = sa.sub(&q.mul(&sb));
            a = b;
            b = r;
            sa = sb;
            sb = s;
        }
        let (l, g) = a.monic();
        let inv = l.and_then(|l| l.inverse());
        (g, inv.map_or(sa.clone(), |i| sa.scale(&i)))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.times(&c.of_int(k as i64))).collect())
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    /// Square-free decomposition of a monic polynomial: pairwise coprime
    /// square-free factors `a_i` with `self = prod a_i^i`, trivial ones omitted.
    pub fn square_free(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.div_exact(&a0).expect("gcd divides");
        let mut c = d.div_exact(&a0).expect("gcd divides");
        let mut e = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&e);
            b = b.div_exact(&a).expect("gcd divides");
            c = e.div_exact(&a).expect("gcd divides");
            e = c.sub(&b.derivative());
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }
}

/// Determinant by fraction-free elimination, for matrices over a polynomial ring.
pub fn bareiss_det<C: Coeff>(mut m: Vec<Vec<Poly<C>>>, one: &C) -> Poly<C> {
    let n = m.len();
    let mut sign = false;
    let mut prev = Poly::constant(one.clone());
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Poly::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m.last().map_or(Poly::constant(one.clone()), |r| r[n - 1].clone());
    if sign {
        d.neg()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(v: &[i64]) -> Poly<BigRational> {
        Poly::new(v.iter().map(|&k| rat(k, 1)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        assert_eq!(a.div_rem(&b), (p(&[-1, 1]), Poly::zero()));
        assert_eq!(a.gcd(&p(&[-1, 1]).mul(&p(&[2, 1]))), p(&[-1, 1]));
        let (g, s) = p(&[0, 1]).gcd_cofactor(&p(&[1, 0, 1]));
        assert_eq!(g, p(&[1]));
        assert!(s.mul(&p(&[0, 1])).sub(&p(&[1])).div_rem(&p(&[1, 0, 1])).1.is_zero());
    }

    #[test]
    fn square_free_parts() {
        // t (t - 1)^2 (t + 1)^3
        let f = p(&[0, 1]).mul(&p(&[-1, 1]).pow(2, &rat(1, 1))).mul(&p(&[1, 1]).pow(3, &rat(1, 1)));
        let sf = f.square_free();
        assert_eq!(sf, vec![(p(&[0, 1]), 1), (p(&[-1, 1]), 2), (p(&[1, 1]), 3)]);
        assert!(p(&[5]).square_free().is_empty());
    }

    #[test]
    fn determinant() {
        let m = vec![vec![p(&[0, 1]), p(&[1])], vec![p(&[1]), p(&[0, 1])]];
        assert_eq!(bareiss_det(m, &rat(1, 1)), p(&[-1, 0, 1]));
        let m = vec![vec![p(&[0]), p(&[1])], vec![p(&[1]), p(&[0])]];
        assert_eq!(bareiss_det(m, &rat(1, 1)), p(&[-1]));
    }
}
