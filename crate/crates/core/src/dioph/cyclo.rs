//! The cyclotomic field `Q(zeta_m)`, as residues modulo the cyclotomic
//! polynomial.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{Coeff, Poly};

pub type QPoly = Poly<BigRational>;

fn q(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// The `m`-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: u32) -> QPoly {
    let mut p = QPoly::monomial(q(1), m as usize).sub(&QPoly::constant(q(1)));
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        p = p.div_exact(&cyclotomic_poly(d)).expect("cyclotomic factors divide t^m - 1");
    }
    p
}

#[derive(Debug)]
pub struct CycloField {
    m: u32,
    modulus: QPoly,
}

impl PartialEq for CycloField {
    fn eq(&self, o: &Self) -> bool {
        self.m == o.m
    }
}

impl CycloField {
    pub fn new(m: u32) -> Arc<Self> {
        assert!(m >= 1, "cyclotomic fields need m >= 1");
        Arc::new(CycloField { m, modulus: cyclotomic_poly(m) })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    /// Order of the group of roots of unity in the field.
    pub fn roots_of_unity_order(&self) -> u32 {
        if self.m % 2 == 1 {
            2 * self.m
        } else {
            self.m
        }
    }
}

#[derive(Debug, Clone)]
pub struct Cyc {
    field: Arc<CycloField>,
    c: QPoly,
}

impl PartialEq for Cyc {
    fn eq(&self, o: &Self) -> bool {
        self.field.m == o.field.m && self.c == o.c
    }
}

impl Cyc {
    fn reduced(field: &Arc<CycloField>, c: QPoly) -> Self {
        let c = c.div_rem(&field.modulus).1;
        Cyc { field: field.clone(), c }
    }

    pub fn rational(field: &Arc<CycloField>, v: BigRational) -> Self {
        Cyc::reduced(field, QPoly::constant(v))
    }

    pub fn int(field: &Arc<CycloField>, k: i64) -> Self {
        Cyc::rational(field, q(k))
    }

    /// `zeta_m^k`, with `zeta_m = exp(2 pi i / m)`.
    pub fn zeta_pow(field: &Arc<CycloField>, k: i64) -> Self {
        let k = k.rem_euclid(field.m as i64) as usize;
        Cyc::reduced(field, QPoly::monomial(q(1), k))
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.c.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.c.coeffs()[0].clone()),
            Some(_) => None,
        }
    }

    /// Image under `zeta -> zeta^j`, an automorphism for `j` prime to `m`.
    pub fn conjugate(&self, j: u32) -> Self {
        let mut acc = QPoly::zero();
        for (k, a) in self.c.coeffs().iter().enumerate() {
            acc = acc.add(&QPoly::monomial(a.clone(), k * j as usize));
        }
        Cyc::reduced(&self.field, acc)
    }

    /// Field norm down to the rationals.
    pub fn norm(&self) -> BigRational {
        let m = self.field.m;
        let mut acc = Cyc::int(&self.field, 1);
        for j in (1..=m).filter(|j| j.gcd(&m) == 1) {
            acc = acc.times(&self.conjugate(j));
        }
        acc.as_rational().expect("norms are rational")
    }

    /// `Some(k)` when this is `zeta_L^k` with `L` the order of the roots of
    /// unity in the field.
    pub fn root_of_unity_exponent(&self) -> Option<u32> {
        let l = self.field.roots_of_unity_order();
        (0..l).find(|&k| *self == root_of_unity(&self.field, k))
    }
}

/// `zeta_L^k` for `L` the order of the roots of unity in the field.
pub fn root_of_unity(field: &Arc<CycloField>, k: u32) -> Cyc {
    if field.m % 2 == 1 {
        // zeta_{2m} = -zeta_m^{(m+1)/2}
        let base = Cyc::zeta_pow(field, (field.m as i64 + 1) / 2).negated();
        let mut acc = Cyc::int(field, 1);
        for _ in 0..k {
            acc = acc.times(&base);
        }
        acc
    } else {
        Cyc::zeta_pow(field, k as i64)
    }
}

impl Coeff for Cyc {
    fn zero_like(&self) -> Self {
        Cyc { field: self.field.clone(), c: QPoly::zero() }
    }
    fn one_like(&self) -> Self {
        Cyc::int(&self.field, 1)
    }
    fn is_zero(&self) -> bool {
        self.c.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        Cyc { field: self.field.clone(), c: self.c.add(&o.c) }
    }
    fn times(&self, o: &Self) -> Self {
        Cyc::reduced(&self.field, self.c.mul(&o.c))
    }
    fn negated(&self) -> Self {
        Cyc { field: self.field.clone(), c: self.c.neg() }
    }
    fn inverse(&self) -> Option<Self> {
        if self.c.is_zero() {
            return None;
        }
        let (g, s) = self.c.gcd_cofactor(&self.field.modulus);
        debug_assert_eq!(g.degree(), Some(0));
        Some(Cyc::reduced(&self.field, s))
    }
    fn of_int(&self, k: i64) -> Self {
        Cyc::int(&self.field, k)
    }
}

fn fmt_rational(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Signed terms, highest power first, written with `zeta` for `zeta_m`.
fn terms(c: &QPoly, var: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    for (k, a) in c.coeffs().iter().enumerate().rev() {
        if Zero::is_zero(a) {
            continue;
        }
        let mag = fmt_rational(&a.abs());
        let body = match k {
            0 => mag,
            _ => {
                let x = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                if a.abs().is_one() {
                    x
                } else {
                    format!("{mag}*{x}")
                }
            }
        };
        out.push((a.is_negative(), body));
    }
    out
}

fn join(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(body);
    }
    s
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&terms(&self.c, "zeta")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let show = |m| cyclotomic_poly(m).coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect::<Vec<i64>>();
        assert_eq!(show(1), vec![-1, 1]);
        assert_eq!(show(2), vec![1, 1]);
        assert_eq!(show(3), vec![1, 1, 1]);
        assert_eq!(show(4), vec![1, 0, 1]);
        assert_eq!(show(6), vec![1, -1, 1]);
        assert_eq!(show(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn field_arithmetic() {
        let k = CycloField::new(3);
        let z = Cyc::zeta_pow(&k, 1);
        let one = Cyc::int(&k, 1);
        assert_eq!(z.times(&z).times(&z), one);
        assert_eq!(z.plus(&z.times(&z)).plus(&one), z.zero_like());
        let w = z.plus(&Cyc::int(&k, 2));
        assert_eq!(w.times(&w.inverse().unwrap()), one);
        // N(2 + zeta_3) = 4 - 2 + 1
        assert_eq!(w.norm(), q(3));
        assert_eq!(Cyc::zeta_pow(&CycloField::new(2), 1), Cyc::int(&CycloField::new(2), -1));
    }

    #[test]
    fn roots_of_unity() {
        let k = CycloField::new(3);
        assert_eq!(k.roots_of_unity_order(), 6);
        assert_eq!(root_of_unity(&k, 3), Cyc::int(&k, -1));
        assert_eq!(root_of_unity(&k, 2), Cyc::zeta_pow(&k, 1));
        assert_eq!(Cyc::zeta_pow(&k, 2).root_of_unity_exponent(), Some(4));
        assert_eq!(Cyc::int(&k, 2).root_of_unity_exponent(), None);
        assert_eq!(Cyc::zeta_pow(&k, 1).plus(&Cyc::int(&k, 1)).to_string(), "zeta + 1");
    }
}
