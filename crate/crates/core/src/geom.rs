//! Plane vectors and 2x2 matrices over [`Scalar`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::{Scalar, ScalarError, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Vec2 {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Vec2 { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Vec2 { x: Scalar::int(x), y: Scalar::int(y) }
    }

    pub fn zero() -> Self {
        Vec2::ints(0, 0)
    }

    pub fn cross(&self, o: &Vec2) -> Scalar {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Vec2) -> Scalar {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    pub fn scale(&self, k: &Scalar) -> Vec2 {
        Vec2 { x: &self.x * k, y: &self.y * k }
    }

    /// Quarter turn counterclockwise.
    pub fn rot90(&self) -> Vec2 {
        Vec2 { x: -&self.y, y: self.x.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Exact equality test that also works for interval coordinates.
    pub fn same(&self, o: &Vec2) -> Result<bool, ScalarError> {
        let d = self - o;
        let sx = d.x.signum_checked()?;
        let sy = d.y.signum_checked()?;
        Ok(sx == 0 && sy == 0)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    /// Projective normalization: first nonzero coordinate positive.
    pub fn normalized_direction(&self) -> Vec2 {
        let flip = match self.x.sign() {
            Sign::Negative => true,
            Sign::Zero => self.y.is_negative(),
            _ => false,
        };
        if flip {
            -self
        } else {
            self.clone()
        }
    }

    pub fn key(&self) -> String {
        format!("({},{})", self.x, self.y)
    }
}

/// Orientation of `b - a` relative to `c - a`: sign of the cross product.
pub fn orient(a: &Vec2, b: &Vec2, c: &Vec2) -> Result<i8, ScalarError> {
    (b - a).cross(&(c - a)).signum_checked()
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add<&Vec2> for &Vec2 {
    type Output = Vec2;
    fn add(self, o: &Vec2) -> Vec2 {
        Vec2 { x: &self.x + &o.x, y: &self.y + &o.y }
    }
}

impl Sub<&Vec2> for &Vec2 {
    type Output = Vec2;
    fn sub(self, o: &Vec2) -> Vec2 {
        Vec2 { x: &self.x - &o.x, y: &self.y - &o.y }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        &self + &o
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        &self - &o
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2 { x: -&self.x, y: -&self.y }
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        -&self
    }
}

/// The matrix `(a, b; c, d)` acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Mat2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(Scalar::int(a), Scalar::int(b), Scalar::int(c), Scalar::int(d))
    }

    pub fn identity() -> Self {
        Mat2::ints(1, 0, 0, 1)
    }

    pub fn det(&self) -> Scalar {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_unimodular(&self) -> bool {
        (self.det() - Scalar::one()).is_zero()
    }

    /// Inverse of a unimodular matrix (the adjugate).
    pub fn inverse_unimodular(&self) -> Mat2 {
        Mat2::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2 { x: &self.a * &v.x + &self.b * &v.y, y: &self.c * &v.x + &self.d * &v.y }
    }

    pub fn scale(&self, k: &Scalar) -> Mat2 {
        Mat2::new(&self.a * k, &self.b * k, &self.c * k, &self.d * k)
    }

    pub fn trace(&self) -> Scalar {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::identity()
    }

    /// Whether the matrix is `I` or `-I`.
    pub fn is_plus_minus_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d && (&self.a * &self.a - Scalar::one()).is_zero()
    }

    /// Representative of the class up to sign: `c > 0`, or `c = 0` and `d > 0`.
    pub fn psl_normalized(&self) -> Mat2 {
        let flip = match self.c.sign() {
            Sign::Negative => true,
            Sign::Zero => self.d.is_negative(),
            _ => false,
        };
        if flip {
            -self
        } else {
            self.clone()
        }
    }

    pub fn entries_f64(&self) -> [f64; 4] {
        [self.a.to_f64(), self.b.to_f64(), self.c.to_f64(), self.d.to_f64()]
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.a, self.b, self.c, self.d)
    }
}

impl Mul<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        &self * &o
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        -&self
    }
}

/// Orientation-preserving isometry `z -> sign * z + t` between flat charts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    pub sign: i8,
    pub t: Vec2,
}

impl Chart {
    pub fn identity() -> Self {
        Chart { sign: 1, t: Vec2::zero() }
    }

    pub fn apply(&self, p: &Vec2) -> Vec2 {
        &self.apply_linear(p) + &self.t
    }

    pub fn apply_linear(&self, v: &Vec2) -> Vec2 {
        if self.sign > 0 {
            v.clone()
        } else {
            -v
        }
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Chart) -> Chart {
        Chart { sign: self.sign * first.sign, t: &self.apply_linear(&first.t) + &self.t }
    }

    pub fn inverse(&self) -> Chart {
        Chart { sign: self.sign, t: -self.apply_linear(&self.t) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psl_normalization() {
        let m = Mat2::ints(-1, 0, -2, -1).psl_normalized();
        assert_eq!(m, Mat2::ints(1, 0, 2, 1));
        assert_eq!(Mat2::ints(-1, 3, 0, -1).psl_normalized(), Mat2::ints(1, -3, 0, 1));
    }

    #[test]
    fn chart_composition() {
        let f = Chart { sign: -1, t: Vec2::ints(3, 0) };
        let g = Chart { sign: 1, t: Vec2::ints(1, 2) };
        let p = Vec2::ints(5, 7);
        assert_eq!(g.compose(&f).apply(&p), g.apply(&f.apply(&p)));
        assert_eq!(f.inverse().apply(&f.apply(&p)), p);
    }

    #[test]
    fn unimodular_inverse() {
        let m = Mat2::ints(2, 1, 1, 1);
        assert!((&m * &m.inverse_unimodular()).is_identity());
    }
}
