//! Exact scalars: rationals, elements of a real quadratic field `Q(sqrt d)`,
//! and dyadic intervals used as a certified fallback.
//!
//! Rational and quadratic values have exact signs. Interval values carry an
//! enclosure `[lo, hi]` of the true value and may report [`Sign::Indeterminate`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default number of fractional bits kept by interval arithmetic.
pub const DEFAULT_PRECISION: u32 = 128;

static PRECISION: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION);

thread_local! {
    static LOCAL_PRECISION: std::cell::Cell<Option<u32>> = const { std::cell::Cell::new(None) };
}

/// Current interval precision in fractional bits.
pub fn interval_precision() -> u32 {
    LOCAL_PRECISION
        .with(|p| p.get())
        .unwrap_or_else(|| PRECISION.load(AtomicOrdering::Relaxed))
}

/// Runs `f` with a thread-local interval precision override.
pub fn with_precision<R>(bits: u32, f: impl FnOnce() -> R) -> R {
    let prev = LOCAL_PRECISION.with(|p| p.replace(Some(bits.max(8))));
    let out = f();
    LOCAL_PRECISION.with(|p| p.set(prev));
    out
}

/// Runs `attempt` at the current precision and retries with doubled precision
/// while it fails with an indeterminate sign.
pub fn retry_on_indeterminate<R, E>(
    mut attempt: impl FnMut(u32) -> Result<R, E>,
    is_indeterminate: impl Fn(&E) -> bool,
) -> Result<R, E> {
    let mut bits = interval_precision();
    let mut tries = 0;
    loop {
        match with_precision(bits, || attempt(bits)) {
            Err(e) if is_indeterminate(&e) && tries < MAX_PRECISION_RETRIES => {
                tries += 1;
                bits *= 2;
            }
            other => return other,
        }
    }
}

/// Sets the global interval precision (clamped to at least 8 bits).
pub fn set_interval_precision(bits: u32) {
    PRECISION.store(bits.max(8), AtomicOrdering::Relaxed);
}

/// Number of precision doublings attempted before an indeterminate sign is surfaced.
pub const MAX_PRECISION_RETRIES: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible fields Q(sqrt {0}) and Q(sqrt {1})")]
    IncompatibleFields(u64, u64),
    #[error("sign of {0} is indeterminate at the current precision")]
    Indeterminate(String),
    #[error("invalid scalar literal: {0}")]
    Parse(String),
    #[error("{0} is not a positive integer square-free radicand")]
    BadRadicand(u64),
}

/// Result of a sign query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    Indeterminate,
}

impl Sign {
    pub fn to_i8(self) -> Option<i8> {
        match self {
            Sign::Negative => Some(-1),
            Sign::Zero => Some(0),
            Sign::Positive => Some(1),
            Sign::Indeterminate => None,
        }
    }
}

/// `a + b sqrt(d)` with `b != 0` and `d > 1` square-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quad {
    pub a: BigRational,
    pub b: BigRational,
    pub d: u64,
}

/// Closed interval with dyadic rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Quad(Quad),
    Interval(Interval),
}

/// The field a surface's coordinates live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Quadratic(u64),
    Interval,
}

impl Field {
    pub fn join(self, other: Field) -> Result<Field, ScalarError> {
        use Field::*;
        match (self, other) {
            (Interval, _) | (_, Interval) => Ok(Interval),
            (Quadratic(a), Quadratic(b)) if a != b => Err(ScalarError::IncompatibleFields(a, b)),
            (Quadratic(a), _) | (_, Quadratic(a)) => Ok(Quadratic(a)),
            _ => Ok(Rational),
        }
    }

    pub fn name(self) -> String {
        match self {
            Field::Rational => "rational".into(),
            Field::Quadratic(d) => format!("quad({d})"),
            Field::Interval => "interval".into(),
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// `q = n / 2^k` when the denominator is a power of two.
fn as_dyadic(q: &BigRational) -> Option<(BigInt, u64)> {
    let d = q.denom();
    let k = d.bits() - 1;
    (d.trailing_zeros() == Some(k)).then(|| (q.numer().clone(), k))
}

/// Builds `n / 2^k` rounded to `bits` fractional bits (down or up), in lowest terms.
fn dyadic_rounded(n: BigInt, k: u64, bits: u32, up: bool) -> BigRational {
    let bits = bits as u64;
    let (mut n, mut k) = if k > bits {
        let shift = (k - bits) as usize;
        if up {
            (-((-n) >> shift), bits)
        } else {
            (n >> shift, bits)
        }
    } else {
        (n, k)
    };
    let tz = n.trailing_zeros().unwrap_or(k).min(k);
    if tz > 0 {
        n >>= tz as usize;
        k -= tz;
    }
    BigRational::new_raw(n, BigInt::one() << k as usize)
}

fn round_down(q: &BigRational, bits: u32) -> BigRational {
    if let Some((n, k)) = as_dyadic(q) {
        return dyadic_rounded(n, k, bits, false);
    }
    let s = pow2(bits);
    let scaled = q * BigRational::from_integer(s.clone());
    BigRational::new(scaled.floor().to_integer(), s)
}

fn round_up(q: &BigRational, bits: u32) -> BigRational {
    if let Some((n, k)) = as_dyadic(q) {
        return dyadic_rounded(n, k, bits, true);
    }
    let s = pow2(bits);
    let scaled = q * BigRational::from_integer(s.clone());
    BigRational::new(scaled.ceil().to_integer(), s)
}

/// Exact sum or product of dyadic numbers as `(numerator, exponent)`.
fn dyadic_op(a: &(BigInt, u64), b: &(BigInt, u64), op: char) -> (BigInt, u64) {
    match op {
        '*' => (&a.0 * &b.0, a.1 + b.1),
        _ => {
            let k = a.1.max(b.1);
            let x = &a.0 << (k - a.1) as usize;
            let y = &b.0 << (k - b.1) as usize;
            (if op == '+' { x + y } else { x - y }, k)
        }
    }
}

fn dyadic_cmp(a: &(BigInt, u64), b: &(BigInt, u64)) -> Ordering {
    let k = a.1.max(b.1);
    (&a.0 << (k - a.1) as usize).cmp(&(&b.0 << (k - b.1) as usize))
}

/// Splits `n = k^2 * d` with `d` square-free.
pub fn square_free_part(n: u64) -> (u64, u64) {
    let mut k = 1u64;
    let mut d = n;
    let mut p = 2u64;
    while p * p <= d {
        while d.is_multiple_of(p * p) {
            d /= p * p;
            k *= p;
        }
        p += 1;
    }
    (k, d)
}

fn sqrt_enclosure(d: u64, bits: u32) -> Interval {
    let scaled = BigInt::from(d) << (2 * bits as usize);
    let r = scaled.sqrt();
    let den = pow2(bits);
    if &r * &r == scaled {
        let v = BigRational::new(r, den);
        Interval { lo: v.clone(), hi: v }
    } else {
        Interval {
            lo: BigRational::new(r.clone(), den.clone()),
            hi: BigRational::new(r + 1, den),
        }
    }
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(q: BigRational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    fn rounded(lo: BigRational, hi: BigRational) -> Self {
        let bits = interval_precision();
        Interval { lo: round_down(&lo, bits), hi: round_up(&hi, bits) }
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    fn dyadic(&self) -> Option<((BigInt, u64), (BigInt, u64))> {
        Some((as_dyadic(&self.lo)?, as_dyadic(&self.hi)?))
    }

    fn from_dyadic(lo: (BigInt, u64), hi: (BigInt, u64)) -> Interval {
        let bits = interval_precision();
        Interval { lo: dyadic_rounded(lo.0, lo.1, bits, false), hi: dyadic_rounded(hi.0, hi.1, bits, true) }
    }

    fn add(&self, o: &Interval) -> Interval {
        if let (Some((a, b)), Some((c, d))) = (self.dyadic(), o.dyadic()) {
            return Interval::from_dyadic(dyadic_op(&a, &c, '+'), dyadic_op(&b, &d, '+'));
        }
        Interval::rounded(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    fn sub(&self, o: &Interval) -> Interval {
        if let (Some((a, b)), Some((c, d))) = (self.dyadic(), o.dyadic()) {
            return Interval::from_dyadic(dyadic_op(&a, &d, '-'), dyadic_op(&b, &c, '-'));
        }
        Interval::rounded(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    fn mul(&self, o: &Interval) -> Interval {
        if let (Some((a, b)), Some((c, d))) = (self.dyadic(), o.dyadic()) {
            let p = [dyadic_op(&a, &c, '*'), dyadic_op(&a, &d, '*'), dyadic_op(&b, &c, '*'), dyadic_op(&b, &d, '*')];
            let lo = p.iter().min_by(|x, y| dyadic_cmp(x, y)).unwrap().clone();
            let hi = p.iter().max_by(|x, y| dyadic_cmp(x, y)).unwrap().clone();
            return Interval::from_dyadic(lo, hi);
        }
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::rounded(lo, hi)
    }

    fn recip(&self) -> Result<Interval, ScalarError> {
        if self.contains(&BigRational::zero()) {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Interval::rounded(self.hi.recip(), self.lo.recip()))
    }
}

impl Quad {
    fn sign(&self) -> Sign {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sa.is_zero() {
            return sign_of_rat(&self.b);
        }
        if sb.is_zero() || sa == sb {
            return sign_of_rat(&self.a);
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        if a2 > b2d {
            sign_of_rat(&self.a)
        } else {
            sign_of_rat(&self.b)
        }
    }

    fn enclosure(&self, bits: u32) -> Interval {
        let s = sqrt_enclosure(self.d, bits + 8);
        let bs = Interval::point(self.b.clone()).mul(&s);
        Interval::point(self.a.clone()).add(&bs)
    }
}

fn sign_of_rat(q: &BigRational) -> Sign {
    if q.is_zero() {
        Sign::Zero
    } else if q.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rational(BigRational::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar::Rational(rat(n, d))
    }

    pub fn from_rational(q: BigRational) -> Scalar {
        Scalar::Rational(q)
    }

    /// `a + b sqrt(n)`; the radicand is reduced to its square-free part.
    pub fn quad(a: BigRational, b: BigRational, n: u64) -> Result<Scalar, ScalarError> {
        if n == 0 {
            return Ok(Scalar::Rational(a));
        }
        let (k, d) = square_free_part(n);
        let b = b * BigRational::from_integer(BigInt::from(k));
        Ok(Scalar::normalize_quad(a, b, d))
    }

    /// `sqrt(n)` for a non-negative integer `n`.
    pub fn sqrt_int(n: u64) -> Scalar {
        Scalar::quad(BigRational::zero(), BigRational::one(), n).expect("valid radicand")
    }

    pub fn interval(lo: BigRational, hi: BigRational) -> Scalar {
        assert!(lo <= hi, "interval endpoints out of order");
        Scalar::Interval(Interval { lo, hi })
    }

    fn normalize_quad(a: BigRational, b: BigRational, d: u64) -> Scalar {
        if b.is_zero() || d == 1 {
            Scalar::Rational(a + b)
        } else {
            Scalar::Quad(Quad { a, b, d })
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Quad(q) => Field::Quadratic(q.d),
            Scalar::Interval(_) => Field::Interval,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Interval(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Rational and irrational parts `(a, b, d)` of an exact value.
    pub fn quad_parts(&self) -> Option<(BigRational, BigRational, u64)> {
        match self {
            Scalar::Rational(q) => Some((q.clone(), BigRational::zero(), 1)),
            Scalar::Quad(q) => Some((q.a.clone(), q.b.clone(), q.d)),
            Scalar::Interval(_) => None,
        }
    }

    pub fn sign(&self) -> Sign {
        match self {
            Scalar::Rational(q) => sign_of_rat(q),
            Scalar::Quad(q) => q.sign(),
            Scalar::Interval(i) => {
                if i.lo.is_positive() {
                    Sign::Positive
                } else if i.hi.is_negative() {
                    Sign::Negative
                } else if i.lo.is_zero() && i.hi.is_zero() {
                    Sign::Zero
                } else {
                    Sign::Indeterminate
                }
            }
        }
    }

    /// Sign as `-1, 0, 1`, or an error carrying the value when indeterminate.
    pub fn signum_checked(&self) -> Result<i8, ScalarError> {
        self.sign().to_i8().ok_or_else(|| ScalarError::Indeterminate(self.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Sign::Zero
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Negative
    }

    /// Certified comparison.
    pub fn cmp_checked(&self, other: &Scalar) -> Result<Ordering, ScalarError> {
        let diff = self.try_sub(other)?;
        Ok(diff.signum_checked()?.cmp(&0))
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else if let Scalar::Interval(i) = self {
            if i.lo.is_negative() {
                let hi = (-&i.lo).max(i.hi.clone());
                Scalar::Interval(Interval { lo: BigRational::zero(), hi })
            } else {
                self.clone()
            }
        } else {
            self.clone()
        }
    }

    /// Enclosure of the value at the given precision.
    pub fn to_interval(&self, bits: u32) -> Interval {
        match self {
            Scalar::Rational(q) => Interval::point(q.clone()),
            Scalar::Quad(q) => q.enclosure(bits),
            Scalar::Interval(i) => i.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            Scalar::Quad(q) => {
                q.a.to_f64().unwrap_or(f64::NAN) + q.b.to_f64().unwrap_or(f64::NAN) * (q.d as f64).sqrt()
            }
            Scalar::Interval(i) => {
                let m = (&i.lo + &i.hi) / BigRational::from_integer(BigInt::from(2));
                m.to_f64().unwrap_or(f64::NAN)
            }
        }
    }

    /// Exact floor for rational and quadratic values.
    pub fn floor(&self) -> Result<BigInt, ScalarError> {
        match self {
            Scalar::Rational(q) => Ok(q.floor().to_integer()),
            Scalar::Quad(_) => {
                let enc = self.to_interval(64);
                let mut k = enc.lo.floor().to_integer();
                loop {
                    let kk = Scalar::Rational(BigRational::from_integer(k.clone()));
                    if (self - &kk).is_negative() {
                        k -= 1;
                        continue;
                    }
                    let k1 = Scalar::Rational(BigRational::from_integer(&k + 1));
                    if !(self - &k1).is_negative() {
                        k += 1;
                        continue;
                    }
                    return Ok(k);
                }
            }
            Scalar::Interval(i) => {
                let lo = i.lo.floor().to_integer();
                let hi = i.hi.floor().to_integer();
                if lo == hi {
                    Ok(lo)
                } else {
                    Err(ScalarError::Indeterminate(self.to_string()))
                }
            }
        }
    }

    pub fn ceil(&self) -> Result<BigInt, ScalarError> {
        Ok(-(-self).floor()?)
    }

    fn promote(&self, other: &Scalar) -> Result<(Scalar, Scalar), ScalarError> {
        match (self, other) {
            (Scalar::Interval(_), _) | (_, Scalar::Interval(_)) => {
                let bits = interval_precision();
                Ok((
                    Scalar::Interval(self.to_interval(bits)),
                    Scalar::Interval(other.to_interval(bits)),
                ))
            }
            (Scalar::Quad(a), Scalar::Quad(b)) if a.d != b.d => {
                Err(ScalarError::IncompatibleFields(a.d, b.d))
            }
            _ => Ok((self.clone(), other.clone())),
        }
    }

    fn parts_in(&self, d: u64) -> (BigRational, BigRational) {
        match self {
            Scalar::Rational(q) => (q.clone(), BigRational::zero()),
            Scalar::Quad(q) => {
                debug_assert_eq!(q.d, d);
                (q.a.clone(), q.b.clone())
            }
            Scalar::Interval(_) => unreachable!("interval operands are promoted first"),
        }
    }

    fn radicand(a: &Scalar, b: &Scalar) -> Option<u64> {
        match (a, b) {
            (Scalar::Quad(q), _) | (_, Scalar::Quad(q)) => Some(q.d),
            _ => None,
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if let (Scalar::Rational(x), Scalar::Rational(y)) = (self, other) {
            return Ok(Scalar::Rational(x + y));
        }
        let (x, y) = self.promote(other)?;
        if let (Scalar::Interval(i), Scalar::Interval(j)) = (&x, &y) {
            return Ok(Scalar::Interval(i.add(j)));
        }
        let d = Scalar::radicand(&x, &y).unwrap_or(1);
        let (a1, b1) = x.parts_in(d);
        let (a2, b2) = y.parts_in(d);
        Ok(Scalar::normalize_quad(a1 + a2, b1 + b2, d))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if let (Scalar::Rational(x), Scalar::Rational(y)) = (self, other) {
            return Ok(Scalar::Rational(x * y));
        }
        let (x, y) = self.promote(other)?;
        if let (Scalar::Interval(i), Scalar::Interval(j)) = (&x, &y) {
            return Ok(Scalar::Interval(i.mul(j)));
        }
        let d = Scalar::radicand(&x, &y).unwrap_or(1);
        let (a1, b1) = x.parts_in(d);
        let (a2, b2) = y.parts_in(d);
        let dd = BigRational::from_integer(BigInt::from(d));
        let a = &a1 * &a2 + &b1 * &b2 * dd;
        let b = a1 * b2 + b1 * a2;
        Ok(Scalar::normalize_quad(a, b, d))
    }

    pub fn try_recip(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Rational(q) => {
                if q.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(q.recip()))
                }
            }
            Scalar::Quad(q) => {
                let dd = BigRational::from_integer(BigInt::from(q.d));
                let norm = &q.a * &q.a - &q.b * &q.b * dd;
                Ok(Scalar::normalize_quad(&q.a / &norm, -&q.b / &norm, q.d))
            }
            Scalar::Interval(i) => Ok(Scalar::Interval(i.recip()?)),
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_mul(&other.try_recip()?)
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact non-negative square root when it is rational or of the form `u + v sqrt(d)`.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => {
                if q.is_negative() {
                    return None;
                }
                if let Some(r) = rational_sqrt(q) {
                    return Some(Scalar::Rational(r));
                }
                let n = (q.numer() * q.denom()).to_u64()?;
                if n > 1 << 40 {
                    return None;
                }
                let (k, d) = square_free_part(n);
                let b = BigRational::new(BigInt::from(k), q.denom().clone());
                Some(Scalar::normalize_quad(BigRational::zero(), b, d))
            }
            Scalar::Quad(x) => {
                // (u + v sqrt d)^2 = u^2 + d v^2 + 2uv sqrt d
                let d = BigRational::from_integer(BigInt::from(x.d));
                let disc = rational_sqrt(&(&x.a * &x.a - &x.b * &x.b * &d))?;
                let two = BigRational::from_integer(BigInt::from(2));
                for cand in [(&x.a + &disc) / &two, (&x.a - &disc) / &two] {
                    if cand.is_negative() || cand.is_zero() {
                        continue;
                    }
                    if let Some(u) = rational_sqrt(&cand) {
                        let v = &x.b / (&two * &u);
                        let r = Scalar::normalize_quad(u, v, x.d);
                        return Some(if r.is_negative() { -r } else { r });
                    }
                }
                None
            }
            Scalar::Interval(_) => None,
        }
    }

    /// Canonical textual key used for hashing geometric data.
    pub fn key(&self) -> String {
        self.to_string()
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}", fmt_rat(q)),
            Scalar::Quad(q) => {
                let b = if q.b.is_one() {
                    String::new()
                } else if (-&q.b).is_one() {
                    "-".into()
                } else {
                    format!("{}*", fmt_rat(&q.b))
                };
                if q.a.is_zero() {
                    write!(f, "{b}sqrt({})", q.d)
                } else {
                    let sep = if q.b.is_positive() { "+" } else { "" };
                    write!(f, "{}{sep}{b}sqrt({})", fmt_rat(&q.a), q.d)
                }
            }
            Scalar::Interval(i) => write!(f, "[{},{}]", fmt_rat(&i.lo), fmt_rat(&i.hi)),
        }
    }
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let s = s.trim();
    let bad = || ScalarError::Parse(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let q = BigRational::new(n, den);
        return Ok(if neg { -q } else { q });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

impl std::str::FromStr for Scalar {
    type Err = ScalarError;

    /// Accepts rationals and `a+b*sqrt(d)` style literals such as `1+sqrt(2)` or `-2*sqrt(3)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = s.find("sqrt(") else {
            return Ok(Scalar::Rational(parse_rational(&s)?));
        };
        let close = s[pos..].find(')').ok_or_else(|| ScalarError::Parse(s.clone()))? + pos;
        let d: u64 = s[pos + 5..close].parse().map_err(|_| ScalarError::Parse(s.clone()))?;
        if !s[close + 1..].is_empty() {
            return Err(ScalarError::Parse(s.clone()));
        }
        let head = &s[..pos];
        // split head into rational part and coefficient of sqrt
        let (a_str, coef) = match head.rfind(['+', '-']).filter(|&i| i > 0) {
            Some(i) => (&head[..i], &head[i..]),
            None => ("", head),
        };
        let coef = coef.trim_end_matches('*');
        let b = match coef {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            c => parse_rational(c.trim_start_matches('+'))?,
        };
        let a = if a_str.is_empty() { BigRational::zero() } else { parse_rational(a_str)? };
        Scalar::quad(a, b, d)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            Scalar::Rational(q) => ser.serialize_str(&fmt_rat(q)),
            Scalar::Quad(q) => {
                let mut m = ser.serialize_map(Some(3))?;
                m.serialize_entry("a", &fmt_rat(&q.a))?;
                m.serialize_entry("b", &fmt_rat(&q.b))?;
                m.serialize_entry("d", &q.d)?;
                m.end()
            }
            Scalar::Interval(i) => {
                let mut m = ser.serialize_map(Some(2))?;
                m.serialize_entry("lo", &fmt_rat(&i.lo))?;
                m.serialize_entry("hi", &fmt_rat(&i.hi))?;
                m.end()
            }
        }
    }
}

fn json_rational(v: &serde_json::Value) -> Result<BigRational, String> {
    match v {
        serde_json::Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                parse_rational(&n.to_string()).map_err(|e| e.to_string())
            }
        }
        other => Err(format!("expected a rational, found {other}")),
    }
}

impl Scalar {
    /// Decodes the JSON forms `"p/q"`, integers, `"a+b*sqrt(d)"`, `{"a","b","d"}` and `{"lo","hi"}`.
    pub fn from_json(v: &serde_json::Value) -> Result<Scalar, String> {
        match v {
            serde_json::Value::String(s) => s.parse::<Scalar>().map_err(|e| e.to_string()),
            serde_json::Value::Number(_) => json_rational(v).map(Scalar::Rational),
            serde_json::Value::Object(m) => {
                if let (Some(lo), Some(hi)) = (m.get("lo"), m.get("hi")) {
                    let lo = json_rational(lo)?;
                    let hi = json_rational(hi)?;
                    if lo > hi {
                        return Err("interval with lo > hi".into());
                    }
                    return Ok(Scalar::Interval(Interval { lo, hi }));
                }
                let a = m.get("a").map(json_rational).transpose()?.unwrap_or_else(BigRational::zero);
                let b = m.get("b").map(json_rational).transpose()?.unwrap_or_else(BigRational::zero);
                let d = m
                    .get("d")
                    .and_then(|d| d.as_u64())
                    .ok_or_else(|| "quadratic scalar needs a positive integer \"d\"".to_string())?;
                Scalar::quad(a, b, d).map_err(|e| e.to_string())
            }
            other => Err(format!("expected a scalar, found {other}")),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        Scalar::from_json(&v).map_err(D::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Rational(q)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::Rational(BigRational::from_integer(n))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Quad(q) => Scalar::Quad(Quad { a: -&q.a, b: -&q.b, d: q.d }),
            Scalar::Interval(i) => Scalar::Interval(Interval { lo: -&i.hi, hi: -&i.lo }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar {}: {e}", stringify!($method)),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

/// Certified pi and trigonometric enclosures used for regular polygons.
pub mod trig {
    use super::*;

    fn atan_inv(n: i64, bits: u32) -> Interval {
        // arctan(1/n) by its alternating series; tail bounded by the next term
        let x = rat(1, n);
        let x2 = &x * &x;
        let eps = BigRational::new(BigInt::one(), pow2(bits + 4));
        let mut term = x.clone();
        let mut sum = BigRational::zero();
        let mut k = 0i64;
        loop {
            let t = &term / BigRational::from_integer(BigInt::from(2 * k + 1));
            if t < eps {
                return Interval { lo: round_down(&(&sum - &t), bits + 2), hi: round_up(&(&sum + &t), bits + 2) };
            }
            if k % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
            term = &term * &x2;
            k += 1;
        }
    }

    /// Enclosure of pi via Machin's formula.
    pub fn pi(bits: u32) -> Interval {
        let a = atan_inv(5, bits + 8);
        let b = atan_inv(239, bits + 8);
        let sixteen = Interval::point(rat(16, 1));
        let four = Interval::point(rat(4, 1));
        sixteen.mul(&a).sub(&four.mul(&b))
    }

    fn series(x: &Interval, bits: u32, cosine: bool) -> Interval {
        // Taylor series with remainder bound |x|^(k)/k!, valid for |x| <= 4
        let bound = x.lo.abs().max(x.hi.abs());
        let eps = BigRational::new(BigInt::one(), pow2(bits + 4));
        let mut sum = Interval::point(BigRational::zero());
        let mut term = if cosine { Interval::point(BigRational::one()) } else { x.clone() };
        let mut k: i64 = if cosine { 0 } else { 1 };
        let mut sign = 1;
        let x2 = x.mul(x);
        loop {
            let mut fact = BigRational::one();
            for j in 1..=k + 2 {
                fact *= BigRational::from_integer(BigInt::from(j));
            }
            let tail = num_traits::pow(bound.clone(), (k + 2) as usize) / fact;
            sum = if sign > 0 { sum.add(&term) } else { sum.sub(&term) };
            if tail < eps {
                return Interval::rounded(&sum.lo - &tail, &sum.hi + &tail);
            }
            term = term.mul(&x2);
            let div = BigRational::from_integer(BigInt::from((k + 1) * (k + 2)));
            term = Interval::rounded(&term.lo / &div, &term.hi / &div);
            k += 2;
            sign = -sign;
        }
    }

    /// Enclosures of `(cos(p*pi/q), sin(p*pi/q))` for `|p/q| <= 1`.
    pub fn cos_sin_pi_frac(p: i64, q: i64, bits: u32) -> (Interval, Interval) {
        let x = pi(bits + 16).mul(&Interval::point(rat(p, q)));
        (series(&x, bits, true), series(&x, bits, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(Scalar::frac(9, 4).sqrt_exact(), Some(Scalar::frac(3, 2)));
        assert_eq!(Scalar::int(8).sqrt_exact(), Some(s("2*sqrt(2)")));
        assert_eq!(s("3+2*sqrt(2)").sqrt_exact(), Some(s("1+sqrt(2)")));
        assert_eq!(s("3-2*sqrt(2)").sqrt_exact(), Some(s("-1+sqrt(2)")));
        assert_eq!(Scalar::int(-1).sqrt_exact(), None);
        assert_eq!(s("1+sqrt(2)").sqrt_exact(), None);
    }

    #[test]
    fn rational_sum() {
        assert_eq!(Scalar::frac(1, 2) + Scalar::frac(1, 3), Scalar::frac(5, 6));
    }

    #[test]
    fn norm_identity_in_q_sqrt2() {
        assert_eq!(s("1+sqrt(2)") * s("1-sqrt(2)"), Scalar::int(-1));
    }

    #[test]
    fn two_cot_pi_over_8() {
        // half-angle formula: cot(x/2) = (1 + cos x)/sin x at x = pi/4
        let cot = s("1+sqrt(2)");
        let two_cot = Scalar::int(2) * &cot;
        assert_eq!(two_cot, s("2+2*sqrt(2)"));
        let x = std::f64::consts::PI / 4.0;
        let oracle = (1.0 + x.cos()) / x.sin();
        assert!((cot.to_f64() - oracle).abs() < 1e-12);
    }

    #[test]
    fn signs() {
        assert_eq!(Scalar::zero().sign(), Sign::Zero);
        assert_eq!(s("3-2*sqrt(2)").sign(), Sign::Positive);
        assert_eq!(s("-3+2*sqrt(2)").sign(), Sign::Negative);
        assert_eq!(Scalar::interval(rat(-1, 1), rat(1, 1)).sign(), Sign::Indeterminate);
    }

    #[test]
    fn incompatible_fields() {
        assert_eq!(
            s("sqrt(2)").try_add(&s("sqrt(3)")),
            Err(ScalarError::IncompatibleFields(2, 3))
        );
        assert_eq!(Scalar::zero().try_recip(), Err(ScalarError::DivisionByZero));
        let i = Scalar::interval(rat(-1, 2), rat(1, 2));
        assert_eq!(Scalar::one().try_div(&i), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn square_free_reduction() {
        assert_eq!(Scalar::sqrt_int(8), s("2*sqrt(2)"));
        assert_eq!(Scalar::sqrt_int(9), Scalar::int(3));
        assert_eq!(square_free_part(72), (6, 2));
    }

    #[test]
    fn quad_floor() {
        assert_eq!(s("1+sqrt(2)").floor().unwrap(), BigInt::from(2));
        assert_eq!(s("-sqrt(2)").floor().unwrap(), BigInt::from(-2));
        assert_eq!(s("3/2").ceil().unwrap(), BigInt::from(2));
    }

    #[test]
    fn json_round_trip() {
        for v in [Scalar::frac(-3, 4), s("1/2-3*sqrt(5)"), Scalar::interval(rat(1, 4), rat(1, 2))] {
            let j = serde_json::to_string(&v).unwrap();
            let back: Scalar = serde_json::from_str(&j).unwrap();
            assert_eq!(back, v);
        }
        let q: Scalar = serde_json::from_str(r#"{"a":"1","b":"1/2","d":2}"#).unwrap();
        assert_eq!(q, s("1+1/2*sqrt(2)"));
    }

    #[test]
    fn pi_enclosure() {
        let p = trig::pi(64);
        assert!(p.lo.to_f64().unwrap() <= std::f64::consts::PI);
        assert!(p.hi.to_f64().unwrap() >= std::f64::consts::PI - 1e-15);
        assert!(p.width() < rat(1, 1 << 30));
        let (c, sn) = trig::cos_sin_pi_frac(1, 8, 64);
        assert!((c.lo.to_f64().unwrap() - (std::f64::consts::PI / 8.0).cos()).abs() < 1e-15);
        assert!((sn.hi.to_f64().unwrap() - (std::f64::consts::PI / 8.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn interval_contains_exact_product() {
        let a = s("1+sqrt(2)");
        let b = s("3-sqrt(2)");
        let ia = Scalar::Interval(a.to_interval(64));
        let exact = (&a * &b).to_interval(200);
        let prod = &ia * &b;
        if let Scalar::Interval(p) = prod {
            assert!(p.lo <= exact.hi && exact.lo <= p.hi);
            assert!(p.width() < rat(1, 1 << 40));
        } else {
            panic!("expected interval");
        }
    }
}
