//! Exact arithmetic in `Q(zeta_m)(t)`, the curve family
//! `X (X^m - Z^m)(X^m - t Z^m) = Y^2 Z^(2m-1)` and its sections through
//! Weierstrass points.

pub mod cyclo;
pub mod parse;
pub mod poly;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use cyclo::{cyclotomic_poly, Cyc, CycloField};
pub use parse::parse_tpoly;
pub use poly::{bareiss_det, Coeff, Poly};

use crate::par;

/// Polynomials in `t` over `Q(zeta_m)`.
pub type TPoly = Poly<Cyc>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiophError {
    #[error("m must be at least 1")]
    BadDegree,
    #[error("input is zero")]
    ZeroInput,
    #[error("all components vanish")]
    ZeroSolution,
    #[error("cannot decide whether {0} is an {1}-th power in the coefficient field")]
    UndecidedConstant(String, u32),
    #[error("expected three components separated by ';'")]
    BadSolution,
    #[error("{0}")]
    Parse(String),
}

fn signed_terms(p: &TPoly) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let x = match k {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{k}"),
        };
        let cs = c.to_string();
        let single = !cs[1..].contains([' ']);
        let (neg, mag) = if single {
            match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            }
        } else if cs.starts_with('-') {
            (true, format!("({})", c.negated()))
        } else {
            (false, format!("({cs})"))
        };
        let body = match (x.is_empty(), mag.as_str()) {
            (true, _) => mag,
            (false, "1") => x,
            (false, _) => format!("{mag}*{x}"),
        };
        out.push((neg, body));
    }
    out
}

fn join_signed(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        s.push_str(match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        s.push_str(body);
    }
    s
}

/// `t`-polynomial in the form accepted by [`parse_tpoly`].
pub fn fmt_tpoly(p: &TPoly) -> String {
    join_signed(&signed_terms(p))
}

fn one(field: &Arc<CycloField>) -> Cyc {
    Cyc::int(field, 1)
}

fn tpoly_int(field: &Arc<CycloField>, k: i64) -> TPoly {
    TPoly::constant(Cyc::int(field, k))
}

fn t_var(field: &Arc<CycloField>) -> TPoly {
    TPoly::monomial(one(field), 1)
}

/// Polynomial in `X, Y, Z` with coefficients in `Q(zeta_m)[t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionFieldPoly {
    field: Arc<CycloField>,
    /// Exponents of `X, Y, Z` to nonzero coefficients.
    terms: BTreeMap<[u32; 3], TPoly>,
}

impl FunctionFieldPoly {
    pub fn new(field: &Arc<CycloField>, terms: impl IntoIterator<Item = ([u32; 3], TPoly)>) -> Self {
        let mut out = FunctionFieldPoly { field: field.clone(), terms: BTreeMap::new() };
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    fn add_term(&mut self, e: [u32; 3], c: &TPoly) {
        let sum = self.terms.get(&e).map_or(c.clone(), |old| old.add(c));
        if sum.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    /// The variable `X`, `Y` or `Z` for `i = 0, 1, 2`.
    pub fn var(field: &Arc<CycloField>, i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        FunctionFieldPoly::new(field, [(e, tpoly_int(field, 1))])
    }

    pub fn constant(field: &Arc<CycloField>, c: TPoly) -> Self {
        FunctionFieldPoly::new(field, [([0, 0, 0], c)])
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<[u32; 3], TPoly> {
        &self.terms
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&tpoly_int(&self.field, -1)))
    }

    pub fn scale(&self, c: &TPoly) -> Self {
        FunctionFieldPoly::new(&self.field, self.terms.iter().map(|(e, a)| (*e, a.mul(c))))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = FunctionFieldPoly::new(&self.field, []);
        for (e, a) in &self.terms {
            for (f, b) in &o.terms {
                out.add_term([e[0] + f[0], e[1] + f[1], e[2] + f[2]], &a.mul(b));
            }
        }
        out
    }

    /// Total degree when every term has the same one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    /// Substitutes polynomials in `t` for `X, Y, Z`.
    pub fn evaluate(&self, x: &TPoly, y: &TPoly, z: &TPoly) -> TPoly {
        let o = one(&self.field);
        let mut acc = TPoly::zero();
        for (e, c) in &self.terms {
            let m = x.pow(e[0], &o).mul(&y.pow(e[1], &o)).mul(&z.pow(e[2], &o));
            acc = acc.add(&c.mul(&m));
        }
        acc
    }

    /// Coefficients in `X` after setting `Y = 0` and `Z = 1`.
    pub fn y_free_part(&self) -> Vec<TPoly> {
        let mut out: Vec<TPoly> = Vec::new();
        for (e, c) in self.terms.iter().filter(|(e, _)| e[1] == 0) {
            let k = e[0] as usize;
            if out.len() <= k {
                out.resize(k + 1, TPoly::zero());
            }
            out[k] = out[k].add(c);
        }
        out
    }
}

impl fmt::Display for FunctionFieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        // graded lexicographic, X before Y before Z
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| (b.iter().sum::<u32>(), b).cmp(&(a.iter().sum::<u32>(), a)));
        for e in keys {
            let c = &self.terms[&e];
            let mono: Vec<String> = ["X", "Y", "Z"]
                .iter()
                .zip(e)
                .filter(|(_, k)| *k > 0)
                .map(|(v, k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            let mono = mono.join("*");
            let ct = signed_terms(c);
            let (neg, coef) = match ct.as_slice() {
                [(neg, body)] => (*neg, body.clone()),
                _ => {
                    let lead_neg = ct[0].0;
                    let shown = if lead_neg { c.neg() } else { c.clone() };
                    (lead_neg, format!("({})", fmt_tpoly(&shown)))
                }
            };
            let body = match (mono.is_empty(), coef.as_str()) {
                (true, _) => coef,
                (false, "1") => mono,
                (false, _) => format!("{coef}*{mono}"),
            };
            terms.push((neg, body));
        }
        f.write_str(&join_signed(&terms))
    }
}

impl Serialize for FunctionFieldPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The homogeneous curve `X (X^m - Z^m)(X^m - t Z^m) - Y^2 Z^(2m-1)` over
/// `Q(zeta_m)(t)`.
pub fn family_poly(m: u32) -> Result<FunctionFieldPoly, DiophError> {
    if m == 0 {
        return Err(DiophError::BadDegree);
    }
    let k = CycloField::new(m);
    let t = t_var(&k);
    let one = tpoly_int(&k, 1);
    Ok(FunctionFieldPoly::new(
        &k,
        [
            ([2 * m + 1, 0, 0], one.clone()),
            ([m + 1, 0, m], one.add(&t).neg()),
            ([1, 0, 2 * m], t),
            ([0, 2, 2 * m - 1], one.neg()),
        ],
    ))
}

/// A point `[X : Y : Z]` over `Q(zeta_m)(t)`, with polynomial components.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveSolution {
    pub x: TPoly,
    pub y: TPoly,
    pub z: TPoly,
}

impl ProjectiveSolution {
    pub fn new(x: TPoly, y: TPoly, z: TPoly) -> Result<Self, DiophError> {
        if x.is_zero() && y.is_zero() && z.is_zero() {
            return Err(DiophError::ZeroSolution);
        }
        Ok(ProjectiveSolution { x, y, z })
    }

    /// Parses `"X;Y;Z"` with polynomial components.
    pub fn parse(src: &str, field: &Arc<CycloField>) -> Result<Self, DiophError> {
        let parts: Vec<&str> = src.split(';').collect();
        let [x, y, z] = parts.as_slice() else {
            return Err(DiophError::BadSolution);
        };
        ProjectiveSolution::new(parse_tpoly(x, field)?, parse_tpoly(y, field)?, parse_tpoly(z, field)?)
    }

    pub fn components(&self) -> [&TPoly; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// Common factors removed and the last nonzero component made monic.
    pub fn canonical(&self) -> Self {
        let g = self.x.gcd(&self.y).gcd(&self.z);
        let red = |p: &TPoly| p.div_exact(&g).expect("gcd divides");
        let (x, y, z) = (red(&self.x), red(&self.y), red(&self.z));
        let lead = [&z, &y, &x].into_iter().find_map(|p| p.lead().cloned()).expect("nonzero solution");
        let inv = lead.inverse().expect("nonzero leading coefficient");
        ProjectiveSolution { x: x.scale(&inv), y: y.scale(&inv), z: z.scale(&inv) }
    }

    pub fn scaled(&self, c: &TPoly) -> Self {
        ProjectiveSolution { x: self.x.mul(c), y: self.y.mul(c), z: self.z.mul(c) }
    }
}

impl fmt::Display for ProjectiveSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {} : {}]", fmt_tpoly(&self.x), fmt_tpoly(&self.y), fmt_tpoly(&self.z))
    }
}

impl Serialize for ProjectiveSolution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Whether substituting `sol` into `f` gives the zero polynomial in `t`.
pub fn verify_solution(f: &FunctionFieldPoly, sol: &ProjectiveSolution) -> bool {
    f.evaluate(&sol.x, &sol.y, &sol.z).is_zero()
}

fn rational_root(v: &BigRational, n: u32) -> Option<BigRational> {
    if v.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let root = |k: &BigInt| -> Option<BigInt> {
        let r = k.abs().nth_root(n);
        (r.pow(n) == k.abs()).then_some(r)
    };
    let (a, b) = (root(v.numer())?, root(v.denom())?);
    let a = if v.is_negative() { -a } else { a };
    Some(BigRational::new(a, b))
}

/// Whether a nonzero `c` is an `n`-th power in `Q(zeta_m)`.
///
/// Decided exactly when `c` is a root of unity times a rational, or when its
/// norm is not an `n`-th power; other constants give `UndecidedConstant`.
pub fn is_power_in_field(c: &Cyc, n: u32) -> Result<bool, DiophError> {
    if c.is_zero() {
        return Err(DiophError::ZeroInput);
    }
    let field = c.field().clone();
    let l = field.roots_of_unity_order();
    // roots of unity that are n-th powers of roots of unity
    let step = l.gcd(&n);
    for k in 0..l {
        let u = cyclo::root_of_unity(&field, k);
        let Some(r) = c.times(&u.inverse().expect("unit")).as_rational() else {
            continue;
        };
        if k % step == 0 && rational_root(&r, n).is_some() {
            return Ok(true);
        }
        if r.is_one() {
            // a root of unity is an n-th power only of roots of unity
            return Ok(false);
        }
    }
    if rational_root(&c.norm(), n).is_none() {
        return Ok(false);
    }
    Err(DiophError::UndecidedConstant(c.to_string(), n))
}

/// A factor of a rational function with its multiplicity, negative for the
/// denominator.
#[derive(Debug, Clone, Serialize)]
pub struct Factor {
    pub factor: String,
    pub multiplicity: i64,
}

/// Outcome of an `n`-th power test in `Q(zeta_m)(t)`.
#[derive(Debug, Clone, Serialize)]
pub struct PowerCertificate {
    pub power: u32,
    /// Square-free parts of the reduced numerator and denominator.
    pub factors: Vec<Factor>,
    pub leading: String,
    pub leading_is_power: bool,
    pub result: bool,
}

/// Whether `num / den` is an `n`-th power in `Q(zeta_m)(t)`: every square-free
/// part must have multiplicity divisible by `n` and the leading constant must
/// be an `n`-th power.
pub fn power_certificate(num: &TPoly, den: &TPoly, n: u32) -> Result<PowerCertificate, DiophError> {
    if num.is_zero() || den.is_zero() {
        return Err(DiophError::ZeroInput);
    }
    let g = num.gcd(den);
    let (ln, num) = num.div_exact(&g).expect("gcd divides").monic();
    let (ld, den) = den.div_exact(&g).expect("gcd divides").monic();
    let leading = ln.expect("nonzero").times(&ld.expect("nonzero").inverse().expect("unit"));
    let mut factors = Vec::new();
    let mut divisible = true;
    for (p, sign) in [(&num, 1i64), (&den, -1)] {
        for (a, i) in p.square_free() {
            divisible &= i % n == 0;
            factors.push(Factor { factor: fmt_tpoly(&a), multiplicity: sign * i as i64 });
        }
    }
    let leading_is_power = is_power_in_field(&leading, n)?;
    Ok(PowerCertificate { power: n, factors, leading: leading.to_string(), leading_is_power, result: divisible && leading_is_power })
}

pub fn is_power_in_function_field(num: &TPoly, den: &TPoly, n: u32) -> Result<bool, DiophError> {
    Ok(power_certificate(num, den, n)?.result)
}

pub fn is_square_in_function_field(num: &TPoly, den: &TPoly) -> Result<bool, DiophError> {
    is_power_in_function_field(num, den, 2)
}

fn power_name(n: u32) -> String {
    match n {
        2 => "square".into(),
        3 => "cube".into(),
        _ => format!("{n}th power"),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Rejected {
    pub candidate: String,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<PowerCertificate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeierstrassSections {
    pub m: u32,
    pub polynomial: FunctionFieldPoly,
    pub solutions: Vec<ProjectiveSolution>,
    pub rejected: Vec<Rejected>,
}

enum Candidate {
    Point(ProjectiveSolution),
    /// `[zeta^nu * t^(1/m) : 0 : 1]`.
    Radical(i64),
}

/// Sections of the family through its Weierstrass points: `[0:1:0]`, `[0:0:1]`,
/// `[zeta^nu : 0 : 1]` and the radical points `[zeta^nu t^(1/m) : 0 : 1]`. A
/// radical point is a section only when `t` is an `m`-th power in
/// `Q(zeta_m)(t)`, which is never the case for `m >= 2`.
pub fn weierstrass_sections(m: u32) -> Result<WeierstrassSections, DiophError> {
    let f = family_poly(m)?;
    let k = f.field().clone();
    let (zero, unit) = (TPoly::zero(), tpoly_int(&k, 1));
    let mut candidates = vec![
        Candidate::Point(ProjectiveSolution::new(zero.clone(), zero.clone(), unit.clone())?),
        Candidate::Point(ProjectiveSolution::new(zero.clone(), unit.clone(), zero.clone())?),
    ];
    for nu in 1..=m as i64 {
        let x = TPoly::constant(Cyc::zeta_pow(&k, nu));
        candidates.push(Candidate::Point(ProjectiveSolution::new(x, zero.clone(), unit.clone())?));
    }
    if m >= 2 {
        candidates.extend((1..=m as i64).map(Candidate::Radical));
    }
    let outcomes = par::map(&candidates, |c| -> Result<Result<ProjectiveSolution, Rejected>, DiophError> {
        match c {
            Candidate::Point(p) if verify_solution(&f, p) => Ok(Ok(p.canonical())),
            Candidate::Point(p) => Ok(Err(Rejected {
                candidate: p.to_string(),
                reason: "does not satisfy the equation".into(),
                certificate: None,
            })),
            Candidate::Radical(nu) => {
                // the m-th power of the X coordinate is t
                let cert = power_certificate(&t_var(&k), &unit, m)?;
                let root = fmt_tpoly(&TPoly::constant(Cyc::zeta_pow(&k, *nu)));
                let coef = match root.as_str() {
                    "1" => String::new(),
                    "-1" => "-".into(),
                    r if r.starts_with("-(") => format!("{r}*"),
                    r if r.contains(' ') => format!("({r})*"),
                    r => format!("{r}*"),
                };
                let rad = if m == 2 { "sqrt(t)".to_string() } else { format!("t^(1/{m})") };
                let candidate = format!("[{coef}{rad} : 0 : 1]");
                if cert.result {
                    return Err(DiophError::Parse(format!("{candidate} unexpectedly rational")));
                }
                Ok(Err(Rejected {
                    candidate,
                    reason: format!("t is not a {} in the function field", power_name(m)),
                    certificate: Some(cert),
                }))
            }
        }
    });
    let mut solutions = Vec::new();
    let mut rejected = Vec::new();
    for o in outcomes {
        match o? {
            Ok(s) => solutions.push(s),
            Err(r) => rejected.push(r),
        }
    }
    Ok(WeierstrassSections { m, polynomial: f, solutions, rejected })
}

/// Discriminant in `X` of `f(X, 0, 1)`, as a polynomial in `t`, up to a
/// nonzero constant: the resultant of the polynomial and its derivative.
pub fn discriminant_in_x(f: &FunctionFieldPoly) -> TPoly {
    let g = f.y_free_part();
    let dg: Vec<TPoly> = g.iter().enumerate().skip(1).map(|(k, c)| c.scale(&Cyc::int(f.field(), k as i64))).collect();
    let (n, d) = (g.len() - 1, dg.len() - 1);
    let size = n + d;
    let mut rows = Vec::with_capacity(size);
    for (src, shifts) in [(&g, d), (&dg, n)] {
        for s in 0..shifts {
            let mut row = vec![TPoly::zero(); size];
            for (k, c) in src.iter().rev().enumerate() {
                row[s + k] = c.clone();
            }
            rows.push(row);
        }
    }
    bareiss_det(rows, &one(f.field()))
}

/// Order of vanishing of `p` at `t = a`.
pub fn vanishing_order(p: &TPoly, a: &Cyc) -> usize {
    if p.is_zero() {
        return usize::MAX;
    }
    let lin = TPoly::new(vec![a.negated(), a.one_like()]);
    let mut q = p.clone();
    let mut k = 0;
    while let Some(next) = q.div_exact(&lin) {
        q = next;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(src: &str, k: &Arc<CycloField>) -> TPoly {
        parse_tpoly(src, k).unwrap()
    }

    #[test]
    fn family_display() {
        assert_eq!(family_poly(2).unwrap().to_string(), "X^5 - (t + 1)*X^3*Z^2 + t*X*Z^4 - Y^2*Z^3");
        assert_eq!(family_poly(1).unwrap().to_string(), "X^3 - (t + 1)*X^2*Z + t*X*Z^2 - Y^2*Z");
        assert_eq!(family_poly(0), Err(DiophError::BadDegree));
    }

    #[test]
    fn square_tests() {
        let k = CycloField::new(1);
        let one = tp("1", &k);
        assert!(!is_square_in_function_field(&tp("t", &k), &one).unwrap());
        assert!(is_square_in_function_field(&tp("t^2", &k), &one).unwrap());
        assert!(is_square_in_function_field(&tp("(t - 1)^2", &k), &tp("t^4", &k)).unwrap());
        assert!(!is_square_in_function_field(&tp("2*t^2", &k), &one).unwrap());
        assert!(!is_square_in_function_field(&tp("-t^2", &k), &one).unwrap());
        assert!(is_square_in_function_field(&tp("t^3", &k), &tp("t", &k)).unwrap());
        assert_eq!(is_square_in_function_field(&TPoly::zero(), &one), Err(DiophError::ZeroInput));
    }

    #[test]
    fn constants_in_cyclotomic_fields() {
        let k4 = CycloField::new(4);
        // -1 = i^2
        assert!(is_power_in_field(&Cyc::int(&k4, -1), 2).unwrap());
        // 2i = (1 + i)^2 lies outside the decided cases
        assert!(matches!(is_power_in_field(&tp("2*zeta", &k4).coeffs()[0], 2), Err(DiophError::UndecidedConstant(..))));
        // the norm of 3 + 3i is 18
        assert!(!is_power_in_field(&tp("3*zeta + 3", &k4).coeffs()[0], 2).unwrap());
        assert!(!is_power_in_field(&Cyc::zeta_pow(&k4, 1), 2).unwrap());
        let k3 = CycloField::new(3);
        // zeta_3 = (zeta_3^2)^2 and -1 = (-1)^3
        assert!(is_power_in_field(&Cyc::zeta_pow(&k3, 1), 2).unwrap());
        assert!(is_power_in_field(&Cyc::int(&k3, -1), 3).unwrap());
        assert!(!is_power_in_field(&Cyc::int(&k3, 2), 3).unwrap());
    }

    #[test]
    fn canonical_form() {
        let k = CycloField::new(2);
        let s = ProjectiveSolution::new(tp("2*t", &k), TPoly::zero(), tp("2*t^2", &k)).unwrap();
        assert_eq!(s.canonical().to_string(), "[1 : 0 : t]");
        assert!(ProjectiveSolution::parse("0;0;0", &k).is_err());
        assert!(ProjectiveSolution::parse("1;0", &k).is_err());
    }
}
