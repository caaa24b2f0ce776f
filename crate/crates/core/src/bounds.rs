//! Counting bounds for section candidates on surfaces with a one-cylinder
//! horizontal direction, and audits of the inequalities they rest on.
//!
//! Everything is evaluated exactly; multiples of pi are carried as a
//! coefficient and only turned into floats for display.

use std::f64::consts::PI;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::affine::{kernel_of_d, AffineError, KernelGroup};
use crate::flow::{cylinder_decomposition, Direction, FlowError, DEFAULT_MAX_SEPARATRIX_CROSSINGS};
use crate::fuchsian::{self, CuspEstimates, FuchsianError, FuchsianSignature};
use crate::geom::Mat2;
use crate::sections::{self, Quotient, SectionCandidates, SectionError};
use crate::scalar::{Scalar, ScalarError};
use crate::surface::FlatSurface;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("2p - 2 + k must be positive")]
    NotHyperbolic,
    #[error("3g - 3 + n must be positive")]
    TrivialModuli,
    #[error("missing data: {0}")]
    MissingData(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Section(#[from] SectionError),
    #[error(transparent)]
    Fuchsian(#[from] FuchsianError),
}

/// Image of the sign homomorphism on the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SgnCase {
    /// `{1}`
    Plus,
    /// `{1, -1}`
    PlusMinus,
}

impl SgnCase {
    fn factor(self) -> i64 {
        match self {
            SgnCase::Plus => 1,
            SgnCase::PlusMinus => 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsInput {
    /// `W / H` of the horizontal cylinder.
    pub modulus: Scalar,
    /// Upper estimate of the least horizontal parabolic translation length.
    pub b0: Scalar,
    /// Upper estimate of the least nonzero `|c|`.
    pub c0: Scalar,
    pub kernel_order: u64,
    pub sgn: SgnCase,
    pub genus: u32,
    pub punctures: u32,
    /// Saddle connection counts on the two boundary components, `n0 >= n1`.
    pub n0: usize,
    pub n1: usize,
    pub quotient_genus: u32,
    pub signature: Option<FuchsianSignature>,
}

impl BoundsInput {
    /// `3g - 3 + n`.
    pub fn moduli_dimension(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.punctures as i64
    }

    fn kernel(&self) -> Scalar {
        Scalar::int(self.kernel_order as i64)
    }
}

fn int(n: &BigInt) -> Scalar {
    Scalar::from(n.clone())
}

/// Intersection counts of a horizontal leaf (and of the horizontal saddle
/// connections) of the quotient with their image under an element with lower
/// left entry `c`.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCount {
    pub per_leaf: Scalar,
    pub saddle_union: Scalar,
}

pub fn cross_count(input: &BoundsInput, c: &Scalar) -> Result<CrossCount, BoundsError> {
    let per_leaf = (&(&input.modulus * &Scalar::int(input.sgn.factor())) / &input.kernel()).try_mul(&c.abs())?;
    let saddle_union = &per_leaf - &Scalar::int(2 * input.quotient_genus as i64 - 2);
    Ok(CrossCount { per_leaf, saddle_union })
}

/// Bound on the number of horizontal leaves fixed pointwise by the parabolic.
#[derive(Debug, Clone, Serialize)]
pub struct I0Bound {
    pub formula: i64,
    /// `max(formula, 1)`: the leaf through the fixed core is always counted.
    pub reported: i64,
    pub floored: bool,
}

fn ceiling_term(input: &BoundsInput, b0: &Scalar) -> Result<BigInt, ScalarError> {
    let x = (b0 * &input.kernel()).try_div(&input.modulus)?;
    match input.sgn {
        SgnCase::Plus => x.ceil(),
        SgnCase::PlusMinus => (&(&x / &Scalar::int(4)) + &Scalar::frac(1, 2)).ceil(),
    }
}

pub fn i0_bound(input: &BoundsInput) -> Result<I0Bound, BoundsError> {
    let c = ceiling_term(input, &input.b0)?;
    let formula = match input.sgn {
        SgnCase::Plus => c,
        SgnCase::PlusMinus => c - 1,
    };
    let formula: i64 = formula.try_into().map_err(|_| BoundsError::MissingData("ceiling out of range".into()))?;
    Ok(I0Bound { formula, reported: formula.max(1), floored: formula < 1 })
}

/// The bound for one value of `b0`, with `c` the lower-left entry used.
fn prop_bound_at(input: &BoundsInput, b0: &Scalar, c: &Scalar, sgn: SgnCase) -> Result<Scalar, ScalarError> {
    let x = (b0 * &input.kernel()).try_div(&input.modulus)?;
    let ceil = match sgn {
        SgnCase::Plus => (&x + &Scalar::one()).ceil()?,
        SgnCase::PlusMinus => (&(&x / &Scalar::int(4)) + &Scalar::frac(1, 2)).ceil()?,
    };
    let lead = &(&input.modulus * &Scalar::int(sgn.factor())) * &c.abs();
    Ok(&(&lead * &int(&ceil)) - &Scalar::int(2 * input.genus as i64 - 2))
}

#[derive(Debug, Clone, Serialize)]
pub struct PropBound {
    /// At the certified lower bound of `b0`.
    pub low: Scalar,
    /// At the enumerated estimate of `b0`.
    pub high: Scalar,
    /// The `{1, -1}` formula at the estimate, which holds in either case.
    pub fallback: Scalar,
    /// The lower bound of `b0` used for `low`.
    pub b0_lower: Scalar,
}

/// `mod / (8 (3g-3+n)^2)` or `mod / (4 (3g-3+n)^2)`, below the true `b0`.
fn b0_lower_bound(input: &BoundsInput) -> Result<Scalar, BoundsError> {
    let d = input.moduli_dimension();
    if d <= 0 {
        return Err(BoundsError::TrivialModuli);
    }
    let k = match input.sgn {
        SgnCase::Plus => 8,
        SgnCase::PlusMinus => 4,
    };
    Ok(input.modulus.try_div(&Scalar::int(k * d * d))?)
}

/// The count bound for the sign case of `input`, bracketed between the value
/// at the certified lower bound of `b0` and at the estimate. The ceiling is
/// nondecreasing in `b0`, so the true value lies between the two.
pub fn prop_bound(input: &BoundsInput) -> Result<PropBound, BoundsError> {
    let b0_lower = b0_lower_bound(input)?;
    let low = prop_bound_at(input, &b0_lower, &input.c0, input.sgn)?;
    let high = prop_bound_at(input, &input.b0, &input.c0, input.sgn)?;
    let fallback = prop_bound_at(input, &input.b0, &input.c0, SgnCase::PlusMinus)?;
    Ok(PropBound { low, high, fallback, b0_lower })
}

/// `pi_coefficient * pi + constant`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiValue {
    pub pi_coefficient: Scalar,
    pub constant: Scalar,
    /// For example `1152*pi - 2`.
    pub expression: String,
    pub value: f64,
}

impl PiValue {
    fn new(pi_coefficient: Scalar, constant: Scalar) -> Self {
        let value = pi_coefficient.to_f64() * PI + constant.to_f64();
        let expression = match constant.signum_checked() {
            Ok(0) => format!("{pi_coefficient}*pi"),
            Ok(s) if s < 0 => format!("{pi_coefficient}*pi - {}", -&constant),
            _ => format!("{pi_coefficient}*pi + {constant}"),
        };
        PiValue { pi_coefficient, constant, expression, value }
    }
}

/// `32 pi (2p-2+k) (3g-3+n)^2 (3g-2+n) - 2g + 2`.
pub fn global_bound(p: u32, k: u32, g: u32, n: u32) -> Result<PiValue, BoundsError> {
    let hyp = 2 * p as i64 - 2 + k as i64;
    if hyp <= 0 {
        return Err(BoundsError::NotHyperbolic);
    }
    let d = 3 * g as i64 - 3 + n as i64;
    if d <= 0 {
        return Err(BoundsError::TrivialModuli);
    }
    let coeff = 32 * hyp * d * d * (d + 1);
    Ok(PiValue::new(Scalar::int(coeff), Scalar::int(2 - 2 * g as i64)))
}

/// Inputs measured on a surface.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceData {
    pub input: BoundsInput,
    /// Cone points of angle other than `2 pi`, and punctures.
    pub critical: usize,
    /// Every zero is simple and every puncture a simple pole.
    pub simple_singularities: bool,
    /// Whether the core curve of the horizontal cylinder separates.
    pub separating_core: bool,
    /// Number of section candidates, when computed.
    pub sections: Option<usize>,
}

/// Gathers the bound inputs of `s` from its horizontal cylinder and kernel.
pub fn surface_data(
    s: &FlatSurface,
    kernel: &KernelGroup,
    b0: Scalar,
    c0: Scalar,
    quotient_genus: u32,
    signature: Option<FuchsianSignature>,
) -> Result<SurfaceData, BoundsError> {
    let d = cylinder_decomposition(s, &Direction::horizontal(), DEFAULT_MAX_SEPARATRIX_CROSSINGS)?;
    let [cyl] = d.cylinders.as_slice() else {
        return Err(BoundsError::MissingData(format!("horizontal direction has {} cylinders", d.cylinders.len())));
    };
    let (a, b) = (cyl.boundary[0].len(), cyl.boundary[1].len());
    let side = |i: usize| -> std::collections::BTreeSet<usize> { cyl.boundary[i].iter().map(|o| o / 2).collect() };
    let separating_core = side(0).is_disjoint(&side(1));
    let ty = s.surface_type();
    let cones = s.cone_points();
    let critical = cones.iter().filter(|c| !c.is_regular() || c.puncture).count();
    let simple_singularities = cones.iter().all(|c| if c.puncture { c.ord == -1 } else { c.ord == 0 || c.ord == 1 });
    let sgn = if kernel.sgn_image.contains(&-1) { SgnCase::PlusMinus } else { SgnCase::Plus };
    let input = BoundsInput {
        modulus: cyl.modulus.clone(),
        b0,
        c0,
        kernel_order: kernel.order as u64,
        sgn,
        genus: ty.genus,
        punctures: ty.punctures,
        n0: a.max(b),
        n1: a.min(b),
        quotient_genus,
        signature,
    };
    Ok(SurfaceData { input, critical, simple_singularities, separating_core, sections: None })
}

/// Everything measured on a surface on the way to its bounds.
#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub data: SurfaceData,
    pub estimates: CuspEstimates,
    #[serde(skip)]
    pub quotient: Quotient,
    pub candidates: SectionCandidates,
}

/// Measures `s` given generators of its Veech group. `b0` and `c0` come from
/// the words of length at most `max_word_len`.
pub fn measure(
    s: &FlatSurface,
    veech_generators: &[Mat2],
    signature: Option<FuchsianSignature>,
    max_word_len: usize,
) -> Result<Measurement, BoundsError> {
    let kernel = kernel_of_d(s)?;
    let elems = fuchsian::enumerate(&fuchsian::generators(veech_generators)?, max_word_len);
    let estimates = fuchsian::b0_c0_estimate(&elems)?;
    let quotient = sections::quotient_by_kernel(s, &kernel)?;
    let maps = sections::generator_maps(s, veech_generators)?;
    let candidates = sections::section_candidates(s, &maps, &kernel)?;
    let mut data = surface_data(
        s,
        &kernel,
        estimates.b0.clone(),
        estimates.c0.clone(),
        quotient.genus_y,
        signature,
    )?;
    data.sections = Some(candidates.count);
    Ok(Measurement { data, estimates, quotient, candidates })
}

#[derive(Debug, Clone, Serialize)]
pub struct Audit {
    pub lemma: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn audit(lemma: &str, lhs: impl ToString, rhs: impl ToString, pass: bool, note: Option<String>) -> Audit {
    Audit { lemma: lemma.into(), lhs: lhs.to_string(), rhs: rhs.to_string(), pass, note }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub inputs: BoundsInput,
    pub cross: CrossCount,
    pub i0: I0Bound,
    pub prop_bound: PropBound,
    pub global_bound: Option<PiValue>,
    pub audits: Vec<Audit>,
}

fn le(a: &Scalar, b: &Scalar) -> Result<bool, ScalarError> {
    Ok(a.cmp_checked(b)?.is_le())
}

/// Evaluates every bound for `data` and checks the supporting inequalities.
pub fn lemma_audit(data: &SurfaceData) -> Result<BoundsReport, BoundsError> {
    let inp = &data.input;
    let d = inp.moduli_dimension();
    if d <= 0 {
        return Err(BoundsError::MissingData("3g - 3 + n = 0".into()));
    }
    let mut audits = Vec::new();

    let sum = inp.n0 + inp.n1;
    let euler = 2 * inp.genus as i64 - 2 + data.critical as i64;
    audits.push(audit("average identity", format!("({}+{})/2", inp.n0, inp.n1), euler, sum as i64 == 2 * euler, None));
    let avg_ok = sum as i64 <= 4 * d;
    let equal = sum as i64 == 4 * d;
    let consistent = equal == data.simple_singularities;
    let note = match (equal, consistent) {
        (true, true) => "equality holds with simple singularities",
        (false, true) => "strict, as some singularity is not simple",
        (true, false) => "equality holds but some singularity is not simple",
        (false, false) => "strict although every singularity is simple",
    };
    audits.push(audit("average inequality", format!("{}/2", sum), 2 * d, avg_ok && consistent, Some(note.into())));

    let ratio_bound = Scalar::int(match inp.sgn {
        SgnCase::Plus => 8,
        SgnCase::PlusMinus => 4,
    } * d * d);
    let ratio = inp.modulus.try_div(&inp.b0)?;
    audits.push(audit(
        "modulus over b0",
        &ratio,
        &ratio_bound,
        le(&ratio, &ratio_bound)?,
        Some("b0 is an enumerated estimate, so the left side is a lower estimate".into()),
    ));
    let inv = inp.b0.try_div(&inp.modulus)?;
    audits.push(audit("b0 over modulus", &inv, 1, le(&inv, &Scalar::one())?, None));

    let kernel_bound = match inp.sgn {
        SgnCase::Plus => 2 * d,
        SgnCase::PlusMinus => 4 * d,
    };
    audits.push(audit("kernel order", inp.kernel_order, kernel_bound, inp.kernel_order as i64 <= kernel_bound, None));

    if data.separating_core {
        let x = (&inp.b0 * &inp.kernel()).try_div(&(&inp.modulus * &Scalar::int(4)))?;
        let c = (&x + &Scalar::frac(1, 2)).ceil()?;
        audits.push(audit("separating core curve", &c, 1, c <= BigInt::from(1), None));
    }

    let prop = prop_bound(inp)?;
    let ceil_plus = prop_bound_at(inp, &inp.b0, &inp.c0, SgnCase::Plus)?;
    audits.push(audit("fallback dominates", &ceil_plus, &prop.fallback, le(&ceil_plus, &prop.fallback)?, None));

    let global = match &inp.signature {
        Some(sig) => Some(global_bound(sig.genus, sig.k() as u32, inp.genus, inp.punctures)?),
        None => None,
    };
    if let Some(n) = data.sections {
        let ns = Scalar::int(n as i64);
        audits.push(audit("sections within proposition", n, &prop.low, le(&ns, &prop.low)?, None));
        if let Some(g) = &global {
            audits.push(audit("sections within theorem", n, g.value, (n as f64) <= g.value, None));
        }
    }
    Ok(BoundsReport {
        inputs: inp.clone(),
        cross: cross_count(inp, &inp.c0)?,
        i0: i0_bound(inp)?,
        prop_bound: prop,
        global_bound: global,
        audits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(modulus: i64, b0: i64, c0: i64, kernel: u64, sgn: SgnCase, genus: u32) -> BoundsInput {
        BoundsInput {
            modulus: Scalar::int(modulus),
            b0: Scalar::int(b0),
            c0: Scalar::int(c0),
            kernel_order: kernel,
            sgn,
            genus,
            punctures: 0,
            n0: 1,
            n1: 1,
            quotient_genus: 0,
            signature: None,
        }
    }

    #[test]
    fn cross_counts() {
        let c = cross_count(&input(1, 1, 1, 1, SgnCase::Plus, 1), &Scalar::one()).unwrap();
        assert_eq!(c.per_leaf, Scalar::one());
        assert_eq!(c.saddle_union, Scalar::int(3));
        let c = cross_count(&input(4, 1, 1, 8, SgnCase::PlusMinus, 2), &Scalar::int(2)).unwrap();
        assert_eq!(c.per_leaf, Scalar::int(4));
    }

    #[test]
    fn i0_floors_at_one() {
        assert_eq!(i0_bound(&input(1, 1, 1, 1, SgnCase::Plus, 1)).unwrap().reported, 1);
        let i = i0_bound(&input(4, 1, 1, 8, SgnCase::PlusMinus, 2)).unwrap();
        assert_eq!((i.formula, i.reported, i.floored), (0, 1, true));
        assert_eq!(i0_bound(&input(2, 2, 1, 3, SgnCase::Plus, 2)).unwrap().reported, 3);
    }

    #[test]
    fn proposition_values() {
        let mut inp = input(1, 1, 1, 1, SgnCase::Plus, 1);
        inp.punctures = 1;
        assert_eq!(prop_bound(&inp).unwrap().high, Scalar::int(2));
    }

    #[test]
    fn global_values() {
        let g = global_bound(0, 3, 2, 0).unwrap();
        assert_eq!((g.pi_coefficient.clone(), g.constant.clone()), (Scalar::int(1152), Scalar::int(-2)));
        assert!((g.value - (1152.0 * PI - 2.0)).abs() < 1e-9);
        assert_eq!(g.expression, "1152*pi - 2");
        assert!((global_bound(0, 3, 1, 1).unwrap().value - 64.0 * PI).abs() < 1e-9);
        assert_eq!(global_bound(0, 3, 1, 0).unwrap_err(), BoundsError::TrivialModuli);
        assert_eq!(global_bound(0, 2, 2, 0).unwrap_err(), BoundsError::NotHyperbolic);
    }
}
