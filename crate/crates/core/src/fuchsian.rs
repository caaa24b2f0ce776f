//! Finitely generated Fuchsian groups: word enumeration, Ford regions,
//! Shimizu's inequality, areas and small lower-left entries.
//!
//! Group elements are exact matrices up to sign. A group whose cusp at
//! infinity has width `b0` (stabilizer generated by `(1,b0;0,1)`) is treated
//! in the frame conjugated by `diag(1/sqrt(b0), sqrt(b0))`, where the width
//! becomes `1`; there the lower-left entry of every element reads `c * b0`.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::geom::Mat2;
use crate::par;
use crate::scalar::{Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FuchsianError {
    #[error("signature has non-positive area")]
    NotHyperbolic,
    #[error("isometric circles do not cover the strip; enumerate longer words")]
    UnboundedBelow,
    #[error("no element with small |c| up to word length {0}")]
    SearchCapExceeded(usize),
    #[error("no parabolic element fixing infinity among the enumerated elements")]
    NoParabolicFound,
    #[error("no element with c != 0 among the enumerated elements")]
    NoHyperbolicFound,
    #[error("generator is not unimodular")]
    NotUnimodular,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A group element up to sign, with a word in the generators producing it.
/// Letter `i > 0` is generator `i - 1`, and `-i` its inverse.
#[derive(Debug, Clone, Serialize)]
pub struct GroupElement {
    pub matrix: Mat2,
    pub word: Vec<i32>,
}

impl GroupElement {
    pub fn new(matrix: Mat2) -> Result<Self, FuchsianError> {
        if !matrix.is_unimodular() {
            return Err(FuchsianError::NotUnimodular);
        }
        Ok(GroupElement { matrix: matrix.psl_normalized(), word: Vec::new() })
    }

    fn key(&self) -> String {
        matrix_key(&self.matrix)
    }
}

fn matrix_key(m: &Mat2) -> String {
    format!("{}|{}|{}|{}", m.a.key(), m.b.key(), m.c.key(), m.d.key())
}

/// Generators as group elements, with one-letter words.
pub fn generators(mats: &[Mat2]) -> Result<Vec<GroupElement>, FuchsianError> {
    mats.iter()
        .enumerate()
        .map(|(i, m)| {
            let mut g = GroupElement::new(m.clone())?;
            g.word = vec![i as i32 + 1];
            Ok(g)
        })
        .collect()
}

/// All elements given by words of length at most `max_word_len`, up to sign,
/// each with a shortest word. The identity comes first.
pub fn enumerate(gens: &[GroupElement], max_word_len: usize) -> Vec<GroupElement> {
    let mut letters: Vec<(i32, Mat2)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        letters.push((i as i32 + 1, g.matrix.clone()));
        letters.push((-(i as i32 + 1), g.matrix.inverse_unimodular()));
    }
    let id = GroupElement { matrix: Mat2::identity(), word: Vec::new() };
    let mut seen: HashMap<String, usize> = HashMap::from([(id.key(), 0)]);
    let mut out = vec![id];
    let mut frontier = vec![0];
    for _ in 0..max_word_len {
        let layer: Vec<&GroupElement> = frontier.iter().map(|&i| &out[i]).collect();
        let products = par::map(&layer, |e| {
            letters
                .iter()
                .map(|(l, m)| {
                    let mut word = e.word.clone();
                    word.push(*l);
                    GroupElement { matrix: (&e.matrix * m).psl_normalized(), word }
                })
                .collect::<Vec<_>>()
        });
        frontier.clear();
        for g in products.into_iter().flatten() {
            let k = g.key();
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(k) {
                e.insert(out.len());
                frontier.push(out.len());
                out.push(g);
            }
        }
        if frontier.is_empty() {
            break;
        }
    }
    out
}

/// Evaluates a word in the generators.
pub fn evaluate(gens: &[GroupElement], word: &[i32]) -> Mat2 {
    word.iter().fold(Mat2::identity(), |acc, &l| {
        let g = &gens[l.unsigned_abs() as usize - 1].matrix;
        let m = if l > 0 { g.clone() } else { g.inverse_unimodular() };
        &acc * &m
    })
}

fn is_parabolic_at_infinity(m: &Mat2) -> bool {
    m.c.is_zero() && !m.b.is_zero() && (&m.a * &m.a - Scalar::one()).is_zero()
}

/// Upper estimates of `b0 = inf |b|` over parabolics `(1,b;0,1)` and
/// `c0 = inf |c|` over elements with `c != 0`. Deeper enumerations can only
/// lower them.
#[derive(Debug, Clone, Serialize)]
pub struct CuspEstimates {
    pub b0: Scalar,
    pub c0: Scalar,
    pub b0_f64: f64,
    pub c0_f64: f64,
}

pub fn b0_c0_estimate(elems: &[GroupElement]) -> Result<CuspEstimates, FuchsianError> {
    let b0 = min_abs(elems.iter().filter(|e| is_parabolic_at_infinity(&e.matrix)).map(|e| &e.matrix.b))?
        .ok_or(FuchsianError::NoParabolicFound)?;
    let c0 = min_abs(elems.iter().filter(|e| !e.matrix.c.is_zero()).map(|e| &e.matrix.c))?
        .ok_or(FuchsianError::NoHyperbolicFound)?;
    Ok(CuspEstimates { b0_f64: b0.to_f64(), c0_f64: c0.to_f64(), b0, c0 })
}

fn min_abs<'a>(xs: impl Iterator<Item = &'a Scalar>) -> Result<Option<Scalar>, ScalarError> {
    let mut best: Option<Scalar> = None;
    for x in xs {
        let a = x.abs();
        if best.as_ref().map_or(Ok(true), |b| a.cmp_checked(b).map(|o| o.is_lt()))? {
            best = Some(a);
        }
    }
    Ok(best)
}

/// Shimizu's inequality in the cusp-normalized frame.
///
/// The cusp width is the least enumerated one, so the parabolic used is not a
/// proper power of any enumerated element; shorter words might still find one.
#[derive(Debug, Clone, Serialize)]
pub struct ShimizuVerdict {
    pub pass: bool,
    /// Width of the cusp at infinity used for normalization.
    pub b0: Scalar,
    /// Least normalized `|c b0|` over elements with `c != 0`.
    pub min_normalized_c: Option<f64>,
    pub violators: Vec<Mat2>,
}

pub fn shimizu_check(elems: &[GroupElement]) -> Result<ShimizuVerdict, FuchsianError> {
    let b0 = match b0_c0_estimate(elems) {
        Ok(e) => e.b0,
        Err(FuchsianError::NoHyperbolicFound) => Scalar::one(),
        Err(e) => return Err(e),
    };
    let mut violators = Vec::new();
    let mut min_c: Option<f64> = None;
    for e in elems.iter().filter(|e| !e.matrix.c.is_zero()) {
        let nc = (&e.matrix.c * &b0).abs();
        if (&nc - &Scalar::one()).signum_checked()? < 0 {
            violators.push(e.matrix.clone());
        }
        let f = nc.to_f64();
        min_c = Some(min_c.map_or(f, |m| m.min(f)));
    }
    Ok(ShimizuVerdict {
        pass: violators.is_empty(),
        b0,
        min_normalized_c: min_c,
        violators,
    })
}

/// Order of a cone point of the quotient; `None` for a cusp.
pub type ConeOrder = Option<u32>;

/// Type `(p, k: nu_1, ..., nu_k)` of a Fuchsian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuchsianSignature {
    pub genus: u32,
    pub orders: Vec<ConeOrder>,
}

impl FuchsianSignature {
    pub fn new(genus: u32, orders: Vec<ConeOrder>) -> Self {
        FuchsianSignature { genus, orders }
    }

    pub fn k(&self) -> usize {
        self.orders.len()
    }

    /// Number of cusps.
    pub fn k0(&self) -> usize {
        self.orders.iter().filter(|o| o.is_none()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Area {
    /// Area divided by pi, exactly.
    pub pi_multiple: String,
    pub value: f64,
}

/// `2 pi (2p - 2 + sum (1 - 1/nu))`.
pub fn gauss_bonnet_area(sig: &FuchsianSignature) -> Result<Area, FuchsianError> {
    let mut chi = BigRational::from_integer((2 * sig.genus as i64 - 2).into());
    for o in &sig.orders {
        chi += match o {
            Some(n) if *n >= 2 => BigRational::one() - BigRational::new(1.into(), (*n as i64).into()),
            Some(_) => return Err(FuchsianError::NotHyperbolic),
            None => BigRational::one(),
        };
    }
    if chi <= BigRational::zero() {
        return Err(FuchsianError::NotHyperbolic);
    }
    let m = chi * BigRational::from_integer(2.into());
    let value = Scalar::from_rational(m.clone()).to_f64() * PI;
    Ok(Area { pi_multiple: m.to_string(), value })
}

/// One arc of the lower boundary of the Ford region.
#[derive(Debug, Clone, Serialize)]
pub struct FordArc {
    pub center: f64,
    pub radius: f64,
    pub from: f64,
    pub to: f64,
    pub matrix: Mat2,
}

#[derive(Debug, Clone, Serialize)]
pub struct FordRegion {
    /// The strip is `|Re z| < strip_half_width`, i.e. half the cusp width.
    pub strip_half_width: f64,
    pub arcs: Vec<FordArc>,
    /// Real points where arcs meet the boundary: cusps of the region.
    pub real_vertices: Vec<f64>,
    pub area: f64,
    /// Bound on the floating point error of `area`. The region itself is only
    /// as good as the enumeration that produced it.
    pub error: f64,
    /// Highest point of the lower boundary; at most `1 / b0` under Shimizu.
    pub max_height: f64,
}

impl FordRegion {
    /// Cusp count estimated as infinity plus the real vertices, with the
    /// endpoints of the strip counted once.
    pub fn cusp_estimate(&self) -> usize {
        let w = self.strip_half_width;
        1 + self.real_vertices.iter().filter(|&&x| x < w - 1e-9).count()
    }
}

/// Lower envelope of the strip cut out by the isometric circles.
///
/// Every circle `|z - a| = r` has height squared `-x^2 + 2 a x + r^2 - a^2`,
/// so the upper envelope of the circles is that of the lines
/// `2 a x + r^2 - a^2`, and the area `int dx / h(x)` over each arc is a
/// difference of arcsines.
pub fn ford_region(elems: &[GroupElement]) -> Result<FordRegion, FuchsianError> {
    let b0 = match b0_c0_estimate(elems) {
        Ok(e) => e.b0_f64,
        Err(FuchsianError::NoParabolicFound) => 1.0,
        Err(FuchsianError::NoHyperbolicFound) => return Err(FuchsianError::UnboundedBelow),
        Err(e) => return Err(e),
    };
    let w = b0 / 2.0;
    // circles keyed by their exact bottom row
    let mut circles: HashMap<String, (f64, f64, Mat2)> = HashMap::new();
    for e in elems.iter().filter(|e| !e.matrix.c.is_zero()) {
        let m = &e.matrix;
        let key = format!("{}|{}", m.c.key(), m.d.key());
        let (c, d) = (m.c.to_f64(), m.d.to_f64());
        let (a, r) = (-d / c, 1.0 / c.abs());
        if a + r <= -w || a - r >= w {
            continue;
        }
        circles.entry(key).or_insert((a, r, m.clone()));
    }
    if circles.is_empty() {
        return Err(FuchsianError::UnboundedBelow);
    }
    let mut lines: Vec<(f64, f64, f64, f64, Mat2)> =
        circles.into_values().map(|(a, r, m)| (2.0 * a, r * r - a * a, a, r, m)).collect();
    lines.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    // keep the highest line of each slope
    let mut uniq: Vec<(f64, f64, f64, f64, Mat2)> = Vec::new();
    for l in lines {
        if let Some(last) = uniq.last() {
            if (last.0 - l.0).abs() < 1e-15 {
                uniq.pop();
            }
        }
        uniq.push(l);
    }
    // upper hull by increasing slope
    let cross = |p: &(f64, f64, f64, f64, Mat2), q: &(f64, f64, f64, f64, Mat2)| (p.1 - q.1) / (q.0 - p.0);
    let mut hull: Vec<(f64, f64, f64, f64, Mat2)> = Vec::new();
    for l in uniq {
        while hull.len() >= 2 {
            let n = hull.len();
            if cross(&hull[n - 2], &l) <= cross(&hull[n - 2], &hull[n - 1]) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(l);
    }
    let mut arcs = Vec::new();
    let mut area = 0.0;
    let mut max_height: f64 = 0.0;
    let mut real_vertices = Vec::new();
    let tol = 1e-9;
    for i in 0..hull.len() {
        let lo = if i == 0 { f64::NEG_INFINITY } else { cross(&hull[i - 1], &hull[i]) };
        let hi = if i + 1 == hull.len() { f64::INFINITY } else { cross(&hull[i], &hull[i + 1]) };
        let (from, to) = (lo.max(-w), hi.min(w));
        if from >= to {
            continue;
        }
        let (_, _, a, r, m) = &hull[i];
        if a - r > from + tol || a + r < to - tol {
            return Err(FuchsianError::UnboundedBelow);
        }
        let s1 = ((from - a) / r).clamp(-1.0, 1.0);
        let s2 = ((to - a) / r).clamp(-1.0, 1.0);
        area += s2.asin() - s1.asin();
        let top = if (from..=to).contains(a) { *r } else { (r * r - (from - a).powi(2)).max(r * r - (to - a).powi(2)).max(0.0).sqrt() };
        max_height = max_height.max(top);
        for x in [from, to] {
            if (r * r - (x - a).powi(2)).abs() < tol && !real_vertices.iter().any(|v: &f64| (v - x).abs() < tol) {
                real_vertices.push(x);
            }
        }
        arcs.push(FordArc { center: *a, radius: *r, from, to, matrix: m.clone() });
    }
    real_vertices.sort_by(f64::total_cmp);
    let error = 16.0 * f64::EPSILON * (arcs.len() as f64 + 1.0) * area.max(1.0);
    Ok(FordRegion { strip_half_width: w, arcs, real_vertices, area, error, max_height })
}

#[derive(Debug, Clone, Serialize)]
pub struct SmallC {
    pub element: GroupElement,
    /// `|c| b0`, the lower-left entry in the cusp-normalized frame.
    pub normalized_c: f64,
    pub bound: f64,
    pub word_length: usize,
}

/// An element with `1 <= |c| b0 < area - k0 + 1`, searching words of growing
/// length up to `max_word_len`.
pub fn small_c_search(gens: &[GroupElement], area: f64, k0: usize, max_word_len: usize) -> Result<SmallC, FuchsianError> {
    let bound = area - k0 as f64 + 1.0;
    for len in 1..=max_word_len {
        let elems = enumerate(gens, len);
        let b0 = match b0_c0_estimate(&elems) {
            Ok(e) => e.b0,
            Err(FuchsianError::NoHyperbolicFound) => continue,
            Err(FuchsianError::NoParabolicFound) => Scalar::one(),
            Err(e) => return Err(e),
        };
        let mut best: Option<(f64, &GroupElement)> = None;
        for e in elems.iter().filter(|e| !e.matrix.c.is_zero()) {
            let nc = (&e.matrix.c * &b0).abs();
            if (&nc - &Scalar::one()).signum_checked()? < 0 {
                continue;
            }
            let f = nc.to_f64();
            if f < bound && best.is_none_or(|(b, _)| f < b) {
                best = Some((f, e));
            }
        }
        if let Some((normalized_c, e)) = best {
            return Ok(SmallC { element: e.clone(), normalized_c, bound, word_length: len });
        }
    }
    Err(FuchsianError::SearchCapExceeded(max_word_len))
}

/// Trace bound, closed geodesic length bound and collar width for a group of
/// genus `p` with `k` cone points.
#[derive(Debug, Clone, Serialize)]
pub struct GeodesicBound {
    pub gamma: f64,
    pub length_bound: f64,
    pub collar_width: f64,
}

pub fn geodesic_length_bound(p: u32, k: u32) -> Result<GeodesicBound, FuchsianError> {
    let gamma = 2.0 * PI * (2.0 * p as f64 - 2.0 + k as f64) - k as f64 + 1.0;
    if gamma <= 0.0 {
        return Err(FuchsianError::NotHyperbolic);
    }
    let length_bound = 2.0 * (gamma * gamma / 2.0 + 1.0).acosh();
    let collar_width = 2.0 * (2.0 / (gamma * (gamma * gamma + 4.0).sqrt())).asinh();
    Ok(GeodesicBound { gamma, length_bound, collar_width })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modular() -> Vec<GroupElement> {
        generators(&[Mat2::ints(0, -1, 1, 0), Mat2::ints(1, 1, 0, 1)]).unwrap()
    }

    fn level_two() -> Vec<GroupElement> {
        generators(&[Mat2::ints(1, 1, 0, 1), Mat2::ints(1, 0, 2, 1)]).unwrap()
    }

    #[test]
    fn short_words_of_the_modular_group() {
        let e = enumerate(&modular(), 1);
        assert_eq!(e.len(), 4);
        let t = generators(&[Mat2::ints(1, 1, 0, 1)]).unwrap();
        assert_eq!(enumerate(&t, 5).len(), 11);
    }

    #[test]
    fn words_evaluate_to_their_matrices() {
        let g = level_two();
        for e in enumerate(&g, 4) {
            assert_eq!(evaluate(&g, &e.word).psl_normalized(), e.matrix);
        }
    }

    #[test]
    fn level_two_products() {
        let e = enumerate(&level_two(), 2);
        assert!(e.iter().any(|g| g.matrix == Mat2::ints(3, 1, 2, 1)));
    }

    #[test]
    fn areas() {
        let a = gauss_bonnet_area(&FuchsianSignature::new(0, vec![Some(2), Some(3), None])).unwrap();
        assert_eq!(a.pi_multiple, "1/3");
        let b = gauss_bonnet_area(&FuchsianSignature::new(0, vec![Some(2), None, None])).unwrap();
        assert!((b.value - PI).abs() < 1e-12);
        let c = gauss_bonnet_area(&FuchsianSignature::new(0, vec![None, None, None])).unwrap();
        assert_eq!(c.pi_multiple, "2");
        assert_eq!(gauss_bonnet_area(&FuchsianSignature::new(0, vec![Some(2), Some(2)])), Err(FuchsianError::NotHyperbolic));
    }

    #[test]
    fn modular_ford_region() {
        let f = ford_region(&enumerate(&modular(), 6)).unwrap();
        assert!((f.area - PI / 3.0).abs() < 1e-3);
        assert_eq!(f.cusp_estimate(), 1);
    }

    #[test]
    fn level_two_ford_region() {
        let f = ford_region(&enumerate(&level_two(), 8)).unwrap();
        assert!((f.area - PI).abs() < 1e-2);
        assert_eq!(f.cusp_estimate(), 2);
    }

    #[test]
    fn lone_parabolic_is_unbounded() {
        let t = generators(&[Mat2::ints(1, 1, 0, 1)]).unwrap();
        assert_eq!(ford_region(&enumerate(&t, 3)).unwrap_err(), FuchsianError::UnboundedBelow);
    }

    #[test]
    fn shimizu() {
        assert!(shimizu_check(&enumerate(&modular(), 5)).unwrap().pass);
        let v = shimizu_check(&enumerate(&level_two(), 8)).unwrap();
        assert!(v.pass);
        assert_eq!(v.min_normalized_c, Some(2.0));
        let mut bad = enumerate(&modular(), 2);
        bad.push(GroupElement { matrix: Mat2::new(Scalar::one(), Scalar::zero(), Scalar::frac(1, 2), Scalar::one()), word: vec![] });
        let v = shimizu_check(&bad).unwrap();
        assert!(!v.pass);
        assert_eq!(v.violators.len(), 1);
    }

    #[test]
    fn small_c() {
        let s = small_c_search(&modular(), PI / 3.0, 1, 4).unwrap();
        assert_eq!(s.element.matrix.c.abs(), Scalar::one());
        let s = small_c_search(&level_two(), PI, 2, 4).unwrap();
        assert_eq!(s.element.matrix, Mat2::ints(1, 0, 2, 1));
    }

    #[test]
    fn cusp_estimates() {
        let e = b0_c0_estimate(&enumerate(&modular(), 4)).unwrap();
        assert_eq!((e.b0, e.c0), (Scalar::one(), Scalar::one()));
        let e = b0_c0_estimate(&enumerate(&level_two(), 8)).unwrap();
        assert_eq!((e.b0, e.c0), (Scalar::one(), Scalar::int(2)));
    }

    #[test]
    fn geodesic_bounds() {
        let g = geodesic_length_bound(0, 3).unwrap();
        assert!((g.gamma - (2.0 * PI - 2.0)).abs() < 1e-12);
        assert!((g.length_bound - 2.0 * (g.gamma * g.gamma / 2.0 + 1.0).acosh()).abs() < 1e-12);
        assert!((geodesic_length_bound(1, 1).unwrap().gamma - 2.0 * PI).abs() < 1e-12);
        assert_eq!(geodesic_length_bound(0, 0).unwrap_err(), FuchsianError::NotHyperbolic);
    }
}
