//! Built-in example surfaces.
//!
//! The four-square surface and the staircases `X_m` are strips of unit squares
//! whose vertical sides are glued by translation into one horizontal cylinder
//! and whose horizontal sides are paired by half-turns, square `i` with square
//! `i + m`. They were selected by exhaustive search against lists of required
//! properties; [`rederive_four_square`] and [`rederive_staircase`] rerun those
//! searches.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::affine::{geometric_veech_group, kernel_of_d, matcher, DEFAULT_ORBIT_CAP};
use crate::flow::{cylinder_decomposition, Direction, DEFAULT_MAX_SEPARATRIX_CROSSINGS};
use crate::fuchsian::FuchsianSignature;
use crate::geom::{Mat2, Vec2};
use crate::scalar::{rat, Scalar};
use crate::surface::{perfect_matchings, EdgeRef, FlatSurface, Gluing, GluingKind, Origami, Polygon, SquareSide, SquareTiled};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown corpus key {0:?}; expected torus, four-square, octagon, 4n-gon(n) or staircase-Xm(m)")]
    UnknownKey(String),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusEntry {
    pub key: String,
    #[serde(skip)]
    pub surface: FlatSurface,
    /// Known Veech group elements, when the surface is not square-tiled.
    pub generators: Vec<Mat2>,
    /// Type of the Veech group generated by `generators`.
    pub signature: Option<FuchsianSignature>,
    /// Properties the surface was selected for.
    pub properties: Vec<String>,
}

pub fn torus() -> FlatSurface {
    Origami::new(vec![0], vec![0]).expect("one square").to_surface()
}

/// The `2m x 1` strip: translation-glued vertical sides, horizontal sides of
/// squares `i` and `i + m` paired by half-turns.
pub fn staircase_tiling(m: usize) -> SquareTiled {
    let n = 2 * m;
    let mut pairs = Vec::new();
    for i in 0..n {
        pairs.push(((i, SquareSide::Right), ((i + 1) % n, SquareSide::Left)));
    }
    for i in 0..m {
        pairs.push(((i, SquareSide::Top), (i + m, SquareSide::Top)));
        pairs.push(((i, SquareSide::Bottom), (i + m, SquareSide::Bottom)));
    }
    SquareTiled { squares: n, pairs }
}

pub fn staircase(m: usize) -> Result<FlatSurface, CorpusError> {
    if m == 0 {
        return Err(CorpusError::Unsupported("staircase-Xm needs m >= 1".into()));
    }
    staircase_tiling(m).to_surface().map_err(|e| CorpusError::Unsupported(e.to_string()))
}

pub fn four_square() -> FlatSurface {
    staircase(2).expect("X_2 is valid")
}

fn half() -> BigRational {
    rat(1, 2)
}

/// Exact `(cos, sin)` of an angle in degrees that is a multiple of 30 or 45.
fn cos_sin_degrees(deg: i64) -> Option<(Scalar, Scalar)> {
    let cos = |d: i64| -> Option<Scalar> {
        let d = d.rem_euclid(360);
        let (base, neg) = match d {
            0..=90 => (d, false),
            91..=180 => (180 - d, true),
            181..=270 => (d - 180, true),
            _ => (360 - d, false),
        };
        let v = match base {
            0 => Scalar::one(),
            30 => Scalar::quad(BigRational::from_integer(BigInt::from(0)), half(), 3).ok()?,
            45 => Scalar::quad(BigRational::from_integer(BigInt::from(0)), half(), 2).ok()?,
            60 => Scalar::frac(1, 2),
            90 => Scalar::zero(),
            _ => return None,
        };
        Some(if neg { -v } else { v })
    };
    Some((cos(deg)?, cos(90 - deg)?))
}

/// Regular `4n`-gon with unit sides and opposite sides glued by translation.
///
/// Coordinates are exact for `n <= 3` (fields `Q`, `Q(sqrt 2)`, `Q(sqrt 3)`).
pub fn regular_4n_gon(n: usize) -> Result<FlatSurface, CorpusError> {
    if !(1..=3).contains(&n) {
        return Err(CorpusError::Unsupported(format!(
            "4n-gon({n}): exact coordinates are available for n = 1, 2, 3 only"
        )));
    }
    let sides = 4 * n;
    let step = 90 / n as i64;
    let mut vertices = vec![Vec2::zero()];
    for k in 0..sides - 1 {
        let (c, s) = cos_sin_degrees(k as i64 * step).expect("supported angle");
        let last = vertices.last().unwrap().clone();
        vertices.push(&last + &Vec2::new(c, s));
    }
    let half_sides = sides / 2;
    let gluings = (0..half_sides)
        .map(|k| Gluing { a: EdgeRef::new(0, k), b: EdgeRef::new(0, k + half_sides), kind: GluingKind::Translation })
        .collect();
    FlatSurface::new(vec![Polygon::new(vertices)], gluings, &[]).map_err(|e| CorpusError::Unsupported(e.to_string()))
}

pub fn octagon() -> FlatSurface {
    regular_4n_gon(2).expect("octagon is valid")
}

/// Rotation `R_n` by `pi / 2n` and the horizontal twist `T_n = (1, 2 cot(pi/4n); 0, 1)`.
pub fn regular_4n_gon_generators(n: usize) -> Result<(Mat2, Mat2), CorpusError> {
    let (c, s) = cos_sin_degrees(90 / n as i64)
        .filter(|_| (1..=3).contains(&n))
        .ok_or_else(|| CorpusError::Unsupported(format!("4n-gon({n}) generators")))?;
    let r = Mat2::new(c.clone(), -&s, s, c);
    // 2 cot(pi/4n) for n = 1, 2, 3
    let twist = match n {
        1 => Scalar::int(2),
        2 => Scalar::quad(rat(2, 1), rat(2, 1), 2).expect("valid"),
        _ => Scalar::quad(rat(4, 1), rat(2, 1), 3).expect("valid"),
    };
    Ok((r, Mat2::new(Scalar::one(), twist, Scalar::zero(), Scalar::one())))
}

/// The generators `R_n, T_n` generate the `(2n, inf, inf)` triangle group.
fn triangle_signature(gens: &[Mat2]) -> Option<FuchsianSignature> {
    let [r, _] = gens else { return None };
    // R_n is rotation by pi / 2n, of order 2n up to sign
    let mut p = r.clone();
    for k in 1..=64u32 {
        if p.is_plus_minus_identity() {
            return Some(FuchsianSignature::new(0, vec![Some(k), None, None]));
        }
        p = &p * r;
    }
    None
}

fn parse_arg(key: &str, prefix: &str) -> Option<usize> {
    key.strip_prefix(prefix)?.strip_suffix(')')?.trim().parse().ok()
}

pub fn by_key(key: &str) -> Result<CorpusEntry, CorpusError> {
    let entry = |surface, generators: Vec<Mat2>, properties: &[&str]| CorpusEntry {
        key: key.to_string(),
        surface,
        signature: triangle_signature(&generators),
        generators,
        properties: properties.iter().map(|p| p.to_string()).collect(),
    };
    if key == "torus" {
        return Ok(entry(torus(), vec![], &["one unit square, opposite sides glued", "genus 1, one marked point"]));
    }
    if key == "four-square" {
        return Ok(entry(four_square(), vec![], &FOUR_SQUARE_PROPERTIES));
    }
    if key == "octagon" {
        let (r, t) = regular_4n_gon_generators(2)?;
        return Ok(entry(octagon(), vec![r, t], &["regular octagon, opposite sides glued", "genus 2, one cone point of angle 6 pi"]));
    }
    if let Some(n) = parse_arg(key, "4n-gon(") {
        let (r, t) = regular_4n_gon_generators(n)?;
        return Ok(entry(regular_4n_gon(n)?, vec![r, t], &["regular 4n-gon, opposite sides glued", "genus n, one cone point"]));
    }
    if let Some(m) = parse_arg(key, "staircase-Xm(") {
        return Ok(entry(staircase(m)?, vec![], &STAIRCASE_PROPERTIES));
    }
    Err(CorpusError::UnknownKey(key.to_string()))
}

pub const FOUR_SQUARE_PROPERTIES: [&str; 6] = [
    "four unit squares, genus 2",
    "two cone points of angle 4 pi",
    "one horizontal cylinder, two vertical cylinders",
    "Veech group of index 3 in PSL(2,Z)",
    "(1,1;0,1) and (1,0;2,1) in the Veech group, (1,0;1,1) not",
    "eight automorphisms with derivative +-I",
];

pub const STAIRCASE_PROPERTIES: [&str; 3] = [
    "2m unit squares forming one horizontal cylinder",
    "horizontal sides paired by half-turns",
    "m even: genus m with two critical points; m odd: genus m - 1 with four critical points",
];

/// Cone points of angle other than `2 pi`.
pub fn critical_points(s: &FlatSurface) -> usize {
    s.cone_points().iter().filter(|c| !c.is_regular()).count()
}

fn cylinder_count(s: &FlatSurface, d: Direction) -> Option<usize> {
    cylinder_decomposition(s, &d, DEFAULT_MAX_SEPARATRIX_CROSSINGS).ok().map(|c| c.cylinders.len())
}

/// Square tilings with `squares` squares, sides paired by translations or half-turns.
fn all_tilings(squares: usize) -> Vec<SquareTiled> {
    let sides = |kinds: [SquareSide; 2]| -> Vec<(usize, SquareSide)> {
        (0..squares).flat_map(|i| kinds.map(|k| (i, k))).collect()
    };
    let horizontal = sides([SquareSide::Bottom, SquareSide::Top]);
    let vertical = sides([SquareSide::Left, SquareSide::Right]);
    let mh = perfect_matchings(horizontal.len());
    let mv = perfect_matchings(vertical.len());
    let mut out = Vec::new();
    for a in &mh {
        for b in &mv {
            let mut pairs: Vec<_> = a.iter().map(|&(x, y)| (horizontal[x], horizontal[y])).collect();
            pairs.extend(b.iter().map(|&(x, y)| (vertical[x], vertical[y])));
            out.push(SquareTiled { squares, pairs });
        }
    }
    out
}

fn four_square_shape(s: &FlatSurface) -> bool {
    let cones: Vec<u32> = s.cone_points().iter().filter(|c| !c.is_regular()).map(|c| c.angle_pi).collect();
    s.surface_type().genus == 2 && cones == [4, 4]
}

/// The selection predicate for the four-square surface.
pub fn is_four_square_candidate(s: &FlatSurface) -> bool {
    if !four_square_shape(s) {
        return false;
    }
    if cylinder_count(s, Direction::horizontal()) != Some(1) || cylinder_count(s, Direction::vertical()) != Some(2) {
        return false;
    }
    let Ok(g) = geometric_veech_group(s, DEFAULT_ORBIT_CAP) else { return false };
    let member = |m: Mat2| g.contains(&m).unwrap_or(false);
    g.index == 3
        && member(Mat2::ints(1, 1, 0, 1))
        && member(Mat2::ints(1, 0, 2, 1))
        && !member(Mat2::ints(1, 0, 1, 1))
        && kernel_of_d(s).map(|k| k.order == 8).unwrap_or(false)
}

/// Keeps one surface per isometry class. The unit squares of a square tiling
/// are already its Delaunay cells, so they are compared directly.
fn dedupe(found: Vec<FlatSurface>) -> Vec<FlatSurface> {
    let keys = crate::par::map(&found, |s| matcher::canonical_key(s, matcher::Mode::HalfTranslation));
    let mut seen = BTreeSet::new();
    found.into_iter().zip(keys).filter(|(_, k)| seen.insert(k.clone())).map(|(s, _)| s).collect()
}

/// Exhaustive search over four-square tilings, up to isometry.
///
/// Tilings are reduced to isometry classes before the expensive checks.
pub fn rederive_four_square() -> Vec<FlatSurface> {
    let tilings = all_tilings(4);
    let shaped = crate::par::map(&tilings, |t| t.to_surface().ok().filter(four_square_shape));
    let classes = dedupe(shaped.into_iter().flatten().collect());
    let found = crate::par::map(&classes, |s| is_four_square_candidate(s).then(|| s.clone()));
    found.into_iter().flatten().collect()
}

/// Whether the surface matches the staircase property list for this `m`.
pub fn is_staircase_candidate(s: &FlatSurface, m: usize) -> bool {
    let (genus, critical) = if m.is_multiple_of(2) { (m as u32, 2) } else { (m as u32 - 1, 4) };
    s.surface_type().genus == genus && critical_points(s) == critical && cylinder_count(s, Direction::horizontal()) == Some(1)
}

/// Search over `2m x 1` strips whose horizontal sides are paired by half-turns.
pub fn rederive_staircase(m: usize) -> Vec<FlatSurface> {
    let n = 2 * m;
    let mut found = Vec::new();
    for top in perfect_matchings(n) {
        for bottom in perfect_matchings(n) {
            let mut pairs: Vec<_> = (0..n).map(|i| ((i, SquareSide::Right), ((i + 1) % n, SquareSide::Left))).collect();
            pairs.extend(top.iter().map(|&(a, b)| ((a, SquareSide::Top), (b, SquareSide::Top))));
            pairs.extend(bottom.iter().map(|&(a, b)| ((a, SquareSide::Bottom), (b, SquareSide::Bottom))));
            if let Ok(s) = (SquareTiled { squares: n, pairs }).to_surface() {
                if is_staircase_candidate(&s, m) {
                    found.push(s);
                }
            }
        }
    }
    dedupe(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octagon_shape() {
        let s = octagon();
        assert_eq!(s.surface_type().genus, 2);
        assert_eq!(s.cone_points().len(), 1);
        assert_eq!(s.cone_points()[0].angle_pi, 6);
        assert_eq!(s.area(), Scalar::quad(rat(2, 1), rat(2, 1), 2).unwrap());
    }

    #[test]
    fn dodecagon_genus_three() {
        let s = regular_4n_gon(3).unwrap();
        assert_eq!(s.surface_type().genus, 3);
        assert_eq!(s.cone_points().len(), 1);
    }

    #[test]
    fn staircase_shapes() {
        for m in 1..=5 {
            let s = staircase(m).unwrap();
            assert!(is_staircase_candidate(&s, m), "m = {m}");
        }
    }

    #[test]
    fn keys() {
        assert!(by_key("staircase-Xm(3)").is_ok());
        assert!(by_key("4n-gon(2)").is_ok());
        assert!(matches!(by_key("sphere"), Err(CorpusError::UnknownKey(_))));
    }
}
