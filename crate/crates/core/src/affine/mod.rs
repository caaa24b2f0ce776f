//! Affine automorphisms of flat surfaces and their derivatives.
//!
//! Surfaces are compared through their Delaunay cell complexes, which are
//! determined by the flat metric alone. An affine map with derivative `A`
//! exists from `s` to itself exactly when `A s` and `s` have isomorphic cell
//! complexes, and the pieces of the map are read off from the isomorphism.

pub mod delaunay;
mod kernel;
pub mod matcher;
mod veech;

pub use delaunay::{delaunay, CellComplex, Piece};
pub use kernel::{kernel_of_d, KernelElement, KernelGroup, Presentation};
pub use matcher::{CellIso, Mode};
pub use veech::{
    geometric_veech_group, origami_veech_group, VeechGroupResult, DEFAULT_ORBIT_CAP,
};

use serde::Serialize;
use thiserror::Error;

use crate::flow::FlowError;
use crate::geom::{Chart, Mat2, Vec2};
use crate::scalar::{Scalar, ScalarError};
use crate::surface::{FlatSurface, Polygon, SurfaceError, SurfacePoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("no simple cylinder decomposition in the horizontal direction")]
    NoSimpleDirectionGiven,
    #[error("SL(2,Z) orbit exceeds {0} surfaces")]
    OrbitBoundExceeded(usize),
    #[error("matrix is not integral: {0}")]
    NotIntegral(String),
    #[error("indeterminate predicate: {0}")]
    IndeterminateSign(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Surface(SurfaceError),
    #[error(transparent)]
    Flow(FlowError),
}

impl From<ScalarError> for AffineError {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::Indeterminate(s) => AffineError::IndeterminateSign(s),
            other => AffineError::Surface(SurfaceError::Scalar(other)),
        }
    }
}

impl From<SurfaceError> for AffineError {
    fn from(e: SurfaceError) -> Self {
        match e {
            SurfaceError::NotUnimodular => AffineError::NotUnimodular,
            SurfaceError::Scalar(ScalarError::Indeterminate(s)) => AffineError::IndeterminateSign(s),
            other => AffineError::Surface(other),
        }
    }
}

impl From<FlowError> for AffineError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::IndeterminateSign(s) => AffineError::IndeterminateSign(s),
            other => AffineError::Flow(other),
        }
    }
}

/// One affine piece `x -> sign * A x + translation`, defined on a convex
/// region of a source polygon and landing in a target polygon.
#[derive(Debug, Clone, Serialize)]
pub struct AffinePiece {
    pub source: usize,
    pub region: Vec<Vec2>,
    pub target: usize,
    pub sign: i8,
    pub translation: Vec2,
}

/// An affine map between flat surfaces, given piecewise.
///
/// The derivative is `sign * A` on each piece; `derivative` stores `A` up to
/// sign. When source and target are the same surface this is an element of
/// the affine group.
#[derive(Debug, Clone, Serialize)]
pub struct AffineAuto {
    pub derivative: Mat2,
    pub pieces: Vec<AffinePiece>,
}

fn signed(v: Vec2, sign: i8) -> Vec2 {
    if sign > 0 {
        v
    } else {
        -v
    }
}

impl AffinePiece {
    fn apply(&self, a: &Mat2, x: &Vec2) -> Vec2 {
        &signed(a.apply(x), self.sign) + &self.translation
    }
}

impl AffineAuto {
    /// Image of the point `x` of polygon `polygon`.
    pub fn apply(&self, polygon: usize, x: &Vec2) -> Result<Option<(usize, Vec2)>, ScalarError> {
        for pc in self.pieces.iter().filter(|p| p.source == polygon) {
            if Polygon::new(pc.region.clone()).contains(x)? {
                return Ok(Some((pc.target, pc.apply(&self.derivative, x))));
            }
        }
        Ok(None)
    }

    /// Image point together with the sign of the piece used.
    pub fn apply_signed(&self, polygon: usize, x: &Vec2) -> Result<Option<(usize, Vec2, i8)>, ScalarError> {
        for pc in self.pieces.iter().filter(|p| p.source == polygon) {
            if Polygon::new(pc.region.clone()).contains(x)? {
                return Ok(Some((pc.target, pc.apply(&self.derivative, x), pc.sign)));
            }
        }
        Ok(None)
    }

    /// Image of a surface point, canonicalized on the target surface.
    pub fn apply_point(&self, target: &FlatSurface, polygon: usize, x: &Vec2) -> Result<Option<SurfacePoint>, ScalarError> {
        match self.apply(polygon, x)? {
            Some((q, y)) => Ok(Some(target.canonical_point(q, &y)?)),
            None => Ok(None),
        }
    }

    /// Whether every piece has the same sign (always true on translation surfaces).
    pub fn global_sign(&self) -> Option<i8> {
        let first = self.pieces.first()?.sign;
        self.pieces.iter().all(|p| p.sign == first).then_some(first)
    }

    /// `self` after `first`, both self-maps of the same surface.
    pub fn compose(&self, first: &AffineAuto) -> Result<AffineAuto, ScalarError> {
        let derivative = &self.derivative * &first.derivative;
        let fi = first.derivative.inverse_unimodular();
        let mut pieces = Vec::new();
        for p1 in &first.pieces {
            let image: Vec<Vec2> = p1.region.iter().map(|x| p1.apply(&first.derivative, x)).collect();
            for p2 in self.pieces.iter().filter(|p| p.source == p1.target) {
                let meet = delaunay::clip_convex(&image, &p2.region)?;
                if meet.is_empty() {
                    continue;
                }
                // pull the overlap back through the first map
                let region = meet
                    .iter()
                    .map(|y| signed(fi.apply(&(y - &p1.translation)), p1.sign))
                    .collect();
                let sign = p1.sign * p2.sign;
                let translation = &signed(self.derivative.apply(&p1.translation), p2.sign) + &p2.translation;
                pieces.push(AffinePiece { source: p1.source, region, target: p2.target, sign, translation });
            }
        }
        Ok(AffineAuto { derivative, pieces })
    }

    /// Total area of the pieces, which equals the surface area for a bijection.
    pub fn domain_area(&self) -> Scalar {
        self.pieces.iter().fold(Scalar::zero(), |acc, p| &acc + &Polygon::new(p.region.clone()).area())
    }
}

/// Builds the affine map `s -> t` with derivative `a` from an isomorphism of
/// the complexes of `a s` and `t`.
fn assemble(a: &Mat2, src: &CellComplex, dst: &CellComplex, iso: &CellIso) -> Result<AffineAuto, ScalarError> {
    let inv = a.inverse_unimodular();
    let mut pieces = Vec::new();
    for (c, cell_pieces) in src.pieces.iter().enumerate() {
        let kappa = &iso.charts[c];
        let kappa_inv = kappa.inverse();
        for p1 in cell_pieces {
            let chi1_inv = p1.to_polygon.inverse();
            for p2 in &dst.pieces[iso.map[c]] {
                let pulled: Vec<Vec2> = p2.region.iter().map(|y| kappa_inv.apply(y)).collect();
                let meet = delaunay::clip_convex(&p1.region, &pulled)?;
                if meet.is_empty() {
                    continue;
                }
                let region = meet.iter().map(|y| inv.apply(&p1.to_polygon.apply(y))).collect();
                let k: Chart = p2.to_polygon.compose(kappa).compose(&chi1_inv);
                pieces.push(AffinePiece { source: p1.polygon, region, target: p2.polygon, sign: k.sign, translation: k.t });
            }
        }
    }
    Ok(AffineAuto { derivative: a.clone(), pieces })
}

fn areas_match(a: &FlatSurface, b: &FlatSurface) -> Result<bool, ScalarError> {
    Ok(a.area().try_sub(&b.area())?.signum_checked()? == 0)
}

/// An isometry `s1 -> s2` whose pieces are translations (or half-turns when
/// either surface is only a half-translation surface).
pub fn translation_equivalent(s1: &FlatSurface, s2: &FlatSurface) -> Result<Option<AffineAuto>, AffineError> {
    if !areas_match(s1, s2)? {
        return Ok(None);
    }
    let (d1, d2) = (delaunay(s1)?, delaunay(s2)?);
    let mode = Mode::for_surfaces(s1, s2);
    match matcher::first_isomorphism(&d1.surface, &d2.surface, mode)? {
        Some(iso) => Ok(Some(assemble(&Mat2::identity(), &d1, &d2, &iso)?)),
        None => Ok(None),
    }
}

/// The affine automorphism of `s` with derivative `±a`, if one exists.
///
/// On translation surfaces a map with derivative exactly `a` is preferred.
pub fn is_affine_auto(s: &FlatSurface, a: &Mat2) -> Result<Option<AffineAuto>, AffineError> {
    if !a.is_unimodular() {
        return Err(AffineError::NotUnimodular);
    }
    let image = s.apply_matrix(a)?;
    let (da, ds) = (delaunay(&image)?, delaunay(s)?);
    let mut found = None;
    if s.is_translation_surface() {
        found = matcher::first_isomorphism(&da.surface, &ds.surface, Mode::Translation)?;
    }
    if found.is_none() {
        found = matcher::first_isomorphism(&da.surface, &ds.surface, Mode::HalfTranslation)?;
    }
    match found {
        Some(iso) => Ok(Some(assemble(a, &da, &ds, &iso)?)),
        None => Ok(None),
    }
}

/// Conjugation by `R = (-1,0;0,1)`.
pub fn mirror(a: &Mat2) -> Mat2 {
    Mat2::new(a.a.clone(), -&a.b, -&a.c, a.d.clone())
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorCheck {
    pub matrix: Mat2,
    pub passes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorReport {
    pub checks: Vec<GeneratorCheck>,
    /// Every generator is the derivative of an affine automorphism, so the
    /// group they generate lies in the Veech group.
    pub all_pass: bool,
}

pub fn check_generators(s: &FlatSurface, gens: &[Mat2]) -> Result<GeneratorReport, AffineError> {
    let mut checks = Vec::new();
    for g in gens {
        checks.push(GeneratorCheck { matrix: g.clone(), passes: is_affine_auto(s, g)?.is_some() });
    }
    let all_pass = checks.iter().all(|c| c.passes);
    Ok(GeneratorReport { checks, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Origami;

    fn torus() -> FlatSurface {
        Origami::new(vec![0], vec![0]).unwrap().to_surface()
    }

    #[test]
    fn identity_is_affine() {
        let s = Origami::from_one_indexed(&[2, 3, 1], &[1, 3, 2]).unwrap().to_surface();
        let h = is_affine_auto(&s, &Mat2::identity()).unwrap().unwrap();
        assert_eq!(h.domain_area(), s.area());
    }

    #[test]
    fn torus_shear_maps_points() {
        let s = torus();
        let t = Mat2::ints(1, 1, 0, 1);
        let h = is_affine_auto(&s, &t).unwrap().unwrap();
        assert_eq!(h.domain_area(), Scalar::one());
        // (1/4, 1/2) goes to (3/4, 1/2) or its negative mod the lattice
        let (q, y) = h.apply(0, &Vec2::new(Scalar::frac(1, 4), Scalar::frac(1, 2))).unwrap().unwrap();
        assert_eq!(q, 0);
        let target = [Vec2::new(Scalar::frac(3, 4), Scalar::frac(1, 2)), Vec2::new(Scalar::frac(1, 4), Scalar::frac(1, 2))];
        assert!(target.contains(&y), "{y}");
    }

    #[test]
    fn not_unimodular_is_rejected() {
        assert_eq!(is_affine_auto(&torus(), &Mat2::ints(2, 0, 0, 1)).unwrap_err(), AffineError::NotUnimodular);
    }

    #[test]
    fn different_areas_are_not_equivalent() {
        let two = Origami::from_one_indexed(&[2, 1], &[1, 2]).unwrap().to_surface();
        assert!(translation_equivalent(&torus(), &two).unwrap().is_none());
    }

    #[test]
    fn mirror_conjugates() {
        assert_eq!(mirror(&Mat2::ints(1, 1, 0, 1)), Mat2::ints(1, -1, 0, 1));
        assert_eq!(mirror(&Mat2::identity()), Mat2::identity());
    }

    #[test]
    fn composition_multiplies_derivatives() {
        let s = Origami::from_one_indexed(&[2, 1, 3], &[3, 2, 1]).unwrap().to_surface();
        let a = Mat2::ints(1, 2, 0, 1);
        let b = Mat2::ints(1, 0, 2, 1);
        if let (Some(ha), Some(hb)) = (is_affine_auto(&s, &a).unwrap(), is_affine_auto(&s, &b).unwrap()) {
            let c = ha.compose(&hb).unwrap();
            assert_eq!(c.derivative, &a * &b);
            assert_eq!(c.domain_area(), s.area());
        }
    }
}
