//! Affine automorphisms with derivative `±I`, and the sign of their action on
//! the core curve of a one-cylinder direction.

use serde::Serialize;

use super::matcher::{isomorphisms, CellIso, Mode};
use super::{assemble, delaunay, AffineAuto, AffineError};
use crate::flow::walk::{advance, step, Pos, Step};
use crate::flow::{cylinder_decomposition, CylinderDecomposition, Direction, DEFAULT_MAX_SEPARATRIX_CROSSINGS};
use crate::geom::{Mat2, Vec2};
use crate::scalar::{Scalar, ScalarError};
use crate::surface::{EdgeRef, FlatSurface, PointLocation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Presentation {
    /// `<z -> z + c>`: every element preserves the core orientation.
    Translations,
    /// `<z -> -z + c>`: a single involution.
    Involution,
    /// `<z -> z + c, z -> -z + d>`.
    TranslationsAndInvolutions,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelElement {
    pub map: AffineAuto,
    pub sgn: i8,
    pub order: usize,
    pub involution: bool,
    #[serde(skip)]
    pub iso: CellIso,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelGroup {
    /// Elements, identity first.
    pub elements: Vec<KernelElement>,
    pub order: usize,
    pub sgn_image: Vec<i8>,
    /// Number of elements with `sgn = 1`.
    pub orientation_preserving: usize,
    pub presentation: Presentation,
    /// Whether the orientation-preserving elements form a cyclic group.
    pub cyclic_translations: bool,
    /// Whether every `sgn = -1` element has exactly two fixed points on the core
    /// curve; `None` without a one-cylinder horizontal direction.
    pub reversals_fix_two_core_points: Option<bool>,
    /// Circumference of the horizontal cylinder, when there is exactly one.
    #[serde(skip)]
    pub simple: Option<CylinderDecomposition>,
}

fn simple_horizontal(s: &FlatSurface) -> Option<CylinderDecomposition> {
    match cylinder_decomposition(s, &Direction::horizontal(), DEFAULT_MAX_SEPARATRIX_CROSSINGS) {
        Ok(d) if d.cylinders.len() == 1 => Some(d),
        _ => None,
    }
}

fn order_of(g: &CellIso, bound: usize) -> usize {
    let mut p = g.clone();
    for k in 1..=bound {
        if p.is_identity() {
            return k;
        }
        p = g.compose(&p);
    }
    0
}

/// Probe points strictly inside the cylinder and off its core.
fn probes(s: &FlatSurface, d: &CylinderDecomposition) -> Vec<(usize, Vec2)> {
    let cyl = &d.cylinders[0];
    let mut out = Vec::new();
    for k in 0..7 {
        let along = &cyl.circumference_param * &Scalar::frac(k, 7);
        let Ok(p) = advance(s, &cyl.core, &along) else { continue };
        for f in [Scalar::frac(1, 6), Scalar::frac(1, 5)] {
            let up = Pos { polygon: p.polygon, x: p.x.clone(), w: p.w.rot90() };
            if let Ok(q) = advance(s, &up, &(&cyl.height_param * &f)) {
                out.push((q.polygon, q.x));
            }
        }
    }
    out
}

fn sgn_on_cylinder(s: &FlatSurface, d: &CylinderDecomposition, h: &AffineAuto) -> Result<i8, AffineError> {
    for (p, x) in probes(s, d) {
        let Some((_, side)) = d.nearer_boundary(s, p, &x)? else { continue };
        let Some((q, y)) = h.apply(p, &x)? else { continue };
        let Some((_, image_side)) = d.nearer_boundary(s, q, &y)? else { continue };
        return Ok(if side == image_side { 1 } else { -1 });
    }
    Err(AffineError::Inconsistent("no probe point decides the action on the cylinder".into()))
}

/// Representations of a regular point in every polygon containing it.
fn representations(s: &FlatSurface, q: usize, y: &Vec2) -> Result<Vec<(usize, Vec2)>, ScalarError> {
    let mut out = vec![(q, y.clone())];
    if let PointLocation::Edge(e) = s.polygon(q).locate(y)? {
        let (f, chart) = s.transition(EdgeRef::new(q, e));
        out.push((f.polygon, chart.apply(y)));
    }
    Ok(out)
}

/// Parameter along the core curve at which the regular point `(q, y)` lies.
fn core_parameter(s: &FlatSurface, core: &Pos, circumference: &Scalar, q: usize, y: &Vec2) -> Result<Option<Scalar>, AffineError> {
    let reps = representations(s, q, y)?;
    let mut pos = core.clone();
    let mut acc = Scalar::zero();
    let w2 = core.w.norm2();
    while (&acc - circumference).signum_checked()? < 0 {
        let (t, next) = match step(s, &pos)? {
            Step::Crossed { t, next, .. } => (t, next),
            Step::Arrived { .. } => return Err(AffineError::Inconsistent("core curve meets a vertex".into())),
        };
        for (rp, ry) in &reps {
            if *rp != pos.polygon {
                continue;
            }
            let r = ry - &pos.x;
            if pos.w.cross(&r).signum_checked()? != 0 {
                continue;
            }
            let lam = &pos.w.dot(&r) / &w2;
            if lam.signum_checked()? >= 0 && (&lam - &t).signum_checked()? <= 0 {
                return Ok(Some(&acc + &lam));
            }
        }
        acc = &acc + &t;
        pos = next;
    }
    Ok(None)
}

fn same_point(s: &FlatSurface, a: (usize, &Vec2), b: (usize, &Vec2)) -> Result<bool, ScalarError> {
    Ok(s.canonical_point(a.0, a.1)? == s.canonical_point(b.0, b.1)?)
}

/// Checks that `h`, reversing the core curve, fixes exactly two of its points.
fn fixes_two_core_points(s: &FlatSurface, d: &CylinderDecomposition, h: &AffineAuto) -> Result<bool, AffineError> {
    let cyl = &d.cylinders[0];
    let w = &cyl.circumference_param;
    let core = &cyl.core;
    let Some((q, y)) = h.apply(core.polygon, &core.x)? else {
        return Ok(false);
    };
    let Some(s0) = core_parameter(s, core, w, q, &y)? else {
        return Ok(false);
    };
    // h reverses the core, so it acts as the reflection t -> s0 - t of the circle
    let half = Scalar::frac(1, 2);
    let mut fixed = Vec::new();
    for t in [&s0 * &half, &(&s0 * &half) + &(w * &half)] {
        let p = advance(s, core, &t)?;
        let Some((hq, hy)) = h.apply(p.polygon, &p.x)? else {
            return Ok(false);
        };
        if !same_point(s, (p.polygon, &p.x), (hq, &hy))? {
            return Ok(false);
        }
        fixed.push(s.canonical_point(p.polygon, &p.x)?);
    }
    Ok(fixed[0] != fixed[1])
}

/// All affine automorphisms of `s` with derivative `±I`.
///
/// `sgn` is read off the one-cylinder horizontal decomposition when there is
/// one; translation surfaces without such a direction use the global chart sign.
pub fn kernel_of_d(s: &FlatSurface) -> Result<KernelGroup, AffineError> {
    let cells = delaunay(s)?;
    let mut isos = isomorphisms(&cells.surface, &cells.surface, Mode::HalfTranslation)?;
    isos.sort_by_key(|g| !g.is_identity());
    let simple = simple_horizontal(s);
    if simple.is_none() && !s.is_translation_surface() {
        return Err(AffineError::NoSimpleDirectionGiven);
    }
    let n = isos.len();
    let mut elements = Vec::new();
    for iso in isos {
        let map = assemble(&Mat2::identity(), &cells, &cells, &iso)?;
        let sgn = match &simple {
            Some(d) => sgn_on_cylinder(s, d, &map)?,
            None => map.global_sign().ok_or_else(|| AffineError::Inconsistent("mixed signs on a translation surface".into()))?,
        };
        let order = order_of(&iso, n);
        let involution = iso.compose(&iso).is_identity();
        elements.push(KernelElement { map, sgn, order, involution, iso });
    }
    let plus = elements.iter().filter(|e| e.sgn > 0).count();
    let mut sgn_image = vec![1];
    if plus < n {
        sgn_image.push(-1);
    }
    let presentation = if plus == n {
        Presentation::Translations
    } else if plus == 1 {
        Presentation::Involution
    } else {
        Presentation::TranslationsAndInvolutions
    };
    let cyclic_translations = elements.iter().any(|e| e.sgn > 0 && e.order == plus);
    let reversals_fix_two_core_points = match &simple {
        Some(d) => {
            let mut all = true;
            for e in elements.iter().filter(|e| e.sgn < 0) {
                all &= e.involution && fixes_two_core_points(s, d, &e.map)?;
            }
            Some(all)
        }
        None => None,
    };
    Ok(KernelGroup {
        order: n,
        elements,
        sgn_image,
        orientation_preserving: plus,
        presentation,
        cyclic_translations,
        reversals_fix_two_core_points,
        simple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Origami;

    #[test]
    fn marked_torus_kernel() {
        let s = Origami::new(vec![0], vec![0]).unwrap().to_surface();
        let k = kernel_of_d(&s).unwrap();
        assert_eq!(k.order, 2);
        assert_eq!(k.sgn_image, vec![1, -1]);
        assert_eq!(k.presentation, Presentation::Involution);
        assert_eq!(k.reversals_fix_two_core_points, Some(true));
    }

    #[test]
    fn two_square_torus_kernel() {
        // translation by one square and the two half-turns
        let s = Origami::from_one_indexed(&[2, 1], &[1, 2]).unwrap().to_surface();
        let k = kernel_of_d(&s).unwrap();
        assert_eq!(k.order, 4);
        assert_eq!(k.orientation_preserving, 2);
        assert_eq!(k.presentation, Presentation::TranslationsAndInvolutions);
        assert!(k.cyclic_translations);
        assert_eq!(k.reversals_fix_two_core_points, Some(true));
    }
}
