//! Rooted serializations of Delaunay cell complexes.
//!
//! A root is a cell, a starting edge of that cell and a global sign. Walking
//! the gluing graph breadth first from a root writes down every edge vector,
//! puncture flag and adjacency relative to the visit order. Two complexes are
//! isomorphic by an isometry with derivative `+1` (or `±1`) exactly when some
//! pair of roots produces equal serializations, and the visit orders then give
//! the isomorphism cell by cell.

use std::fmt::Write;

use crate::geom::{Chart, Vec2};
use crate::par;
use crate::scalar::ScalarError;
use crate::surface::{EdgeRef, FlatSurface};

/// Which chart changes an isomorphism may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `z -> z + c` only.
    Translation,
    /// `z -> z + c` or `z -> -z + c`.
    HalfTranslation,
}

impl Mode {
    fn signs(self) -> &'static [i8] {
        match self {
            Mode::Translation => &[1],
            Mode::HalfTranslation => &[1, -1],
        }
    }

    /// Mode appropriate for comparing `a` with `b`.
    pub fn for_surfaces(a: &FlatSurface, b: &FlatSurface) -> Mode {
        if a.is_translation_surface() && b.is_translation_surface() {
            Mode::Translation
        } else {
            Mode::HalfTranslation
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Root {
    cell: usize,
    offset: usize,
    sign: i8,
}

#[derive(Debug, Clone, Copy)]
struct Visit {
    cell: usize,
    offset: usize,
    sign: i8,
}

fn signed(v: Vec2, sign: i8) -> Vec2 {
    if sign > 0 {
        v
    } else {
        -v
    }
}

fn serialize(c: &FlatSurface, root: Root) -> (String, Vec<Visit>) {
    let cells = c.polygons();
    let mut index = vec![usize::MAX; cells.len()];
    let mut visits = vec![Visit { cell: root.cell, offset: root.offset, sign: root.sign }];
    index[root.cell] = 0;
    let mut out = String::new();
    let mut k = 0;
    while k < visits.len() {
        let Visit { cell, offset, sign } = visits[k];
        let poly = &cells[cell];
        let n = poly.len();
        let _ = write!(out, "[{n}");
        for i in 0..n {
            let e = (offset + i) % n;
            let punct = c.cone_points()[c.corner_class(crate::surface::Corner { polygon: cell, vertex: e })].puncture;
            let (f, kind) = c.partner(EdgeRef::new(cell, e));
            let nsign = sign * kind.sign();
            if index[f.polygon] == usize::MAX {
                index[f.polygon] = visits.len();
                visits.push(Visit { cell: f.polygon, offset: f.edge, sign: nsign });
            }
            let v = &visits[index[f.polygon]];
            let m = cells[f.polygon].len();
            let rel = (f.edge + m - v.offset) % m;
            let _ = write!(
                out,
                ";{}{}>{}.{}{}",
                signed(poly.edge(e), sign).key(),
                if punct { "*" } else { "" },
                index[f.polygon],
                rel,
                if nsign == v.sign { "+" } else { "-" }
            );
        }
        out.push(']');
        k += 1;
    }
    (out, visits)
}

fn roots(c: &FlatSurface, mode: Mode) -> Vec<Root> {
    let mut out = Vec::new();
    for (cell, poly) in c.polygons().iter().enumerate() {
        for offset in 0..poly.len() {
            for &sign in mode.signs() {
                out.push(Root { cell, offset, sign });
            }
        }
    }
    out
}

/// Canonical string of a cell complex: the least serialization over all roots.
pub fn canonical_key(c: &FlatSurface, mode: Mode) -> String {
    roots(c, mode).into_iter().map(|r| serialize(c, r).0).min().unwrap_or_default()
}

/// Isomorphism between two cell complexes: cell `i` goes to cell `map[i]` by `charts[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellIso {
    pub map: Vec<usize>,
    pub charts: Vec<Chart>,
}

impl CellIso {
    pub fn identity(n: usize) -> CellIso {
        CellIso { map: (0..n).collect(), charts: vec![Chart::identity(); n] }
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &CellIso) -> CellIso {
        let map = first.map.iter().map(|&j| self.map[j]).collect();
        let charts = first.map.iter().zip(&first.charts).map(|(&j, ch)| self.charts[j].compose(ch)).collect();
        CellIso { map, charts }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j) && self.charts.iter().all(|c| *c == Chart::identity())
    }
}

fn iso_from(a: &FlatSurface, va: &[Visit], b: &FlatSurface, vb: &[Visit]) -> CellIso {
    let n = va.len();
    let mut map = vec![0; n];
    let mut charts = vec![Chart::identity(); n];
    for (x, y) in va.iter().zip(vb) {
        let sign = x.sign * y.sign;
        let from = a.polygon(x.cell).vertex(x.offset);
        let to = b.polygon(y.cell).vertex(y.offset);
        let lin = signed(from.clone(), sign);
        map[x.cell] = y.cell;
        charts[x.cell] = Chart { sign, t: to - &lin };
    }
    CellIso { map, charts }
}

/// All isomorphisms from `a` to `b` allowed by `mode`.
pub fn isomorphisms(a: &FlatSurface, b: &FlatSurface, mode: Mode) -> Result<Vec<CellIso>, ScalarError> {
    if a.polygons().len() != b.polygons().len() || a.polygons().is_empty() {
        return Ok(Vec::new());
    }
    let (key, va) = serialize(a, Root { cell: 0, offset: 0, sign: 1 });
    if va.len() != a.polygons().len() {
        return Ok(Vec::new());
    }
    let candidates = roots(b, mode);
    let found = par::map(&candidates, |&r| {
        let (kb, vb) = serialize(b, r);
        (kb == key).then(|| iso_from(a, &va, b, &vb))
    });
    Ok(found.into_iter().flatten().collect())
}

/// Some isomorphism from `a` to `b`, if there is one.
pub fn first_isomorphism(a: &FlatSurface, b: &FlatSurface, mode: Mode) -> Result<Option<CellIso>, ScalarError> {
    if a.polygons().len() != b.polygons().len() || a.polygons().is_empty() {
        return Ok(None);
    }
    let (key, va) = serialize(a, Root { cell: 0, offset: 0, sign: 1 });
    for r in roots(b, mode) {
        let (kb, vb) = serialize(b, r);
        if kb == key {
            return Ok(Some(iso_from(a, &va, b, &vb)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Origami;

    #[test]
    fn torus_has_two_half_translation_symmetries() {
        let s = Origami::new(vec![0], vec![0]).unwrap().to_surface();
        assert_eq!(isomorphisms(&s, &s, Mode::Translation).unwrap().len(), 1);
        let all = isomorphisms(&s, &s, Mode::HalfTranslation).unwrap();
        assert_eq!(all.len(), 2);
        let minus = all.iter().find(|i| i.charts[0].sign < 0).unwrap();
        assert!(minus.compose(minus).is_identity());
    }

    #[test]
    fn canonical_key_ignores_order() {
        let o = Origami::from_one_indexed(&[2, 3, 1], &[1, 3, 2]).unwrap();
        let s = o.to_surface();
        let p = s.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(canonical_key(&s, Mode::Translation), canonical_key(&p, Mode::Translation));
        assert!(first_isomorphism(&s, &p, Mode::Translation).unwrap().is_some());
    }
}
