//! Saddle connections up to a length bound, by unfolding wedges of directions
//! from every corner.

use std::collections::BTreeMap;

use serde::Serialize;

use super::walk::{direction_key, normalize_direction};
use super::FlowError;
use crate::geom::{Chart, Vec2};
use crate::par;
use crate::scalar::{Scalar, ScalarError};
use crate::surface::{Corner, EdgeRef, FlatSurface};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaddleConnection {
    pub start_class: usize,
    pub end_class: usize,
    /// Holonomy, normalized so its first nonzero coordinate is positive.
    pub holonomy: Vec2,
    /// Edges crossed, in order, when travelling along `holonomy`.
    pub crossings: Vec<EdgeRef>,
}

struct Found {
    key: String,
    canonical: bool,
    start: Corner,
    end: Corner,
    holonomy: Vec2,
    crossings: Vec<EdgeRef>,
}

fn segment_dist2(a: &Vec2, b: &Vec2) -> Result<Scalar, ScalarError> {
    let e = b - a;
    let t = -a.dot(&e);
    if t.signum_checked()? <= 0 {
        return Ok(a.norm2());
    }
    let e2 = e.norm2();
    if (&t - &e2).signum_checked()? >= 0 {
        return Ok(b.norm2());
    }
    let c = a.cross(&e);
    Ok(&c * &c / e2)
}

fn from_corner(s: &FlatSurface, start: Corner, bound2: &Scalar) -> Result<Vec<Found>, ScalarError> {
    let poly = s.polygon(start.polygon);
    let n = poly.len();
    let origin = poly.vertex(start.vertex).clone();
    let start_key = |u: &Vec2| direction_key(start, u);
    let mut out = Vec::new();
    let record = |out: &mut Vec<Found>, end: Corner, u: Vec2, local: Vec2, crossings: Vec<EdgeRef>| -> Result<(), ScalarError> {
        let (ec, eu) = normalize_direction(s, end, &-&local)?;
        let k_start = start_key(&u);
        let k_end = direction_key(ec, &eu);
        let canonical = k_start <= k_end;
        let key = if canonical { k_start } else { k_end };
        out.push(Found { key, canonical, start, end: ec, holonomy: u, crossings });
        Ok(())
    };

    for j in 0..n {
        if j == start.vertex || j == (start.vertex + n - 1) % n {
            continue;
        }
        let u = poly.vertex(j) - &origin;
        if (u.norm2() - bound2).signum_checked()? <= 0 {
            record(&mut out, Corner { polygon: start.polygon, vertex: j }, u.clone(), u, vec![])?;
        }
    }

    struct Frame {
        polygon: usize,
        to_start: Chart,
        l: Vec2,
        r: Vec2,
        entry: usize,
        crossings: Vec<EdgeRef>,
    }
    let mut stack = Vec::new();
    let push_across = |stack: &mut Vec<Frame>, polygon: usize, e: usize, to_start: &Chart, l: Vec2, r: Vec2, crossings: &[EdgeRef]| {
        let er = EdgeRef::new(polygon, e);
        let (f, chart) = s.transition(er);
        let mut cr = crossings.to_vec();
        cr.push(er);
        stack.push(Frame { polygon: f.polygon, to_start: to_start.compose(&chart.inverse()), l, r, entry: f.edge, crossings: cr });
    };
    for j in 0..n {
        if j == start.vertex || j == (start.vertex + n - 1) % n {
            continue;
        }
        let a = poly.vertex(j) - &origin;
        let b = poly.vertex(j + 1) - &origin;
        if (segment_dist2(&a, &b)? - bound2).signum_checked()? <= 0 {
            push_across(&mut stack, start.polygon, j, &Chart::identity(), a, b, &[]);
        }
    }
    while let Some(fr) = stack.pop() {
        let q = s.polygon(fr.polygon);
        let m = q.len();
        for i in 0..m {
            if i == fr.entry || i == (fr.entry + 1) % m {
                continue;
            }
            let u = &fr.to_start.apply(q.vertex(i)) - &origin;
            if fr.l.cross(&u).signum_checked()? > 0
                && u.cross(&fr.r).signum_checked()? > 0
                && (u.norm2() - bound2).signum_checked()? <= 0
            {
                let local = fr.to_start.apply_linear(&u);
                record(&mut out, Corner { polygon: fr.polygon, vertex: i }, u, local, fr.crossings.clone())?;
            }
        }
        for e in 0..m {
            if e == fr.entry {
                continue;
            }
            let a = &fr.to_start.apply(q.vertex(e)) - &origin;
            let b = &fr.to_start.apply(q.vertex(e + 1)) - &origin;
            if a.cross(&b).signum_checked()? <= 0 {
                continue;
            }
            let nl = if fr.l.cross(&a).signum_checked()? > 0 { a.clone() } else { fr.l.clone() };
            let nr = if b.cross(&fr.r).signum_checked()? > 0 { b.clone() } else { fr.r.clone() };
            if nl.cross(&nr).signum_checked()? <= 0 {
                continue;
            }
            if (segment_dist2(&a, &b)? - bound2).signum_checked()? > 0 {
                continue;
            }
            push_across(&mut stack, fr.polygon, e, &fr.to_start, nl, nr, &fr.crossings);
        }
    }
    Ok(out)
}

/// All saddle connections with holonomy length at most `length_bound`, each reported once.
pub fn saddle_connections(s: &FlatSurface, length_bound: &Scalar) -> Result<Vec<SaddleConnection>, FlowError> {
    let bound2 = length_bound * length_bound;
    let corners: Vec<Corner> = s
        .polygons()
        .iter()
        .enumerate()
        .flat_map(|(p, poly)| (0..poly.len()).map(move |k| Corner { polygon: p, vertex: k }))
        .collect();
    let per_corner = par::map(&corners, |&c| from_corner(s, c, &bound2));
    let mut unique: BTreeMap<String, Found> = BTreeMap::new();
    for found in per_corner {
        for f in found? {
            if f.canonical {
                unique.entry(f.key.clone()).or_insert(f);
            }
        }
    }
    let mut out: Vec<(Scalar, SaddleConnection)> = unique
        .into_values()
        .map(|f| {
            let mut start_class = s.corner_class(f.start);
            let mut end_class = s.corner_class(f.end);
            let normalized = f.holonomy.normalized_direction();
            let mut crossings = f.crossings;
            if normalized != f.holonomy {
                std::mem::swap(&mut start_class, &mut end_class);
                crossings = crossings.into_iter().rev().map(|e| s.partner(e).0).collect();
            }
            (normalized.norm2(), SaddleConnection { start_class, end_class, holonomy: normalized, crossings })
        })
        .collect();
    out.sort_by(|(la, a), (lb, b)| {
        la.cmp_checked(lb)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.holonomy.key().cmp(&b.holonomy.key()))
            .then_with(|| (a.start_class, a.end_class).cmp(&(b.start_class, b.end_class)))
            .then_with(|| a.crossings.cmp(&b.crossings))
    });
    Ok(out.into_iter().map(|(_, sc)| sc).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Origami;

    fn holonomies(s: &FlatSurface, bound: Scalar) -> Vec<Vec2> {
        saddle_connections(s, &bound).unwrap().into_iter().map(|c| c.holonomy).collect()
    }

    #[test]
    fn torus_unit_bound() {
        let s = Origami::new(vec![0], vec![0]).unwrap().to_surface();
        let h = holonomies(&s, Scalar::one());
        assert_eq!(h.len(), 2);
        assert!(h.contains(&Vec2::ints(1, 0)) && h.contains(&Vec2::ints(0, 1)));
    }

    #[test]
    fn torus_diagonals() {
        let s = Origami::new(vec![0], vec![0]).unwrap().to_surface();
        let h = holonomies(&s, Scalar::sqrt_int(2));
        assert_eq!(h.len(), 4);
        assert!(h.contains(&Vec2::ints(1, 1)) && h.contains(&Vec2::ints(1, -1)));
    }

    #[test]
    fn torus_count_matches_primitive_vectors() {
        // saddle connections on the once-marked torus are the primitive lattice vectors up to sign
        let s = Origami::new(vec![0], vec![0]).unwrap().to_surface();
        let h = holonomies(&s, Scalar::int(5));
        let mut oracle = 0;
        for x in 0i64..=5 {
            for y in -5i64..=5 {
                if (x > 0 || y > 0) && x * x + y * y <= 25 && num_integer::gcd(x, y) == 1 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(h.len(), oracle);
    }
}
