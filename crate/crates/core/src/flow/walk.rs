//! Straight-line motion inside polygons and across gluings, and the
//! combinatorics of directions at a vertex.

use std::cmp::Ordering;

use crate::geom::Vec2;
use crate::scalar::{Scalar, ScalarError};
use crate::surface::{Corner, EdgeRef, FlatSurface, Polygon};

/// First boundary point hit by the ray `x + t w`, `t >= 0`.
#[derive(Debug, Clone)]
pub enum Exit {
    Edge { edge: usize, t: Scalar, point: Vec2 },
    Vertex { vertex: usize, t: Scalar },
}

pub fn exit(poly: &Polygon, x: &Vec2, w: &Vec2) -> Result<Exit, ScalarError> {
    let n = poly.len();
    let mut best: Option<(usize, Scalar)> = None;
    for i in 0..n {
        let d = poly.edge(i);
        let den = d.cross(w);
        if den.signum_checked()? >= 0 {
            continue;
        }
        let t = d.cross(&(poly.vertex(i) - x)) / &den;
        let better = match &best {
            None => true,
            Some((_, bt)) => t.cmp_checked(bt)? == Ordering::Less,
        };
        if better {
            best = Some((i, t));
        }
    }
    let (i, t) = best.expect("a nonzero direction leaves a bounded convex polygon");
    let d = poly.edge(i);
    let s = (x - poly.vertex(i)).cross(w) / d.cross(w);
    if s.signum_checked()? == 0 {
        return Ok(Exit::Vertex { vertex: i, t });
    }
    if (&s - Scalar::one()).signum_checked()? == 0 {
        return Ok(Exit::Vertex { vertex: (i + 1) % n, t });
    }
    let point = poly.vertex(i) + &d.scale(&s);
    Ok(Exit::Edge { edge: i, t, point })
}

/// A moving point: polygon, position and velocity in that polygon's chart.
#[derive(Debug, Clone)]
pub struct Pos {
    pub polygon: usize,
    pub x: Vec2,
    pub w: Vec2,
}

#[derive(Debug, Clone)]
pub enum Step {
    /// Left `polygon` through `edge` at parameter `t`; `exit_point` is in the old chart.
    Crossed { edge: EdgeRef, t: Scalar, exit_point: Vec2, next: Pos },
    /// Reached a vertex after parameter `t`, arriving with velocity `w`.
    Arrived { corner: Corner, t: Scalar },
}

pub fn step(s: &FlatSurface, pos: &Pos) -> Result<Step, ScalarError> {
    let poly = s.polygon(pos.polygon);
    match exit(poly, &pos.x, &pos.w)? {
        Exit::Vertex { vertex, t } => Ok(Step::Arrived { corner: Corner { polygon: pos.polygon, vertex }, t }),
        Exit::Edge { edge, t, point } => {
            let e = EdgeRef::new(pos.polygon, edge);
            let (f, chart) = s.transition(e);
            let next = Pos { polygon: f.polygon, x: chart.apply(&point), w: chart.apply_linear(&pos.w) };
            Ok(Step::Crossed { edge: e, t, exit_point: point, next })
        }
    }
}

/// Moves a regular point by parameter `length` along its velocity.
///
/// Fails if a vertex is met before the full length is travelled.
pub fn advance(s: &FlatSurface, pos: &Pos, length: &Scalar) -> Result<Pos, ScalarError> {
    let mut cur = pos.clone();
    let mut remaining = length.clone();
    loop {
        if remaining.signum_checked()? == 0 {
            return Ok(cur);
        }
        let poly = s.polygon(cur.polygon);
        let (t, crossing) = match exit(poly, &cur.x, &cur.w)? {
            Exit::Vertex { t, .. } => (t, None),
            Exit::Edge { edge, t, point } => (t, Some((edge, point))),
        };
        if (&t - &remaining).signum_checked()? >= 0 {
            let x = &cur.x + &cur.w.scale(&remaining);
            if crossing.is_none() && (&t - &remaining).signum_checked()? == 0 {
                return Err(ScalarError::Indeterminate("advance ends at a vertex".into()));
            }
            return Ok(Pos { polygon: cur.polygon, x, w: cur.w });
        }
        let Some((edge, point)) = crossing else {
            return Err(ScalarError::Indeterminate("advance passes through a vertex".into()));
        };
        let (f, chart) = s.transition(EdgeRef::new(cur.polygon, edge));
        remaining = &remaining - &t;
        cur = Pos { polygon: f.polygon, x: chart.apply(&point), w: chart.apply_linear(&cur.w) };
    }
}

/// `u` lies in the half-open wedge `[e_out, e_in_rev)` of the corner.
pub fn in_wedge(s: &FlatSurface, c: Corner, u: &Vec2) -> Result<bool, ScalarError> {
    let poly = s.polygon(c.polygon);
    let n = poly.len();
    let v = poly.vertex(c.vertex);
    let eo = poly.edge(c.vertex);
    let ei = poly.vertex(c.vertex + n - 1) - v;
    Ok(eo.cross(u).signum_checked()? >= 0 && u.cross(&ei).signum_checked()? > 0)
}

/// Counterclockwise neighbour of a corner and the sign of the chart change.
pub fn ccw_corner(s: &FlatSurface, c: Corner) -> (Corner, i8) {
    let n = s.polygon(c.polygon).len();
    let (f, kind) = s.partner(EdgeRef::new(c.polygon, (c.vertex + n - 1) % n));
    (Corner { polygon: f.polygon, vertex: f.edge }, kind.sign())
}

/// Clockwise neighbour of a corner and the sign of the chart change.
pub fn cw_corner(s: &FlatSurface, c: Corner) -> (Corner, i8) {
    let (f, kind) = s.partner(EdgeRef::new(c.polygon, c.vertex));
    let m = s.polygon(f.polygon).len();
    (Corner { polygon: f.polygon, vertex: (f.edge + 1) % m }, kind.sign())
}

fn signed(v: Vec2, sign: i8) -> Vec2 {
    if sign > 0 {
        v
    } else {
        -v
    }
}

/// Moves a direction given at a corner's chart to the corner whose half-open wedge contains it.
pub fn normalize_direction(s: &FlatSurface, c: Corner, u: &Vec2) -> Result<(Corner, Vec2), ScalarError> {
    let mut cur = c;
    let mut dir = u.clone();
    let size = s.cone_points()[s.corner_class(c)].corners.len();
    for _ in 0..=size {
        if in_wedge(s, cur, &dir)? {
            return Ok((cur, dir));
        }
        let (next, sign) = ccw_corner(s, cur);
        cur = next;
        dir = signed(dir, sign);
    }
    Err(ScalarError::Indeterminate(format!("direction {u} at corner {c:?}")))
}

/// Rotates the direction `u` (in the wedge of `c`) by angle pi, counterclockwise or clockwise.
pub fn rotate_half_turn(s: &FlatSurface, c: Corner, u: &Vec2, ccw: bool) -> Result<(Corner, Vec2), ScalarError> {
    let mut cur = c;
    let mut target = -u;
    let size = s.cone_points()[s.corner_class(c)].corners.len();
    for _ in 0..=size {
        let (next, sign) = if ccw { ccw_corner(s, cur) } else { cw_corner(s, cur) };
        cur = next;
        target = signed(target, sign);
        if in_wedge(s, cur, &target)? {
            return Ok((cur, target));
        }
    }
    Err(ScalarError::Indeterminate(format!("half turn of {u} at corner {c:?}")))
}

/// Key identifying an outgoing direction at a vertex.
pub fn direction_key(c: Corner, u: &Vec2) -> String {
    format!("{}:{}:{}", c.polygon, c.vertex, u.key())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Origami;

    #[test]
    fn exit_through_edge_and_vertex() {
        let sq = Polygon::new(vec![Vec2::ints(0, 0), Vec2::ints(1, 0), Vec2::ints(1, 1), Vec2::ints(0, 1)]);
        let x = Vec2::new(Scalar::frac(1, 2), Scalar::frac(1, 2));
        match exit(&sq, &x, &Vec2::ints(1, 0)).unwrap() {
            Exit::Edge { edge, t, .. } => {
                assert_eq!(edge, 1);
                assert_eq!(t, Scalar::frac(1, 2));
            }
            e => panic!("{e:?}"),
        }
        match exit(&sq, &Vec2::ints(0, 0), &Vec2::ints(1, 1)).unwrap() {
            Exit::Vertex { vertex, t } => {
                assert_eq!(vertex, 2);
                assert_eq!(t, Scalar::one());
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn half_turn_at_regular_point() {
        let s = Origami::new(vec![0], vec![0]).unwrap().to_surface();
        let c = Corner { polygon: 0, vertex: 0 };
        let (c2, u2) = rotate_half_turn(&s, c, &Vec2::ints(1, 1), true).unwrap();
        assert_eq!(c2, Corner { polygon: 0, vertex: 2 });
        assert_eq!(u2, Vec2::ints(-1, -1));
        let (c3, u3) = rotate_half_turn(&s, c2, &u2, false).unwrap();
        assert_eq!((c3, u3), (c, Vec2::ints(1, 1)));
    }
}
