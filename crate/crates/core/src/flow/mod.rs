//! Straight-line flow on flat surfaces: trajectories, saddle connections and
//! cylinder decompositions in periodic directions.

mod cylinders;
mod saddle;
pub mod walk;

pub use cylinders::{
    cylinder_decomposition, gluing_word, is_jenkins_strebel, moduli_ratios, Cylinder, CylinderDecomposition,
    DirectionalSaddle, GluingWord, JenkinsStrebel, ModuliRatios, DEFAULT_MAX_SEPARATRIX_CROSSINGS,
};
pub use saddle::{saddle_connections, SaddleConnection};

use serde::Serialize;
use thiserror::Error;

use crate::geom::Vec2;
use crate::scalar::{retry_on_indeterminate, Scalar, ScalarError};
use crate::surface::{Corner, FlatSurface, PointLocation};
use walk::{normalize_direction, rotate_half_turn, step, Pos, Step};

/// Default cap on crossings for single trajectories.
pub const DEFAULT_MAX_TRACE_CROSSINGS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("start point is not in polygon {0}")]
    PointOutside(usize),
    #[error("indeterminate predicate: {0}")]
    IndeterminateSign(String),
    #[error("direction not certified periodic: separatrix from polygon {} vertex {} survived {crossings} crossings", .corner.polygon, .corner.vertex)]
    NotPeriodicWithinBound { corner: Corner, direction: Box<Vec2>, crossings: usize },
    #[error("decomposition has {0} cylinders, expected one")]
    NotSimple(usize),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("scalar error: {0}")]
    Scalar(ScalarError),
}

impl From<ScalarError> for FlowError {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::Indeterminate(s) => FlowError::IndeterminateSign(s),
            other => FlowError::Scalar(other),
        }
    }
}

/// A projective direction, normalized so the first nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Direction(Vec2);

impl Direction {
    pub fn new(v: Vec2) -> Result<Self, FlowError> {
        if v.x.is_zero() && v.y.is_zero() {
            return Err(FlowError::ZeroDirection);
        }
        Ok(Direction(v.normalized_direction()))
    }

    pub fn ints(x: i64, y: i64) -> Result<Self, FlowError> {
        Direction::new(Vec2::ints(x, y))
    }

    pub fn horizontal() -> Self {
        Direction(Vec2::ints(1, 0))
    }

    pub fn vertical() -> Self {
        Direction(Vec2::ints(0, 1))
    }

    pub fn vector(&self) -> &Vec2 {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome")]
pub enum TraceOutcome {
    HitsConePoint { crossings: usize, class: usize },
    ClosesUp { period: usize },
    Exceeded { crossings: usize },
}

/// Follows the trajectory from `start` (in the chart of `polygon`) in direction `dir`.
///
/// Edge crossings are counted; passing through a regular vertex counts as two.
pub fn trace(
    s: &FlatSurface,
    polygon: usize,
    start: &Vec2,
    dir: &Vec2,
    max_crossings: usize,
) -> Result<TraceOutcome, FlowError> {
    if dir.x.is_zero() && dir.y.is_zero() {
        return Err(FlowError::ZeroDirection);
    }
    let poly = s.polygon(polygon);
    if !poly.contains(start)? {
        return Err(FlowError::PointOutside(polygon));
    }
    let mut start_corner = None;
    let mut pos = match poly.locate(start)? {
        PointLocation::Vertex(k) => {
            let (c, u) = normalize_direction(s, Corner { polygon, vertex: k }, dir)?;
            start_corner = Some((c, u.clone()));
            Pos { polygon: c.polygon, x: s.polygon(c.polygon).vertex(c.vertex).clone(), w: u }
        }
        _ => Pos { polygon, x: start.clone(), w: dir.clone() },
    };
    let origin = pos.clone();
    let mut crossings = 0usize;
    loop {
        let st = step(s, &pos)?;
        match st {
            Step::Arrived { corner, .. } => {
                let class = s.corner_class(corner);
                if let Some((c0, u0)) = &start_corner {
                    if s.cone_points()[class].is_regular() && class == s.corner_class(*c0) {
                        let back = -&pos.w;
                        let (cb, ub) = normalize_direction(s, corner, &back)?;
                        let (cn, un) = rotate_half_turn(s, cb, &ub, true)?;
                        if cn == *c0 && surely(un.same(u0)) {
                            return Ok(TraceOutcome::ClosesUp { period: crossings + 2 });
                        }
                    }
                }
                return Ok(TraceOutcome::HitsConePoint { crossings, class });
            }
            Step::Crossed { exit_point, next, .. } => {
                if start_corner.is_none()
                    && pos.polygon == origin.polygon
                    && crossings > 0
                    && surely(pos.w.same(&origin.w))
                    && surely(on_segment(&pos.x, &exit_point, &origin.x))
                {
                    return Ok(TraceOutcome::ClosesUp { period: crossings });
                }
                crossings += 1;
                if crossings > max_crossings {
                    return Ok(TraceOutcome::Exceeded { crossings: max_crossings });
                }
                pos = next;
                if start_corner.is_none()
                    && pos.polygon == origin.polygon
                    && surely(pos.w.same(&origin.w))
                    && surely(pos.x.same(&origin.x))
                {
                    return Ok(TraceOutcome::ClosesUp { period: crossings });
                }
            }
        }
    }
}

/// Certified truth; undecidable interval comparisons count as false.
fn surely(r: Result<bool, ScalarError>) -> bool {
    r.unwrap_or(false)
}

/// `p` lies on the half-open segment `[a, b)`.
fn on_segment(a: &Vec2, b: &Vec2, p: &Vec2) -> Result<bool, ScalarError> {
    let d = b - a;
    if d.cross(&(p - a)).signum_checked()? != 0 {
        return Ok(false);
    }
    let t = d.dot(&(p - a));
    Ok(t.signum_checked()? >= 0 && (t - d.norm2()).signum_checked()? < 0)
}

/// Runs [`trace`] on interval enclosures of the inputs, doubling the precision
/// while a crossing cannot be decided.
pub fn trace_interval(
    s: &FlatSurface,
    polygon: usize,
    start: &Vec2,
    dir: &Vec2,
    max_crossings: usize,
) -> Result<TraceOutcome, FlowError> {
    retry_on_indeterminate(
        |bits| {
            let si = s.to_interval(bits);
            let conv = |v: &Vec2| Vec2::new(Scalar::Interval(v.x.to_interval(bits)), Scalar::Interval(v.y.to_interval(bits)));
            trace(&si, polygon, &conv(start), &conv(dir), max_crossings)
        },
        |e| matches!(e, FlowError::IndeterminateSign(_)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Origami;

    fn torus() -> FlatSurface {
        Origami::new(vec![0], vec![0]).unwrap().to_surface()
    }

    #[test]
    fn horizontal_closes_after_one_crossing() {
        let half = Vec2::new(Scalar::frac(1, 2), Scalar::frac(1, 2));
        let out = trace(&torus(), 0, &half, &Vec2::ints(1, 0), 100).unwrap();
        assert_eq!(out, TraceOutcome::ClosesUp { period: 1 });
    }

    #[test]
    fn diagonal_from_cone_point() {
        let out = trace(&torus(), 0, &Vec2::ints(0, 0), &Vec2::ints(1, 1), 100).unwrap();
        assert_eq!(out, TraceOutcome::ClosesUp { period: 2 });
    }

    #[test]
    fn slope_two_closes() {
        let half = Vec2::new(Scalar::frac(1, 3), Scalar::frac(1, 7));
        let out = trace(&torus(), 0, &half, &Vec2::ints(1, 2), 100).unwrap();
        assert_eq!(out, TraceOutcome::ClosesUp { period: 3 });
    }

    #[test]
    fn irrational_slope_with_intervals() {
        let half = Vec2::new(Scalar::frac(1, 2), Scalar::frac(1, 2));
        let dir = Vec2::new(Scalar::one(), Scalar::sqrt_int(2));
        let out = trace_interval(&torus(), 0, &half, &dir, 10_000).unwrap();
        assert_eq!(out, TraceOutcome::Exceeded { crossings: 10_000 });
    }

    #[test]
    fn hits_cone_point() {
        let s = Origami::from_one_indexed(&[2, 1], &[1, 2]).unwrap().to_surface();
        // from the vertex at (0,0) heading right, the first vertex met is (1,0), another class
        let out = trace(&s, 0, &Vec2::ints(0, 0), &Vec2::ints(1, 0), 10).unwrap();
        assert!(matches!(out, TraceOutcome::HitsConePoint { crossings: 0, .. }));
    }
}
