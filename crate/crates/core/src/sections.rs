//! Points whose affine orbit equals their orbit under the kernel of the
//! derivative map.
//!
//! A point `a` qualifies when `h(a) = k(a)` for every generator `h` and some
//! `k` in the kernel, i.e. when `a` is fixed by some `k^-1 h`. Each such fixed
//! set is a finite union of exact linear solution sets, so the candidates are
//! obtained by intersecting them. Equivalently these are the points of
//! `X / Ker(D)` fixed by the induced action, and [`quotient_by_kernel`] builds
//! that quotient together with its ramification data.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::affine::{delaunay, is_affine_auto, AffineAuto, AffineError, KernelGroup};
use crate::geom::{Chart, Mat2, Vec2};
use crate::par;
use crate::scalar::{Scalar, ScalarError};
use crate::surface::{Corner, EdgeRef, FlatSurface, Gluing, GluingKind, Polygon, PointLocation, SurfaceError, SurfacePoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SectionError {
    #[error("fixed locus is not finite; the generators do not cut it down to points")]
    InfiniteFixedLocus,
    #[error("matrix {0} is not in the Veech group")]
    NotInVeechGroup(String),
    #[error(transparent)]
    Affine(#[from] AffineError),
}

impl From<ScalarError> for SectionError {
    fn from(e: ScalarError) -> Self {
        SectionError::Affine(e.into())
    }
}

impl From<SurfaceError> for SectionError {
    fn from(e: SurfaceError) -> Self {
        SectionError::Affine(e.into())
    }
}

/// A segment `[a, b]` in the chart of one polygon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedSegment {
    pub polygon: usize,
    pub a: Vec2,
    pub b: Vec2,
}

impl FixedSegment {
    fn new(polygon: usize, a: Vec2, b: Vec2) -> Self {
        if a.key() <= b.key() {
            FixedSegment { polygon, a, b }
        } else {
            FixedSegment { polygon, a: b, b: a }
        }
    }

    fn key(&self) -> String {
        format!("{}:{}:{}", self.polygon, self.a.key(), self.b.key())
    }

    fn contains(&self, polygon: usize, y: &Vec2) -> Result<bool, ScalarError> {
        if polygon != self.polygon {
            return Ok(false);
        }
        let d = &self.b - &self.a;
        let r = y - &self.a;
        if d.cross(&r).signum_checked()? != 0 {
            return Ok(false);
        }
        let t = d.dot(&r);
        Ok(t.signum_checked()? >= 0 && (&t - &d.norm2()).signum_checked()? <= 0)
    }
}

/// Fixed locus of a self-map: isolated points, segments, or everything.
#[derive(Debug, Clone, Default)]
pub struct FixedSet {
    /// Sorted by key, without duplicates.
    pub points: Vec<SurfacePoint>,
    /// Sorted by key, without duplicates; segments along a polygon edge are
    /// listed in both adjacent charts.
    pub segments: Vec<FixedSegment>,
    pub whole: bool,
}

impl FixedSet {
    fn whole() -> Self {
        FixedSet { whole: true, ..Default::default() }
    }

    fn build(points: BTreeMap<String, SurfacePoint>, segments: BTreeMap<String, FixedSegment>) -> Self {
        FixedSet { points: points.into_values().collect(), segments: segments.into_values().collect(), whole: false }
    }

    pub fn is_finite(&self) -> bool {
        !self.whole && self.segments.is_empty()
    }

    pub fn contains(&self, s: &FlatSurface, p: &SurfacePoint) -> Result<bool, ScalarError> {
        if self.whole || self.points.contains(p) {
            return Ok(true);
        }
        for (q, y) in positions(s, p)? {
            for seg in &self.segments {
                if seg.contains(q, &y)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    pub fn union(&self, other: &FixedSet) -> FixedSet {
        if self.whole || other.whole {
            return FixedSet::whole();
        }
        let points = self.points.iter().chain(&other.points).map(|p| (p.key(), p.clone())).collect();
        let segments = self.segments.iter().chain(&other.segments).map(|g| (g.key(), g.clone())).collect();
        FixedSet::build(points, segments)
    }

    pub fn intersect(&self, s: &FlatSurface, other: &FixedSet) -> Result<FixedSet, ScalarError> {
        if self.whole {
            return Ok(other.clone());
        }
        if other.whole {
            return Ok(self.clone());
        }
        let mut points = BTreeMap::new();
        let mut segments = BTreeMap::new();
        for (mine, theirs) in [(self, other), (other, self)] {
            for p in &mine.points {
                if theirs.contains(s, p)? {
                    points.insert(p.key(), p.clone());
                }
            }
        }
        for g in &self.segments {
            for h in other.segments.iter().filter(|h| h.polygon == g.polygon) {
                match segment_meet(g, h)? {
                    Meet::Empty => {}
                    Meet::Point(x) => {
                        let p = s.canonical_point(g.polygon, &x)?;
                        points.insert(p.key(), p);
                    }
                    Meet::Segment(a, b) => add_segment(s, &mut segments, FixedSegment::new(g.polygon, a, b))?,
                }
            }
        }
        Ok(FixedSet::build(points, segments))
    }
}

/// Every chart position of a surface point.
fn positions(s: &FlatSurface, p: &SurfacePoint) -> Result<Vec<(usize, Vec2)>, ScalarError> {
    match p {
        SurfacePoint::Vertex { class } => Ok(s.cone_points()[*class]
            .corners
            .iter()
            .map(|c| (c.polygon, s.polygon(c.polygon).vertex(c.vertex).clone()))
            .collect()),
        SurfacePoint::Regular { polygon, x } => {
            let mut out = vec![(*polygon, x.clone())];
            if let PointLocation::Edge(e) = s.polygon(*polygon).locate(x)? {
                let (f, chart) = s.transition(EdgeRef::new(*polygon, e));
                out.push((f.polygon, chart.apply(x)));
            }
            Ok(out)
        }
    }
}

fn add_segment(s: &FlatSurface, out: &mut BTreeMap<String, FixedSegment>, g: FixedSegment) -> Result<(), ScalarError> {
    let poly = s.polygon(g.polygon);
    for e in 0..poly.len() {
        let on_edge = |x: &Vec2| -> Result<bool, ScalarError> {
            Ok(poly.edge(e).cross(&(x - poly.vertex(e))).signum_checked()? == 0)
        };
        if on_edge(&g.a)? && on_edge(&g.b)? {
            let (f, chart) = s.transition(EdgeRef::new(g.polygon, e));
            let twin = FixedSegment::new(f.polygon, chart.apply(&g.a), chart.apply(&g.b));
            out.insert(twin.key(), twin);
        }
    }
    out.insert(g.key(), g);
    Ok(())
}

enum Meet {
    Empty,
    Point(Vec2),
    Segment(Vec2, Vec2),
}

fn segment_meet(g: &FixedSegment, h: &FixedSegment) -> Result<Meet, ScalarError> {
    let dg = &g.b - &g.a;
    let dh = &h.b - &h.a;
    let denom = dg.cross(&dh);
    let r = &h.a - &g.a;
    if denom.signum_checked()? == 0 {
        if dg.cross(&r).signum_checked()? != 0 {
            return Ok(Meet::Empty);
        }
        // collinear: overlap of parameter intervals along g
        let n = dg.norm2();
        let t1 = &dg.dot(&r) / &n;
        let t2 = &dg.dot(&(&h.b - &g.a)) / &n;
        let (t1, t2) = if t1.cmp_checked(&t2)?.is_le() { (t1, t2) } else { (t2, t1) };
        let lo = if t1.signum_checked()? > 0 { t1 } else { Scalar::zero() };
        let hi = if (&t2 - &Scalar::one()).signum_checked()? < 0 { t2 } else { Scalar::one() };
        return Ok(match lo.cmp_checked(&hi)? {
            std::cmp::Ordering::Greater => Meet::Empty,
            std::cmp::Ordering::Equal => Meet::Point(&g.a + &dg.scale(&lo)),
            std::cmp::Ordering::Less => Meet::Segment(&g.a + &dg.scale(&lo), &g.a + &dg.scale(&hi)),
        });
    }
    let t = &r.cross(&dh) / &denom;
    let u = &r.cross(&dg) / &denom;
    let unit = |v: &Scalar| -> Result<bool, ScalarError> {
        Ok(v.signum_checked()? >= 0 && (v - &Scalar::one()).signum_checked()? <= 0)
    };
    if unit(&t)? && unit(&u)? {
        Ok(Meet::Point(&g.a + &dg.scale(&t)))
    } else {
        Ok(Meet::Empty)
    }
}

/// Solution set of a linear system restricted to a convex domain.
enum Solution {
    Empty,
    Point(Vec2),
    Segment(Vec2, Vec2),
    Whole,
}

/// Range of `lambda` with `x0 + lambda d` inside the convex counterclockwise `region`.
fn clip_line(x0: &Vec2, d: &Vec2, region: &[Vec2], mut lo: Option<Scalar>, mut hi: Option<Scalar>) -> Result<Option<(Scalar, Scalar)>, ScalarError> {
    let n = region.len();
    for i in 0..n {
        let r = &region[i];
        let e = &region[(i + 1) % n] - r;
        let c0 = e.cross(&(x0 - r));
        let c1 = e.cross(d);
        match c1.signum_checked()? {
            0 => {
                if c0.signum_checked()? < 0 {
                    return Ok(None);
                }
            }
            s => {
                let bound = -(&c0 / &c1);
                if s > 0 {
                    if lo.as_ref().map_or(Ok(true), |l| bound.cmp_checked(l).map(|o| o.is_gt()))? {
                        lo = Some(bound);
                    }
                } else if hi.as_ref().map_or(Ok(true), |h| bound.cmp_checked(h).map(|o| o.is_lt()))? {
                    hi = Some(bound);
                }
            }
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) if l.cmp_checked(&h)?.is_le() => Ok(Some((l, h))),
        _ => Ok(None),
    }
}

fn line_solution(x0: &Vec2, d: &Vec2, range: Option<(Scalar, Scalar)>) -> Result<Solution, ScalarError> {
    Ok(match range {
        None => Solution::Empty,
        Some((l, h)) if l.cmp_checked(&h)?.is_eq() => Solution::Point(x0 + &d.scale(&l)),
        Some((l, h)) => Solution::Segment(x0 + &d.scale(&l), x0 + &d.scale(&h)),
    })
}

/// Solves `m x = b` for `x` in `region`, or on `edge` of it when given as `(start, direction)`.
fn solve(m: &Mat2, b: &Vec2, region: &[Vec2], edge: Option<(&Vec2, &Vec2)>) -> Result<Solution, ScalarError> {
    if let Some((x0, d)) = edge {
        let md = m.apply(d);
        let rhs = b - &m.apply(x0);
        let range = clip_line(x0, d, region, Some(Scalar::zero()), Some(Scalar::one()))?;
        if md.is_zero() {
            return if rhs.is_zero() { line_solution(x0, d, range) } else { Ok(Solution::Empty) };
        }
        let lam = if md.x.is_zero() { &rhs.y / &md.y } else { &rhs.x / &md.x };
        if !md.scale(&lam).same(&rhs)? {
            return Ok(Solution::Empty);
        }
        return Ok(match range {
            Some((l, h)) if lam.cmp_checked(&l)?.is_ge() && lam.cmp_checked(&h)?.is_le() => Solution::Point(x0 + &d.scale(&lam)),
            _ => Solution::Empty,
        });
    }
    let det = m.det();
    if det.signum_checked()? != 0 {
        let adj = Mat2::new(m.d.clone(), -&m.b, -&m.c, m.a.clone());
        let x = adj.apply(b).scale(&det.try_recip()?);
        return Ok(if Polygon::new(region.to_vec()).contains(&x)? { Solution::Point(x) } else { Solution::Empty });
    }
    let rows = [(&m.a, &m.b, &b.x), (&m.c, &m.d, &b.y)];
    let Some(&(p, q, r)) = rows.iter().find(|(p, q, _)| !p.is_zero() || !q.is_zero()) else {
        return Ok(if b.is_zero() { Solution::Whole } else { Solution::Empty });
    };
    let x0 = if p.is_zero() { Vec2::new(Scalar::zero(), r / q) } else { Vec2::new(r / p, Scalar::zero()) };
    if !m.apply(&x0).same(b)? {
        return Ok(Solution::Empty);
    }
    let d = Vec2::new(-q, p.clone());
    line_solution(&x0, &d, clip_line(&x0, &d, region, None, None)?)
}

/// Fixed locus of the self-map `h` of `s`.
pub fn fixed_set(s: &FlatSurface, h: &AffineAuto) -> Result<FixedSet, SectionError> {
    let mut points = BTreeMap::new();
    let mut segments = BTreeMap::new();
    for pc in &h.pieces {
        let poly = s.polygon(pc.source);
        let a = if pc.sign > 0 { h.derivative.clone() } else { -&h.derivative };
        // a point of the piece is fixed when its image agrees with it in the
        // target chart, either directly or through an edge gluing
        let mut options: Vec<(Chart, Option<usize>)> = Vec::new();
        if pc.target == pc.source {
            options.push((Chart::identity(), None));
        }
        for e in 0..poly.len() {
            let (f, chart) = s.transition(EdgeRef::new(pc.source, e));
            if f.polygon == pc.target {
                options.push((chart, Some(e)));
            }
        }
        for (chart, edge) in options {
            let c = Scalar::int(chart.sign as i64);
            let m = Mat2::new(&a.a - &c, a.b.clone(), a.c.clone(), &a.d - &c);
            let b = &chart.t - &pc.translation;
            let dir = edge.map(|e| poly.edge(e));
            let edge_arg = edge.map(|e| poly.vertex(e)).zip(dir.as_ref());
            match solve(&m, &b, &pc.region, edge_arg)? {
                Solution::Empty => {}
                Solution::Whole => return Ok(FixedSet::whole()),
                Solution::Point(x) => {
                    let p = s.canonical_point(pc.source, &x)?;
                    points.insert(p.key(), p);
                }
                Solution::Segment(x, y) => add_segment(s, &mut segments, FixedSegment::new(pc.source, x, y))?,
            }
        }
    }
    for cone in s.cone_points() {
        let p = SurfacePoint::Vertex { class: cone.class };
        let (q, x) = s.point_position(&p);
        if h.apply_point(s, q, &x)? == Some(p.clone()) {
            points.insert(p.key(), p);
        }
    }
    Ok(FixedSet::build(points, segments))
}

/// Ramification of the quotient map at a point of `X`.
#[derive(Debug, Clone, Serialize)]
pub struct Ramification {
    pub point: String,
    pub polygon: usize,
    pub x: Vec2,
    pub index: usize,
    /// Which branch point of the quotient this point lies over.
    pub branch_point: usize,
}

#[derive(Debug, Clone)]
pub struct Quotient {
    /// `X / Ker(D)`, triangulated.
    pub surface: FlatSurface,
    /// Points of `X` with nontrivial stabilizer.
    pub ramification: Vec<Ramification>,
    /// Number of branch points on the quotient.
    pub branch_points: usize,
    pub genus_x: u32,
    pub genus_y: u32,
    /// `2 g_X - 2 = |K| (2 g_Y - 2) + sum (e_z - 1)`.
    pub riemann_hurwitz: bool,
}

/// Builds `X / K`.
///
/// Each Delaunay cell is cut into triangles (centroid, vertex, edge midpoint).
/// A nontrivial element of `K` maps no such triangle to itself, so the
/// quotient is tiled by one triangle per orbit.
pub fn quotient_by_kernel(s: &FlatSurface, k: &KernelGroup) -> Result<Quotient, SectionError> {
    let cells = delaunay(s)?;
    let cs = &cells.surface;
    let polys = cs.polygons();
    let mut base = Vec::with_capacity(polys.len());
    let mut total = 0;
    for p in polys {
        base.push(total);
        total += 2 * p.len();
    }
    let tri = |c: usize, i: usize, half: usize| base[c] + 2 * (i % polys[c].len()) + half;
    let mut owner = vec![(0, 0, 0); total];
    for (c, p) in polys.iter().enumerate() {
        for i in 0..p.len() {
            owner[tri(c, i, 0)] = (c, i, 0);
            owner[tri(c, i, 1)] = (c, i, 1);
        }
    }
    let coords = |t: usize| -> Vec<Vec2> {
        let (c, i, half) = owner[t];
        let p = &polys[c];
        let (g, m) = (p.centroid(), p.midpoint(i));
        if half == 0 {
            vec![g, p.vertex(i).clone(), m]
        } else {
            vec![g, m, p.vertex(i + 1).clone()]
        }
    };

    // image of every small triangle under every kernel element
    let mut image = vec![vec![0; total]; k.elements.len()];
    for (j, el) in k.elements.iter().enumerate() {
        for t in 0..total {
            let (c, i, half) = owner[t];
            let target = el.iso.map[c];
            let v = el.iso.charts[c].apply(polys[c].vertex(i));
            let q = &polys[target];
            let mut found = None;
            for w in 0..q.len() {
                if q.vertex(w).same(&v)? {
                    found = Some(w);
                }
            }
            let w = found.ok_or_else(|| AffineError::Inconsistent("kernel element does not map cells onto cells".into()))?;
            image[j][t] = tri(target, w, half);
        }
    }
    let rep: Vec<usize> = (0..total).map(|t| (0..k.elements.len()).map(|j| image[j][t]).min().unwrap_or(t)).collect();
    let reps: Vec<usize> = (0..total).filter(|&t| rep[t] == t).collect();
    let index: HashMap<usize, usize> = reps.iter().enumerate().map(|(n, &t)| (t, n)).collect();

    // neighbour of small-triangle edge `e` as (triangle, edge)
    let neighbour = |t: usize, e: usize| -> (usize, usize) {
        let (c, i, half) = owner[t];
        let n = polys[c].len();
        match (half, e) {
            (0, 0) => (tri(c, i + n - 1, 1), 2),
            (0, 2) => (tri(c, i, 1), 0),
            (1, 0) => (tri(c, i, 0), 2),
            (1, 2) => (tri(c, i + 1, 0), 0),
            (h, _) => {
                let (f, _) = cs.partner(EdgeRef::new(c, i));
                (tri(f.polygon, f.edge, 1 - h), 1)
            }
        }
    };
    let mut gluings = Vec::new();
    let mut seen = BTreeSet::new();
    for &t in &reps {
        let mine = Polygon::new(coords(t));
        for e in 0..3 {
            let (u, f) = neighbour(t, e);
            let a = EdgeRef::new(index[&t], e);
            let b = EdgeRef::new(index[&rep[u]], f);
            if a == b {
                return Err(AffineError::Inconsistent("quotient edge glued to itself".into()).into());
            }
            if !seen.insert((a.polygon, a.edge).min((b.polygon, b.edge))) {
                continue;
            }
            seen.insert((a.polygon, a.edge).max((b.polygon, b.edge)));
            let theirs = Polygon::new(coords(rep[u])).edge(f);
            let kind = if theirs.same(&-mine.edge(e))? {
                GluingKind::Translation
            } else if theirs.same(&mine.edge(e))? {
                GluingKind::Flip
            } else {
                return Err(AffineError::Inconsistent("quotient edges differ in length".into()).into());
            };
            gluings.push(Gluing { a, b, kind });
        }
    }
    let mut punctures = Vec::new();
    for (n, &t) in reps.iter().enumerate() {
        let (c, i, half) = owner[t];
        let (corner, v) = if half == 0 { (1, i) } else { (2, (i + 1) % polys[c].len()) };
        if cs.cone_points()[cs.corner_class(Corner { polygon: c, vertex: v })].puncture {
            punctures.push(Corner { polygon: n, vertex: corner });
        }
    }
    let y = FlatSurface::new(reps.iter().map(|&t| Polygon::new(coords(t))).collect(), gluings, &punctures)?;

    let mut stab: BTreeMap<String, (SurfacePoint, usize)> = BTreeMap::new();
    for el in k.elements.iter().filter(|e| !e.iso.is_identity()) {
        let fixed = fixed_set(s, &el.map)?;
        if !fixed.is_finite() {
            return Err(AffineError::Inconsistent("nontrivial kernel element fixes a curve".into()).into());
        }
        for p in fixed.points {
            stab.entry(p.key()).or_insert((p, 1)).1 += 1;
        }
    }
    let mut ramification: Vec<Ramification> = Vec::new();
    let mut branch_points = 0;
    for (key, (p, e)) in stab {
        let (polygon, x) = s.point_position(&p);
        let mut branch_point = None;
        for el in &k.elements {
            let img = el.map.apply_point(s, polygon, &x)?.map(|q| q.key());
            if let Some(r) = ramification.iter().find(|r| Some(&r.point) == img.as_ref()) {
                branch_point = Some(r.branch_point);
                break;
            }
        }
        let branch_point = branch_point.unwrap_or_else(|| {
            branch_points += 1;
            branch_points - 1
        });
        ramification.push(Ramification { point: key, polygon, x, index: e, branch_point });
    }
    let excess: usize = ramification.iter().map(|r| r.index - 1).sum();
    let genus_x = s.surface_type().genus;
    let genus_y = y.surface_type().genus;
    let riemann_hurwitz = 2 * genus_x as i64 - 2 == k.order as i64 * (2 * genus_y as i64 - 2) + excess as i64;
    Ok(Quotient { surface: y, ramification, branch_points, genus_x, genus_y, riemann_hurwitz })
}

/// Affine maps realizing the given derivatives.
pub fn generator_maps(s: &FlatSurface, gens: &[Mat2]) -> Result<Vec<AffineAuto>, SectionError> {
    let found = par::map(gens, |g| is_affine_auto(s, g));
    gens.iter()
        .zip(found)
        .map(|(g, f)| f?.ok_or_else(|| SectionError::NotInVeechGroup(g.to_string())))
        .collect()
}

/// A candidate point of `X`.
#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    #[serde(skip)]
    pub point: SurfacePoint,
    pub polygon: usize,
    pub x: Vec2,
    pub critical: bool,
    /// Total cone angle divided by pi.
    pub angle_pi: u32,
}

/// Witness that generator `generator` sends a candidate to its image under
/// kernel element `kernel_element`.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub candidate: usize,
    pub generator: usize,
    pub kernel_element: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionCandidates {
    pub count: usize,
    pub points: Vec<Candidate>,
    /// Kernel orbits of the candidates, i.e. the fixed points on the quotient.
    pub quotient_points: Vec<Vec<usize>>,
    pub certificates: Vec<Certificate>,
}

/// Points `a` with `h(a)` in the kernel orbit of `a` for every generator `h`.
pub fn section_candidates(s: &FlatSurface, veech_gens: &[AffineAuto], k: &KernelGroup) -> Result<SectionCandidates, SectionError> {
    let per_gen = par::map(veech_gens, |h| -> Result<FixedSet, SectionError> {
        let mut acc = FixedSet::default();
        for el in &k.elements {
            acc = acc.union(&fixed_set(s, &el.map.compose(h)?)?);
        }
        Ok(acc)
    });
    let mut locus = FixedSet::whole();
    for f in per_gen {
        locus = locus.intersect(s, &f?)?;
    }
    if !locus.is_finite() {
        return Err(SectionError::InfiniteFixedLocus);
    }
    let mut points = Vec::new();
    let mut certificates = Vec::new();
    for (n, p) in locus.points.iter().enumerate() {
        let (q, x) = s.point_position(p);
        let orbit: Vec<Option<SurfacePoint>> = k.elements.iter().map(|e| e.map.apply_point(s, q, &x)).collect::<Result<_, _>>()?;
        for (g, h) in veech_gens.iter().enumerate() {
            let img = h.apply_point(s, q, &x)?;
            let j = orbit
                .iter()
                .position(|o| o.is_some() && *o == img)
                .ok_or_else(|| AffineError::Inconsistent("candidate fails the orbit condition".into()))?;
            certificates.push(Certificate { candidate: n, generator: g, kernel_element: j });
        }
        let (critical, angle_pi) = match p {
            SurfacePoint::Vertex { class } => {
                let c = &s.cone_points()[*class];
                (!c.is_regular(), c.angle_pi)
            }
            SurfacePoint::Regular { .. } => (false, 2),
        };
        points.push(Candidate { point: p.clone(), polygon: q, x, critical, angle_pi });
    }
    let mut quotient_points: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; points.len()];
    for i in 0..points.len() {
        if assigned[i] {
            continue;
        }
        let mut orbit = vec![i];
        assigned[i] = true;
        for el in &k.elements {
            let img = el.map.apply_point(s, points[i].polygon, &points[i].x)?;
            for j in 0..points.len() {
                if !assigned[j] && img.as_ref() == Some(&points[j].point) {
                    assigned[j] = true;
                    orbit.push(j);
                }
            }
        }
        orbit.sort_unstable();
        quotient_points.push(orbit);
    }
    Ok(SectionCandidates { count: points.len(), points, quotient_points, certificates })
}

/// Invariants separating a candidate from the others.
#[derive(Debug, Clone, Serialize)]
pub struct CandidateNote {
    pub candidate: usize,
    pub critical: bool,
    pub angle_pi: u32,
    /// No other candidate shares this (critical, angle) signature, so no
    /// monodromy can exchange it with another candidate.
    pub signature_unique: bool,
}

pub fn candidate_filter_note(candidates: &SectionCandidates) -> Vec<CandidateNote> {
    let sig = |c: &Candidate| (c.critical, c.angle_pi);
    candidates
        .points
        .iter()
        .enumerate()
        .map(|(i, c)| CandidateNote {
            candidate: i,
            critical: c.critical,
            angle_pi: c.angle_pi,
            signature_unique: candidates.points.iter().filter(|d| sig(d) == sig(c)).count() == 1,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::kernel_of_d;
    use crate::surface::Origami;

    fn torus() -> FlatSurface {
        Origami::new(vec![0], vec![0]).unwrap().to_surface()
    }

    #[test]
    fn identity_fixes_everything() {
        let s = torus();
        let id = is_affine_auto(&s, &Mat2::identity()).unwrap().unwrap();
        assert!(fixed_set(&s, &id).unwrap().whole);
    }

    #[test]
    fn half_turn_fixes_two_torsion() {
        let s = torus();
        let k = kernel_of_d(&s).unwrap();
        let minus = &k.elements[1].map;
        let f = fixed_set(&s, minus).unwrap();
        assert!(f.is_finite());
        assert_eq!(f.points.len(), 4);
    }

    #[test]
    fn twist_fixes_a_core_circle() {
        let s = torus();
        let t = is_affine_auto(&s, &Mat2::ints(1, 1, 0, 1)).unwrap().unwrap();
        let f = fixed_set(&s, &t).unwrap();
        assert!(!f.whole);
        assert!(!f.segments.is_empty());
        // the circle y = 0 lies along the horizontal edges
        for g in &f.segments {
            assert!(g.a.y.is_zero() || (&g.a.y - &Scalar::one()).is_zero());
            assert_eq!(g.a.y, g.b.y);
        }
    }

    #[test]
    fn torus_candidates_are_the_marked_point() {
        let s = torus();
        let k = kernel_of_d(&s).unwrap();
        let gens = generator_maps(&s, &[Mat2::ints(0, -1, 1, 0), Mat2::ints(1, 1, 0, 1)]).unwrap();
        let c = section_candidates(&s, &gens, &k).unwrap();
        assert_eq!(c.count, 1);
        assert!(matches!(c.points[0].point, SurfacePoint::Vertex { .. }));
    }

    #[test]
    fn a_twist_alone_leaves_a_curve() {
        let s = torus();
        let k = kernel_of_d(&s).unwrap();
        let gens = generator_maps(&s, &[Mat2::ints(1, 1, 0, 1)]).unwrap();
        assert_eq!(section_candidates(&s, &gens, &k).unwrap_err(), SectionError::InfiniteFixedLocus);
    }

    #[test]
    fn torus_quotient_is_a_pillowcase() {
        let s = torus();
        let k = kernel_of_d(&s).unwrap();
        let q = quotient_by_kernel(&s, &k).unwrap();
        assert_eq!(q.genus_y, 0);
        assert_eq!(q.ramification.len(), 4);
        assert_eq!(q.branch_points, 4);
        assert!(q.riemann_hurwitz);
        assert_eq!(q.surface.area(), Scalar::frac(1, 2));
    }
}
