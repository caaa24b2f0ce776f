//! Flat surfaces given by convex polygons with edge identifications
//! `z -> z + c` (translation) or `z -> -z + c` (flip).

mod io;
mod origami;

pub use io::{OrigamiFile, SurfaceFile};
pub use origami::{perfect_matchings, Origami, SquareSide, SquareTiled};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Chart, Mat2, Vec2};
use crate::scalar::{Field, Scalar, ScalarError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub polygon: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(polygon: usize, edge: usize) -> Self {
        EdgeRef { polygon, edge }
    }
}

/// A corner of a polygon, identified by the vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub polygon: usize,
    pub vertex: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GluingKind {
    Translation,
    Flip,
}

impl GluingKind {
    pub fn sign(self) -> i8 {
        match self {
            GluingKind::Translation => 1,
            GluingKind::Flip => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub a: EdgeRef,
    pub b: EdgeRef,
    pub kind: GluingKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<Vec2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>) -> Self {
        Polygon { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Vec2 {
        &self.vertices[i % self.vertices.len()]
    }

    /// Displacement of edge `i`, from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> Vec2 {
        self.vertex(i + 1) - self.vertex(i)
    }

    /// Twice the signed area.
    pub fn area2(&self) -> Scalar {
        let n = self.len();
        let mut acc = Scalar::zero();
        for i in 0..n {
            acc = acc + self.vertex(i).cross(self.vertex(i + 1));
        }
        acc
    }

    pub fn area(&self) -> Scalar {
        self.area2() / Scalar::int(2)
    }

    pub fn centroid(&self) -> Vec2 {
        let n = Scalar::int(self.len() as i64);
        let mut x = Scalar::zero();
        let mut y = Scalar::zero();
        for v in &self.vertices {
            x = x + &v.x;
            y = y + &v.y;
        }
        Vec2::new(x / &n, y / &n)
    }

    pub fn midpoint(&self, i: usize) -> Vec2 {
        (self.vertex(i) + self.vertex(i + 1)).scale(&Scalar::frac(1, 2))
    }

    /// Strict convexity with counterclockwise orientation.
    pub fn is_strictly_convex(&self) -> Result<bool, ScalarError> {
        let n = self.len();
        if n < 3 {
            return Ok(false);
        }
        for i in 0..n {
            if self.edge(i).cross(&self.edge(i + 1)).signum_checked()? <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Closed point-in-polygon test.
    pub fn contains(&self, p: &Vec2) -> Result<bool, ScalarError> {
        for i in 0..self.len() {
            if self.edge(i).cross(&(p - self.vertex(i))).signum_checked()? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Where a point of the closed polygon lies.
    pub fn locate(&self, p: &Vec2) -> Result<PointLocation, ScalarError> {
        for i in 0..self.len() {
            if p.same(self.vertex(i))? {
                return Ok(PointLocation::Vertex(i));
            }
        }
        for i in 0..self.len() {
            if self.edge(i).cross(&(p - self.vertex(i))).signum_checked()? == 0 {
                return Ok(PointLocation::Edge(i));
            }
        }
        Ok(PointLocation::Interior)
    }

    pub fn transformed(&self, m: &Mat2) -> Polygon {
        Polygon { vertices: self.vertices.iter().map(|v| m.apply(v)).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointLocation {
    Vertex(usize),
    Edge(usize),
    Interior,
}

/// A vertex class with its total cone angle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConePoint {
    pub class: usize,
    /// Total angle divided by pi.
    pub angle_pi: u32,
    pub ord: i32,
    pub puncture: bool,
    pub corners: Vec<Corner>,
}

impl ConePoint {
    pub fn is_regular(&self) -> bool {
        self.angle_pi == 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceType {
    pub genus: u32,
    pub punctures: u32,
    /// Sorted multiset of orders of the cone classes.
    pub stratum: Vec<i32>,
}

impl SurfaceType {
    /// `3g - 3 + n`.
    pub fn moduli_dimension(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.punctures as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation")]
pub enum Violation {
    NonConvexPolygon { polygon: usize },
    BadEdgeReference { polygon: usize, edge: usize },
    EdgeGluedTwice { polygon: usize, edge: usize },
    UnpairedEdge { polygon: usize, edge: usize },
    EdgeLengthMismatch { a: EdgeRef, b: EdgeRef },
    Disconnected,
    AngleNotMultipleOfPi { class: usize },
    BadPuncture { polygon: usize, vertex: usize },
    IncompatibleFields { detail: String },
    UndecidablePredicate { detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonConvexPolygon { polygon } => write!(f, "polygon {polygon} is not strictly convex and counterclockwise"),
            Violation::BadEdgeReference { polygon, edge } => write!(f, "gluing refers to missing edge {edge} of polygon {polygon}"),
            Violation::EdgeGluedTwice { polygon, edge } => write!(f, "edge {edge} of polygon {polygon} is glued more than once"),
            Violation::UnpairedEdge { polygon, edge } => write!(f, "edge {edge} of polygon {polygon} is not glued"),
            Violation::EdgeLengthMismatch { a, b } => write!(
                f,
                "edges ({},{}) and ({},{}) do not have matching displacement vectors",
                a.polygon, a.edge, b.polygon, b.edge
            ),
            Violation::Disconnected => write!(f, "the gluing graph is disconnected"),
            Violation::AngleNotMultipleOfPi { class } => write!(f, "vertex class {class} has angle not a multiple of pi"),
            Violation::BadPuncture { polygon, vertex } => write!(f, "puncture refers to missing vertex {vertex} of polygon {polygon}"),
            Violation::IncompatibleFields { detail } => write!(f, "incompatible fields: {detail}"),
            Violation::UndecidablePredicate { detail } => write!(f, "undecidable predicate: {detail}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("invalid surface: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("origami permutations do not act transitively")]
    NotTransitive,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl SurfaceError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            SurfaceError::Invalid(v) => v,
            _ => &[],
        }
    }
}

/// A validated flat surface.
#[derive(Debug, Clone)]
pub struct FlatSurface {
    field: Field,
    polygons: Vec<Polygon>,
    gluings: Vec<Gluing>,
    partner: Vec<Vec<(EdgeRef, GluingKind)>>,
    corner_class: Vec<Vec<usize>>,
    cones: Vec<ConePoint>,
}

impl FlatSurface {
    /// Validates polygons and gluings. `punctures` lists corners whose classes are punctures.
    pub fn new(polygons: Vec<Polygon>, gluings: Vec<Gluing>, punctures: &[Corner]) -> Result<Self, SurfaceError> {
        let mut violations = Vec::new();
        let mut field = Field::Rational;
        for p in &polygons {
            for v in &p.vertices {
                for c in [&v.x, &v.y] {
                    match field.join(c.field()) {
                        Ok(f) => field = f,
                        Err(e) => violations.push(Violation::IncompatibleFields { detail: e.to_string() }),
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(SurfaceError::Invalid(violations));
        }
        for (i, p) in polygons.iter().enumerate() {
            match p.is_strictly_convex() {
                Ok(true) => {}
                Ok(false) => violations.push(Violation::NonConvexPolygon { polygon: i }),
                Err(e) => violations.push(Violation::UndecidablePredicate { detail: e.to_string() }),
            }
        }
        let mut partner: Vec<Vec<Option<(EdgeRef, GluingKind)>>> =
            polygons.iter().map(|p| vec![None; p.len()]).collect();
        for g in &gluings {
            let mut ok = true;
            for e in [g.a, g.b] {
                if e.polygon >= polygons.len() || e.edge >= polygons[e.polygon].len() {
                    violations.push(Violation::BadEdgeReference { polygon: e.polygon, edge: e.edge });
                    ok = false;
                }
            }
            if !ok {
                continue;
            }
            if g.a == g.b {
                violations.push(Violation::EdgeGluedTwice { polygon: g.a.polygon, edge: g.a.edge });
                continue;
            }
            for (x, y) in [(g.a, g.b), (g.b, g.a)] {
                let slot = &mut partner[x.polygon][x.edge];
                if slot.is_some() {
                    violations.push(Violation::EdgeGluedTwice { polygon: x.polygon, edge: x.edge });
                } else {
                    *slot = Some((y, g.kind));
                }
            }
            let da = polygons[g.a.polygon].edge(g.a.edge);
            let db = polygons[g.b.polygon].edge(g.b.edge);
            let expected = match g.kind {
                GluingKind::Translation => -&db,
                GluingKind::Flip => db,
            };
            match da.same(&expected) {
                Ok(true) => {}
                Ok(false) => violations.push(Violation::EdgeLengthMismatch { a: g.a, b: g.b }),
                Err(e) => violations.push(Violation::UndecidablePredicate { detail: e.to_string() }),
            }
        }
        for (p, edges) in partner.iter().enumerate() {
            for (e, slot) in edges.iter().enumerate() {
                if slot.is_none() {
                    violations.push(Violation::UnpairedEdge { polygon: p, edge: e });
                }
            }
        }
        for c in punctures {
            if c.polygon >= polygons.len() || c.vertex >= polygons[c.polygon].len() {
                violations.push(Violation::BadPuncture { polygon: c.polygon, vertex: c.vertex });
            }
        }
        if !violations.is_empty() {
            return Err(SurfaceError::Invalid(violations));
        }
        let partner: Vec<Vec<(EdgeRef, GluingKind)>> =
            partner.into_iter().map(|v| v.into_iter().map(|x| x.unwrap()).collect()).collect();

        // connectivity
        let mut seen = vec![false; polygons.len()];
        let mut queue = VecDeque::from([0usize]);
        if !polygons.is_empty() {
            seen[0] = true;
        }
        while let Some(p) = queue.pop_front() {
            for (q, _) in &partner[p] {
                if !seen[q.polygon] {
                    seen[q.polygon] = true;
                    queue.push_back(q.polygon);
                }
            }
        }
        if polygons.is_empty() || seen.iter().any(|s| !s) {
            return Err(SurfaceError::Invalid(vec![Violation::Disconnected]));
        }

        let mut surface = FlatSurface {
            field,
            polygons,
            gluings,
            partner,
            corner_class: Vec::new(),
            cones: Vec::new(),
        };
        surface.compute_classes(punctures)?;
        Ok(surface)
    }

    fn compute_classes(&mut self, punctures: &[Corner]) -> Result<(), SurfaceError> {
        let mut corner_class: Vec<Vec<usize>> = self.polygons.iter().map(|p| vec![usize::MAX; p.len()]).collect();
        let mut cones = Vec::new();
        let mut violations = Vec::new();
        for p in 0..self.polygons.len() {
            for k in 0..self.polygons[p].len() {
                if corner_class[p][k] != usize::MAX {
                    continue;
                }
                let class = cones.len();
                let mut corners = Vec::new();
                let mut cur = Corner { polygon: p, vertex: k };
                let reference = self.polygons[p].edge(k);
                let mut sign = 1i8;
                let mut half_turns = 0u32;
                let mut undecidable = false;
                loop {
                    corner_class[cur.polygon][cur.vertex] = class;
                    corners.push(cur);
                    let poly = &self.polygons[cur.polygon];
                    let n = poly.len();
                    let u = signed(&poly.edge(cur.vertex), sign);
                    let w = signed(&(poly.vertex(cur.vertex + n - 1) - poly.vertex(cur.vertex)), sign);
                    for r in [reference.clone(), -&reference] {
                        match (u.cross(&r).signum_checked(), r.cross(&w).signum_checked()) {
                            (Ok(a), Ok(b)) => {
                                if a > 0 && b >= 0 {
                                    half_turns += 1;
                                }
                            }
                            _ => undecidable = true,
                        }
                    }
                    let (next, kind) = self.partner[cur.polygon][(cur.vertex + n - 1) % n];
                    sign *= kind.sign();
                    cur = Corner { polygon: next.polygon, vertex: next.edge };
                    if cur.polygon == p && cur.vertex == k {
                        break;
                    }
                }
                if undecidable || half_turns == 0 {
                    violations.push(Violation::AngleNotMultipleOfPi { class });
                }
                let puncture = punctures.iter().any(|c| corners.contains(c));
                cones.push(ConePoint {
                    class,
                    angle_pi: half_turns,
                    ord: half_turns as i32 - 2,
                    puncture,
                    corners,
                });
            }
        }
        if !violations.is_empty() {
            return Err(SurfaceError::Invalid(violations));
        }
        self.corner_class = corner_class;
        self.cones = cones;
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn polygon(&self, i: usize) -> &Polygon {
        &self.polygons[i]
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn partner(&self, e: EdgeRef) -> (EdgeRef, GluingKind) {
        self.partner[e.polygon][e.edge]
    }

    /// Chart change from `e.polygon` to the polygon across edge `e`.
    pub fn transition(&self, e: EdgeRef) -> (EdgeRef, Chart) {
        let (f, kind) = self.partner(e);
        let a_start = self.polygons[e.polygon].vertex(e.edge);
        let b_end = self.polygons[f.polygon].vertex(f.edge + 1);
        let chart = match kind {
            GluingKind::Translation => Chart { sign: 1, t: b_end - a_start },
            GluingKind::Flip => Chart { sign: -1, t: a_start + b_end },
        };
        (f, chart)
    }

    pub fn corner_class(&self, c: Corner) -> usize {
        self.corner_class[c.polygon][c.vertex % self.polygons[c.polygon].len()]
    }

    pub fn cone_points(&self) -> &[ConePoint] {
        &self.cones
    }

    pub fn is_translation_surface(&self) -> bool {
        self.gluings.iter().all(|g| g.kind == GluingKind::Translation)
    }

    pub fn punctures(&self) -> Vec<Corner> {
        self.cones.iter().filter(|c| c.puncture).map(|c| c.corners[0]).collect()
    }

    /// Euler characteristic `V - E + F` of the glued complex.
    pub fn euler_characteristic(&self) -> i64 {
        self.cones.len() as i64 - self.gluings.len() as i64 + self.polygons.len() as i64
    }

    pub fn surface_type(&self) -> SurfaceType {
        let chi = self.euler_characteristic();
        let genus = ((2 - chi) / 2) as u32;
        let mut stratum: Vec<i32> = self.cones.iter().map(|c| c.ord).collect();
        stratum.sort();
        SurfaceType { genus, punctures: self.cones.iter().filter(|c| c.puncture).count() as u32, stratum }
    }

    pub fn area(&self) -> Scalar {
        self.polygons.iter().fold(Scalar::zero(), |acc, p| acc + p.area())
    }

    /// Image of the surface under the linear map `a` (with `det a = 1`).
    pub fn apply_matrix(&self, a: &Mat2) -> Result<FlatSurface, SurfaceError> {
        if !a.is_unimodular() {
            return Err(SurfaceError::NotUnimodular);
        }
        let polygons = self.polygons.iter().map(|p| p.transformed(a)).collect();
        FlatSurface::new(polygons, self.gluings.clone(), &self.punctures())
    }

    /// Same surface with polygons listed in a different order: new polygon `i` is old `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<FlatSurface, SurfaceError> {
        let mut inv = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let polygons = perm.iter().map(|&p| self.polygons[p].clone()).collect();
        let gluings = self
            .gluings
            .iter()
            .map(|g| Gluing {
                a: EdgeRef::new(inv[g.a.polygon], g.a.edge),
                b: EdgeRef::new(inv[g.b.polygon], g.b.edge),
                kind: g.kind,
            })
            .collect();
        let punctures: Vec<Corner> = self
            .punctures()
            .into_iter()
            .map(|c| Corner { polygon: inv[c.polygon], vertex: c.vertex })
            .collect();
        FlatSurface::new(polygons, gluings, &punctures)
    }

    /// Replaces every coordinate by its interval enclosure.
    pub fn to_interval(&self, bits: u32) -> FlatSurface {
        let polygons = self
            .polygons
            .iter()
            .map(|p| Polygon {
                vertices: p
                    .vertices
                    .iter()
                    .map(|v| Vec2::new(Scalar::Interval(v.x.to_interval(bits)), Scalar::Interval(v.y.to_interval(bits))))
                    .collect(),
            })
            .collect();
        FlatSurface { field: Field::Interval, polygons, ..self.clone() }
    }

    /// Canonical representative of a point given in the chart of `polygon`.
    pub fn canonical_point(&self, polygon: usize, x: &Vec2) -> Result<SurfacePoint, ScalarError> {
        let poly = &self.polygons[polygon];
        match poly.locate(x)? {
            PointLocation::Vertex(k) => Ok(SurfacePoint::Vertex { class: self.corner_class[polygon][k] }),
            PointLocation::Edge(e) => {
                let (f, chart) = self.transition(EdgeRef::new(polygon, e));
                let y = chart.apply(x);
                if (f.polygon, f.edge) < (polygon, e) {
                    Ok(SurfacePoint::Regular { polygon: f.polygon, x: y })
                } else {
                    Ok(SurfacePoint::Regular { polygon, x: x.clone() })
                }
            }
            PointLocation::Interior => Ok(SurfacePoint::Regular { polygon, x: x.clone() }),
        }
    }

    pub fn point_position(&self, p: &SurfacePoint) -> (usize, Vec2) {
        match p {
            SurfacePoint::Vertex { class } => {
                let c = self.cones[*class].corners.iter().min().unwrap();
                (c.polygon, self.polygons[c.polygon].vertex(c.vertex).clone())
            }
            SurfacePoint::Regular { polygon, x } => (*polygon, x.clone()),
        }
    }

    /// Classes of vertices, as sets of corners, sorted.
    pub fn class_corners(&self) -> Vec<BTreeSet<Corner>> {
        self.cones.iter().map(|c| c.corners.iter().copied().collect()).collect()
    }

    /// Serializable description.
    pub fn to_file(&self) -> SurfaceFile {
        SurfaceFile::from_surface(self)
    }
}

fn signed(v: &Vec2, sign: i8) -> Vec2 {
    if sign > 0 {
        v.clone()
    } else {
        -v
    }
}

/// A point of a surface: a vertex class, or a regular point in a polygon chart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SurfacePoint {
    Vertex { class: usize },
    Regular { polygon: usize, x: Vec2 },
}

impl SurfacePoint {
    pub fn key(&self) -> String {
        match self {
            SurfacePoint::Vertex { class } => format!("v{class}"),
            SurfacePoint::Regular { polygon, x } => format!("p{polygon}{}", x.key()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn unit_square() -> Polygon {
        Polygon::new(vec![Vec2::ints(0, 0), Vec2::ints(1, 0), Vec2::ints(1, 1), Vec2::ints(0, 1)])
    }

    fn torus() -> FlatSurface {
        FlatSurface::new(
            vec![unit_square()],
            vec![
                Gluing { a: EdgeRef::new(0, 0), b: EdgeRef::new(0, 2), kind: GluingKind::Translation },
                Gluing { a: EdgeRef::new(0, 1), b: EdgeRef::new(0, 3), kind: GluingKind::Translation },
            ],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn torus_has_one_regular_point() {
        let t = torus();
        assert_eq!(t.cone_points().len(), 1);
        assert_eq!(t.cone_points()[0].angle_pi, 2);
        assert_eq!(t.cone_points()[0].ord, 0);
        assert_eq!(t.surface_type(), SurfaceType { genus: 1, punctures: 0, stratum: vec![0] });
        assert_eq!(t.area(), Scalar::one());
    }

    #[test]
    fn unpaired_edge_is_reported() {
        let err = FlatSurface::new(
            vec![unit_square()],
            vec![Gluing { a: EdgeRef::new(0, 0), b: EdgeRef::new(0, 2), kind: GluingKind::Translation }],
            &[],
        )
        .unwrap_err();
        assert!(err.violations().contains(&Violation::UnpairedEdge { polygon: 0, edge: 1 }));
        assert!(err.violations().contains(&Violation::UnpairedEdge { polygon: 0, edge: 3 }));
    }

    #[test]
    fn mismatched_and_nonconvex() {
        let rect = Polygon::new(vec![Vec2::ints(0, 0), Vec2::ints(2, 0), Vec2::ints(2, 1), Vec2::ints(0, 1)]);
        let err = FlatSurface::new(
            vec![rect],
            vec![
                Gluing { a: EdgeRef::new(0, 0), b: EdgeRef::new(0, 1), kind: GluingKind::Translation },
                Gluing { a: EdgeRef::new(0, 2), b: EdgeRef::new(0, 3), kind: GluingKind::Translation },
            ],
            &[],
        )
        .unwrap_err();
        assert!(matches!(err.violations()[0], Violation::EdgeLengthMismatch { .. }));
        let dart = Polygon::new(vec![Vec2::ints(0, 0), Vec2::ints(2, 1), Vec2::ints(4, 0), Vec2::ints(2, 3)]);
        let err = FlatSurface::new(vec![dart], vec![], &[]).unwrap_err();
        assert!(err.violations().contains(&Violation::NonConvexPolygon { polygon: 0 }));
    }

    #[test]
    fn disconnected_is_reported() {
        let g = |p| {
            vec![
                Gluing { a: EdgeRef::new(p, 0), b: EdgeRef::new(p, 2), kind: GluingKind::Translation },
                Gluing { a: EdgeRef::new(p, 1), b: EdgeRef::new(p, 3), kind: GluingKind::Translation },
            ]
        };
        let mut gl = g(0);
        gl.extend(g(1));
        let err = FlatSurface::new(vec![unit_square(), unit_square()], gl, &[]).unwrap_err();
        assert_eq!(err.violations(), &[Violation::Disconnected]);
    }

    #[test]
    fn pillowcase_by_flips() {
        // two squares folded along their horizontal sides: four points of angle pi
        let gl = vec![
            Gluing { a: EdgeRef::new(0, 0), b: EdgeRef::new(1, 0), kind: GluingKind::Flip },
            Gluing { a: EdgeRef::new(0, 1), b: EdgeRef::new(1, 3), kind: GluingKind::Translation },
            Gluing { a: EdgeRef::new(0, 2), b: EdgeRef::new(1, 2), kind: GluingKind::Flip },
            Gluing { a: EdgeRef::new(0, 3), b: EdgeRef::new(1, 1), kind: GluingKind::Translation },
        ];
        let s = FlatSurface::new(vec![unit_square(), unit_square()], gl, &[]).unwrap();
        let t = s.surface_type();
        assert_eq!(t.genus, 0);
        assert_eq!(t.stratum, vec![-1, -1, -1, -1]);
        let total: i32 = t.stratum.iter().sum();
        assert_eq!(total, 4 * t.genus as i32 - 4);
    }

    #[test]
    fn shear_preserves_area() {
        let s = torus().apply_matrix(&Mat2::ints(1, 1, 0, 1)).unwrap();
        assert_eq!(s.area(), Scalar::one());
        assert!(matches!(torus().apply_matrix(&Mat2::ints(2, 0, 0, 1)), Err(SurfaceError::NotUnimodular)));
    }
}
