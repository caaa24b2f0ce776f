//! Cylinder decompositions in periodic directions, built from the separatrix
//! diagram: every separatrix is traced to its endpoint, boundary components are
//! the cycles of "turn right by pi at the endpoint", and the two boundaries of
//! each cylinder are paired by a perpendicular flow.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::walk::{advance, direction_key, in_wedge, normalize_direction, rotate_half_turn, step, Pos, Step};
use super::{Direction, FlowError};
use crate::geom::Vec2;
use crate::par;
use crate::scalar::{Scalar, ScalarError};
use crate::surface::{Corner, EdgeRef, FlatSurface, PointLocation};

/// Default cap on edge crossings per separatrix.
pub const DEFAULT_MAX_SEPARATRIX_CROSSINGS: usize = 10_000;

/// A straight piece of a saddle connection inside one polygon chart.
#[derive(Debug, Clone)]
struct Segment {
    polygon: usize,
    a: Vec2,
    b: Vec2,
    /// Direction of travel along the canonical orientation.
    w: Vec2,
    saddle: usize,
}

/// A saddle connection parallel to the decomposition direction.
#[derive(Debug, Clone, Serialize)]
pub struct DirectionalSaddle {
    pub start_class: usize,
    pub end_class: usize,
    /// Length as a multiple of the direction vector.
    pub length: Scalar,
    pub crossings: Vec<EdgeRef>,
    #[serde(skip)]
    start: (Corner, Vec2),
    #[serde(skip)]
    arrival: (Corner, Vec2),
    #[serde(skip)]
    segments: Vec<Segment>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Cylinder {
    /// Circumference and height as multiples of the length of the direction vector.
    pub circumference_param: Scalar,
    pub height_param: Scalar,
    pub width_squared: Scalar,
    pub height_squared: Scalar,
    /// Circumference `W`, when its square root is exact.
    pub width: Option<Scalar>,
    /// Height `H`, when its square root is exact.
    pub height: Option<Scalar>,
    pub modulus: Scalar,
    pub area: Scalar,
    /// Oriented saddle connections (`2i` along the stored orientation of saddle
    /// `i`, `2i + 1` against it) on the two boundary components, each with the
    /// cylinder on its left.
    pub boundary: [Vec<usize>; 2],
    /// A point on the core curve, moving along the cylinder.
    #[serde(skip)]
    pub core: Pos,
}

#[derive(Debug, Clone, Serialize)]
pub struct CylinderDecomposition {
    pub direction: Direction,
    pub cylinders: Vec<Cylinder>,
    pub saddles: Vec<DirectionalSaddle>,
    #[serde(skip)]
    segments: Vec<Vec<Segment>>,
    #[serde(skip)]
    component_of: Vec<usize>,
    #[serde(skip)]
    cylinder_of: Vec<usize>,
}

impl CylinderDecomposition {
    /// Boundary component sizes `(n0, n1)` of a one-cylinder decomposition, larger first.
    pub fn boundary_counts(&self) -> Option<(usize, usize)> {
        match self.cylinders.as_slice() {
            [c] => {
                let (a, b) = (c.boundary[0].len(), c.boundary[1].len());
                Some((a.max(b), a.min(b)))
            }
            _ => None,
        }
    }

    pub fn total_area(&self) -> Scalar {
        self.cylinders.iter().fold(Scalar::zero(), |acc, c| &acc + &c.area)
    }

    /// Index of the cylinder containing the regular point `x` of `polygon`, or
    /// `None` when `x` lies on a saddle connection.
    pub fn locate(&self, s: &FlatSurface, polygon: usize, x: &Vec2) -> Result<Option<usize>, FlowError> {
        let n = self.direction.vector().rot90();
        let start = Pos { polygon, x: x.clone(), w: n };
        if self.on_saddle(polygon, x)? {
            return Ok(None);
        }
        Ok(first_hit(s, &self.segments, &start)?.map(|h| self.cylinder_of[self.component_of[h.oriented]]))
    }

    /// Cylinder containing `x` and the side (index into `boundary`) of the
    /// boundary component closer to it.
    ///
    /// `None` when `x` is on a saddle connection, on a core curve, or when the
    /// perpendicular through `x` runs into a vertex.
    pub fn nearer_boundary(&self, s: &FlatSurface, polygon: usize, x: &Vec2) -> Result<Option<(usize, usize)>, FlowError> {
        if self.on_saddle(polygon, x)? {
            return Ok(None);
        }
        let n = self.direction.vector().rot90();
        let up = first_hit(s, &self.segments, &Pos { polygon, x: x.clone(), w: n.clone() })?;
        let down = first_hit(s, &self.segments, &Pos { polygon, x: x.clone(), w: -n })?;
        let (Some(up), Some(down)) = (up, down) else {
            return Ok(None);
        };
        let near = match up.tau.cmp_checked(&down.tau)? {
            Ordering::Less => up,
            Ordering::Greater => down,
            Ordering::Equal => return Ok(None),
        };
        let component = self.component_of[near.oriented];
        let cylinder = self.cylinder_of[component];
        let side = self.cylinders[cylinder]
            .boundary
            .iter()
            .position(|b| b.first().is_some_and(|&o| self.component_of[o] == component))
            .ok_or_else(|| FlowError::Inconsistent("boundary component not attached to its cylinder".into()))?;
        Ok(Some((cylinder, side)))
    }

    fn on_saddle(&self, polygon: usize, x: &Vec2) -> Result<bool, ScalarError> {
        for seg in &self.segments[polygon] {
            let e = &seg.b - &seg.a;
            let r = x - &seg.a;
            if e.cross(&r).signum_checked()? == 0 {
                let t = e.dot(&r);
                if t.signum_checked()? >= 0 && (&t - &e.norm2()).signum_checked()? <= 0 {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

struct Traced {
    end: Corner,
    end_dir: Vec2,
    length: Scalar,
    crossings: Vec<EdgeRef>,
    segments: Vec<Segment>,
}

fn trace_separatrix(s: &FlatSurface, c: Corner, u: &Vec2, max: usize) -> Result<Traced, FlowError> {
    let mut pos = Pos { polygon: c.polygon, x: s.polygon(c.polygon).vertex(c.vertex).clone(), w: u.clone() };
    let mut length = Scalar::zero();
    let mut crossings = Vec::new();
    let mut segments = Vec::new();
    loop {
        match step(s, &pos)? {
            Step::Arrived { corner, t } => {
                let b = s.polygon(corner.polygon).vertex(corner.vertex).clone();
                segments.push(Segment { polygon: pos.polygon, a: pos.x, b, w: pos.w.clone(), saddle: 0 });
                length = &length + &t;
                return Ok(Traced { end: corner, end_dir: pos.w, length, crossings, segments });
            }
            Step::Crossed { edge, t, exit_point, next } => {
                segments.push(Segment { polygon: pos.polygon, a: pos.x, b: exit_point, w: pos.w, saddle: 0 });
                length = &length + &t;
                crossings.push(edge);
                if crossings.len() > max {
                    return Err(FlowError::NotPeriodicWithinBound { corner: c, direction: Box::new(u.clone()), crossings: max });
                }
                pos = next;
            }
        }
    }
}

struct Hit {
    oriented: usize,
    tau: Scalar,
}

/// Flows from a regular point until the first stored saddle segment.
///
/// Returns `None` when the path runs into a vertex first, so the caller can
/// pick another start point.
fn first_hit(s: &FlatSurface, segments: &[Vec<Segment>], start: &Pos) -> Result<Option<Hit>, FlowError> {
    let mut pos = start.clone();
    let mut acc = Scalar::zero();
    let limit = 4 * segments.iter().map(Vec::len).sum::<usize>() + 4 * s.polygons().len() + 16;
    for _ in 0..limit {
        let (t_exit, next) = match step(s, &pos)? {
            Step::Arrived { t, .. } => (t, None),
            Step::Crossed { t, next, .. } => (t, Some(next)),
        };
        let mut best: Option<(Scalar, &Segment, Scalar)> = None;
        for seg in &segments[pos.polygon] {
            let e = &seg.b - &seg.a;
            let den = pos.w.cross(&e);
            if den.signum_checked()? == 0 {
                continue;
            }
            let r = &seg.a - &pos.x;
            let tau = r.cross(&e) / &den;
            if tau.signum_checked()? <= 0 || (&tau - &t_exit).signum_checked()? > 0 {
                continue;
            }
            let lam = r.cross(&pos.w) / &den;
            if lam.signum_checked()? < 0 || (&lam - Scalar::one()).signum_checked()? > 0 {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bt, _, _)) => tau.cmp_checked(bt)? == Ordering::Less,
            };
            if better {
                best = Some((tau, seg, lam));
            }
        }
        if let Some((tau, seg, lam)) = best {
            let endpoint = if lam.is_zero() {
                Some(&seg.a)
            } else if (&lam - Scalar::one()).is_zero() {
                Some(&seg.b)
            } else {
                None
            };
            if let Some(p) = endpoint {
                if matches!(s.polygon(seg.polygon).locate(p)?, PointLocation::Vertex(_)) {
                    return Ok(None);
                }
            }
            let canonical_side = seg.w.cross(&-&pos.w).signum_checked()? > 0;
            let oriented = 2 * seg.saddle + usize::from(!canonical_side);
            return Ok(Some(Hit { oriented, tau: &acc + &tau }));
        }
        match next {
            None => return Ok(None),
            Some(nx) => {
                acc = &acc + &t_exit;
                pos = nx;
            }
        }
    }
    Err(FlowError::Inconsistent("perpendicular flow did not meet a boundary".into()))
}

/// Sample fractions `1/2, 1/3, 2/3, 1/4, 3/4, ...` used to dodge vertices.
fn fractions() -> impl Iterator<Item = Scalar> {
    (2i64..40).flat_map(|q| (1..q).filter(move |p| num_integer::gcd(*p, q) == 1).map(move |p| Scalar::frac(p, q)))
}

/// Decomposes the surface into cylinders in direction `dir`.
///
/// Every separatrix is followed for at most `max_crossings` edge crossings;
/// if one survives, the direction is not certified periodic.
pub fn cylinder_decomposition(
    s: &FlatSurface,
    dir: &Direction,
    max_crossings: usize,
) -> Result<CylinderDecomposition, FlowError> {
    let v = dir.vector().clone();
    let mut starts = Vec::new();
    for (p, poly) in s.polygons().iter().enumerate() {
        for k in 0..poly.len() {
            let c = Corner { polygon: p, vertex: k };
            for u in [v.clone(), -&v] {
                if in_wedge(s, c, &u)? {
                    starts.push((c, u));
                }
            }
        }
    }
    let traced = par::map(&starts, |(c, u)| trace_separatrix(s, *c, u, max_crossings));

    let mut saddles: Vec<DirectionalSaddle> = Vec::new();
    let mut start_index: HashMap<String, usize> = HashMap::new();
    for ((c, u), t) in starts.iter().zip(traced) {
        let t = t?;
        let (ec, eu) = normalize_direction(s, t.end, &-&t.end_dir)?;
        let ks = direction_key(*c, u);
        let ke = direction_key(ec, &eu);
        if ks > ke {
            continue;
        }
        let id = saddles.len();
        start_index.insert(ks, 2 * id);
        start_index.insert(ke, 2 * id + 1);
        let segments = t.segments.into_iter().map(|seg| Segment { saddle: id, ..seg }).collect();
        saddles.push(DirectionalSaddle {
            start_class: s.corner_class(*c),
            end_class: s.corner_class(t.end),
            length: t.length,
            crossings: t.crossings,
            start: (*c, u.clone()),
            arrival: (t.end, t.end_dir),
            segments,
        });
    }
    if start_index.len() != starts.len() {
        return Err(FlowError::Inconsistent("separatrices do not pair into saddle connections".into()));
    }

    let arrival = |o: usize| -> (Corner, Vec2) {
        let sc = &saddles[o / 2];
        if o.is_multiple_of(2) {
            sc.arrival.clone()
        } else {
            (sc.start.0, -&sc.start.1)
        }
    };
    let m = 2 * saddles.len();
    let mut next = vec![0usize; m];
    for (o, slot) in next.iter_mut().enumerate() {
        let (ce, de) = arrival(o);
        let (cb, ub) = normalize_direction(s, ce, &-&de)?;
        let (cn, un) = rotate_half_turn(s, cb, &ub, false)?;
        *slot = *start_index
            .get(&direction_key(cn, &un))
            .ok_or_else(|| FlowError::Inconsistent("boundary turn found no outgoing saddle connection".into()))?;
    }

    let mut component_of = vec![usize::MAX; m];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for o in 0..m {
        if component_of[o] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut cycle = Vec::new();
        let mut cur = o;
        while component_of[cur] == usize::MAX {
            component_of[cur] = id;
            cycle.push(cur);
            cur = next[cur];
        }
        components.push(cycle);
    }

    let mut segments: Vec<Vec<Segment>> = vec![Vec::new(); s.polygons().len()];
    for sc in &saddles {
        for seg in &sc.segments {
            segments[seg.polygon].push(seg.clone());
            if let Some(e) = edge_containing(s, seg)? {
                let (f, chart) = s.transition(EdgeRef::new(seg.polygon, e));
                segments[f.polygon].push(Segment {
                    polygon: f.polygon,
                    a: chart.apply(&seg.a),
                    b: chart.apply(&seg.b),
                    w: chart.apply_linear(&seg.w),
                    saddle: seg.saddle,
                });
            }
        }
    }

    let length_of = |comp: &[usize]| comp.iter().fold(Scalar::zero(), |acc, o| &acc + &saddles[o / 2].length);
    let v2 = v.norm2();
    let mut cylinder_of = vec![usize::MAX; components.len()];
    let mut cylinders = Vec::new();
    for a in 0..components.len() {
        if cylinder_of[a] != usize::MAX {
            continue;
        }
        let o = components[a][0];
        let sc = &saddles[o / 2];
        let (seg, d) = if o.is_multiple_of(2) {
            let seg = &sc.segments[0];
            (seg, seg.w.clone())
        } else {
            let seg = sc.segments.last().expect("saddle has a segment");
            (seg, -&seg.w)
        };
        let mut found = None;
        for f in fractions() {
            let x = &seg.a + &(&seg.b - &seg.a).scale(&f);
            let start = Pos { polygon: seg.polygon, x, w: d.rot90() };
            if let Some(hit) = first_hit(s, &segments, &start)? {
                found = Some((start, hit));
                break;
            }
        }
        let (start, hit) = found.ok_or_else(|| FlowError::Inconsistent("no vertex-free transversal".into()))?;
        let b = component_of[hit.oriented];
        if b == a || cylinder_of[b] != usize::MAX {
            return Err(FlowError::Inconsistent("boundary components do not pair".into()));
        }
        let circumference = length_of(&components[a]);
        if circumference != length_of(&components[b]) {
            return Err(FlowError::Inconsistent("paired boundaries have different lengths".into()));
        }
        let mid = advance(s, &start, &(&hit.tau / &Scalar::int(2)))?;
        let core = Pos { polygon: mid.polygon, x: mid.x, w: -mid.w.rot90() };
        let idx = cylinders.len();
        cylinder_of[a] = idx;
        cylinder_of[b] = idx;
        let width_squared = &(&circumference * &circumference) * &v2;
        let height_squared = &(&hit.tau * &hit.tau) * &v2;
        cylinders.push(Cylinder {
            width: width_squared.sqrt_exact(),
            height: height_squared.sqrt_exact(),
            modulus: &circumference / &hit.tau,
            area: &(&circumference * &hit.tau) * &v2,
            circumference_param: circumference,
            height_param: hit.tau,
            width_squared,
            height_squared,
            boundary: [components[a].clone(), components[b].clone()],
            core,
        });
    }

    let dec = CylinderDecomposition {
        direction: dir.clone(),
        cylinders,
        saddles,
        segments,
        component_of,
        cylinder_of,
    };
    if dec.total_area().cmp_checked(&s.area())? != Ordering::Equal {
        return Err(FlowError::Inconsistent("cylinder areas do not sum to the surface area".into()));
    }
    Ok(dec)
}

/// The edge of the segment's polygon that contains the whole segment, if any.
fn edge_containing(s: &FlatSurface, seg: &Segment) -> Result<Option<usize>, ScalarError> {
    let poly = s.polygon(seg.polygon);
    for i in 0..poly.len() {
        let d = poly.edge(i);
        let v = poly.vertex(i);
        if d.cross(&(&seg.a - v)).signum_checked()? == 0 && d.cross(&(&seg.b - v)).signum_checked()? == 0 {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "cylinders")]
pub enum JenkinsStrebel {
    Simple,
    Multi(usize),
    No,
}

pub fn is_jenkins_strebel(d: &CylinderDecomposition) -> JenkinsStrebel {
    match d.cylinders.len() {
        0 => JenkinsStrebel::No,
        1 => JenkinsStrebel::Simple,
        k => JenkinsStrebel::Multi(k),
    }
}

impl JenkinsStrebel {
    /// Verdict for a decomposition attempt; an uncertified direction counts as `No`.
    pub fn of(result: &Result<CylinderDecomposition, FlowError>) -> JenkinsStrebel {
        match result {
            Ok(d) => is_jenkins_strebel(d),
            Err(_) => JenkinsStrebel::No,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuliRatios {
    pub rational: bool,
    pub ratios: Vec<Scalar>,
}

/// Ratios `mod_i / mod_j` for `i < j` (or `[1]` for a single cylinder).
pub fn moduli_ratios(d: &CylinderDecomposition) -> Result<ModuliRatios, FlowError> {
    let mods: Vec<&Scalar> = d.cylinders.iter().map(|c| &c.modulus).collect();
    let mut ratios = Vec::new();
    if mods.len() == 1 {
        ratios.push(Scalar::one());
    }
    for i in 0..mods.len() {
        for j in i + 1..mods.len() {
            ratios.push(mods[i].try_div(mods[j])?);
        }
    }
    if ratios.iter().any(|r| !r.is_exact()) {
        return Err(FlowError::IndeterminateSign("moduli ratios over the interval backend".into()));
    }
    let rational = ratios.iter().all(|r| matches!(r, Scalar::Rational(_)));
    Ok(ModuliRatios { rational, ratios })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingWord {
    pub word: String,
    /// Letter indices of `word`.
    pub labels: Vec<usize>,
    /// Largest `n` with `word = b^n`.
    pub n: usize,
}

/// Reads the labels of the parallelograms cut from the single cylinder of `d`
/// by the cylinders in the `transverse` direction.
///
/// Two parallelograms share a label when they lie in transverse cylinders of
/// equal circumference and height.
pub fn gluing_word(
    s: &FlatSurface,
    d: &CylinderDecomposition,
    transverse: &Direction,
    max_crossings: usize,
) -> Result<GluingWord, FlowError> {
    let [cyl] = d.cylinders.as_slice() else {
        return Err(FlowError::NotSimple(d.cylinders.len()));
    };
    let td = cylinder_decomposition(s, transverse, max_crossings)?;
    let total = &cyl.circumference_param;

    let mut cuts: Vec<Scalar> = Vec::new();
    let mut pos = cyl.core.clone();
    let mut acc = Scalar::zero();
    while acc.cmp_checked(total)? == Ordering::Less {
        let (t, next) = match step(s, &pos)? {
            Step::Crossed { t, next, .. } => (t, next),
            Step::Arrived { .. } => return Err(FlowError::Inconsistent("core curve meets a vertex".into())),
        };
        for seg in &td.segments[pos.polygon] {
            let e = &seg.b - &seg.a;
            let den = pos.w.cross(&e);
            if den.signum_checked()? == 0 {
                continue;
            }
            let r = &seg.a - &pos.x;
            let tau = r.cross(&e) / &den;
            let lam = r.cross(&pos.w) / &den;
            if tau.signum_checked()? < 0 || (&tau - &t).signum_checked()? >= 0 {
                continue;
            }
            if lam.signum_checked()? < 0 || (&lam - Scalar::one()).signum_checked()? > 0 {
                continue;
            }
            let at = &acc + &tau;
            if at.cmp_checked(total)? == Ordering::Less {
                cuts.push(at);
            }
        }
        acc = &acc + &t;
        pos = next;
    }
    let mut unique: BTreeMap<String, Scalar> = BTreeMap::new();
    for c in cuts {
        unique.entry(c.key()).or_insert(c);
    }
    let mut cuts: Vec<Scalar> = unique.into_values().collect();
    cuts.sort_by(|a, b| a.cmp_checked(b).unwrap_or(Ordering::Equal));
    if cuts.is_empty() {
        return Err(FlowError::Inconsistent("transverse direction does not cut the cylinder".into()));
    }

    let mut classes: Vec<(Scalar, Scalar)> = Vec::new();
    let mut raw = Vec::with_capacity(cuts.len());
    for (j, lo) in cuts.iter().enumerate() {
        let hi = if j + 1 < cuts.len() { cuts[j + 1].clone() } else { &cuts[0] + total };
        let mut located = None;
        for f in fractions() {
            let mut m = lo + &(&(&hi - lo) * &f);
            if m.cmp_checked(total)? != Ordering::Less {
                m = &m - total;
            }
            let p = advance(s, &cyl.core, &m)?;
            if let Some(c) = td.locate(s, p.polygon, &p.x)? {
                located = Some(c);
                break;
            }
        }
        let c = located.ok_or_else(|| FlowError::Inconsistent("no vertex-free sample in a parallelogram".into()))?;
        let tc = &td.cylinders[c];
        let key = (tc.circumference_param.clone(), tc.height_param.clone());
        let class = match classes.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                classes.push(key);
                classes.len() - 1
            }
        };
        raw.push(class);
    }

    let labels = canonical_rotation(&raw);
    let k = labels.len();
    let period = (1..=k).find(|p| k.is_multiple_of(*p) && (0..k).all(|i| labels[i] == labels[(i + p) % k])).unwrap_or(k);
    let word = labels.iter().map(|&l| letter(l)).collect();
    Ok(GluingWord { word, labels, n: k / period })
}

fn letter(l: usize) -> char {
    char::from_u32('a' as u32 + l as u32).unwrap_or('?')
}

/// Lexicographically least rotation after relabeling letters by first appearance.
fn canonical_rotation(raw: &[usize]) -> Vec<usize> {
    let k = raw.len();
    (0..k)
        .map(|r| {
            let mut map: Vec<(usize, usize)> = Vec::new();
            (0..k)
                .map(|i| {
                    let x = raw[(i + r) % k];
                    match map.iter().find(|(from, _)| *from == x) {
                        Some((_, to)) => *to,
                        None => {
                            map.push((x, map.len()));
                            map.len() - 1
                        }
                    }
                })
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Origami;

    fn torus() -> FlatSurface {
        Origami::new(vec![0], vec![0]).unwrap().to_surface()
    }

    #[test]
    fn torus_horizontal() {
        let d = cylinder_decomposition(&torus(), &Direction::horizontal(), 100).unwrap();
        assert_eq!(d.cylinders.len(), 1);
        let c = &d.cylinders[0];
        assert_eq!(c.width, Some(Scalar::one()));
        assert_eq!(c.height, Some(Scalar::one()));
        assert_eq!(is_jenkins_strebel(&d), JenkinsStrebel::Simple);
        assert_eq!(d.boundary_counts(), Some((1, 1)));
    }

    #[test]
    fn torus_slope_two() {
        let d = cylinder_decomposition(&torus(), &Direction::ints(1, 2).unwrap(), 100).unwrap();
        assert_eq!(d.cylinders.len(), 1);
        let c = &d.cylinders[0];
        assert_eq!(c.width_squared, Scalar::int(5));
        assert_eq!(c.height_squared, Scalar::frac(1, 5));
        assert_eq!(c.width, Some(Scalar::sqrt_int(5)));
    }

    #[test]
    fn two_square_torus_words() {
        let s = Origami::from_one_indexed(&[2, 1], &[1, 2]).unwrap().to_surface();
        let d = cylinder_decomposition(&s, &Direction::horizontal(), 100).unwrap();
        assert_eq!(d.cylinders.len(), 1);
        let w = gluing_word(&s, &d, &Direction::vertical(), 100).unwrap();
        assert_eq!(w.word, "aa");
        assert_eq!(w.n, 2);
        let w1 = gluing_word(&torus(), &cylinder_decomposition(&torus(), &Direction::horizontal(), 100).unwrap(), &Direction::vertical(), 100).unwrap();
        assert_eq!((w1.word.as_str(), w1.n), ("a", 1));
    }

    #[test]
    fn not_simple_word() {
        let s = Origami::from_one_indexed(&[2, 1], &[1, 2]).unwrap().to_surface();
        let d = cylinder_decomposition(&s, &Direction::vertical(), 100).unwrap();
        assert_eq!(is_jenkins_strebel(&d), JenkinsStrebel::Multi(2));
        assert!(matches!(gluing_word(&s, &d, &Direction::horizontal(), 100), Err(FlowError::NotSimple(2))));
    }

    #[test]
    fn locate_points() {
        let s = Origami::from_one_indexed(&[2, 1], &[1, 2]).unwrap().to_surface();
        let d = cylinder_decomposition(&s, &Direction::vertical(), 100).unwrap();
        let half = Scalar::frac(1, 2);
        let a = d.locate(&s, 0, &Vec2::new(half.clone(), half.clone())).unwrap();
        let b = d.locate(&s, 1, &Vec2::new(Scalar::frac(3, 2), half)).unwrap();
        assert!(a.is_some() && b.is_some() && a != b);
        assert_eq!(d.locate(&s, 0, &Vec2::new(Scalar::zero(), Scalar::frac(1, 3))).unwrap(), None);
    }

    #[test]
    fn canonical_rotation_relabels() {
        assert_eq!(canonical_rotation(&[3, 1, 3, 1]), vec![0, 1, 0, 1]);
        assert_eq!(canonical_rotation(&[1, 1, 0]), vec![0, 0, 1]);
    }

    #[test]
    fn ratios_of_single_cylinder() {
        let d = cylinder_decomposition(&torus(), &Direction::horizontal(), 100).unwrap();
        let r = moduli_ratios(&d).unwrap();
        assert!(r.rational);
        assert_eq!(r.ratios, vec![Scalar::one()]);
    }
}
