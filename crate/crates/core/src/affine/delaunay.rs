//! Delaunay decomposition of a flat surface.
//!
//! A fan triangulation of every polygon is flipped until each edge is locally
//! Delaunay, then triangles sharing a circumcircle are merged into cells. The
//! resulting cell structure depends only on the flat metric and the marked
//! points, so it is a normal form for comparing surfaces.

use std::collections::VecDeque;

use crate::geom::{Chart, Vec2};
use crate::scalar::ScalarError;
use crate::surface::{Corner, EdgeRef, FlatSurface, Gluing, GluingKind, Polygon, SurfaceError};

/// Part of a cell lying in one polygon of the original surface.
#[derive(Debug, Clone)]
pub struct Piece {
    pub polygon: usize,
    /// Map from cell coordinates to the polygon's coordinates.
    pub to_polygon: Chart,
    /// Convex region in cell coordinates.
    pub region: Vec<Vec2>,
}

/// The Delaunay cells of a surface, glued into a surface of their own.
#[derive(Debug, Clone)]
pub struct CellComplex {
    pub surface: FlatSurface,
    pub pieces: Vec<Vec<Piece>>,
}

/// Sign of the incircle determinant: positive when `d` lies strictly inside
/// the circle through the counterclockwise triangle `a, b, c`.
pub fn incircle(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> Result<i8, ScalarError> {
    let (p, q, r) = (a - d, b - d, c - d);
    let (pn, qn, rn) = (p.norm2(), q.norm2(), r.norm2());
    let det = &p.x * &(&(&q.y * &rn) - &(&qn * &r.y)) - &p.y * &(&(&q.x * &rn) - &(&qn * &r.x))
        + &pn * &(&(&q.x * &r.y) - &(&q.y * &r.x));
    det.signum_checked()
}

/// Intersection of a convex polygon with the left half-plane of `a -> b`.
fn clip_half_plane(region: &[Vec2], a: &Vec2, b: &Vec2) -> Result<Vec<Vec2>, ScalarError> {
    let e = b - a;
    let n = region.len();
    let mut out = Vec::new();
    for i in 0..n {
        let p = &region[i];
        let q = &region[(i + 1) % n];
        let sp = e.cross(&(p - a));
        let sq = e.cross(&(q - a));
        let (np, nq) = (sp.signum_checked()?, sq.signum_checked()?);
        if np >= 0 {
            out.push(p.clone());
        }
        if np * nq < 0 {
            let t = &sp / &(&sp - &sq);
            out.push(p + &(q - p).scale(&t));
        }
    }
    Ok(out)
}

/// Drops repeated and collinear vertices; returns an empty list for degenerate regions.
fn cleaned(mut pts: Vec<Vec2>) -> Result<Vec<Vec2>, ScalarError> {
    let mut changed = true;
    while changed && pts.len() >= 3 {
        changed = false;
        let n = pts.len();
        for i in 0..n {
            let prev = &pts[(i + n - 1) % n];
            let cur = &pts[i];
            let next = &pts[(i + 1) % n];
            if cur.same(prev)? || (cur - prev).cross(&(next - cur)).signum_checked()? == 0 {
                pts.remove(i);
                changed = true;
                break;
            }
        }
    }
    Ok(if pts.len() >= 3 { pts } else { Vec::new() })
}

/// Intersection of two convex counterclockwise polygons; empty when it has no interior.
pub fn clip_convex(subject: &[Vec2], clipper: &[Vec2]) -> Result<Vec<Vec2>, ScalarError> {
    let mut cur = subject.to_vec();
    let m = clipper.len();
    for i in 0..m {
        if cur.is_empty() {
            break;
        }
        cur = clip_half_plane(&cur, &clipper[i], &clipper[(i + 1) % m])?;
    }
    cleaned(cur)
}

#[derive(Debug, Clone)]
struct Tri {
    v: [Vec2; 3],
    class: [usize; 3],
    nb: [(usize, usize); 3],
    pieces: Vec<Piece>,
}

/// Chart from triangle `t` to the triangle across its edge `j`.
fn edge_chart(tris: &[Tri], t: usize, j: usize) -> Result<Chart, ScalarError> {
    let (u, k) = tris[t].nb[j];
    let a = &tris[t].v[j];
    let b = &tris[t].v[(j + 1) % 3];
    let c = &tris[u].v[k];
    let d = &tris[u].v[(k + 1) % 3];
    let sign = if (c - d).same(&(b - a))? { 1 } else { -1 };
    let lin = if sign > 0 { a.clone() } else { -a };
    Ok(Chart { sign, t: d - &lin })
}

fn map_region(chart: &Chart, region: &[Vec2]) -> Vec<Vec2> {
    region.iter().map(|p| chart.apply(p)).collect()
}

fn fan(s: &FlatSurface) -> Vec<Tri> {
    let mut tris = Vec::new();
    let mut slot: Vec<Vec<(usize, usize)>> = Vec::new();
    for (p, poly) in s.polygons().iter().enumerate() {
        let n = poly.len();
        let base = tris.len();
        let mut edges = vec![(0, 0); n];
        for i in 1..n - 1 {
            let t = base + i - 1;
            let v = [poly.vertex(0).clone(), poly.vertex(i).clone(), poly.vertex(i + 1).clone()];
            let class = [0, i, i + 1].map(|k| s.corner_class(Corner { polygon: p, vertex: k }));
            let e0 = if i == 1 { (usize::MAX, 0) } else { (t - 1, 2) };
            let e2 = if i == n - 2 { (usize::MAX, n - 1) } else { (t + 1, 0) };
            if i == 1 {
                edges[0] = (t, 0);
            }
            edges[i] = (t, 1);
            if i == n - 2 {
                edges[n - 1] = (t, 2);
            }
            let region = v.to_vec();
            tris.push(Tri {
                v,
                class,
                nb: [e0, (usize::MAX, i), e2],
                pieces: vec![Piece { polygon: p, to_polygon: Chart::identity(), region }],
            });
        }
        slot.push(edges);
    }
    for (p, edges) in slot.iter().enumerate() {
        for (e, &(t, j)) in edges.iter().enumerate() {
            let (f, _) = s.partner(EdgeRef::new(p, e));
            tris[t].nb[j] = slot[f.polygon][f.edge];
        }
    }
    tris
}

fn flip(tris: &mut [Tri], t: usize, j: usize) -> Result<(), ScalarError> {
    let (u, k) = tris[t].nb[j];
    let to_u = edge_chart(tris, t, j)?;
    let from_u = to_u.inverse();
    let a = tris[t].v[j].clone();
    let b = tris[t].v[(j + 1) % 3].clone();
    let c = tris[t].v[(j + 2) % 3].clone();
    let d = from_u.apply(&tris[u].v[(k + 2) % 3]);
    let (ca, cb, cc) = (tris[t].class[j], tris[t].class[(j + 1) % 3], tris[t].class[(j + 2) % 3]);
    let cd = tris[u].class[(k + 2) % 3];

    let old = [(u, (k + 1) % 3), (t, (j + 2) % 3), (u, (k + 2) % 3), (t, (j + 1) % 3)];
    let new = [(t, 0), (t, 2), (u, 0), (u, 1)];
    let partners: Vec<(usize, usize)> = old.iter().map(|&(x, y)| tris[x].nb[y]).collect();
    let renamed: Vec<(usize, usize)> =
        partners.iter().map(|q| old.iter().position(|o| o == q).map_or(*q, |i| new[i])).collect();

    let mut all: Vec<Piece> = tris[t].pieces.clone();
    for pc in &tris[u].pieces {
        all.push(Piece {
            polygon: pc.polygon,
            to_polygon: pc.to_polygon.compose(&to_u),
            region: map_region(&from_u, &pc.region),
        });
    }
    let tri_t = [a.clone(), d.clone(), c.clone()];
    let tri_u = [d.clone(), b.clone(), c.clone()];
    let mut pieces_t = Vec::new();
    let mut pieces_u = Vec::new();
    for pc in &all {
        let rt = clip_convex(&pc.region, &tri_t)?;
        if !rt.is_empty() {
            pieces_t.push(Piece { region: rt, ..pc.clone() });
        }
        let ru = clip_convex(&pc.region, &tri_u)?;
        if !ru.is_empty() {
            pieces_u.push(Piece { region: ru, ..pc.clone() });
        }
    }

    tris[t] = Tri { v: tri_t, class: [ca, cd, cc], nb: [(0, 0), (u, 2), (0, 0)], pieces: pieces_t };
    tris[u] = Tri { v: tri_u, class: [cd, cb, cc], nb: [(0, 0), (0, 0), (t, 1)], pieces: pieces_u };
    for i in 0..4 {
        let (x, y) = new[i];
        tris[x].nb[y] = renamed[i];
    }
    for i in 0..4 {
        if !old.contains(&partners[i]) {
            let (x, y) = partners[i];
            tris[x].nb[y] = new[i];
        }
    }
    Ok(())
}

/// Whether the edge `(t, j)` is Delaunay (`<= 0`) or cocircular (`0`).
fn edge_incircle(tris: &[Tri], t: usize, j: usize) -> Result<i8, ScalarError> {
    let (u, k) = tris[t].nb[j];
    let d = edge_chart(tris, t, j)?.inverse().apply(&tris[u].v[(k + 2) % 3]);
    let v = &tris[t].v;
    incircle(&v[j], &v[(j + 1) % 3], &v[(j + 2) % 3], &d)
}

/// Cap on flips, far above what exact Delaunay flipping needs on the supported inputs.
const MAX_FLIPS: usize = 1_000_000;

pub fn delaunay(s: &FlatSurface) -> Result<CellComplex, SurfaceError> {
    let mut tris = fan(s);
    let mut stack: Vec<(usize, usize)> = (0..tris.len()).flat_map(|t| (0..3).map(move |j| (t, j))).collect();
    let mut flips = 0;
    while let Some((t, j)) = stack.pop() {
        let (u, _) = tris[t].nb[j];
        if u == t || edge_incircle(&tris, t, j)? <= 0 {
            continue;
        }
        flip(&mut tris, t, j)?;
        flips += 1;
        if flips > MAX_FLIPS {
            return Err(SurfaceError::Parse("Delaunay flipping did not terminate".into()));
        }
        stack.extend([(t, 0), (t, 2), (u, 0), (u, 1)]);
    }
    cells(s, &tris)
}

fn cells(s: &FlatSurface, tris: &[Tri]) -> Result<CellComplex, SurfaceError> {
    let nt = tris.len();
    let mut cell_of = vec![usize::MAX; nt];
    let mut dev: Vec<Chart> = vec![Chart::identity(); nt];
    let mut internal = vec![[false; 3]; nt];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for t0 in 0..nt {
        if cell_of[t0] != usize::MAX {
            continue;
        }
        let id = members.len();
        cell_of[t0] = id;
        members.push(vec![t0]);
        let mut queue = VecDeque::from([t0]);
        while let Some(x) = queue.pop_front() {
            for j in 0..3 {
                let (y, _) = tris[x].nb[j];
                if y == x || edge_incircle(tris, x, j)? != 0 {
                    continue;
                }
                let dev_y = dev[x].compose(&edge_chart(tris, x, j)?.inverse());
                if cell_of[y] == usize::MAX {
                    cell_of[y] = id;
                    dev[y] = dev_y;
                    members[id].push(y);
                    internal[x][j] = true;
                    queue.push_back(y);
                } else if cell_of[y] == id && dev[y] == dev_y {
                    internal[x][j] = true;
                }
            }
        }
    }
    // an edge is internal only if both sides agree
    for t in 0..nt {
        for j in 0..3 {
            let (u, k) = tris[t].nb[j];
            if internal[t][j] != internal[u][k] {
                internal[t][j] = false;
                internal[u][k] = false;
            }
        }
    }

    let mut polygons = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot_edge = vec![[(usize::MAX, usize::MAX); 3]; nt];
    let mut pieces = Vec::new();
    for (id, mem) in members.iter().enumerate() {
        let mut bnd: Vec<(usize, usize, Vec2, Vec2)> = Vec::new();
        for &x in mem {
            for j in 0..3 {
                if !internal[x][j] {
                    let p = dev[x].apply(&tris[x].v[j]);
                    let q = dev[x].apply(&tris[x].v[(j + 1) % 3]);
                    bnd.push((x, j, p, q));
                }
            }
        }
        bnd.sort_by_key(|b| (b.0, b.1));
        let mut order = vec![0usize];
        let mut used = vec![false; bnd.len()];
        used[0] = true;
        while order.len() < bnd.len() {
            let end = &bnd[*order.last().unwrap()].3;
            let mut found = None;
            for (i, b) in bnd.iter().enumerate() {
                if !used[i] && b.2.same(end)? {
                    found = Some(i);
                    break;
                }
            }
            let i = found.ok_or_else(|| SurfaceError::Parse("Delaunay cell boundary is not a simple cycle".into()))?;
            used[i] = true;
            order.push(i);
        }
        let mut verts = Vec::new();
        let mut cls = Vec::new();
        for (e, &i) in order.iter().enumerate() {
            let (x, j, ref p, _) = bnd[i];
            verts.push(p.clone());
            cls.push(tris[x].class[j]);
            slot_edge[x][j] = (id, e);
        }
        polygons.push(Polygon::new(verts));
        classes.push(cls);
        let mut cell_pieces = Vec::new();
        for &x in mem {
            let back = dev[x].inverse();
            for pc in &tris[x].pieces {
                cell_pieces.push(Piece {
                    polygon: pc.polygon,
                    to_polygon: pc.to_polygon.compose(&back),
                    region: map_region(&dev[x], &pc.region),
                });
            }
        }
        pieces.push(cell_pieces);
    }

    let mut gluings = Vec::new();
    for t in 0..nt {
        for j in 0..3 {
            if internal[t][j] {
                continue;
            }
            let (u, k) = tris[t].nb[j];
            if (u, k) < (t, j) {
                continue;
            }
            let chart = edge_chart(tris, t, j)?;
            let sign = dev[t].sign * chart.sign * dev[u].sign;
            let kind = if sign > 0 { GluingKind::Translation } else { GluingKind::Flip };
            let (ca, ea) = slot_edge[t][j];
            let (cb, eb) = slot_edge[u][k];
            gluings.push(Gluing { a: EdgeRef::new(ca, ea), b: EdgeRef::new(cb, eb), kind });
        }
    }
    let mut punctures = Vec::new();
    for (c, cls) in classes.iter().enumerate() {
        for (k, &class) in cls.iter().enumerate() {
            if s.cone_points()[class].puncture {
                punctures.push(Corner { polygon: c, vertex: k });
            }
        }
    }
    let surface = FlatSurface::new(polygons, gluings, &punctures)?;
    Ok(CellComplex { surface, pieces })
}

impl CellComplex {
    /// Position of a cell point on the original surface.
    pub fn to_original(&self, cell: usize, x: &Vec2) -> Result<Option<(usize, Vec2)>, ScalarError> {
        for pc in &self.pieces[cell] {
            if Polygon::new(pc.region.clone()).contains(x)? {
                return Ok(Some((pc.polygon, pc.to_polygon.apply(x))));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use crate::surface::Origami;

    #[test]
    fn incircle_signs() {
        let (a, b, c) = (Vec2::ints(0, 0), Vec2::ints(1, 0), Vec2::ints(0, 1));
        assert_eq!(incircle(&a, &b, &c, &Vec2::ints(1, 1)).unwrap(), 0);
        assert_eq!(incircle(&a, &b, &c, &Vec2::new(Scalar::frac(1, 2), Scalar::frac(1, 2))).unwrap(), 1);
        assert_eq!(incircle(&a, &b, &c, &Vec2::ints(2, 2)).unwrap(), -1);
    }

    #[test]
    fn clipping_squares() {
        let sq = |x: i64, y: i64| vec![Vec2::ints(x, y), Vec2::ints(x + 2, y), Vec2::ints(x + 2, y + 2), Vec2::ints(x, y + 2)];
        let r = clip_convex(&sq(0, 0), &sq(1, 1)).unwrap();
        assert_eq!(Polygon::new(r).area(), Scalar::one());
        assert!(clip_convex(&sq(0, 0), &sq(2, 0)).unwrap().is_empty());
    }

    #[test]
    fn square_torus_is_one_cell() {
        let s = Origami::new(vec![0], vec![0]).unwrap().to_surface();
        let d = delaunay(&s).unwrap();
        assert_eq!(d.surface.polygons().len(), 1);
        assert_eq!(d.surface.polygons()[0].len(), 4);
        assert_eq!(d.surface.area(), Scalar::one());
    }

    #[test]
    fn sheared_torus_flips_back() {
        let s = Origami::new(vec![0], vec![0]).unwrap().to_surface();
        let sheared = s.apply_matrix(&crate::geom::Mat2::ints(1, 3, 0, 1)).unwrap();
        let d = delaunay(&sheared).unwrap();
        assert_eq!(d.surface.area(), Scalar::one());
        // the Delaunay cell of the square lattice is a unit square, whatever basis it is given in
        let p = &d.surface.polygons()[0];
        assert_eq!(p.len(), 4);
        for i in 0..4 {
            assert_eq!(p.edge(i).norm2(), Scalar::one());
        }
        let piece_area = d.pieces[0].iter().fold(Scalar::zero(), |acc, pc| &acc + &Polygon::new(pc.region.clone()).area());
        assert_eq!(piece_area, Scalar::one());
    }
}
