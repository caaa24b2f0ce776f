//! Square-tiled surfaces: translation origamis `(h, v)` and the more general
//! square tilings whose sides may also be paired by half-turns.

use std::collections::VecDeque;

use serde::Serialize;

use super::{EdgeRef, FlatSurface, Gluing, GluingKind, Polygon, SurfaceError};
use crate::geom::Vec2;

/// Translation origami on squares `0..n`: square `i` has `h[i]` to its right and `v[i]` above.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Origami {
    pub h: Vec<usize>,
    pub v: Vec<usize>,
}

pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p after q)
    q.iter().map(|&i| p[i]).collect()
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn cycle_count(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut count = 0;
    for i in 0..p.len() {
        if !seen[i] {
            count += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = p[j];
            }
        }
    }
    count
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &i in p {
        if i >= p.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

impl Origami {
    pub fn new(h: Vec<usize>, v: Vec<usize>) -> Result<Self, SurfaceError> {
        if h.len() != v.len() || h.is_empty() || !is_permutation(&h) || !is_permutation(&v) {
            return Err(SurfaceError::Parse("h and v must be permutations of the same size".into()));
        }
        let o = Origami { h, v };
        if !o.is_transitive() {
            return Err(SurfaceError::NotTransitive);
        }
        Ok(o)
    }

    /// From 1-indexed image lists.
    pub fn from_one_indexed(h: &[usize], v: &[usize]) -> Result<Self, SurfaceError> {
        let shift = |p: &[usize]| -> Result<Vec<usize>, SurfaceError> {
            p.iter()
                .map(|&i| i.checked_sub(1).ok_or_else(|| SurfaceError::Parse("permutation entries are 1-indexed".into())))
                .collect()
        };
        Origami::new(shift(h)?, shift(v)?)
    }

    pub fn squares(&self) -> usize {
        self.h.len()
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.squares();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for j in [self.h[i], self.v[i]] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Commutator `v^-1 h^-1 v h` whose cycles are the vertex classes.
    pub fn commutator(&self) -> Vec<usize> {
        let hi = inverse(&self.h);
        let vi = inverse(&self.v);
        compose(&vi, &compose(&hi, &compose(&self.v, &self.h)))
    }

    pub fn genus(&self) -> u32 {
        let vertices = cycle_count(&self.commutator()) as i64;
        let chi = vertices - self.squares() as i64;
        ((2 - chi) / 2) as u32
    }

    /// Relabeling-invariant normal form: the lexicographically least BFS relabeling.
    pub fn canonical(&self) -> Origami {
        let n = self.squares();
        let mut best: Option<Origami> = None;
        for start in 0..n {
            let mut label = vec![usize::MAX; n];
            let mut order = Vec::with_capacity(n);
            label[start] = 0;
            order.push(start);
            let mut k = 0;
            while k < order.len() {
                let i = order[k];
                for j in [self.h[i], self.v[i]] {
                    if label[j] == usize::MAX {
                        label[j] = order.len();
                        order.push(j);
                    }
                }
                k += 1;
            }
            let h = order.iter().map(|&i| label[self.h[i]]).collect();
            let v = order.iter().map(|&i| label[self.v[i]]).collect();
            let cand = Origami { h, v };
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        best.unwrap()
    }

    /// Action of `T = (1,1;0,1)`.
    pub fn act_t(&self) -> Origami {
        Origami { h: self.h.clone(), v: compose(&self.v, &inverse(&self.h)) }
    }

    /// Action of `S = (0,-1;1,0)`.
    pub fn act_s(&self) -> Origami {
        Origami { h: self.v.clone(), v: inverse(&self.h) }
    }

    /// Action of `-I`.
    pub fn act_minus_identity(&self) -> Origami {
        Origami { h: inverse(&self.h), v: inverse(&self.v) }
    }

    pub fn to_square_tiled(&self) -> SquareTiled {
        let mut pairs = Vec::new();
        for i in 0..self.squares() {
            pairs.push(((i, SquareSide::Right), (self.h[i], SquareSide::Left)));
            pairs.push(((i, SquareSide::Top), (self.v[i], SquareSide::Bottom)));
        }
        SquareTiled { squares: self.squares(), pairs }
    }

    /// Unit squares side by side in the plane, square `i` occupying `[i, i+1] x [0, 1]`.
    pub fn to_surface(&self) -> FlatSurface {
        self.to_square_tiled().to_surface().expect("origami surfaces are valid")
    }

    pub fn one_indexed(&self) -> (Vec<usize>, Vec<usize>) {
        (self.h.iter().map(|i| i + 1).collect(), self.v.iter().map(|i| i + 1).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SquareSide {
    Bottom,
    Right,
    Top,
    Left,
}

impl SquareSide {
    pub fn edge(self) -> usize {
        match self {
            SquareSide::Bottom => 0,
            SquareSide::Right => 1,
            SquareSide::Top => 2,
            SquareSide::Left => 3,
        }
    }

    fn is_horizontal(self) -> bool {
        matches!(self, SquareSide::Bottom | SquareSide::Top)
    }
}

/// Unit squares whose sides are paired either by translations (opposite sides)
/// or by half-turns (sides of the same kind).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareTiled {
    pub squares: usize,
    pub pairs: Vec<((usize, SquareSide), (usize, SquareSide))>,
}

impl SquareTiled {
    pub fn to_surface(&self) -> Result<FlatSurface, SurfaceError> {
        let polygons = (0..self.squares as i64)
            .map(|i| Polygon::new(vec![Vec2::ints(i, 0), Vec2::ints(i + 1, 0), Vec2::ints(i + 1, 1), Vec2::ints(i, 1)]))
            .collect();
        let mut gluings = Vec::new();
        for &((p, s), (q, t)) in &self.pairs {
            if s.is_horizontal() != t.is_horizontal() {
                return Err(SurfaceError::Parse("a horizontal side cannot be paired with a vertical side".into()));
            }
            let kind = if s == t { GluingKind::Flip } else { GluingKind::Translation };
            gluings.push(Gluing { a: EdgeRef::new(p, s.edge()), b: EdgeRef::new(q, t.edge()), kind });
        }
        FlatSurface::new(polygons, gluings, &[])
    }
}

/// All perfect matchings of `0..2k`, each as a list of pairs `(a, b)` with `a < b`.
pub fn perfect_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_square_torus() {
        let o = Origami::new(vec![0], vec![0]).unwrap();
        let s = o.to_surface();
        assert_eq!(s.surface_type().genus, 1);
        assert_eq!(s.cone_points().len(), 1);
    }

    #[test]
    fn two_square_cylinder_torus() {
        let o = Origami::from_one_indexed(&[2, 1], &[1, 2]).unwrap();
        let s = o.to_surface();
        assert_eq!(s.surface_type().genus, 1);
        // the two vertices (0,0) and (1,0) stay distinct marked points
        assert_eq!(s.cone_points().len(), 2);
        assert!(s.cone_points().iter().all(|c| c.angle_pi == 2));
    }

    #[test]
    fn not_transitive() {
        assert!(matches!(Origami::new(vec![0, 1], vec![0, 1]), Err(SurfaceError::NotTransitive)));
    }

    #[test]
    fn matchings_count() {
        assert_eq!(perfect_matchings(4).len(), 3);
        assert_eq!(perfect_matchings(8).len(), 105);
    }

    #[test]
    fn canonical_is_relabeling_invariant() {
        let o = Origami::from_one_indexed(&[2, 3, 1, 4], &[1, 4, 3, 2]).unwrap();
        let perm = [2, 0, 3, 1];
        let inv = inverse(&perm);
        let h = (0..4).map(|i| perm[o.h[inv[i]]]).collect();
        let v = (0..4).map(|i| perm[o.v[inv[i]]]).collect();
        let relabeled = Origami::new(h, v).unwrap();
        assert_eq!(o.canonical(), relabeled.canonical());
    }
}
