//! Veech groups inside `PSL(2,Z)` by orbit enumeration.
//!
//! The generators `S = (0,-1;1,0)` and `T = (1,1;0,1)` act on surfaces
//! (or on origami permutation pairs). The orbit of the base surface is
//! enumerated breadth first; the Veech group is the stabilizer, its index is
//! the orbit size, and Schreier's lemma turns the coset graph into generators.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::matcher::{canonical_key, Mode};
use super::{delaunay, AffineError};
use crate::fuchsian::FuchsianSignature;
use crate::geom::Mat2;
use crate::par;
use crate::scalar::Scalar;
use crate::surface::{FlatSurface, Origami};

/// Default bound on the orbit size.
pub const DEFAULT_ORBIT_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Gen {
    S,
    T,
}

impl Gen {
    fn matrix(self) -> Mat2 {
        match self {
            Gen::S => Mat2::ints(0, -1, 1, 0),
            Gen::T => Mat2::ints(1, 1, 0, 1),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VeechGroupResult {
    /// Stabilizer generators, normalized up to sign.
    pub generators: Vec<Mat2>,
    pub index: usize,
    pub orbit_size: usize,
    /// `cosets[i]` maps the base surface to orbit element `i`.
    pub cosets: Vec<Mat2>,
    /// Orbit element reached from `i` by `S` and by `T`.
    pub s_action: Vec<usize>,
    pub t_action: Vec<usize>,
    /// Human-readable orbit elements, when available.
    pub orbit: Vec<String>,
}

fn orbit_bfs<N, F>(root: N, root_key: String, act: F, cap: usize) -> Result<(Vec<N>, Vec<usize>, Vec<usize>), AffineError>
where
    N: Send + Sync,
    F: Fn(&N, Gen) -> Result<(N, String), AffineError> + Sync + Send,
{
    let mut nodes = vec![root];
    let mut index: HashMap<String, usize> = HashMap::from([(root_key, 0)]);
    let mut s_action = vec![usize::MAX];
    let mut t_action = vec![usize::MAX];
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let images = par::map(&frontier, |&i| -> Result<_, AffineError> {
            Ok([act(&nodes[i], Gen::S)?, act(&nodes[i], Gen::T)?])
        });
        let mut next = Vec::new();
        for (&i, imgs) in frontier.iter().zip(images) {
            for (g, (node, key)) in [Gen::S, Gen::T].into_iter().zip(imgs?) {
                let j = match index.get(&key) {
                    Some(&j) => j,
                    None => {
                        let j = nodes.len();
                        if j >= cap {
                            return Err(AffineError::OrbitBoundExceeded(cap));
                        }
                        index.insert(key, j);
                        nodes.push(node);
                        s_action.push(usize::MAX);
                        t_action.push(usize::MAX);
                        next.push(j);
                        j
                    }
                };
                match g {
                    Gen::S => s_action[i] = j,
                    Gen::T => t_action[i] = j,
                }
            }
        }
        frontier = next;
    }
    Ok((nodes, s_action, t_action))
}

fn build(s_action: Vec<usize>, t_action: Vec<usize>, orbit: Vec<String>) -> VeechGroupResult {
    let n = s_action.len();
    let mut cosets: Vec<Option<Mat2>> = vec![None; n];
    cosets[0] = Some(Mat2::identity());
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut tree = vec![[false; 2]; n];
    while let Some(i) = queue.pop_front() {
        for (k, (g, j)) in [(Gen::S, s_action[i]), (Gen::T, t_action[i])].into_iter().enumerate() {
            if cosets[j].is_none() {
                cosets[j] = Some(&g.matrix() * cosets[i].as_ref().unwrap());
                tree[i][k] = true;
                queue.push_back(j);
            }
        }
    }
    let cosets: Vec<Mat2> = cosets.into_iter().map(|c| c.expect("orbit is connected")).collect();
    let mut generators: Vec<Mat2> = Vec::new();
    for i in 0..n {
        for (k, (g, j)) in [(Gen::S, s_action[i]), (Gen::T, t_action[i])].into_iter().enumerate() {
            if tree[i][k] {
                continue;
            }
            let gamma = (&(&cosets[j].inverse_unimodular() * &g.matrix()) * &cosets[i]).psl_normalized();
            if !gamma.is_plus_minus_identity() && !generators.contains(&gamma) {
                generators.push(gamma);
            }
        }
    }
    VeechGroupResult { generators, index: n, orbit_size: n, cosets, s_action, t_action, orbit }
}

/// Veech group of a square-tiled (half-)translation surface, found by acting
/// on Delaunay complexes.
pub fn geometric_veech_group(s: &FlatSurface, cap: usize) -> Result<VeechGroupResult, AffineError> {
    let base = delaunay(s)?.surface;
    let key = canonical_key(&base, Mode::HalfTranslation);
    let act = |x: &FlatSurface, g: Gen| -> Result<(FlatSurface, String), AffineError> {
        let y = delaunay(&x.apply_matrix(&g.matrix())?)?.surface;
        let k = canonical_key(&y, Mode::HalfTranslation);
        Ok((y, k))
    };
    let (nodes, s_action, t_action) = orbit_bfs(base, key, act, cap)?;
    let orbit = (0..nodes.len()).map(|i| format!("surface {i}")).collect();
    Ok(build(s_action, t_action, orbit))
}

fn origami_key(o: &Origami) -> String {
    let a = o.canonical();
    let b = o.act_minus_identity().canonical();
    let m = if a <= b { a } else { b };
    format!("{:?}/{:?}", m.h, m.v)
}

fn origami_label(o: &Origami) -> String {
    let (h, v) = o.one_indexed();
    let join = |p: &[usize]| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("h=[{}] v=[{}]", join(&h), join(&v))
}

/// Veech group of a translation origami, by the action of `S` and `T` on its
/// permutation pair up to simultaneous conjugation.
///
/// `T` sends `(h, v)` to `(h, v h^-1)` and `S` sends it to `(v, h^-1)`;
/// both agree with the geometric action on the unit-square surface.
pub fn origami_veech_group(o: &Origami, cap: usize) -> Result<VeechGroupResult, AffineError> {
    if !o.is_transitive() {
        return Err(AffineError::Surface(crate::surface::SurfaceError::NotTransitive));
    }
    let act = |x: &Origami, g: Gen| -> Result<(Origami, String), AffineError> {
        let y = match g {
            Gen::S => x.act_s(),
            Gen::T => x.act_t(),
        }
        .canonical();
        let k = origami_key(&y);
        Ok((y, k))
    };
    let root = o.canonical();
    let key = origami_key(&root);
    let (nodes, s_action, t_action) = orbit_bfs(root, key, act, cap)?;
    let orbit = nodes.iter().map(origami_label).collect();
    Ok(build(s_action, t_action, orbit))
}

fn integer_entry(x: &Scalar) -> Result<i64, AffineError> {
    x.as_rational()
        .filter(|q| q.is_integer())
        .and_then(|q| q.to_integer().to_i64())
        .ok_or_else(|| AffineError::NotIntegral(x.to_string()))
}

/// Writes `m` (up to sign) as `T^q1 S T^q2 S ... T^qk`, listing the factors left to right.
fn st_word(m: &Mat2) -> Result<Vec<(Gen, i64)>, AffineError> {
    if !m.is_unimodular() {
        return Err(AffineError::NotUnimodular);
    }
    let (mut a, mut b, mut c, mut d) = (integer_entry(&m.a)?, integer_entry(&m.b)?, integer_entry(&m.c)?, integer_entry(&m.d)?);
    let mut word = Vec::new();
    while c != 0 {
        let q = a.div_euclid(c);
        word.push((Gen::T, q));
        word.push((Gen::S, 1));
        let (na, nb, nc, nd) = (c, d, -(a - q * c), -(b - q * d));
        (a, b, c, d) = (na, nb, nc, nd);
    }
    // now a = d = ±1 and the matrix is ±T^(ab)
    word.push((Gen::T, a * b));
    let _ = d;
    Ok(word)
}

impl VeechGroupResult {
    /// Orbit element reached from element `i` by `m`.
    pub fn act(&self, m: &Mat2, i: usize) -> Result<usize, AffineError> {
        let t_inv = {
            let mut inv = vec![0; self.t_action.len()];
            for (x, &y) in self.t_action.iter().enumerate() {
                inv[y] = x;
            }
            inv
        };
        let mut node = i;
        for (g, q) in st_word(m)?.into_iter().rev() {
            match g {
                Gen::S => node = self.s_action[node],
                Gen::T => {
                    let perm = if q >= 0 { &self.t_action } else { &t_inv };
                    let mut len = 1;
                    let mut x = perm[node];
                    while x != node {
                        x = perm[x];
                        len += 1;
                    }
                    for _ in 0..(q.unsigned_abs() % len as u64) {
                        node = perm[node];
                    }
                }
            }
        }
        Ok(node)
    }

    /// Type of the group as a Fuchsian group, read off the coset action: cusps
    /// are cycles of `T`, elliptic points of order 2 and 3 are fixed points of
    /// `S` and `ST`, and the genus follows from the index formula.
    pub fn signature(&self) -> FuchsianSignature {
        let n = self.s_action.len();
        let e2 = (0..n).filter(|&i| self.s_action[i] == i).count();
        let e3 = (0..n).filter(|&i| self.s_action[self.t_action[i]] == i).count();
        let mut seen = vec![false; n];
        let mut cusps = 0;
        for i in 0..n {
            if seen[i] {
                continue;
            }
            cusps += 1;
            let mut x = i;
            while !seen[x] {
                seen[x] = true;
                x = self.t_action[x];
            }
        }
        let twelve_g = 12 + n as i64 - 3 * e2 as i64 - 4 * e3 as i64 - 6 * cusps as i64;
        let mut orders = vec![Some(2); e2];
        orders.extend(vec![Some(3); e3]);
        orders.extend(vec![None; cusps]);
        FuchsianSignature::new((twelve_g / 12) as u32, orders)
    }

    /// Whether `±m` lies in the Veech group.
    pub fn contains(&self, m: &Mat2) -> Result<bool, AffineError> {
        Ok(self.act(m, 0)? == 0)
    }

    /// Whether the group is conjugate in `PSL(2,Z)` to `Gamma_0(p)` for a prime `p`.
    ///
    /// Transitive actions are isomorphic exactly when their point stabilizers
    /// are conjugate, so this compares the coset action with the action on the
    /// projective line over `F_p`.
    pub fn is_conjugate_to_gamma0(&self, p: u64) -> bool {
        let p = p as i64;
        let n = (p + 1) as usize;
        if self.index != n {
            return false;
        }
        // points (1:k) for k < p are 0..p, the point (0:1) is p
        let point = |x: i64, y: i64| -> usize {
            let (x, y) = (x.rem_euclid(p), y.rem_euclid(p));
            if x == 0 {
                return p as usize;
            }
            let inv = (1..p).find(|i| (i * x) % p == 1).unwrap();
            ((y * inv) % p) as usize
        };
        let coords = |i: usize| -> (i64, i64) {
            if i == p as usize {
                (0, 1)
            } else {
                (1, i as i64)
            }
        };
        let s_pt: Vec<usize> = (0..n).map(|i| {
            let (x, y) = coords(i);
            point(-y, x)
        }).collect();
        let t_pt: Vec<usize> = (0..n).map(|i| {
            let (x, y) = coords(i);
            point(x + y, y)
        }).collect();
        (0..n).any(|start| {
            let mut phi = vec![usize::MAX; n];
            phi[0] = start;
            let mut stack = vec![0];
            while let Some(i) = stack.pop() {
                for (perm, pt) in [(&self.s_action, &s_pt), (&self.t_action, &t_pt)] {
                    let (j, image) = (perm[i], pt[phi[i]]);
                    if phi[j] == usize::MAX {
                        phi[j] = image;
                        stack.push(j);
                    } else if phi[j] != image {
                        return false;
                    }
                }
            }
            let mut seen = phi.clone();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == n
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_group_is_everything() {
        let o = Origami::new(vec![0], vec![0]).unwrap();
        let g = origami_veech_group(&o, DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(g.index, 1);
        assert!(g.contains(&Mat2::ints(1, 0, 1, 1)).unwrap());
        let geo = geometric_veech_group(&o.to_surface(), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(geo.index, 1);
        assert_eq!(g.signature(), FuchsianSignature::new(0, vec![Some(2), Some(3), None]));
    }

    #[test]
    fn word_reassembles() {
        for m in [Mat2::ints(2, 1, 1, 1), Mat2::ints(-3, 2, 7, -5), Mat2::ints(1, 0, -4, 1), Mat2::ints(-1, 5, 0, -1)] {
            let mut acc = Mat2::identity();
            for (g, q) in st_word(&m).unwrap() {
                let f = match g {
                    Gen::S => Gen::S.matrix(),
                    Gen::T => Mat2::ints(1, q, 0, 1),
                };
                acc = &acc * &f;
            }
            assert_eq!(acc.psl_normalized(), m.psl_normalized());
        }
    }

    #[test]
    fn two_square_origami() {
        // the two-square torus cover has Veech group Gamma_0(2)-conjugate of index 3
        let o = Origami::from_one_indexed(&[2, 1], &[1, 2]).unwrap();
        let g = origami_veech_group(&o, DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(g.index, 3);
        assert!(g.is_conjugate_to_gamma0(2));
        assert_eq!(g.signature(), FuchsianSignature::new(0, vec![Some(2), None, None]));
        for gen in &g.generators {
            assert!(g.contains(gen).unwrap());
        }
    }

    #[test]
    fn origami_and_geometric_actions_agree() {
        for (h, v) in [(vec![2, 3, 1], vec![1, 3, 2]), (vec![2, 1, 3], vec![3, 2, 1]), (vec![2, 3, 4, 1], vec![1, 2, 4, 3])] {
            let o = Origami::from_one_indexed(&h, &v).unwrap();
            let a = origami_veech_group(&o, DEFAULT_ORBIT_CAP).unwrap();
            let b = geometric_veech_group(&o.to_surface(), DEFAULT_ORBIT_CAP).unwrap();
            assert_eq!(a.index, b.index);
            for m in [Mat2::ints(1, 1, 0, 1), Mat2::ints(1, 0, 1, 1), Mat2::ints(1, 2, 0, 1), Mat2::ints(1, 0, 2, 1), Mat2::ints(2, 1, 1, 1), Mat2::ints(1, 3, 0, 1)] {
                assert_eq!(a.contains(&m).unwrap(), b.contains(&m).unwrap(), "{m} on {h:?} {v:?}");
            }
        }
    }
}
