//! Rational polyhedral cones in `R^n`, held in both descriptions.
//!
//! Conversions between generators and inequalities go through one exact double
//! description routine ([`double_description`]). Faces are identified with their
//! sets of extremal rays.

use crate::linalg;
use crate::{Error, IMat, IVec, Int, QVec, Rat, Result};
use num_integer::Integer;
use serde::Serialize;
use std::collections::{BTreeSet, HashSet, VecDeque};

/// A cone `lineality + cone(rays)` cut out by `facets ≥ 0` and `equations = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalCone {
    pub ambient_rank: usize,
    /// Primitive extremal ray generators, lexicographically sorted. With a nonzero
    /// lineality space each ray is represented orthogonally to it.
    pub rays: Vec<IVec>,
    /// Hermite basis of the lineality space.
    pub lineality: IMat,
    /// Primitive inner facet normals lying in the linear span, sorted.
    pub facets: Vec<IVec>,
    /// Hermite basis of the orthogonal complement of the linear span.
    pub equations: IMat,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Face {
    pub dim: usize,
    /// Indices into the parent's `rays`.
    pub rays: Vec<usize>,
    /// Indices into the parent's `facets` that vanish on the face.
    pub tight_facets: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub strictly_convex: bool,
    pub full_dimensional: bool,
    pub simplicial: bool,
    pub lineality_rank: usize,
}

type Wide = i128;

fn widen(v: &[Int]) -> Vec<Wide> {
    v.iter().map(|&x| x as Wide).collect()
}

fn narrow(v: &[Wide]) -> IVec {
    v.iter()
        .map(|&x| Int::try_from(x).expect("cone coordinate exceeds 64 bits"))
        .collect()
}

fn wdot(a: &[Wide], b: &[Wide]) -> Wide {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn wprimitive(v: Vec<Wide>) -> Vec<Wide> {
    let g = v.iter().fold(0 as Wide, |g, x| g.gcd(x));
    if g <= 1 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}

/// `s·a + t·b`, made primitive.
fn wcombine(s: Wide, a: &[Wide], t: Wide, b: &[Wide]) -> Vec<Wide> {
    wprimitive(a.iter().zip(b).map(|(x, y)| s * x + t * y).collect())
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn contains(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
}

/// Extremal rays and lineality basis of `{x : ⟨a, x⟩ ≥ 0 for all a}` in `R^n`.
/// Rays are primitive but not yet canonical modulo the lineality space.
pub fn double_description(ineqs: &[IVec], n: usize) -> (Vec<IVec>, IMat) {
    let ineqs: Vec<Vec<Wide>> = ineqs.iter().filter(|a| a.iter().any(|x| *x != 0)).map(|a| widen(a)).collect();
    let mut lin: Vec<Vec<Wide>> = (0..n).map(|i| (0..n).map(|j| Wide::from(i == j)).collect()).collect();
    let mut rays: Vec<Vec<Wide>> = Vec::new();
    for (k, a) in ineqs.iter().enumerate() {
        if let Some(pi) = lin.iter().position(|l| wdot(a, l) != 0) {
            let mut l = lin.remove(pi);
            let mut al = wdot(a, &l);
            if al < 0 {
                l = l.into_iter().map(|x| -x).collect();
                al = -al;
            }
            for other in lin.iter_mut() {
                let ao = wdot(a, other);
                if ao != 0 {
                    *other = wcombine(al, other, -ao, &l);
                }
            }
            for r in rays.iter_mut() {
                let ar = wdot(a, r);
                if ar != 0 {
                    *r = wcombine(al, r, -ar, &l);
                }
            }
            rays.push(wprimitive(l));
            continue;
        }
        let vals: Vec<Wide> = rays.iter().map(|r| wdot(a, r)).collect();
        if vals.iter().all(|v| *v >= 0) {
            continue;
        }
        // Zero sets over the constraints processed so far.
        let zeros: Vec<Bits> = rays
            .iter()
            .map(|r| {
                let mut b = Bits::new(k);
                for (j, c) in ineqs[..k].iter().enumerate() {
                    if wdot(c, r) == 0 {
                        b.set(j);
                    }
                }
                b
            })
            .collect();
        let mut next: Vec<Vec<Wide>> = Vec::new();
        let mut seen: HashSet<Vec<Wide>> = HashSet::new();
        for (i, r) in rays.iter().enumerate() {
            if vals[i] >= 0 && seen.insert(r.clone()) {
                next.push(r.clone());
            }
        }
        for (ip, p) in rays.iter().enumerate() {
            if vals[ip] <= 0 {
                continue;
            }
            for (ineg, q) in rays.iter().enumerate() {
                if vals[ineg] >= 0 {
                    continue;
                }
                let common = zeros[ip].and(&zeros[ineg]);
                let adjacent = (0..rays.len())
                    .all(|o| o == ip || o == ineg || !zeros[o].contains(&common));
                if adjacent {
                    let c = wcombine(vals[ip], q, -vals[ineg], p);
                    if seen.insert(c.clone()) {
                        next.push(c);
                    }
                }
            }
        }
        rays = next;
    }
    (rays.iter().map(|r| narrow(r)).collect(), lin.iter().map(|r| narrow(r)).collect())
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`, made primitive.
pub fn project_off(v: &[Int], basis: &IMat) -> IVec {
    if basis.is_empty() {
        return linalg::primitive(v);
    }
    let n = v.len();
    let gram: IMat = basis.iter().map(|b| basis.iter().map(|c| linalg::dot(b, c)).collect()).collect();
    let rhs: QVec = basis.iter().map(|b| Rat::from_integer(linalg::dot(b, v))).collect();
    let coeff = linalg::solve_rational(&gram, basis.len(), &rhs).expect("Gram matrix is invertible");
    let proj: QVec = (0..n)
        .map(|i| {
            basis
                .iter()
                .zip(&coeff)
                .fold(Rat::from_integer(v[i]), |acc, (b, c)| acc - c * Rat::from_integer(b[i]))
        })
        .collect();
    linalg::primitive_from_rational(&proj)
}

impl RationalCone {
    /// The cone generated by `gens`; rational vectors are scaled to primitive integers.
    pub fn positive_hull(gens: &[IVec], n: usize) -> Self {
        let gens: Vec<IVec> = gens
            .iter()
            .filter(|g| g.iter().any(|x| *x != 0))
            .map(|g| linalg::primitive(g))
            .collect();
        assert!(gens.iter().all(|g| g.len() == n), "generator length mismatch");
        let (dual_rays, dual_lin) = double_description(&gens, n);
        let mut equations = dual_lin;
        linalg::hermite_rows_in_place(&mut equations, n);
        let mut facets: Vec<IVec> = dual_rays.iter().map(|f| project_off(f, &equations)).collect();
        facets.sort();
        facets.dedup();
        let mut stacked = equations.clone();
        stacked.extend(facets.iter().cloned());
        let lineality = if gens.is_empty() { Vec::new() } else { linalg::kernel(&stacked, n) };
        let dim = n - equations.len();
        let pointed_dim = dim - lineality.len();
        let mut rays: Vec<IVec> = Vec::new();
        if pointed_dim > 0 {
            for g in &gens {
                let tight: IMat = facets.iter().filter(|f| linalg::dot(f, g) == 0).cloned().collect();
                if tight.len() < facets.len() && linalg::rank(&tight, n) + 1 == pointed_dim {
                    rays.push(project_off(g, &lineality));
                }
            }
        }
        rays.sort();
        rays.dedup();
        RationalCone { ambient_rank: n, rays, lineality, facets, equations }
    }

    /// Positive hull of rational vectors (denominators are cleared per vector).
    pub fn positive_hull_q(gens: &[QVec], n: usize) -> Self {
        let ints: Vec<IVec> = gens.iter().map(|g| linalg::primitive_from_rational(g)).collect();
        Self::positive_hull(&ints, n)
    }

    /// `{x : ⟨a, x⟩ ≥ 0, ⟨b, x⟩ = 0}`.
    pub fn from_inequalities(ineqs: &[IVec], eqs: &[IVec], n: usize) -> Self {
        let mut all: Vec<IVec> = ineqs.to_vec();
        for e in eqs {
            all.push(e.clone());
            all.push(e.iter().map(|x| -x).collect());
        }
        let (rays, lin) = double_description(&all, n);
        let mut gens = rays;
        for l in lin {
            gens.push(l.iter().map(|x| -x).collect());
            gens.push(l);
        }
        Self::positive_hull(&gens, n)
    }

    /// Generators of the cone including both signs of the lineality basis.
    pub fn generators(&self) -> Vec<IVec> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(l.iter().map(|x| -x).collect());
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.ambient_rank - self.equations.len()
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.equations.iter().all(|e| linalg::dot(e, x) == 0)
            && self.facets.iter().all(|f| linalg::dot(f, x) >= 0)
    }

    pub fn contains_q(&self, x: &[Rat]) -> bool {
        self.contains(&linalg::primitive_from_rational(x))
    }

    pub fn is_in_interior(&self, x: &[Int]) -> bool {
        self.equations.iter().all(|e| linalg::dot(e, x) == 0)
            && self.facets.iter().all(|f| linalg::dot(f, x) > 0)
    }

    /// `{χ : ⟨x, χ⟩ ≥ 0 on the cone}`.
    pub fn dual(&self) -> Self {
        let mut gens = self.facets.clone();
        for e in &self.equations {
            gens.push(e.clone());
            gens.push(e.iter().map(|x| -x).collect());
        }
        Self::positive_hull(&gens, self.ambient_rank)
    }

    pub fn predicates(&self) -> Predicates {
        let strictly_convex = self.lineality.is_empty();
        Predicates {
            strictly_convex,
            full_dimensional: self.equations.is_empty(),
            simplicial: strictly_convex && self.rays.len() == self.dim(),
            lineality_rank: self.lineality.len(),
        }
    }

    fn face_from_rays(&self, ray_set: &[usize]) -> Face {
        let tight: Vec<usize> = (0..self.facets.len())
            .filter(|&j| ray_set.iter().all(|&i| linalg::dot(&self.facets[j], &self.rays[i]) == 0))
            .collect();
        self.face_from_tight(&tight)
    }

    fn face_from_tight(&self, tight: &[usize]) -> Face {
        let rays: Vec<usize> = (0..self.rays.len())
            .filter(|&i| tight.iter().all(|&j| linalg::dot(&self.facets[j], &self.rays[i]) == 0))
            .collect();
        let tight_facets: Vec<usize> = (0..self.facets.len())
            .filter(|&j| rays.iter().all(|&i| linalg::dot(&self.facets[j], &self.rays[i]) == 0))
            .collect();
        let span: IMat = rays.iter().map(|&i| self.rays[i].clone()).collect();
        let dim = self.lineality.len() + linalg::rank(&span, self.ambient_rank);
        Face { dim, rays, tight_facets }
    }

    /// All faces, sorted by dimension and then ray set. The minimal face is the
    /// lineality space; the maximal face is the cone itself.
    pub fn face_poset(&self) -> Vec<Face> {
        let top = self.face_from_rays(&(0..self.rays.len()).collect::<Vec<_>>());
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut faces = Vec::new();
        let mut queue = VecDeque::from([top]);
        while let Some(f) = queue.pop_front() {
            if !seen.insert(f.rays.clone()) {
                continue;
            }
            for j in 0..self.facets.len() {
                if f.tight_facets.contains(&j) {
                    continue;
                }
                let mut tight = f.tight_facets.clone();
                tight.push(j);
                let g = self.face_from_tight(&tight);
                if !seen.contains(&g.rays) {
                    queue.push_back(g);
                }
            }
            faces.push(f);
        }
        faces.sort();
        faces
    }

    /// Number of faces of each dimension, from the lineality dimension upward.
    pub fn f_vector(&self) -> Vec<usize> {
        let faces = self.face_poset();
        let lo = self.lineality.len();
        let mut out = vec![0; self.dim() - lo + 1];
        for f in faces {
            out[f.dim - lo] += 1;
        }
        out
    }

    /// The face cut out by the facets tight on every point.
    pub fn smallest_face_containing(&self, pts: &[IVec]) -> Result<Face> {
        for p in pts {
            if p.len() != self.ambient_rank {
                return Err(Error::invalid("point dimension does not match the cone"));
            }
            if !self.contains(p) {
                return Err(Error::invalid(format!("point {p:?} is not in the cone")));
            }
        }
        let tight: Vec<usize> = (0..self.facets.len())
            .filter(|&j| pts.iter().all(|p| linalg::dot(&self.facets[j], p) == 0))
            .collect();
        Ok(self.face_from_tight(&tight))
    }

    pub fn smallest_face_containing_q(&self, pts: &[QVec]) -> Result<Face> {
        let ints: Vec<IVec> = pts.iter().map(|p| linalg::primitive_from_rational(p)).collect();
        self.smallest_face_containing(&ints)
    }

    /// Index of the ray through `v`, if `v` spans one.
    pub fn ray_index(&self, v: &[Int]) -> Option<usize> {
        let pv = project_off(v, &self.lineality);
        self.rays.iter().position(|r| *r == pv)
    }
}

/// `⟨z, χ_ρ⟩` over the extremal rays of a dual cone, and whether all equal 1.
pub fn free_action_values(c_dual: &RationalCone, z: &[Int]) -> (Vec<Int>, bool) {
    let vals: Vec<Int> = c_dual.rays.iter().map(|r| linalg::dot(r, z)).collect();
    let all_one = !vals.is_empty() && vals.iter().all(|v| *v == 1);
    (vals, all_one)
}

/// Whether `x` is a nonnegative rational combination of `gens` (checked by hull).
pub fn in_hull(gens: &[IVec], x: &[Int]) -> bool {
    let n = x.len();
    RationalCone::positive_hull(gens, n).contains(x)
}
