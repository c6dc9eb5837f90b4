//! Hilbert bases of saturated affine semigroups `C ∩ Z^n`.
//!
//! Primal route: reduce to a full-dimensional pointed cone, triangulate it by
//! pulling, collect the lattice points of every fundamental parallelepiped, then
//! discard reducible candidates in order of degree.

use crate::cones::RationalCone;
use crate::linalg;
use crate::{Error, IMat, IVec, Int, Rat, Result};
use std::collections::BTreeSet;

/// Hilbert basis of a possibly non-pointed saturated semigroup: the unit group
/// basis plus the minimal generators of a pointed complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertBasis {
    /// Basis of the unit group (the lattice points of the lineality space).
    pub units: IMat,
    /// Minimal generators of the pointed part, lexicographically sorted.
    pub elements: Vec<IVec>,
}

/// Coordinates of `x` in the basis `rows` of a lattice containing it.
pub(crate) fn coords_in(rows: &IMat, x: &[Int]) -> IVec {
    let n = x.len();
    let t = linalg::transpose(rows, n);
    let rhs: Vec<Rat> = x.iter().map(|&v| Rat::from_integer(v)).collect();
    let sol = linalg::solve_rational(&t, rows.len(), &rhs).expect("vector lies in the span");
    sol.iter()
        .map(|c| {
            assert!(c.is_integer(), "vector is not in the lattice");
            c.to_integer()
        })
        .collect()
}

pub(crate) fn combine(rows: &IMat, coeffs: &[Int], n: usize) -> IVec {
    let mut out = vec![0; n];
    for (r, c) in rows.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(r) {
            *o += c * x;
        }
    }
    out
}

/// Hilbert basis of `cone ∩ Z^n`. A cone with a lineality space is split into
/// units and a pointed complement only when `split` is set.
pub fn hilbert_basis(cone: &RationalCone, split: bool) -> Result<HilbertBasis> {
    let n = cone.ambient_rank;
    if !cone.lineality.is_empty() && !split {
        return Err(Error::invalid("cone is not pointed and no splitting of its lineality was requested"));
    }
    let units = cone.lineality.clone();
    let complement = linalg::complement_basis(&units, n);
    let mut full = units.clone();
    full.extend(complement.iter().cloned());
    let l = units.len();
    let quotient_rays: Vec<IVec> = cone.rays.iter().map(|r| coords_in(&full, r)[l..].to_vec()).collect();
    let pointed = pointed_hilbert_basis(&quotient_rays, n - l);
    let mut elements: Vec<IVec> = pointed.iter().map(|y| combine(&complement, y, n)).collect();
    elements.sort();
    Ok(HilbertBasis { units, elements })
}

/// Hilbert basis of the pointed cone generated by `rays` in `Z^m` (any dimension).
pub fn pointed_hilbert_basis(rays: &[IVec], m: usize) -> Vec<IVec> {
    let rays: Vec<IVec> = rays.iter().filter(|r| r.iter().any(|x| *x != 0)).cloned().collect();
    if rays.is_empty() {
        return Vec::new();
    }
    let span = linalg::saturated_span(&rays, m);
    let d = span.len();
    let local: Vec<IVec> = rays.iter().map(|r| coords_in(&span, r)).collect();
    let cone = RationalCone::positive_hull(&local, d);
    assert!(cone.lineality.is_empty(), "pointed cone expected");
    let grading: IVec = (0..d).map(|i| cone.facets.iter().map(|f| f[i]).sum()).collect();
    let deg = |x: &IVec| linalg::dot(&grading, x);

    let mut candidates: BTreeSet<(Int, IVec)> = BTreeSet::new();
    for simplex in triangulate(&cone.rays, d) {
        for p in parallelepiped_points(&simplex) {
            if p.iter().any(|x| *x != 0) {
                candidates.insert((deg(&p), p));
            }
        }
        for r in simplex {
            candidates.insert((deg(&r), r));
        }
    }
    let mut basis: Vec<(Int, IVec)> = Vec::new();
    for (dx, x) in candidates {
        let reducible = basis.iter().any(|(dh, h)| {
            *dh < dx && {
                let diff: IVec = x.iter().zip(h).map(|(a, b)| a - b).collect();
                cone.contains(&diff)
            }
        });
        if !reducible {
            basis.push((dx, x));
        }
    }
    let mut out: Vec<IVec> = basis.into_iter().map(|(_, y)| combine(&span, &y, m)).collect();
    out.sort();
    out
}

/// Pulling triangulation of a pointed cone into simplicial cones (lists of rays).
pub fn triangulate(rays: &[IVec], n: usize) -> Vec<Vec<IVec>> {
    let cone = RationalCone::positive_hull(rays, n);
    let rays = cone.rays.clone();
    if rays.len() == cone.dim() {
        return vec![rays];
    }
    let apex = rays[0].clone();
    let mut out = Vec::new();
    for f in &cone.facets {
        if linalg::dot(f, &apex) == 0 {
            continue;
        }
        let face: Vec<IVec> = rays.iter().filter(|r| linalg::dot(f, r) == 0).cloned().collect();
        for mut simplex in triangulate(&face, n) {
            simplex.insert(0, apex.clone());
            out.push(simplex);
        }
    }
    out
}

/// Lattice points `Σ λ_i r_i`, `λ ∈ [0,1)^d`, of a full-rank simplicial cone in `Z^d`.
pub fn parallelepiped_points(rays: &[IVec]) -> Vec<IVec> {
    let d = rays.len();
    let m: IMat = rays.to_vec();
    let s = linalg::smith(&m, d);
    assert_eq!(s.rank(), d, "simplicial cone must be full rank");
    let vinv = linalg::inverse_unimodular(&s.v);
    let minv = linalg::inverse_rational(&m).expect("full rank");
    let mut out = Vec::new();
    let mut w = vec![0 as Int; d];
    loop {
        // Row vector x = w · V⁻¹ runs over coset representatives of Z^d / Z-span(rays).
        let x: IVec = (0..d).map(|j| (0..d).map(|i| w[i] * vinv[i][j]).sum()).collect();
        let lambda: Vec<Rat> = (0..d)
            .map(|j| (0..d).fold(Rat::from_integer(0), |acc, i| acc + Rat::from_integer(x[i]) * minv[i][j]))
            .collect();
        let frac: Vec<Rat> = lambda.iter().map(|l| l - l.floor()).collect();
        let p: IVec = (0..d)
            .map(|j| {
                let v = (0..d).fold(Rat::from_integer(0), |acc, i| acc + frac[i] * Rat::from_integer(m[i][j]));
                assert!(v.is_integer());
                v.to_integer()
            })
            .collect();
        out.push(p);
        // Odometer over w_i ∈ [0, diag_i).
        let mut i = 0;
        loop {
            if i == d {
                out.sort();
                return out;
            }
            w[i] += 1;
            if w[i] < s.diag[i] {
                break;
            }
            w[i] = 0;
            i += 1;
        }
    }
}
