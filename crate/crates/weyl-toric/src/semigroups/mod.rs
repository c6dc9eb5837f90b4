//! Affine semigroups in a lattice: saturated ones `C ∩ Z^n` and ones given by
//! explicit generators.

pub mod hilbert;
pub mod ideal;

pub use hilbert::{hilbert_basis, HilbertBasis};
pub use ideal::{toric_ideal, Binomial, BinomialIdeal, Budget};

use crate::cones::RationalCone;
use crate::linalg;
use crate::{Error, IMat, IVec, Int, Rat, Result};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineSemigroup {
    pub ambient_rank: usize,
    /// The real cone spanned by the semigroup.
    pub cone: RationalCone,
    pub saturated: bool,
    /// Basis of the unit group; empty for pointed semigroups.
    pub units: IMat,
    /// Minimal generators of the pointed part, sorted lexicographically.
    pub hilbert_basis: Vec<IVec>,
}

impl AffineSemigroup {
    /// `cone ∩ Z^n`, splitting off the unit group when the cone has lineality.
    pub fn saturated(cone: RationalCone) -> Self {
        let hb = hilbert_basis(&cone, true).expect("splitting requested");
        AffineSemigroup {
            ambient_rank: cone.ambient_rank,
            cone,
            saturated: true,
            units: hb.units,
            hilbert_basis: hb.elements,
        }
    }

    /// The semigroup generated by `gens`, which must span a pointed cone.
    pub fn from_generators(gens: &[IVec], n: usize) -> Result<Self> {
        let gens: Vec<IVec> = gens.iter().filter(|g| g.iter().any(|x| *x != 0)).cloned().collect();
        if gens.iter().any(|g| g.len() != n) {
            return Err(Error::invalid("generator length mismatch"));
        }
        let cone = RationalCone::positive_hull(&gens, n);
        if !cone.lineality.is_empty() {
            return Err(Error::invalid("explicit generators must span a pointed cone"));
        }
        let grading = interior_grading(&cone);
        let mut sorted = gens.clone();
        sorted.sort_by_key(|g| (linalg::dot(&grading, g), g.clone()));
        sorted.dedup();
        let mut minimal: Vec<IVec> = Vec::new();
        for g in sorted {
            if !generated_contains(&minimal, &grading, &g, &mut HashMap::new()) {
                minimal.push(g);
            }
        }
        minimal.sort();
        let saturated = {
            let sat = AffineSemigroup::saturated(cone.clone());
            sat.hilbert_basis == minimal
        };
        Ok(AffineSemigroup { ambient_rank: n, cone, saturated, units: Vec::new(), hilbert_basis: minimal })
    }

    pub fn is_pointed(&self) -> bool {
        self.units.is_empty()
    }

    /// Membership of a lattice point.
    pub fn contains(&self, x: &[Int]) -> bool {
        if self.saturated {
            return self.cone.contains(x);
        }
        let grading = interior_grading(&self.cone);
        self.cone.contains(x) && generated_contains(&self.hilbert_basis, &grading, x, &mut HashMap::new())
    }

    /// All generators of the group generated by the semigroup.
    fn group_generators(&self) -> IMat {
        let mut g = self.hilbert_basis.clone();
        g.extend(self.units.iter().cloned());
        g
    }

    /// Rank of the group generated by the semigroup.
    pub fn group_rank(&self) -> usize {
        linalg::rank(&self.group_generators(), self.ambient_rank)
    }
}

/// Sum of facet normals: positive on every nonzero point of a pointed cone.
pub(crate) fn interior_grading(cone: &RationalCone) -> IVec {
    let n = cone.ambient_rank;
    (0..n).map(|i| cone.facets.iter().map(|f| f[i]).sum()).collect()
}

fn generated_contains(gens: &[IVec], grading: &[Int], x: &[Int], memo: &mut HashMap<IVec, bool>) -> bool {
    if x.iter().all(|v| *v == 0) {
        return true;
    }
    if let Some(&r) = memo.get(x) {
        return r;
    }
    let dx = linalg::dot(grading, x);
    let mut found = false;
    for g in gens {
        let dg = linalg::dot(grading, g);
        if dg <= dx {
            let rest: IVec = x.iter().zip(g).map(|(a, b)| a - b).collect();
            if generated_contains(gens, grading, &rest, memo) {
                found = true;
                break;
            }
        }
    }
    memo.insert(x.to_vec(), found);
    found
}

/// Whether the minimal generators are linearly independent and generate a
/// saturated sublattice of the ambient lattice (together with the units).
pub fn is_free(s: &AffineSemigroup) -> bool {
    let gens = s.group_generators();
    if linalg::rank(&gens, s.ambient_rank) != gens.len() {
        return false;
    }
    let sm = linalg::smith(&gens, s.ambient_rank);
    sm.diag.iter().all(|d| *d == 1)
}

/// Whether the group generated by the semigroup is the whole ambient lattice.
pub fn generates_full_lattice(s: &AffineSemigroup) -> bool {
    let sm = linalg::smith(&s.group_generators(), s.ambient_rank);
    sm.rank() == s.ambient_rank && sm.diag.iter().all(|d| *d == 1)
}

/// `cone(gens) ∩ Z^n`.
pub fn saturate(gens: &[IVec], n: usize) -> AffineSemigroup {
    AffineSemigroup::saturated(RationalCone::positive_hull(gens, n))
}

/// Whether `S` is isomorphic to `{v ∈ Z^n_{≥0} : k | Σ v_i}` by a lattice map.
///
/// Such a map must send the primitive ray generators of `S` to `k e_i`, so it is
/// forced to be `M = k·R⁻¹` (columns of `R` = ray generators) up to a permutation.
/// `M` works iff it is integral, lands in the sublattice `k | Σ v`, and has index `k`.
pub fn veronese_recognize(s: &AffineSemigroup, n: usize, k: Int) -> bool {
    veronese_map(s, n, k).is_some()
}

/// The map `M` of [`veronese_recognize`], when it exists (rows act on column vectors).
pub fn veronese_map(s: &AffineSemigroup, n: usize, k: Int) -> Option<IMat> {
    if k < 1 || !s.saturated || !s.is_pointed() || s.ambient_rank != n || s.cone.rays.len() != n {
        return None;
    }
    let r_cols: IMat = linalg::transpose(&s.cone.rays, n);
    let inv = linalg::inverse_rational(&r_cols)?;
    let mut m: IMat = Vec::with_capacity(n);
    for row in inv {
        let mut out = Vec::with_capacity(n);
        for x in row {
            let y = x * Rat::from_integer(k);
            if !y.is_integer() {
                return None;
            }
            out.push(y.to_integer());
        }
        m.push(out);
    }
    let columns_ok = (0..n).all(|j| (0..n).map(|i| m[i][j]).sum::<Int>() % k == 0);
    (columns_ok && linalg::det(&m).abs() == k).then_some(m)
}
