//! The Lang isogeny `x ↦ Fr(x)·x⁻¹` on the lattice level and the normalization of
//! its pullback to an affine toric embedding.
//!
//! On cocharacters the isogeny is `L_* = pσ − 1`; on characters it is the transpose
//! `L^*`. The normalized cover of `Y_S` is the toric scheme of the pulled back cone
//! `L_*^{-1}(τ)`, where `τ` is the cone dual to `S`.

use crate::cones::RationalCone;
use crate::lattice_galois::GaloisLattice;
use crate::linalg;
use crate::lm_pairs::LMPair;
use crate::semigroups::hilbert::{combine, coords_in};
use crate::semigroups::{self, AffineSemigroup};
use crate::{Error, IMat, IVec, Int, Rat, Result};
use std::collections::{BTreeSet, VecDeque};

/// Cap on the number of standard monomials explored for one fiber.
pub const FIBER_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LangMap {
    pub lattice: GaloisLattice,
    pub p: Int,
    /// `pσ − 1` on cocharacters (acting on columns).
    pub l_star: IMat,
    /// The transpose, acting on characters.
    pub l_star_dual: IMat,
}

/// One boundary ray of the pulled back cone and the ray below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamifiedRay {
    pub lambda_tilde: IVec,
    pub lambda: IVec,
    /// `L_*(λ̃) = e·λ` modulo the lineality spaces.
    pub e: Int,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationReport {
    pub rays: Vec<RamifiedRay>,
}

/// Everything the `lang` report needs for one pair and semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LangReport {
    pub group_order: Int,
    pub ramification: RamificationReport,
    pub fiber_length: Int,
    pub flat: bool,
    pub smooth: bool,
    /// `flat == smooth`: required for split tori, evidence otherwise.
    pub flat_iff_smooth: bool,
}

impl LangMap {
    pub fn new(lattice: GaloisLattice, p: Int) -> Result<Self> {
        if p < 2 {
            return Err(Error::invalid("p must be a prime"));
        }
        let n = lattice.rank;
        let mut l_star: IMat = lattice.frobenius.iter().map(|r| r.iter().map(|x| p * x).collect()).collect();
        for (i, row) in l_star.iter_mut().enumerate() {
            row[i] -= 1;
        }
        if linalg::det(&l_star) == 0 {
            return Err(Error::invariant("pσ − 1 is singular"));
        }
        let l_star_dual = linalg::transpose(&l_star, n);
        Ok(LangMap { lattice, p, l_star, l_star_dual })
    }

    pub fn for_pair(pair: &LMPair) -> Result<Self> {
        Self::new(pair.lattice.clone(), pair.p)
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank
    }

    /// `p = 2` on a split torus: `L_* = 1` and the cover is an isomorphism.
    pub fn is_trivial(&self) -> bool {
        self.p == 2 && self.lattice.is_split()
    }

    /// Preimage of a lattice vector under `L_*`, as a primitive integer vector.
    fn preimage_primitive(&self, v: &[Int]) -> IVec {
        let rhs: Vec<Rat> = v.iter().map(|&x| Rat::from_integer(x)).collect();
        let sol = linalg::solve_rational(&self.l_star, self.rank(), &rhs).expect("L_* is invertible");
        linalg::primitive_from_rational(&sol)
    }
}

/// `|det(pσ − 1)|`, the order of `T(F_p)`.
pub fn group_order(lm: &LangMap) -> Int {
    linalg::det(&lm.l_star).abs()
}

/// `L_*^{-1}(τ)`, generated by the primitive preimages of the generators of `τ`.
pub fn pullback_cone(lm: &LangMap, tau: &RationalCone) -> RationalCone {
    let gens: Vec<IVec> = tau.generators().iter().map(|g| lm.preimage_primitive(g)).collect();
    RationalCone::positive_hull(&gens, lm.rank())
}

/// `S̃ = (L_*^{-1}τ)^∨ ∩ X^*` for `S = τ^∨ ∩ X^*`.
pub fn normalization_semigroup(lm: &LangMap, s: &AffineSemigroup) -> Result<AffineSemigroup> {
    if !s.saturated {
        return Err(Error::invalid("normalization expects a saturated semigroup"));
    }
    let tau = s.cone.dual();
    Ok(AffineSemigroup::saturated(pullback_cone(lm, &tau).dual()))
}

/// `saturate(L^*(S))`: the same semigroup reached from the generators of `S`.
pub fn normalization_from_generators(lm: &LangMap, s: &AffineSemigroup) -> AffineSemigroup {
    let n = lm.rank();
    let mut gens: Vec<IVec> = s.hilbert_basis.iter().map(|h| linalg::mat_vec(&lm.l_star_dual, h)).collect();
    for u in &s.units {
        let image = linalg::mat_vec(&lm.l_star_dual, u);
        gens.push(image.iter().map(|x| -x).collect());
        gens.push(image);
    }
    semigroups::saturate(&gens, n)
}

/// Coordinates modulo a saturated sublattice, in a fixed complement basis.
struct Quotient {
    full: IMat,
    complement: IMat,
    skip: usize,
}

impl Quotient {
    fn new(sub: &IMat, n: usize) -> Self {
        let complement = linalg::complement_basis(sub, n);
        let mut full = sub.clone();
        full.extend(complement.iter().cloned());
        Quotient { full, complement, skip: sub.len() }
    }

    fn coords(&self, v: &[Int]) -> IVec {
        coords_in(&self.full, v)[self.skip..].to_vec()
    }

    fn lift(&self, c: &[Int]) -> IVec {
        combine(&self.complement, c, self.full.len())
    }
}

/// Ramification degree of every boundary ray of `L_*^{-1}(τ)` over `τ`.
pub fn ramification_degrees(lm: &LangMap, tau: &RationalCone) -> Result<RamificationReport> {
    let n = lm.rank();
    let pulled = pullback_cone(lm, tau);
    let below = Quotient::new(&tau.lineality, n);
    let above = Quotient::new(&pulled.lineality, n);
    let mut rays = Vec::with_capacity(tau.rays.len());
    for r in &tau.rays {
        let lambda_q = linalg::primitive(&below.coords(r));
        let lambda = below.lift(&lambda_q);
        let tilde_q = linalg::primitive(&above.coords(&lm.preimage_primitive(&lambda)));
        let lambda_tilde = above.lift(&tilde_q);
        let image = below.coords(&linalg::mat_vec(&lm.l_star, &lambda_tilde));
        let e = linalg::content(&image);
        if e == 0 || image.iter().zip(&lambda_q).any(|(a, b)| *a != e * b) {
            return Err(Error::invariant("L_* does not carry the pulled back ray onto a ray"));
        }
        if pulled.lineality.is_empty() && pulled.ray_index(&lambda_tilde).is_none() {
            return Err(Error::invariant("preimage of a ray is not a ray of the pullback"));
        }
        rays.push(RamifiedRay { lambda_tilde, lambda, e });
    }
    rays.sort_by(|a, b| a.lambda.cmp(&b.lambda));
    Ok(RamificationReport { rays })
}

/// The pointed part of a saturated semigroup and its units, in quotient coordinates.
struct Split {
    quotient: Quotient,
    units: IMat,
}

fn split_units(s: &AffineSemigroup) -> Split {
    Split { quotient: Quotient::new(&s.units, s.ambient_rank), units: s.units.clone() }
}

/// Length of the fiber of `Y_{S̃} → Y_S` over a point of the closed orbit.
///
/// The unit groups contribute the index `[Ũ : L^*(U)]`. On the pointed quotient the
/// fiber algebra has a basis of standard monomials: points of `S̃` outside every
/// translate `L^*(h) + S̃`, `h` in the Hilbert basis of `S`. They form an order
/// ideal, found by search from the origin.
pub fn fiber_length_over_closed_orbit(lm: &LangMap, s: &AffineSemigroup) -> Result<Int> {
    let n = lm.rank();
    if !s.saturated {
        return Err(Error::invalid("fiber length expects a saturated semigroup"));
    }
    let s_tilde = normalization_semigroup(lm, s)?;
    if s_tilde.units.len() != s.units.len() {
        return Err(Error::invariant("L^* changed the rank of the unit group"));
    }
    let below = split_units(s);
    let above = split_units(&s_tilde);
    // Units: express L^*(U) in the basis of Ũ.
    let unit_index = if below.units.is_empty() {
        1
    } else {
        let images: IMat = below.units.iter().map(|u| linalg::mat_vec(&lm.l_star_dual, u)).collect();
        let coords: IMat = images.iter().map(|v| coords_in(&above.units, v)).collect();
        linalg::det(&coords).abs()
    };
    // Pointed part, in the coordinates of the quotient by Ũ ⊗ Q.
    let q = &above.quotient;
    let targets: Vec<IVec> =
        s.hilbert_basis.iter().map(|h| q.coords(&linalg::mat_vec(&lm.l_star_dual, h))).collect();
    let m = n - above.units.len();
    let tilde_gens: Vec<IVec> = s_tilde.hilbert_basis.iter().map(|h| q.coords(h)).collect();
    let tilde_cone = RationalCone::positive_hull(&tilde_gens, m);
    let standard = |x: &IVec| -> bool {
        targets.iter().all(|t| {
            let diff: IVec = x.iter().zip(t).map(|(a, b)| a - b).collect();
            !tilde_cone.contains(&diff)
        })
    };
    let origin = vec![0; m];
    let mut seen: BTreeSet<IVec> = BTreeSet::from([origin.clone()]);
    let mut queue = VecDeque::from([origin]);
    while let Some(x) = queue.pop_front() {
        for g in &tilde_gens {
            let y: IVec = x.iter().zip(g).map(|(a, b)| a + b).collect();
            if !seen.contains(&y) && standard(&y) {
                seen.insert(y.clone());
                queue.push_back(y);
                if seen.len() > FIBER_LIMIT {
                    return Err(Error::budget("standard monomials in the fiber", FIBER_LIMIT as u64));
                }
            }
        }
    }
    Ok(unit_index * seen.len() as Int)
}

/// Whether the ray generators of the cone of `S` modulo its units form a basis
/// of the quotient lattice.
pub fn is_smooth(s: &AffineSemigroup) -> bool {
    let sp = split_units(s);
    let m = s.ambient_rank - sp.units.len();
    let rays: IMat = s.cone.rays.iter().map(|r| linalg::primitive(&sp.quotient.coords(r))).collect();
    if rays.len() != m {
        return false;
    }
    m == 0 || linalg::det(&rays).abs() == 1
}

/// Miracle flatness: the fiber over the closed orbit has length `|T(F_p)|`.
pub fn is_flat(lm: &LangMap, s: &AffineSemigroup) -> Result<bool> {
    if lm.is_trivial() {
        return Ok(true);
    }
    Ok(fiber_length_over_closed_orbit(lm, s)? == group_order(lm))
}

/// Group order, ramification, fiber length and the two verdicts.
pub fn lang_report(lm: &LangMap, s: &AffineSemigroup) -> Result<LangReport> {
    let group_order = group_order(lm);
    let ramification = ramification_degrees(lm, &s.cone.dual())?;
    let fiber_length = fiber_length_over_closed_orbit(lm, s)?;
    if fiber_length < group_order {
        return Err(Error::invariant(format!("fiber length {fiber_length} is below the group order {group_order}")));
    }
    let flat = fiber_length == group_order;
    let smooth = is_smooth(s);
    Ok(LangReport { group_order, ramification, fiber_length, flat, smooth, flat_iff_smooth: flat == smooth })
}
