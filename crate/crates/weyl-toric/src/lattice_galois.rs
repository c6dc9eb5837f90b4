//! Lattices `Z^rank` with a cyclic (tame) inertia action and a Frobenius action.

use crate::linalg;
use crate::lm_pairs::LMPair;
use crate::{Error, IMat, IVec, Int, QVec, Rat, Result};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Search bound for the order of an action matrix.
const MAX_ORDER: usize = 10_000;

/// `Z^rank` with inertia generator `γ` and Frobenius `σ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisLattice {
    pub rank: usize,
    pub inertia_gen: IMat,
    pub frobenius: IMat,
    pub inertia_order: usize,
    /// Least `d > 0` with `σ^d` in the group generated by `γ`.
    pub frobenius_order_mod_inertia: usize,
}

/// JSON form: `{"rank": n, "inertia": [[..]], "frobenius": [[..]], "p": 3}`.
#[derive(Debug, Clone, Deserialize)]
pub struct GaloisLatticeInput {
    pub rank: usize,
    pub inertia: Option<IMat>,
    pub frobenius: Option<IMat>,
    pub p: Option<Int>,
}

/// A sublattice given by basis vectors (stored as rows).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sublattice {
    pub ambient_rank: usize,
    pub basis: IMat,
    pub saturated: bool,
}

impl Sublattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        if self.basis.is_empty() {
            return v.iter().all(|x| *x == 0);
        }
        let t = linalg::transpose(&self.basis, self.ambient_rank);
        let rhs: QVec = v.iter().map(|&x| Rat::from_integer(x)).collect();
        match linalg::solve_rational(&t, self.basis.len(), &rhs) {
            Some(sol) => sol.iter().all(|c| c.is_integer()),
            None => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Inertia,
    Frobenius,
    Both,
}

/// `M / (γ − 1)M` split as free part and finite cyclic summands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coinvariants {
    pub free_rank: usize,
    /// Orders (> 1) of the cyclic torsion summands, each dividing the next.
    pub torsion: Vec<Int>,
    /// Rows map `M` onto the free quotient `Z^free_rank`.
    pub quotient_map: IMat,
}

pub fn mat_pow(a: &IMat, k: usize) -> IMat {
    let n = a.len();
    let mut out = linalg::identity::<Int>(n);
    for _ in 0..k {
        out = linalg::mat_mul(&out, a, n);
    }
    out
}

fn order_of(a: &IMat) -> Option<usize> {
    let n = a.len();
    let id = linalg::identity::<Int>(n);
    let mut cur = a.clone();
    for k in 1..=MAX_ORDER {
        if cur == id {
            return Some(k);
        }
        cur = linalg::mat_mul(&cur, a, n);
    }
    None
}

fn check_square(name: &str, a: &IMat, n: usize) -> Result<()> {
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::invalid(format!("{name} must be a {n}x{n} matrix")));
    }
    Ok(())
}

impl GaloisLattice {
    /// Validate and build. When `p` is given the tame relation `σγσ⁻¹ = γ^p` is checked.
    pub fn new(inertia_gen: IMat, frobenius: IMat, p: Option<Int>) -> Result<Self> {
        let rank = inertia_gen.len();
        if rank == 0 {
            return Err(Error::invalid("lattice rank must be positive"));
        }
        check_square("inertia", &inertia_gen, rank)?;
        check_square("frobenius", &frobenius, rank)?;
        for (name, m) in [("inertia", &inertia_gen), ("frobenius", &frobenius)] {
            if linalg::det(m).abs() != 1 {
                return Err(Error::invalid(format!("{name} matrix is not invertible over Z")));
            }
        }
        let inertia_order = order_of(&inertia_gen)
            .ok_or_else(|| Error::invalid("inertia matrix does not have finite order"))?;
        let frob_order = order_of(&frobenius)
            .ok_or_else(|| Error::invalid("frobenius matrix does not have finite order"))?;
        if let Some(p) = p {
            let sg = linalg::mat_mul(&frobenius, &inertia_gen, rank);
            let gp = mat_pow(&inertia_gen, (p as usize) % inertia_order);
            let gps = linalg::mat_mul(&gp, &frobenius, rank);
            if sg != gps {
                return Err(Error::invalid("tameness relation σγσ⁻¹ = γ^p fails"));
            }
        }
        let powers: Vec<IMat> = (0..inertia_order).map(|k| mat_pow(&inertia_gen, k)).collect();
        let mut cur = frobenius.clone();
        let mut d = 1;
        while !powers.contains(&cur) {
            cur = linalg::mat_mul(&cur, &frobenius, rank);
            d += 1;
        }
        debug_assert!(d <= frob_order);
        Ok(GaloisLattice { rank, inertia_gen, frobenius, inertia_order, frobenius_order_mod_inertia: d })
    }

    /// Trivial actions on `Z^rank`.
    pub fn trivial(rank: usize) -> Self {
        let id = linalg::identity::<Int>(rank);
        GaloisLattice {
            rank,
            inertia_gen: id.clone(),
            frobenius: id,
            inertia_order: 1,
            frobenius_order_mod_inertia: 1,
        }
    }

    /// Trivial inertia, given Frobenius.
    pub fn with_frobenius(frobenius: IMat) -> Result<Self> {
        let n = frobenius.len();
        Self::new(linalg::identity(n), frobenius, None)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inp: GaloisLatticeInput =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("lattice JSON: {e}")))?;
        let id = linalg::identity::<Int>(inp.rank);
        Self::new(inp.inertia.unwrap_or_else(|| id.clone()), inp.frobenius.unwrap_or(id), inp.p)
    }

    pub fn is_split(&self) -> bool {
        self.frobenius == linalg::identity::<Int>(self.rank)
    }

    fn minus_identity(&self, m: &IMat) -> IMat {
        let mut out = m.clone();
        for (i, row) in out.iter_mut().enumerate() {
            row[i] -= 1;
        }
        out
    }

    /// Orbit of `v` under the cyclic inertia group, starting at `v`.
    pub fn inertia_orbit(&self, v: &[Int]) -> Vec<IVec> {
        let mut orbit = vec![v.to_vec()];
        loop {
            let next = linalg::mat_vec(&self.inertia_gen, orbit.last().unwrap());
            if next == orbit[0] {
                return orbit;
            }
            orbit.push(next);
        }
    }

    /// Elementwise Frobenius on a rational vector.
    pub fn frobenius_q(&self, v: &[Rat]) -> QVec {
        self.frobenius
            .iter()
            .map(|row| row.iter().zip(v).fold(Rat::zero(), |acc, (a, x)| acc + Rat::from_integer(*a) * x))
            .collect()
    }
}

/// Saturated kernel of the stacked `(action − 1)` maps.
pub fn invariants_sublattice(m: &GaloisLattice, which: Which) -> Sublattice {
    let mut stacked: IMat = Vec::new();
    if matches!(which, Which::Inertia | Which::Both) {
        stacked.extend(m.minus_identity(&m.inertia_gen));
    }
    if matches!(which, Which::Frobenius | Which::Both) {
        stacked.extend(m.minus_identity(&m.frobenius));
    }
    let basis = linalg::kernel(&stacked, m.rank);
    Sublattice { ambient_rank: m.rank, basis, saturated: true }
}

/// Smith decomposition of `M / (γ − 1)M`.
pub fn coinvariants(m: &GaloisLattice) -> Coinvariants {
    let a = m.minus_identity(&m.inertia_gen);
    let s = linalg::smith(&a, m.rank);
    let r = s.rank();
    let torsion: Vec<Int> = s.diag.iter().copied().filter(|d| *d > 1).collect();
    let mut quotient_map: IMat = s.u[r..].to_vec();
    if !quotient_map.is_empty() {
        linalg::hermite_rows_in_place(&mut quotient_map, m.rank);
    }
    Coinvariants { free_rank: m.rank - r, torsion, quotient_map }
}

/// Mean of the inertia orbit of `λ`; inertia-invariant and constant on orbits.
pub fn average(m: &GaloisLattice, lambda: &[Int]) -> QVec {
    let orbit = m.inertia_orbit(lambda);
    let k = Rat::from_integer(orbit.len() as Int);
    (0..m.rank)
        .map(|i| orbit.iter().fold(Rat::zero(), |acc, v| acc + Rat::from_integer(v[i])) / k)
        .collect()
}

pub fn dot_q(a: &[Rat], chi: &[Int]) -> Rat {
    a.iter().zip(chi).fold(Rat::zero(), |acc, (x, c)| acc + x * Rat::from_integer(*c))
}

/// `⟨φ(λ^◇), χ⟩`. `λ` lives in the source cocharacter lattice of the pair when one
/// is recorded, otherwise directly in `N`.
pub fn pairing(pair: &LMPair, lambda: &[Int], chi: &[Int]) -> Result<Rat> {
    let n = pair.lattice.rank;
    if chi.len() != n {
        return Err(Error::invalid(format!("character has length {}, expected {n}", chi.len())));
    }
    let image = match &pair.source {
        Some(src) => {
            if lambda.len() != src.lattice.rank {
                return Err(Error::invalid(format!(
                    "cocharacter has length {}, expected {}",
                    lambda.len(),
                    src.lattice.rank
                )));
            }
            let avg = average(&src.lattice, lambda);
            src.phi
                .iter()
                .map(|row| row.iter().zip(&avg).fold(Rat::zero(), |acc, (a, x)| acc + Rat::from_integer(*a) * x))
                .collect::<QVec>()
        }
        None => {
            if lambda.len() != n {
                return Err(Error::invalid(format!("cocharacter has length {}, expected {n}", lambda.len())));
            }
            lambda.iter().map(|&x| Rat::from_integer(x)).collect()
        }
    };
    Ok(dot_q(&image, chi))
}

/// `e·⟨μ̄′, χ⟩` for every orbit element, in catalog order.
pub fn divisor_multiplicities(pair: &LMPair, chi: &[Int]) -> Result<Vec<(QVec, Int)>> {
    if chi.len() != pair.lattice.rank {
        return Err(Error::invalid(format!(
            "character has length {}, expected {}",
            chi.len(),
            pair.lattice.rank
        )));
    }
    let e = Rat::from_integer(pair.e);
    pair.orbit
        .iter()
        .map(|v| {
            let m = e * dot_q(v, chi);
            if !m.is_integer() {
                return Err(Error::invariant(format!(
                    "multiplicity {m} is not integral: orbit data inconsistent with e = {}",
                    pair.e
                )));
            }
            Ok((v.clone(), m.to_integer()))
        })
        .collect()
}

/// Dual action `(σ⁻¹)ᵀ` on characters.
pub fn dual_frobenius(m: &GaloisLattice) -> IMat {
    let inv = linalg::inverse_unimodular(&m.frobenius);
    linalg::transpose(&inv, m.rank)
}
