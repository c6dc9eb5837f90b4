//! Catalog of local-model pairs reduced to lattice data, with the structural
//! predicates read off from it.
//!
//! A pair is stored as the torus lattice `N = X_*(T_𝒢)` with its Frobenius, the
//! orbit of averaged and projected coweights in `N_Q`, and the ramification index
//! `e` of the reflex field. Entries that come with an explicit source lattice
//! (inertia action plus projection) compute their orbit through it.

use crate::cones::RationalCone;
use crate::lattice_galois::{average, GaloisLattice};
use crate::linalg;
use crate::root_data::{weyl_orbit, RootSystem};
use crate::semigroups::{self, AffineSemigroup};
use crate::{Error, IMat, IVec, Int, QVec, Rat, Result};
use num_traits::Zero;
use serde::Deserialize;
use std::collections::BTreeSet;

/// Rational matrix acting on column vectors of `N_Q`.
pub type QMat = Vec<QVec>;

/// A source cocharacter lattice with inertia, the parahoric projection to `N`, and
/// the cocharacters whose averaged images form the orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceData {
    pub lattice: GaloisLattice,
    /// Rows are the coordinates of `N` as linear forms on the source lattice.
    pub phi: IMat,
    pub mu_orbit: Vec<IVec>,
}

/// What the adjoint group over the maximal unramified extension looks like, as far
/// as the simplicial/free classification cares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdjointClass {
    /// Isomorphic to `(PGL_n, ϖ_1)`.
    Drinfeld,
    /// Ramified `PU_3` with signature `(2,1)`.
    RamifiedUnitaryThree,
    /// Absolutely simple, neither of the above.
    Other,
    /// A torus, or a product of several simple factors.
    NotAbsolutelySimple,
}

/// Which catalog constructor produced a pair; drives naming of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairKind {
    Gl { n: usize, j: usize },
    Gsp { g: usize },
    Gspin { g: usize },
    DivisionAlgebra { d: usize },
    FakeUnitary { d: usize },
    ResRamifiedGl { weights: IVec },
    ResGlRamifiedExample { n: usize },
    GlTwoStepParahoric { n: usize, r: usize },
    GuRamified { n: usize, r: usize, s: usize },
    HilbertSiegel { g: usize, d: usize },
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LMPair {
    pub name: String,
    pub kind: PairKind,
    /// `N` with its Frobenius.
    pub lattice: GaloisLattice,
    pub p: Int,
    pub e: Int,
    /// Distinct orbit images in `N_Q`, sorted.
    pub orbit: Vec<QVec>,
    pub source: Option<SourceData>,
    pub ab_character: Option<IVec>,
    pub central_vector: Option<IVec>,
    /// Generators of the relative Weyl group acting on `N_Q`.
    pub weyl_generators: Vec<QMat>,
    /// Root datum on `N` for pairs that are split with Iwahori level.
    pub root_system: Option<RootSystem>,
    pub iwahori: bool,
    /// `1 + Σ split ranks` over the simple factors touched by `μ`, when known.
    pub split_rank_bound: Option<usize>,
    pub adjoint_class: AdjointClass,
    /// Generators of a distinguished free sub-semigroup of `S_{𝒢,μ}`.
    pub free_generators: Option<Vec<IVec>>,
}

fn q(x: Int) -> Rat {
    Rat::from_integer(x)
}

fn qvec(v: &[Int]) -> QVec {
    v.iter().map(|&x| q(x)).collect()
}

fn qmat(m: &IMat) -> QMat {
    m.iter().map(|r| qvec(r)).collect()
}

fn unit(n: usize, i: usize) -> IVec {
    (0..n).map(|j| Int::from(i == j)).collect()
}

fn apply_q(m: &QMat, v: &[Rat]) -> QVec {
    m.iter().map(|row| row.iter().zip(v).fold(Rat::zero(), |acc, (a, x)| acc + a * x)).collect()
}

/// Permutation matrix swapping coordinates `i` and `j` of `Z^n`.
fn transposition(n: usize, i: usize, j: usize) -> IMat {
    let mut m = linalg::identity::<Int>(n);
    m.swap(i, j);
    m
}

/// Cyclic shift `e_k ↦ e_{k+1}` on the coordinates listed in `block`.
fn block_shift(n: usize, blocks: &[Vec<usize>]) -> IMat {
    let mut m = linalg::zeros::<Int>(n, n);
    let mut moved = vec![false; n];
    for block in blocks {
        for (k, &from) in block.iter().enumerate() {
            let to = block[(k + 1) % block.len()];
            m[to][from] = 1;
            moved[from] = true;
        }
    }
    for (i, row) in m.iter_mut().enumerate() {
        if !moved[i] {
            row[i] = 1;
        }
    }
    m
}

fn dedup_sorted(v: Vec<QVec>) -> Vec<QVec> {
    v.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

fn check_prime(p: Int) -> Result<()> {
    if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(Error::invalid(format!("{p} is not a prime")));
    }
    Ok(())
}

fn split_pair(name: String, kind: PairKind, rs: RootSystem, mu: &[Int], p: Int) -> Result<LMPair> {
    check_prime(p)?;
    let n = rs.ambient_rank;
    let orbit = weyl_orbit(&rs, mu).iter().map(|v| qvec(v)).collect();
    let weyl_generators = (0..rs.rank()).map(|i| qmat(&rs.reflection(i))).collect();
    Ok(LMPair {
        name,
        kind,
        lattice: GaloisLattice::trivial(n),
        p,
        e: 1,
        orbit,
        source: None,
        ab_character: None,
        central_vector: None,
        weyl_generators,
        root_system: Some(rs),
        iwahori: true,
        split_rank_bound: None,
        adjoint_class: AdjointClass::Other,
        free_generators: None,
    })
}

/// `(GL_n, ϖ_j^∨)` at Iwahori level; the orbit is the 0/1 vectors with `j` ones.
pub fn gl(n: usize, j: usize, p: Int) -> Result<LMPair> {
    if n == 0 || j > n {
        return Err(Error::invalid(format!("gl needs n >= 1 and 0 <= j <= n, got n={n}, j={j}")));
    }
    let mu: IVec = (0..n).map(|i| Int::from(i < j)).collect();
    let mut pair = split_pair(format!("gl:{n}:{j}"), PairKind::Gl { n, j }, RootSystem::gl(n), &mu, p)?;
    pair.ab_character = Some(vec![1; n]);
    pair.central_vector = Some(vec![1; n]);
    pair.split_rank_bound = Some(n);
    pair.adjoint_class = if n == 1 || j == 0 || j == n {
        AdjointClass::NotAbsolutelySimple
    } else if j == 1 || j == n - 1 {
        AdjointClass::Drinfeld
    } else {
        AdjointClass::Other
    };
    pair.free_generators = Some((0..n).map(|i| unit(n, i)).collect());
    Ok(pair)
}

/// `(GSp_2g, μ_std)` on coordinates `(r_1, …, r_g, c)`; the orbit is `(a, 1)`, `a ∈ {0,1}^g`.
pub fn gsp(g: usize, p: Int) -> Result<LMPair> {
    if g == 0 {
        return Err(Error::invalid("gsp needs g >= 1"));
    }
    let n = g + 1;
    let mut pair = split_pair(format!("gsp:{g}"), PairKind::Gsp { g }, RootSystem::gsp(g), &vec![1; n], p)?;
    pair.ab_character = Some(unit(n, g));
    let mut z = vec![1; n];
    z[g] = 2;
    pair.central_vector = Some(z);
    pair.split_rank_bound = Some(g + 1);
    pair.adjoint_class = if g == 1 { AdjointClass::Drinfeld } else { AdjointClass::Other };
    // e_1, …, e_g and f_1 = c − r_1.
    let mut free: Vec<IVec> = (0..g).map(|i| unit(n, i)).collect();
    let mut f1 = unit(n, g);
    f1[0] = -1;
    free.push(f1);
    pair.free_generators = Some(free);
    Ok(pair)
}

/// `(GSpin_{2g+1}, μ_1)`; the orbit is `{e_i, e_{g+1} − e_i}`.
pub fn gspin(g: usize, p: Int) -> Result<LMPair> {
    if g == 0 {
        return Err(Error::invalid("gspin needs g >= 1"));
    }
    let n = g + 1;
    let mut pair = split_pair(format!("gspin:{g}"), PairKind::Gspin { g }, RootSystem::gspin(g), &unit(n, 0), p)?;
    let mut ab = vec![1; n];
    ab[g] = 2;
    pair.ab_character = Some(ab);
    pair.central_vector = Some(unit(n, g));
    pair.split_rank_bound = Some(g + 1);
    pair.adjoint_class = if g == 1 { AdjointClass::Drinfeld } else { AdjointClass::Other };
    Ok(pair)
}

/// `g` symplectic blocks permuted cyclically by Frobenius, sharing the similitude
/// coordinate. Coordinate `b·g + i` is `η_{i,b}^∨`, the last one is `c`.
pub fn hilbert_siegel(g: usize, d: usize, p: Int) -> Result<LMPair> {
    if g == 0 || d == 0 {
        return Err(Error::invalid("hilbert-siegel needs g, d >= 1"));
    }
    let n = g * d + 1;
    let rs = RootSystem::symplectic_blocks(g, d);
    let mut pair = split_pair(format!("hilbert-siegel:{g}:{d}"), PairKind::HilbertSiegel { g, d }, rs, &vec![1; n], p)?;
    let blocks: Vec<Vec<usize>> = (0..g).map(|i| (0..d).map(|b| b * g + i).collect()).collect();
    pair.lattice = GaloisLattice::with_frobenius(block_shift(n, &blocks))?;
    pair.ab_character = Some(unit(n, n - 1));
    let mut z = vec![1; n];
    z[n - 1] = 2;
    pair.central_vector = Some(z);
    pair.split_rank_bound = Some(g * d + 1);
    pair.adjoint_class = match (g, d) {
        (1, 1) => AdjointClass::Drinfeld,
        (_, 1) => AdjointClass::Other,
        _ => AdjointClass::NotAbsolutelySimple,
    };
    Ok(pair)
}

fn nonsplit_pair(name: String, kind: PairKind, lattice: GaloisLattice, orbit: Vec<QVec>, p: Int) -> Result<LMPair> {
    check_prime(p)?;
    Ok(LMPair {
        name,
        kind,
        lattice,
        p,
        e: 1,
        orbit: dedup_sorted(orbit),
        source: None,
        ab_character: None,
        central_vector: None,
        weyl_generators: Vec::new(),
        root_system: None,
        iwahori: true,
        split_rank_bound: None,
        adjoint_class: AdjointClass::Other,
        free_generators: None,
    })
}

/// Units of a central division algebra of index `d`: `N = Z^d` with Frobenius the
/// cyclic shift, orbit the unit vectors, trivial relative Weyl group.
pub fn division_algebra(d: usize, p: Int) -> Result<LMPair> {
    if d == 0 {
        return Err(Error::invalid("div needs d >= 1"));
    }
    let frob = block_shift(d, &[(0..d).collect()]);
    let orbit = (0..d).map(|i| qvec(&unit(d, i))).collect();
    let mut pair =
        nonsplit_pair(format!("div:{d}"), PairKind::DivisionAlgebra { d }, GaloisLattice::with_frobenius(frob)?, orbit, p)?;
    pair.ab_character = Some(vec![1; d]);
    pair.central_vector = Some(vec![1; d]);
    pair.split_rank_bound = Some(d);
    pair.adjoint_class = if d == 1 { AdjointClass::NotAbsolutelySimple } else { AdjointClass::Drinfeld };
    Ok(pair)
}

/// `D^* × G_m` from the fake unitary case: `N = Z^d × Z`, Frobenius shifting the
/// first `d` coordinates, orbit `(e_i, 1)`. The cone is not full-dimensional.
pub fn fake_unitary(d: usize, p: Int) -> Result<LMPair> {
    if d == 0 {
        return Err(Error::invalid("fake-unitary needs d >= 1"));
    }
    let n = d + 1;
    let frob = block_shift(n, &[(0..d).collect()]);
    let orbit = (0..d)
        .map(|i| {
            let mut v = unit(n, i);
            v[d] = 1;
            qvec(&v)
        })
        .collect();
    let mut pair =
        nonsplit_pair(format!("fake-unitary:{d}"), PairKind::FakeUnitary { d }, GaloisLattice::with_frobenius(frob)?, orbit, p)?;
    pair.ab_character = Some(unit(n, d));
    pair.split_rank_bound = Some(d);
    pair.adjoint_class = if d == 1 { AdjointClass::NotAbsolutelySimple } else { AdjointClass::Drinfeld };
    Ok(pair)
}

/// Weil restriction of `GL_n` along a totally ramified extension of degree `f`,
/// with `s_i = #{φ : r_φ ≥ i}`. The extension degree is taken to be `s_1` (every
/// embedding carries a nontrivial coweight) and the reflex field the whole
/// extension, so `e = s_1` and the orbit is `S_n·s / s_1`.
pub fn res_ramified_gl(weights: &[Int], p: Int) -> Result<LMPair> {
    let n = weights.len();
    if n == 0 || weights.windows(2).any(|w| w[0] < w[1]) || weights[n - 1] < 0 || weights[0] < 1 {
        return Err(Error::invalid("res-gl needs a nonincreasing list s_1 >= … >= s_n >= 0 with s_1 >= 1"));
    }
    let f = weights[0];
    let rs = RootSystem::gl(n);
    let orbit: Vec<QVec> =
        weyl_orbit(&rs, weights).iter().map(|v| v.iter().map(|&x| Rat::new(x, f)).collect()).collect();
    let ints: Vec<IVec> = orbit.iter().map(|v| linalg::primitive_from_rational(v)).collect();
    if linalg::rank(&ints, n) != n {
        return Err(Error::invalid("the orbit of s does not span: s must not be constant"));
    }
    let list = weights.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let mut pair = nonsplit_pair(
        format!("res-gl:{n}:{list}"),
        PairKind::ResRamifiedGl { weights: weights.to_vec() },
        GaloisLattice::trivial(n),
        orbit,
        p,
    )?;
    pair.e = f;
    pair.weyl_generators = (0..n.saturating_sub(1)).map(|i| qmat(&transposition(n, i, i + 1))).collect();
    pair.ab_character = Some(vec![1; n]);
    pair.central_vector = Some(vec![1; n]);
    pair.split_rank_bound = Some(n);
    pair.adjoint_class = if f > 1 {
        AdjointClass::NotAbsolutelySimple
    } else if weights.iter().filter(|&&x| x == 1).count() == 1 || weights.iter().filter(|&&x| x == 0).count() == 1 {
        AdjointClass::Drinfeld
    } else {
        AdjointClass::Other
    };
    Ok(pair)
}

fn pair_from_source(
    name: String,
    kind: PairKind,
    lattice: GaloisLattice,
    source: SourceData,
    e: Int,
    p: Int,
) -> Result<LMPair> {
    let orbit = source_images(&source)?;
    let mut pair = nonsplit_pair(name, kind, lattice, orbit, p)?;
    pair.e = e;
    pair.source = Some(source);
    Ok(pair)
}

/// `φ(λ^◇)` for every source cocharacter.
pub fn source_images(src: &SourceData) -> Result<Vec<QVec>> {
    if src.phi.iter().any(|r| r.len() != src.lattice.rank) {
        return Err(Error::invalid("projection matrix width differs from the source rank"));
    }
    let mut out = Vec::with_capacity(src.mu_orbit.len());
    for mu in &src.mu_orbit {
        if mu.len() != src.lattice.rank {
            return Err(Error::invalid("source cocharacter has the wrong length"));
        }
        let avg = average(&src.lattice, mu);
        out.push(apply_q(&qmat(&src.phi), &avg));
    }
    Ok(dedup_sorted(out))
}

/// The order-4 totally ramified restriction of `GL_n` with `μ` nontrivial at two
/// consecutive embeddings: source `Z^{4n}` with inertia cycling the four blocks.
pub fn res_gl_ramified_example(n: usize, p: Int) -> Result<LMPair> {
    if n == 0 {
        return Err(Error::invalid("res-gl-ram needs n >= 1"));
    }
    let big = 4 * n;
    let blocks: Vec<Vec<usize>> = (0..n).map(|i| (0..4).map(|b| b * n + i).collect()).collect();
    let inertia = block_shift(big, &blocks);
    let source_lattice = GaloisLattice::new(inertia, linalg::identity(big), None)?;
    let mu_orbit: Vec<IVec> = (0..n)
        .map(|i| {
            let mut v = vec![0; big];
            v[i] = 1;
            v[n + i] = 1;
            v
        })
        .collect();
    let phi: IMat = (0..n).map(|i| unit(big, i)).collect();
    let src = SourceData { lattice: source_lattice, phi, mu_orbit };
    let mut pair = pair_from_source(
        format!("res-gl-ram:{n}"),
        PairKind::ResGlRamifiedExample { n },
        GaloisLattice::trivial(n),
        src,
        4,
        p,
    )?;
    pair.weyl_generators = (0..n.saturating_sub(1)).map(|i| qmat(&transposition(n, i, i + 1))).collect();
    pair.ab_character = Some(vec![1; n]);
    pair.central_vector = Some(vec![1; n]);
    pair.split_rank_bound = Some(n);
    pair.adjoint_class = AdjointClass::NotAbsolutelySimple;
    Ok(pair)
}

/// `GL_n` at the parahoric fixing `pΛ_0 ⊂ Λ_1 ⊂ Λ_0` with `Λ_0/Λ_1` of length one:
/// `φ(a) = (a_1, a_2 + … + a_n)`, orbit images `(1, r−1)` and `(0, r)`.
pub fn gl_two_step_parahoric(n: usize, r: usize, p: Int) -> Result<LMPair> {
    if n < 2 || r == 0 || r >= n {
        return Err(Error::invalid(format!("two-step needs n >= 2 and 1 <= r < n, got n={n}, r={r}")));
    }
    let mu: IVec = (0..n).map(|i| Int::from(i < r)).collect();
    let mu_orbit = weyl_orbit(&RootSystem::gl(n), &mu);
    let phi: IMat = vec![unit(n, 0), (0..n).map(|i| Int::from(i > 0)).collect()];
    let src = SourceData { lattice: GaloisLattice::trivial(n), phi, mu_orbit };
    let mut pair = pair_from_source(
        format!("two-step:{n}:{r}"),
        PairKind::GlTwoStepParahoric { n, r },
        GaloisLattice::trivial(2),
        src,
        1,
        p,
    )?;
    pair.iwahori = false;
    pair.ab_character = Some(vec![1, 1]);
    pair.central_vector = Some(vec![1, n as Int - 1]);
    pair.split_rank_bound = Some(n);
    Ok(pair)
}

/// Ramified unitary similitudes `GU_n` with signature `{n−1, 1}`.
///
/// Source `Z^n × Z` with the Galois involution `(x, y) ↦ (y − x_n, …, y − x_1, y)`;
/// `N = Z^{m+1}` is `(x_1, …, x_{m+1})` for odd `n = 2m+1` and `(x_1, …, x_m, y)`
/// for even `n = 2m`. The relative Weyl group permutes the first `m` coordinates
/// and flips `x_i ↦ 2x_{m+1} − x_i` (odd) or `x_i ↦ x_{m+1} − x_i` (even).
pub fn gu_ramified(n: usize, r: usize, s: usize, p: Int) -> Result<LMPair> {
    if n < 3 || r + s != n {
        return Err(Error::invalid(format!("gu needs n >= 3 and r + s = n, got n={n}, r={r}, s={s}")));
    }
    if !(r == 1 || s == 1) {
        return Err(Error::invalid("gu supports the signatures (n-1,1) and (1,n-1) only"));
    }
    if p == 2 {
        return Err(Error::invalid("gu needs an odd prime"));
    }
    let m = n / 2;
    let odd = n % 2 == 1;
    let big = n + 1;
    let mut tau = linalg::zeros::<Int>(big, big);
    for (i, row) in tau.iter_mut().enumerate().take(n) {
        row[n - 1 - i] = -1;
        row[n] = 1;
    }
    tau[n][n] = 1;
    let source_lattice = GaloisLattice::new(tau, linalg::identity(big), Some(p))?;
    let middle = odd.then_some(m);
    let mu_orbit: Vec<IVec> = (0..n)
        .filter(|&j| Some(j) != middle)
        .map(|j| {
            let mut v = unit(big, j);
            v[n] = 1;
            v
        })
        .collect();
    let rank = m + 1;
    let phi: IMat = if odd {
        (0..rank).map(|i| unit(big, i)).collect()
    } else {
        (0..m).map(|i| unit(big, i)).chain(std::iter::once(unit(big, n))).collect()
    };
    let src = SourceData { lattice: source_lattice, phi, mu_orbit };
    let mut pair = pair_from_source(
        format!("gu:{n}:{r},{s}"),
        PairKind::GuRamified { n, r, s },
        GaloisLattice::trivial(rank),
        src,
        2,
        p,
    )?;
    let mut gens: Vec<QMat> = (0..m.saturating_sub(1)).map(|i| qmat(&transposition(rank, i, i + 1))).collect();
    let mut flip = linalg::identity::<Int>(rank);
    flip[0][0] = -1;
    flip[0][m] = if odd { 2 } else { 1 };
    gens.push(qmat(&flip));
    pair.weyl_generators = gens;
    // The similitude factor is y, which is 2·x_{m+1} in the odd coordinates.
    let mut ab = vec![0; rank];
    ab[m] = if odd { 2 } else { 1 };
    pair.ab_character = Some(ab);
    pair.split_rank_bound = Some(m + 1);
    pair.adjoint_class = if n == 3 { AdjointClass::RamifiedUnitaryThree } else { AdjointClass::Other };
    Ok(pair)
}

/// JSON rational: an integer or a string `"a/b"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RatInput {
    Int(Int),
    Str(String),
}

impl RatInput {
    fn value(&self) -> Result<Rat> {
        match self {
            RatInput::Int(x) => Ok(q(*x)),
            RatInput::Str(s) => {
                s.trim().parse::<Rat>().map_err(|_| Error::invalid(format!("cannot parse rational {s:?}")))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceInput {
    inertia: IMat,
    frobenius: Option<IMat>,
    phi: IMat,
    mu_orbit: Vec<IVec>,
}

/// User-supplied pair, mirroring [`LMPair`].
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairInput {
    name: Option<String>,
    rank: usize,
    frobenius: Option<IMat>,
    e: Option<Int>,
    orbit: Option<Vec<Vec<RatInput>>>,
    source: Option<SourceInput>,
    ab_character: Option<IVec>,
    central_vector: Option<IVec>,
    weyl_generators: Option<Vec<Vec<Vec<RatInput>>>>,
    iwahori: Option<bool>,
    free_generators: Option<Vec<IVec>>,
}

fn rat_rows(rows: &[Vec<RatInput>]) -> Result<Vec<QVec>> {
    rows.iter().map(|r| r.iter().map(RatInput::value).collect()).collect()
}

/// Parse a pair from JSON and validate integrality and stability of its orbit.
pub fn from_json(text: &str, p: Int) -> Result<LMPair> {
    check_prime(p)?;
    let inp: PairInput = serde_json::from_str(text).map_err(|e| Error::invalid(format!("pair JSON: {e}")))?;
    let n = inp.rank;
    let lattice = match inp.frobenius {
        Some(f) => GaloisLattice::with_frobenius(f)?,
        None => GaloisLattice::trivial(n),
    };
    if lattice.rank != n {
        return Err(Error::invalid("frobenius size differs from rank"));
    }
    let source = match inp.source {
        Some(s) => {
            let m = s.inertia.len();
            let lat = GaloisLattice::new(s.inertia, s.frobenius.unwrap_or_else(|| linalg::identity(m)), Some(p))?;
            if s.phi.len() != n {
                return Err(Error::invalid("projection must have one row per coordinate of N"));
            }
            Some(SourceData { lattice: lat, phi: s.phi, mu_orbit: s.mu_orbit })
        }
        None => None,
    };
    let orbit = match (&inp.orbit, &source) {
        (Some(o), Some(src)) => {
            let given = dedup_sorted(rat_rows(o)?);
            if given != source_images(src)? {
                return Err(Error::invalid("orbit disagrees with the images of the source cocharacters"));
            }
            given
        }
        (Some(o), None) => dedup_sorted(rat_rows(o)?),
        (None, Some(src)) => source_images(src)?,
        (None, None) => return Err(Error::invalid("pair needs an orbit or a source")),
    };
    let weyl_generators = match &inp.weyl_generators {
        Some(ws) => ws.iter().map(|w| rat_rows(w)).collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let pair = LMPair {
        name: inp.name.unwrap_or_else(|| "custom".to_string()),
        kind: PairKind::Custom,
        lattice,
        p,
        e: inp.e.unwrap_or(1),
        orbit,
        source,
        ab_character: inp.ab_character,
        central_vector: inp.central_vector,
        weyl_generators,
        root_system: None,
        iwahori: inp.iwahori.unwrap_or(false),
        split_rank_bound: None,
        adjoint_class: AdjointClass::Other,
        free_generators: inp.free_generators,
    };
    pair.validate()?;
    Ok(pair)
}

/// Example names accepted by [`catalog`], one per constructor.
pub const EXAMPLE_NAMES: &[&str] = &[
    "gl:4:2",
    "gsp:3",
    "gspin:3",
    "div:3",
    "fake-unitary:3",
    "res-gl:3:5,2,1",
    "res-gl-ram:2",
    "two-step:4:2",
    "gu:3:2,1",
    "hilbert-siegel:2:2",
];

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::invalid(format!("{what}: expected a nonnegative integer, got {s:?}")))
}

fn parse_list(s: &str) -> Result<IVec> {
    s.split(',')
        .map(|x| x.trim().parse::<Int>().map_err(|_| Error::invalid(format!("cannot parse integer {x:?}"))))
        .collect()
}

/// Build a pair from its name, e.g. `gl:4:2`, `gu:3:2,1` or `file:pair.json`.
pub fn catalog(name: &str, p: Int) -> Result<LMPair> {
    if let Some(path) = name.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {path}: {e}")))?;
        return from_json(&text, p);
    }
    let parts: Vec<&str> = name.split(':').collect();
    let arity = |k: usize| -> Result<()> {
        if parts.len() == k + 1 {
            Ok(())
        } else {
            Err(Error::invalid(format!("{name:?}: expected {k} parameter(s) after {:?}", parts[0])))
        }
    };
    match parts[0] {
        "gl" => {
            arity(2)?;
            gl(parse_usize(parts[1], "n")?, parse_usize(parts[2], "j")?, p)
        }
        "gsp" => {
            arity(1)?;
            gsp(parse_usize(parts[1], "g")?, p)
        }
        "gspin" => {
            arity(1)?;
            gspin(parse_usize(parts[1], "g")?, p)
        }
        "div" => {
            arity(1)?;
            division_algebra(parse_usize(parts[1], "d")?, p)
        }
        "fake-unitary" => {
            arity(1)?;
            fake_unitary(parse_usize(parts[1], "d")?, p)
        }
        "res-gl" => {
            arity(2)?;
            let n = parse_usize(parts[1], "n")?;
            let s = parse_list(parts[2])?;
            if s.len() != n {
                return Err(Error::invalid(format!("res-gl:{n} needs {n} weights, got {}", s.len())));
            }
            res_ramified_gl(&s, p)
        }
        "res-gl-ram" => {
            arity(1)?;
            res_gl_ramified_example(parse_usize(parts[1], "n")?, p)
        }
        "two-step" => {
            arity(2)?;
            gl_two_step_parahoric(parse_usize(parts[1], "n")?, parse_usize(parts[2], "r")?, p)
        }
        "gu" => {
            arity(2)?;
            let n = parse_usize(parts[1], "n")?;
            let rs = parse_list(parts[2])?;
            if rs.len() != 2 || rs.iter().any(|x| *x < 0) {
                return Err(Error::invalid("gu signature must be r,s"));
            }
            gu_ramified(n, rs[0] as usize, rs[1] as usize, p)
        }
        "hilbert-siegel" => {
            arity(2)?;
            hilbert_siegel(parse_usize(parts[1], "g")?, parse_usize(parts[2], "d")?, p)
        }
        other => Err(Error::invalid(format!("unknown pair family {other:?}"))),
    }
}

/// Verdict of the divisibility test for one orbit element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct R1Verdict {
    pub orbit_element: QVec,
    /// `e·φ(μ̄′)` in `N`.
    pub scaled: IVec,
    /// Content of `scaled`; the element is divisible when it exceeds one.
    pub content: Int,
    pub indivisible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct R1Report {
    pub verdicts: Vec<R1Verdict>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub simplicial: bool,
    pub free: bool,
    pub drinfeld_case: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionReport {
    /// `rank N − rank(σ^⊥ ∩ X^*)`.
    pub dim: usize,
    pub bound: Option<usize>,
    /// Within the bound, with equality required at Iwahori level.
    pub consistent: bool,
}

impl LMPair {
    pub fn rank(&self) -> usize {
        self.lattice.rank
    }

    /// Primitive generators of the orbit directions.
    pub fn orbit_rays(&self) -> Vec<IVec> {
        self.orbit.iter().map(|v| linalg::primitive_from_rational(v)).collect()
    }

    /// `e·v` for every orbit element; integral by validation.
    pub fn scaled_orbit(&self) -> Vec<IVec> {
        self.orbit.iter().map(|v| v.iter().map(|x| (x * q(self.e)).to_integer()).collect()).collect()
    }

    /// The orbit cone `σ_{𝒢,μ}`.
    pub fn cone(&self) -> RationalCone {
        RationalCone::positive_hull_q(&self.orbit, self.rank())
    }

    /// `S_{𝒢,μ} = σ^∨ ∩ X^*`.
    pub fn semigroup_max(&self) -> AffineSemigroup {
        AffineSemigroup::saturated(self.cone().dual())
    }

    /// The catalog's free sub-semigroup, checked to lie in `S_{𝒢,μ}` and be free.
    pub fn semigroup_free(&self) -> Result<AffineSemigroup> {
        let gens = self
            .free_generators
            .as_ref()
            .ok_or_else(|| Error::invalid(format!("{} has no distinguished free sub-semigroup", self.name)))?;
        let dual = self.cone().dual();
        if let Some(g) = gens.iter().find(|g| !dual.contains(g)) {
            return Err(Error::invalid(format!("free generator {g:?} is not in S_max")));
        }
        let s = AffineSemigroup::from_generators(gens, self.rank())?;
        if !semigroups::is_free(&s) {
            return Err(Error::invalid("the listed generators do not span a free semigroup"));
        }
        Ok(s)
    }

    /// Integrality of `e·orbit`, and stability under Frobenius and the Weyl generators.
    pub fn validate(&self) -> Result<()> {
        let n = self.rank();
        if self.e < 1 {
            return Err(Error::invalid("e must be positive"));
        }
        if self.orbit.is_empty() {
            return Err(Error::invalid("orbit is empty"));
        }
        if self.orbit.iter().any(|v| v.len() != n) {
            return Err(Error::invalid("orbit vector has the wrong length"));
        }
        let e = q(self.e);
        if let Some(v) = self.orbit.iter().find(|v| v.iter().any(|x| !(x * e).is_integer())) {
            return Err(Error::invalid(format!("e·{} is not in N", render_qvec(v))));
        }
        let set: BTreeSet<&QVec> = self.orbit.iter().collect();
        for v in &self.orbit {
            if !set.contains(&self.lattice.frobenius_q(v)) {
                return Err(Error::invalid(format!("orbit is not Frobenius-stable at {}", render_qvec(v))));
            }
        }
        for w in &self.weyl_generators {
            if w.len() != n || w.iter().any(|r| r.len() != n) {
                return Err(Error::invalid("Weyl generator has the wrong size"));
            }
            for v in &self.orbit {
                if !set.contains(&apply_q(w, v)) {
                    return Err(Error::invalid(format!("orbit is not Weyl-stable at {}", render_qvec(v))));
                }
            }
        }
        for (what, v) in [("ab_character", &self.ab_character), ("central_vector", &self.central_vector)] {
            if v.as_ref().is_some_and(|v| v.len() != n) {
                return Err(Error::invalid(format!("{what} has the wrong length")));
            }
        }
        Ok(())
    }

    /// `⟨μ^◇, χ_ab⟩ ≠ 0`.
    pub fn ab_nondegenerate(&self) -> Result<bool> {
        let ab = self
            .ab_character
            .as_ref()
            .ok_or_else(|| Error::invalid(format!("{} has no abelianization character", self.name)))?;
        let first = &self.orbit[0];
        let value = first.iter().zip(ab).fold(Rat::zero(), |acc, (x, a)| acc + x * q(*a));
        Ok(!value.is_zero())
    }

    pub fn strictly_convex(&self) -> bool {
        self.cone().predicates().strictly_convex
    }

    /// Dimension of `T_{𝒢,μ}` against `1 + Σ split ranks`.
    pub fn dim_t_mu(&self) -> DimensionReport {
        let n = self.rank();
        let rays = self.orbit_rays();
        let perp = linalg::kernel(&rays, n);
        let dim = n - perp.len();
        let consistent = match self.split_rank_bound {
            Some(b) if self.iwahori => dim == b,
            Some(b) => dim <= b,
            None => true,
        };
        DimensionReport { dim, bound: self.split_rank_bound, consistent }
    }

    /// Whether `e·φ(μ̄′)` is indivisible in `N` for every orbit element.
    pub fn r1_criterion(&self) -> R1Report {
        let verdicts: Vec<R1Verdict> = self
            .orbit
            .iter()
            .zip(self.scaled_orbit())
            .map(|(v, s)| {
                let content = linalg::content(&s);
                R1Verdict { orbit_element: v.clone(), scaled: s, content, indivisible: content == 1 }
            })
            .collect();
        let pass = verdicts.iter().all(|v| v.indivisible);
        R1Report { verdicts, pass }
    }

    /// Simplicial and free flags of `S_{𝒢,μ}`; the free flag is the Drinfeld flag.
    pub fn classify(&self) -> Result<Classification> {
        if !self.ab_nondegenerate()? {
            return Err(Error::invalid(format!("{} is not ab-nondegenerate", self.name)));
        }
        let cone = self.cone();
        if cone.dim() != self.rank() {
            return Err(Error::invalid(format!("{}: T_(G,mu) is a proper quotient of T_G", self.name)));
        }
        let simplicial = cone.predicates().simplicial;
        let free = semigroups::is_free(&AffineSemigroup::saturated(cone.dual()));
        Ok(Classification { simplicial, free, drinfeld_case: free })
    }
}

/// `(a, b/c, …)` rendering of a rational vector.
pub fn render_qvec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Whether a rational vector is zero.
pub fn is_zero_q(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Whether all entries are integers.
pub fn is_integral_q(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[(Int, Int)]) -> QVec {
        v.iter().map(|&(a, b)| Rat::new(a, b)).collect()
    }

    #[test]
    fn gsp3_orbit_is_the_cube_over_one() {
        let pair = gsp(3, 3).unwrap();
        assert_eq!(pair.orbit.len(), 8);
        for v in &pair.orbit {
            assert_eq!(v[3], q(1));
            assert!(v[..3].iter().all(|x| *x == q(0) || *x == q(1)));
        }
        assert_eq!(pair.dim_t_mu().dim, 4);
    }

    #[test]
    fn gspin_orbit() {
        let pair = gspin(2, 3).unwrap();
        let expected: BTreeSet<QVec> =
            [[1, 0, 0], [0, 1, 0], [-1, 0, 1], [0, -1, 1]].iter().map(|v| qvec(v)).collect();
        assert_eq!(pair.orbit.iter().cloned().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn permutohedral_orbit() {
        let pair = res_ramified_gl(&[5, 2, 1], 3).unwrap();
        assert_eq!(pair.orbit.len(), 6);
        assert_eq!(pair.e, 5);
        assert!(pair.scaled_orbit().contains(&vec![5, 2, 1]));
        assert!(pair.r1_criterion().pass);
    }

    #[test]
    fn two_step_images_and_divisibility() {
        let pair = gl_two_step_parahoric(4, 2, 3).unwrap();
        assert_eq!(pair.orbit, vec![qvec(&[0, 2]), qvec(&[1, 1])]);
        let r1 = pair.r1_criterion();
        assert!(!r1.pass);
        assert_eq!(r1.verdicts[0].content, 2);
        assert!(r1.verdicts[1].indivisible);
    }

    #[test]
    fn ramified_example_is_twice_nu() {
        let pair = res_gl_ramified_example(3, 5).unwrap();
        assert!(pair.orbit.contains(&qs(&[(1, 2), (0, 1), (0, 1)])));
        let r1 = pair.r1_criterion();
        assert!(!r1.pass);
        assert!(r1.verdicts.iter().all(|v| v.content == 2));
    }

    #[test]
    fn gu_images_match_explicit_coordinates() {
        let odd = gu_ramified(3, 2, 1, 3).unwrap();
        assert_eq!(odd.orbit, vec![qs(&[(0, 1), (1, 2)]), qs(&[(1, 1), (1, 2)])]);
        assert_eq!(odd.orbit_rays(), vec![vec![0, 1], vec![2, 1]]);
        let even = gu_ramified(4, 3, 1, 3).unwrap();
        let rays: BTreeSet<IVec> = even.orbit_rays().into_iter().collect();
        let expected: BTreeSet<IVec> =
            [vec![2, 1, 2], vec![1, 2, 2], vec![1, 0, 2], vec![0, 1, 2]].into_iter().collect();
        assert_eq!(rays, expected);
        assert!(odd.r1_criterion().pass && even.r1_criterion().pass);
        assert!(gu_ramified(3, 2, 1, 2).is_err());
    }

    #[test]
    fn names_round_trip() {
        for name in EXAMPLE_NAMES {
            let pair = catalog(name, 5).unwrap();
            assert_eq!(pair.name, *name);
            pair.validate().unwrap();
        }
        assert!(catalog("gl:4", 3).is_err());
        assert!(catalog("nope:1", 3).is_err());
        assert!(catalog("res-gl:2:5,2,1", 3).is_err());
    }

    #[test]
    fn json_pair_is_validated() {
        let ok = r#"{"rank": 2, "orbit": [[1, 0], [0, 1]], "ab_character": [1, 1]}"#;
        let pair = from_json(ok, 3).unwrap();
        assert!(pair.ab_nondegenerate().unwrap());
        let frac = r#"{"rank": 1, "orbit": [["1/2"]]}"#;
        assert!(from_json(frac, 3).is_err());
        let frac_ok = r#"{"rank": 1, "orbit": [["1/2"]], "e": 2}"#;
        assert!(from_json(frac_ok, 3).is_ok());
        let unstable = r#"{"rank": 2, "orbit": [[1, 0]], "frobenius": [[0, 1], [1, 0]]}"#;
        assert!(from_json(unstable, 3).is_err());
    }

    #[test]
    fn classification_examples() {
        let c = gl(4, 1, 3).unwrap().classify().unwrap();
        assert_eq!(c, Classification { simplicial: true, free: true, drinfeld_case: true });
        let c = gl(4, 3, 3).unwrap().classify().unwrap();
        assert_eq!(c, Classification { simplicial: true, free: false, drinfeld_case: false });
        let c = gsp(2, 3).unwrap().classify().unwrap();
        assert_eq!(c, Classification { simplicial: false, free: false, drinfeld_case: false });
        assert!(fake_unitary(3, 3).unwrap().classify().is_err());
    }
}
