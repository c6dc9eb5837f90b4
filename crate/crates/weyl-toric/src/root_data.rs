//! Root data realized in explicit lattices, Weyl groups as matrix groups, orbits and
//! parabolic quotient sizes.
//!
//! Convention: `cartan[i][j] = ⟨α_i^∨, α_j⟩`. Coweights (where cocharacters live)
//! are acted on by `s_i(v) = v − ⟨v, α_i⟩ α_i^∨`.

use crate::cones::RationalCone;
use crate::linalg;
use crate::{Error, IMat, IVec, Int, QVec, Rat, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl CartanType {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "A" => CartanType::A,
            "B" => CartanType::B,
            "C" => CartanType::C,
            "D" => CartanType::D,
            "E" => CartanType::E,
            "F" => CartanType::F,
            "G" => CartanType::G,
            other => return Err(Error::invalid(format!("unknown Cartan type {other:?}"))),
        })
    }

    /// Whether a type/rank combination names an irreducible root system.
    pub fn valid_rank(self, n: usize) -> bool {
        match self {
            CartanType::A => n >= 1,
            CartanType::B | CartanType::C => n >= 2,
            CartanType::D => n >= 4,
            CartanType::E => (6..=8).contains(&n),
            CartanType::F => n == 4,
            CartanType::G => n == 2,
        }
    }
}

/// Cartan matrix of an irreducible type, Bourbaki node numbering.
pub fn cartan_matrix(t: CartanType, n: usize) -> Result<IMat> {
    if !t.valid_rank(n) {
        return Err(Error::invalid(format!("no root system of type {t:?}{n}")));
    }
    let mut a: IMat = linalg::identity::<Int>(n).into_iter().map(|r| r.into_iter().map(|x| 2 * x).collect()).collect();
    let mut link = |i: usize, j: usize, aij: Int, aji: Int| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match t {
        CartanType::A => (0..n - 1).for_each(|i| link(i, i + 1, -1, -1)),
        CartanType::B => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -1, -2);
        }
        CartanType::C => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -2, -1);
        }
        CartanType::D => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 3, n - 1, -1, -1);
        }
        CartanType::E => {
            // 1-3-4-5-..., with 2 attached to 4.
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            (2..n - 1).for_each(|i| link(i, i + 1, -1, -1));
        }
        CartanType::F => {
            link(0, 1, -1, -1);
            link(1, 2, -2, -1);
            link(2, 3, -1, -1);
        }
        CartanType::G => link(0, 1, -1, -3),
    }
    Ok(a)
}

/// A root datum realized in `Z^ambient_rank` (roots and coroots in dual copies).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSystem {
    pub label: String,
    pub ambient_rank: usize,
    pub simple_roots: IMat,
    pub simple_coroots: IMat,
    pub cartan: IMat,
}

/// JSON form: `{"type": "C", "rank": 2, "realization": "gsp"}`.
#[derive(Debug, Clone, Deserialize)]
pub struct RootSystemInput {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
    pub realization: Option<String>,
}

impl RootSystem {
    pub fn new(label: impl Into<String>, simple_roots: IMat, simple_coroots: IMat) -> Result<Self> {
        let r = simple_roots.len();
        if simple_coroots.len() != r {
            return Err(Error::invalid("root and coroot counts differ"));
        }
        let ambient_rank = simple_roots.first().map_or(0, |v| v.len());
        if simple_roots.iter().chain(&simple_coroots).any(|v| v.len() != ambient_rank) {
            return Err(Error::invalid("root vectors have inconsistent lengths"));
        }
        let cartan: IMat = simple_coroots
            .iter()
            .map(|c| simple_roots.iter().map(|a| linalg::dot(c, a)).collect())
            .collect();
        if (0..r).any(|i| cartan[i][i] != 2) {
            return Err(Error::invalid("⟨α^∨, α⟩ must equal 2"));
        }
        Ok(RootSystem { label: label.into(), ambient_rank, simple_roots, simple_coroots, cartan })
    }

    /// Realization in the fundamental-coweight basis: `α_i = e_i`, `α_i^∨` = row `i` of the Cartan matrix.
    pub fn abstract_type(t: CartanType, n: usize) -> Result<Self> {
        let a = cartan_matrix(t, n)?;
        let rs = RootSystem::new(format!("{t:?}{n}"), linalg::identity(n), a.clone())?;
        debug_assert_eq!(rs.cartan, a);
        Ok(rs)
    }

    /// `GL_n` on `Z^n`.
    pub fn gl(n: usize) -> Self {
        let diff = |i: usize| -> IVec { (0..n).map(|j| Int::from(j == i) - Int::from(j == i + 1)).collect() };
        let roots: IMat = (0..n.saturating_sub(1)).map(diff).collect();
        RootSystem::new(format!("A{}", n - 1), roots.clone(), roots).expect("valid GL root datum")
    }

    /// `GSp_2g` on `Z^{g+1}` with coordinates `(r_1, …, r_g, c)`.
    pub fn gsp(g: usize) -> Self {
        Self::symplectic_blocks(g, 1)
    }

    /// `d` copies of the `GSp_2g` root datum sharing the similitude coordinate.
    pub fn symplectic_blocks(g: usize, d: usize) -> Self {
        let n = g * d + 1;
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        for b in 0..d {
            let off = b * g;
            for i in 0..g - 1 {
                let mut v = vec![0; n];
                v[off + i] = 1;
                v[off + i + 1] = -1;
                roots.push(v.clone());
                coroots.push(v);
            }
            let mut a = vec![0; n];
            a[off + g - 1] = 2;
            a[n - 1] = -1;
            let mut c = vec![0; n];
            c[off + g - 1] = 1;
            roots.push(a);
            coroots.push(c);
        }
        let label = if d == 1 { format!("C{g}") } else { format!("C{g}^{d}") };
        RootSystem::new(label, roots, coroots).expect("valid symplectic root datum")
    }

    /// `GSpin_{2g+1}` on `Z^{g+1}`.
    pub fn gspin(g: usize) -> Self {
        let n = g + 1;
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        for i in 0..g - 1 {
            let mut v = vec![0; n];
            v[i] = 1;
            v[i + 1] = -1;
            roots.push(v.clone());
            coroots.push(v);
        }
        let mut a = vec![0; n];
        a[g - 1] = 1;
        let mut c = vec![0; n];
        c[g - 1] = 2;
        c[n - 1] = -1;
        roots.push(a);
        coroots.push(c);
        RootSystem::new(format!("B{g}"), roots, coroots).expect("valid spin root datum")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inp: RootSystemInput =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("root system JSON: {e}")))?;
        let t = CartanType::parse(&inp.kind)?;
        match (t, inp.realization.as_deref()) {
            (_, None | Some("abstract")) => Self::abstract_type(t, inp.rank),
            (CartanType::A, Some("gl")) => Ok(Self::gl(inp.rank + 1)),
            (CartanType::C, Some("gsp")) => Ok(Self::gsp(inp.rank)),
            (CartanType::B, Some("gspin")) => Ok(Self::gspin(inp.rank)),
            (_, Some(r)) => Err(Error::invalid(format!("realization {r:?} does not fit type {t:?}"))),
        }
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// Matrix of `s_i` acting on coweights (column vectors).
    pub fn reflection(&self, i: usize) -> IMat {
        let n = self.ambient_rank;
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| Int::from(r == c) - self.simple_coroots[i][r] * self.simple_roots[i][c])
                    .collect()
            })
            .collect()
    }

    pub fn reflect(&self, i: usize, v: &[Int]) -> IVec {
        let k = linalg::dot(v, &self.simple_roots[i]);
        v.iter().zip(&self.simple_coroots[i]).map(|(x, c)| x - k * c).collect()
    }

    pub fn reflect_q(&self, i: usize, v: &[Rat]) -> QVec {
        let k = v
            .iter()
            .zip(&self.simple_roots[i])
            .fold(Rat::from_integer(0), |acc, (x, a)| acc + x * Rat::from_integer(*a));
        v.iter().zip(&self.simple_coroots[i]).map(|(x, c)| x - k * Rat::from_integer(*c)).collect()
    }

    /// Dual action on characters: `χ ↦ χ − ⟨α_i^∨, χ⟩ α_i`.
    pub fn reflect_dual(&self, i: usize, chi: &[Int]) -> IVec {
        let k = linalg::dot(chi, &self.simple_coroots[i]);
        chi.iter().zip(&self.simple_roots[i]).map(|(x, a)| x - k * a).collect()
    }

    /// All elements of the subgroup generated by `s_j, j ∈ subset`, as matrices.
    pub fn group_elements(&self, subset: &[usize]) -> Vec<IMat> {
        let n = self.ambient_rank;
        let gens: Vec<IMat> = subset.iter().map(|&i| self.reflection(i)).collect();
        let id = linalg::identity::<Int>(n);
        let mut seen: HashSet<IMat> = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            for g in &gens {
                let next = linalg::mat_mul(g, &m, n);
                if seen.insert(next.clone()) {
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        out
    }

    pub fn group_order(&self, subset: &[usize]) -> usize {
        self.group_elements(subset).len()
    }
}

/// The W-orbit of `λ`, lexicographically sorted.
pub fn weyl_orbit(rs: &RootSystem, lambda: &[Int]) -> Vec<IVec> {
    let mut seen: BTreeSet<IVec> = BTreeSet::from([lambda.to_vec()]);
    let mut queue = VecDeque::from([lambda.to_vec()]);
    while let Some(v) = queue.pop_front() {
        for i in 0..rs.rank() {
            let w = rs.reflect(i, &v);
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().collect()
}

/// Orbit of a rational vector under the Weyl group.
pub fn weyl_orbit_q(rs: &RootSystem, lambda: &[Rat]) -> Vec<QVec> {
    let mut seen: BTreeSet<QVec> = BTreeSet::from([lambda.to_vec()]);
    let mut queue = VecDeque::from([lambda.to_vec()]);
    while let Some(v) = queue.pop_front() {
        for i in 0..rs.rank() {
            let w = rs.reflect_q(i, &v);
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().collect()
}

/// `|W / W_J|` and whether it equals `rank + 1`.
///
/// Computed as the orbit size of a vector whose stabilizer is exactly `W_J`: in the
/// fundamental-coweight realization, the indicator of the nodes outside `J`.
pub fn parabolic_quotient_size(rs: &RootSystem, j: &[usize]) -> Result<(usize, bool)> {
    let r = rs.rank();
    if j.iter().any(|&i| i >= r) {
        return Err(Error::invalid("parabolic subset names a node outside the diagram"));
    }
    let abs = RootSystem::new(rs.label.clone(), linalg::identity(r), rs.cartan.clone())?;
    let v: IVec = (0..r).map(|i| Int::from(!j.contains(&i))).collect();
    let size = weyl_orbit(&abs, &v).len();
    Ok((size, size == r + 1))
}

/// Whether the origin lies in the relative interior of the convex hull of the points.
/// The hull of `{0}` is not counted: its relative interior is a point but the orbit
/// spans nothing, and callers treat that as degenerate.
pub fn hull_contains_origin_interior(orbit: &[QVec]) -> bool {
    let Some(first) = orbit.first() else { return false };
    let n = first.len();
    let ints: Vec<IVec> = orbit.iter().map(|v| linalg::primitive_from_rational(v)).collect();
    let span_rank = linalg::rank(&ints, n);
    if span_rank == 0 {
        return false;
    }
    let cone = RationalCone::positive_hull(&ints, n);
    cone.lineality.len() == span_rank
}

/// A root with its coroot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootPair {
    pub root: IVec,
    pub coroot: IVec,
    /// Coordinates of the root in the basis of simple roots.
    pub simple_coeffs: IVec,
}

/// All positive roots with their coroots, sorted by height and then coordinates.
pub fn positive_roots(rs: &RootSystem) -> Vec<RootPair> {
    let r = rs.rank();
    let mut seen: BTreeSet<(IVec, IVec)> = BTreeSet::new();
    let mut queue: VecDeque<(IVec, IVec)> = VecDeque::new();
    for i in 0..r {
        let pair = (rs.simple_roots[i].clone(), rs.simple_coroots[i].clone());
        if seen.insert(pair.clone()) {
            queue.push_back(pair);
        }
    }
    while let Some((a, c)) = queue.pop_front() {
        for i in 0..r {
            let a2 = rs.reflect_dual(i, &a);
            let c2 = rs.reflect(i, &c);
            if seen.insert((a2.clone(), c2.clone())) {
                queue.push_back((a2, c2));
            }
        }
    }
    let basis_t = linalg::transpose(&rs.simple_roots, rs.ambient_rank);
    let mut out: Vec<RootPair> = seen
        .into_iter()
        .filter_map(|(root, coroot)| {
            let rhs: QVec = root.iter().map(|&x| Rat::from_integer(x)).collect();
            let sol = linalg::solve_rational(&basis_t, r, &rhs).expect("roots lie in the root span");
            let coeffs: IVec = sol.iter().map(|x| x.to_integer()).collect();
            (coeffs.iter().all(|c| *c >= 0)).then_some(RootPair { root, coroot, simple_coeffs: coeffs })
        })
        .collect();
    out.sort_by(|x, y| {
        let hx: Int = x.simple_coeffs.iter().sum();
        let hy: Int = y.simple_coeffs.iter().sum();
        hx.cmp(&hy).then_with(|| x.root.cmp(&y.root))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_orbit_of_first_coweight() {
        let rs = RootSystem::gl(4);
        let o = weyl_orbit(&rs, &[1, 0, 0, 0]);
        assert_eq!(o.len(), 4);
        assert_eq!(weyl_orbit(&rs, &[0, 0, 0, 0]).len(), 1);
    }

    #[test]
    fn gsp_orbit_has_two_to_the_g() {
        for g in 1..=4 {
            let rs = RootSystem::gsp(g);
            let mut mu = vec![0; g + 1];
            mu[g] = 1;
            let o = weyl_orbit(&rs, &mu);
            assert_eq!(o.len(), 1 << g);
            assert!(o.iter().all(|v| v[g] == 1 && v[..g].iter().all(|x| *x == 0 || *x == 1)));
        }
    }

    #[test]
    fn realized_cartan_matches_abstract() {
        assert_eq!(RootSystem::gsp(3).cartan, cartan_matrix(CartanType::C, 3).unwrap());
        assert_eq!(RootSystem::gspin(3).cartan, cartan_matrix(CartanType::B, 3).unwrap());
        assert_eq!(RootSystem::gl(4).cartan, cartan_matrix(CartanType::A, 3).unwrap());
    }

    #[test]
    fn weyl_group_orders() {
        let order = |t, n| RootSystem::abstract_type(t, n).unwrap().group_order(&(0..n).collect::<Vec<_>>());
        assert_eq!(order(CartanType::A, 3), 24);
        assert_eq!(order(CartanType::B, 3), 48);
        assert_eq!(order(CartanType::D, 4), 192);
        assert_eq!(order(CartanType::G, 2), 12);
        assert_eq!(order(CartanType::F, 4), 1152);
    }

    #[test]
    fn quotient_sizes() {
        let a = RootSystem::abstract_type(CartanType::A, 4).unwrap();
        assert_eq!(parabolic_quotient_size(&a, &[0, 1, 2]).unwrap(), (5, true));
        let b = RootSystem::abstract_type(CartanType::B, 3).unwrap();
        assert_eq!(parabolic_quotient_size(&b, &[0, 1]).unwrap(), (8, false));
        let g = RootSystem::abstract_type(CartanType::G, 2).unwrap();
        assert_eq!(parabolic_quotient_size(&g, &[0]).unwrap(), (6, false));
        assert_eq!(parabolic_quotient_size(&g, &[1]).unwrap(), (6, false));
        assert_eq!(parabolic_quotient_size(&g, &[]).unwrap().0, 12);
        assert_eq!(parabolic_quotient_size(&g, &[0, 1]).unwrap().0, 1);
    }

    #[test]
    fn positive_roots_of_c2() {
        let roots = positive_roots(&RootSystem::gsp(2));
        let got: Vec<IVec> = roots.iter().map(|r| r.root.clone()).collect();
        assert_eq!(got.len(), 4);
        for want in [vec![1, -1, 0], vec![0, 2, -1], vec![1, 1, -1], vec![2, 0, -1]] {
            assert!(got.contains(&want), "{want:?} missing");
        }
    }

    #[test]
    fn hull_interior_cases() {
        let q = |v: &[Int]| v.iter().map(|&x| Rat::from_integer(x)).collect::<QVec>();
        assert!(!hull_contains_origin_interior(&[q(&[0, 0])]));
        assert!(!hull_contains_origin_interior(&[q(&[1, 0]), q(&[0, 1])]));
        let a2 = RootSystem::abstract_type(CartanType::A, 2).unwrap();
        let orbit: Vec<QVec> = weyl_orbit(&a2, &[1, 0]).iter().map(|v| q(v)).collect();
        assert!(hull_contains_origin_interior(&orbit));
    }

    #[test]
    fn json_root_system() {
        let rs = RootSystem::from_json(r#"{"type":"C","rank":2,"realization":"gsp"}"#).unwrap();
        assert_eq!(rs, RootSystem::gsp(2));
        assert!(RootSystem::from_json(r#"{"type":"E","rank":5}"#).is_err());
    }
}
