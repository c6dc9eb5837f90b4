//! Extended affine Weyl groups `X ⋊ W_0` of split root data, with the
//! Iwahori–Matsumoto length, the Bruhat order, admissible sets and the
//! combinatorial face map into the orbit cone.
//!
//! An element `t_λ w` is stored as the affine map `v ↦ w v + λ` on `X ⊗ R`.
//! The base alcove is `{v : 0 < ⟨α, v⟩ < 1 for every positive root α}`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::cones::Face;
use crate::error::{Error, Result};
use crate::linalg;
use crate::lm_pairs::LMPair;
use crate::root_data::{positive_roots, RootPair, RootSystem};
use crate::{IMat, IVec, Int};

/// Default cap on the number of elements enumerated in a Bruhat interval.
pub const DEFAULT_ADM_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AffWeylElement {
    pub length: usize,
    /// Translation part `λ`.
    pub translation: IVec,
    /// Finite part `w`, acting on column vectors.
    pub finite: IMat,
    /// Image of `λ` in `X / Q^∨`, which labels the coset of the affine Weyl group.
    pub omega: IVec,
}

/// Root datum data shared by all length and order computations.
#[derive(Debug, Clone)]
pub struct AffineWeyl {
    pub root_system: RootSystem,
    pub positive: Vec<RootPair>,
    positive_set: BTreeSet<IVec>,
    /// Change of basis of `X` that diagonalizes the coroot lattice.
    omega_basis: IMat,
    omega_moduli: Vec<Int>,
}

impl AffineWeyl {
    pub fn new(root_system: RootSystem) -> Self {
        let positive = positive_roots(&root_system);
        let positive_set = positive.iter().map(|r| r.root.clone()).collect();
        let n = root_system.ambient_rank;
        let smith = linalg::smith(&root_system.simple_coroots, n);
        let mut omega_moduli = smith.diag.clone();
        omega_moduli.resize(n, 0);
        AffineWeyl { root_system, positive, positive_set, omega_basis: smith.v, omega_moduli }
    }

    /// Only pairs split over the maximal unramified extension at Iwahori level qualify.
    pub fn for_pair(pair: &LMPair) -> Result<Self> {
        match (&pair.root_system, pair.iwahori, pair.e) {
            (Some(rs), true, 1) => Ok(AffineWeyl::new(rs.clone())),
            _ => Err(Error::invalid(format!(
                "{}: admissible sets need a pair that splits over the maximal unramified extension, at Iwahori level",
                pair.name
            ))),
        }
    }

    pub fn rank(&self) -> usize {
        self.root_system.ambient_rank
    }

    fn omega_label(&self, lambda: &[Int]) -> IVec {
        let n = self.rank();
        (0..n)
            .filter_map(|j| {
                let y: Int = (0..n).map(|i| lambda[i] * self.omega_basis[i][j]).sum();
                match self.omega_moduli[j] {
                    0 => Some(y),
                    1 => None,
                    m => Some(y.rem_euclid(m)),
                }
            })
            .collect()
    }

    /// Sign of a root given as a character: `Some(true)` positive, `Some(false)` negative.
    fn root_sign(&self, chi: &[Int]) -> Option<bool> {
        if self.positive_set.contains(chi) {
            return Some(true);
        }
        let neg: IVec = chi.iter().map(|x| -x).collect();
        self.positive_set.contains(&neg).then_some(false)
    }

    /// `w^{-1} α` as a character, for the finite part `w` and a root `α`.
    fn pull_root(finite: &IMat, alpha: &[Int]) -> IVec {
        let n = alpha.len();
        (0..n).map(|j| (0..n).map(|i| alpha[i] * finite[i][j]).sum()).collect()
    }

    /// Integer `m` with `x(𝔞)` inside the strip `m < α < m + 1`.
    fn strip(&self, translation: &[Int], finite: &IMat, alpha: &[Int]) -> Int {
        let pulled = Self::pull_root(finite, alpha);
        let shift = match self.root_sign(&pulled) {
            Some(true) => 0,
            Some(false) => -1,
            None => panic!("finite part does not permute the roots"),
        };
        linalg::dot(alpha, translation) + shift
    }

    /// Iwahori–Matsumoto length: the number of affine root hyperplanes separating
    /// the base alcove from its image.
    pub fn length_of(&self, translation: &[Int], finite: &IMat) -> usize {
        self.positive.iter().map(|r| self.strip(translation, finite, &r.root).unsigned_abs() as usize).sum()
    }

    pub fn element(&self, translation: IVec, finite: IMat) -> Result<AffWeylElement> {
        let n = self.rank();
        if translation.len() != n || finite.len() != n || finite.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("element dimensions do not match the root datum"));
        }
        if self.positive.iter().any(|r| self.root_sign(&Self::pull_root(&finite, &r.root)).is_none()) {
            return Err(Error::invalid("finite part is not in the Weyl group"));
        }
        Ok(self.make(translation, finite))
    }

    fn make(&self, translation: IVec, finite: IMat) -> AffWeylElement {
        let length = self.length_of(&translation, &finite);
        let omega = self.omega_label(&translation);
        AffWeylElement { length, translation, finite, omega }
    }

    pub fn identity(&self) -> AffWeylElement {
        let n = self.rank();
        self.make(vec![0; n], linalg::identity(n))
    }

    pub fn translation(&self, lambda: &[Int]) -> Result<AffWeylElement> {
        self.element(lambda.to_vec(), linalg::identity(self.rank()))
    }

    /// The composite `x ∘ y`.
    pub fn compose(&self, x: &AffWeylElement, y: &AffWeylElement) -> AffWeylElement {
        let n = self.rank();
        let finite = linalg::mat_mul(&x.finite, &y.finite, n);
        let moved = linalg::mat_vec(&x.finite, &y.translation);
        let translation = moved.iter().zip(&x.translation).map(|(a, b)| a + b).collect();
        self.make(translation, finite)
    }

    /// Reflection in the affine hyperplane `⟨α, v⟩ = k`.
    pub fn affine_reflection(&self, root: &RootPair, k: Int) -> AffWeylElement {
        let n = self.rank();
        let finite: IMat = (0..n)
            .map(|r| (0..n).map(|c| Int::from(r == c) - root.coroot[r] * root.root[c]).collect())
            .collect();
        let translation = root.coroot.iter().map(|c| k * c).collect();
        self.make(translation, finite)
    }

    /// Affine reflections whose hyperplanes separate the base alcove from `x(𝔞)`.
    pub fn separating_reflections(&self, x: &AffWeylElement) -> Vec<AffWeylElement> {
        let mut out = Vec::new();
        for r in &self.positive {
            let m = self.strip(&x.translation, &x.finite, &r.root);
            let ks = if m > 0 { 1..=m } else { (m + 1)..=0 };
            for k in ks {
                out.push(self.affine_reflection(r, k));
            }
        }
        out
    }

    /// Elements covered by `x` in the Bruhat order.
    pub fn lower_covers(&self, x: &AffWeylElement) -> Vec<AffWeylElement> {
        let mut out: Vec<AffWeylElement> = self
            .separating_reflections(x)
            .iter()
            .map(|r| self.compose(r, x))
            .filter(|z| z.length + 1 == x.length)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Whether `x ≤ y`, by walking down cover chains from `y`.
    pub fn bruhat_leq(&self, x: &AffWeylElement, y: &AffWeylElement) -> bool {
        self.bruhat_leq_capped(x, y, DEFAULT_ADM_LIMIT).unwrap_or(false)
    }

    pub fn bruhat_leq_capped(&self, x: &AffWeylElement, y: &AffWeylElement, limit: usize) -> Result<bool> {
        if x.omega != y.omega || x.length > y.length {
            return Ok(false);
        }
        let mut level: BTreeSet<AffWeylElement> = BTreeSet::from([y.clone()]);
        let mut visited = 1usize;
        while level.first().is_some_and(|z| z.length > x.length) {
            let mut next = BTreeSet::new();
            for z in &level {
                next.extend(self.lower_covers(z));
            }
            visited += next.len();
            if visited > limit {
                return Err(Error::budget("Bruhat interval", limit as u64));
            }
            level = next;
        }
        Ok(level.contains(x))
    }

    /// Reduced word of the finite part in the simple reflections (1-based indices).
    pub fn finite_word(&self, finite: &IMat) -> Vec<usize> {
        let n = self.rank();
        let inversions = |w: &IMat| {
            self.positive.iter().filter(|r| self.root_sign(&Self::pull_root(w, &r.root)) == Some(false)).count()
        };
        let mut w = finite.clone();
        let mut word = VecDeque::new();
        let mut len = inversions(&w);
        while len > 0 {
            let (i, shorter) = (0..self.root_system.rank())
                .find_map(|i| {
                    let ws = linalg::mat_mul(&w, &self.root_system.reflection(i), n);
                    (inversions(&ws) < len).then_some((i, ws))
                })
                .expect("a nontrivial Weyl element has a right descent");
            word.push_front(i + 1);
            w = shorter;
            len -= 1;
        }
        word.into()
    }
}

/// `Adm(μ)` with its cover relations.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissiblePoset {
    /// Sorted by length, then translation, then finite part.
    pub elements: Vec<AffWeylElement>,
    /// Pairs `(lower, upper)` of indices with `lower ⋖ upper`.
    pub covers: Vec<(usize, usize)>,
    /// Indices of the translations `t_λ`, `λ` in the orbit.
    pub maximal: Vec<usize>,
    /// Index of the unique length-zero element.
    pub minimum: usize,
    /// Orbit coweights in the order used by [`AdmissiblePoset::lambda_set`].
    pub orbit: Vec<IVec>,
}

impl AdmissiblePoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, x: &AffWeylElement) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    /// Indices of all elements above `i`, including `i`.
    pub fn up_set(&self, i: usize) -> BTreeSet<usize> {
        let mut above: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(lo, hi) in &self.covers {
            above.entry(lo).or_default().push(hi);
        }
        let mut seen = BTreeSet::from([i]);
        let mut queue = VecDeque::from([i]);
        while let Some(j) = queue.pop_front() {
            for &k in above.get(&j).into_iter().flatten() {
                if seen.insert(k) {
                    queue.push_back(k);
                }
            }
        }
        seen
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up_set(i).contains(&j)
    }

    /// `Λ(w)`: orbit coweights `λ` with `w ≤ t_λ`, as indices into `orbit`.
    pub fn lambda_set(&self, i: usize) -> Vec<usize> {
        let up = self.up_set(i);
        self.maximal.iter().enumerate().filter(|(_, m)| up.contains(m)).map(|(k, _)| k).collect()
    }

    /// Graphviz rendering with the poset drawn bottom-up.
    pub fn to_dot(&self, aw: &AffineWeyl) -> String {
        let mut out = String::from("digraph adm {\n  rankdir=BT;\n");
        for (i, x) in self.elements.iter().enumerate() {
            let word: Vec<String> = aw.finite_word(&x.finite).iter().map(|k| format!("s{k}")).collect();
            out.push_str(&format!(
                "  n{i} [label=\"t{:?} {}\"];\n",
                x.translation,
                if word.is_empty() { "1".to_string() } else { word.join("") }
            ));
        }
        for (lo, hi) in &self.covers {
            out.push_str(&format!("  n{lo} -> n{hi};\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn integral_orbit(pair: &LMPair) -> Result<Vec<IVec>> {
    pair.orbit
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| x.is_integer().then(|| x.to_integer()))
                .collect::<Option<IVec>>()
                .ok_or_else(|| Error::invalid("orbit coweights must be integral for admissible sets"))
        })
        .collect()
}

/// `Adm(μ)`: the downward closure of the orbit translations under Bruhat covers.
pub fn admissible_set(pair: &LMPair, limit: usize) -> Result<(AffineWeyl, AdmissiblePoset)> {
    let aw = AffineWeyl::for_pair(pair)?;
    let orbit = integral_orbit(pair)?;
    let tops: Vec<AffWeylElement> = orbit.iter().map(|l| aw.translation(l)).collect::<Result<_>>()?;
    let mut found: BTreeSet<AffWeylElement> = tops.iter().cloned().collect();
    let mut edges: BTreeSet<(AffWeylElement, AffWeylElement)> = BTreeSet::new();
    let mut queue: VecDeque<AffWeylElement> = tops.iter().cloned().collect();
    while let Some(y) = queue.pop_front() {
        for z in aw.lower_covers(&y) {
            edges.insert((z.clone(), y.clone()));
            if found.insert(z.clone()) {
                if found.len() > limit {
                    return Err(Error::budget("admissible set", limit as u64));
                }
                queue.push_back(z);
            }
        }
    }
    let elements: Vec<AffWeylElement> = found.into_iter().collect();
    let idx = |x: &AffWeylElement| elements.binary_search(x).expect("enumerated element");
    let covers: Vec<(usize, usize)> = edges.iter().map(|(lo, hi)| (idx(lo), idx(hi))).collect();
    let maximal: Vec<usize> = tops.iter().map(idx).collect();
    let minima: Vec<usize> = (0..elements.len()).filter(|&i| elements[i].length == 0).collect();
    let [minimum] = minima[..] else {
        return Err(Error::invariant(format!("admissible set has {} length-zero elements", minima.len())));
    };
    let poset = AdmissiblePoset { elements, covers, maximal, minimum, orbit };
    Ok((aw, poset))
}

/// `|Δ|^f(w)`: the smallest face of the orbit cone containing the rays of `Λ(w)`.
pub fn face_map(pair: &LMPair, poset: &AdmissiblePoset, i: usize) -> Result<Face> {
    if i >= poset.len() {
        return Err(Error::invalid("element is not in the admissible set"));
    }
    let pts: Vec<IVec> = poset.lambda_set(i).into_iter().map(|k| poset.orbit[k].clone()).collect();
    pair.cone().smallest_face_containing(&pts)
}

/// Face of every element, indexed like `poset.elements`.
pub fn face_map_all(pair: &LMPair, poset: &AdmissiblePoset) -> Result<Vec<Face>> {
    (0..poset.len()).map(|i| face_map(pair, poset, i)).collect()
}
