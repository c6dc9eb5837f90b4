//! Toric ideals of Hilbert-basis matrices through a binomial-only Buchberger engine.
//!
//! A binomial `x^{u+} − x^{u−}` with coprime terms is stored as its lattice vector
//! `u`. Starting from a kernel lattice basis, the lattice ideal is saturated one
//! variable at a time: a Gröbner basis for reverse lexicographic order with that
//! variable last has no leading term divisible by it once common factors are
//! cancelled. Minimal generators are then read off fiber by fiber.

use crate::linalg;
use crate::{Error, IMat, IVec, Int, Result};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// Cap on work: S-pair reductions plus enumerated fiber points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Budget {
    Limited(u64),
    Unlimited,
}

impl Budget {
    pub const DEFAULT_LIMIT: u64 = 200_000;

    pub fn parse(s: &str) -> Result<Self> {
        if s == "full" {
            return Ok(Budget::Unlimited);
        }
        s.parse::<u64>()
            .map(Budget::Limited)
            .map_err(|_| Error::invalid(format!("budget must be a count or \"full\", got {s:?}")))
    }

    pub fn limit(&self) -> Option<u64> {
        match self {
            Budget::Limited(n) => Some(*n),
            Budget::Unlimited => None,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::Limited(Self::DEFAULT_LIMIT)
    }
}

struct Meter {
    used: u64,
    limit: Option<u64>,
}

impl Meter {
    fn tick(&mut self, what: &str) -> Result<()> {
        self.used += 1;
        match self.limit {
            Some(l) if self.used > l => Err(Error::budget(what, l)),
            _ => Ok(()),
        }
    }
}

/// `x^plus − x^minus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Binomial {
    pub plus: IVec,
    pub minus: IVec,
}

impl Binomial {
    pub fn from_lattice(u: &[Int]) -> Self {
        Binomial {
            plus: u.iter().map(|&x| x.max(0)).collect(),
            minus: u.iter().map(|&x| (-x).max(0)).collect(),
        }
    }

    pub fn lattice_vector(&self) -> IVec {
        self.plus.iter().zip(&self.minus).map(|(a, b)| a - b).collect()
    }

    /// The same binomial with terms in a canonical order (larger exponent vector first).
    pub fn unordered(&self) -> (IVec, IVec) {
        if self.plus >= self.minus {
            (self.plus.clone(), self.minus.clone())
        } else {
            (self.minus.clone(), self.plus.clone())
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        format!("{} - {}", render_monomial(&self.plus, names), render_monomial(&self.minus, names))
    }
}

pub fn render_monomial(exps: &[Int], names: &[String]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Weighted degree, then reverse lexicographic along `position` (last position
/// compared first; a smaller exponent there means a larger monomial).
#[derive(Debug, Clone)]
pub struct TermOrder {
    pub weights: IVec,
    /// Variables listed from first to last.
    pub sequence: Vec<usize>,
}

impl TermOrder {
    pub fn cmp(&self, a: &[Int], b: &[Int]) -> Ordering {
        let wa = linalg::dot(&self.weights, a);
        let wb = linalg::dot(&self.weights, b);
        wa.cmp(&wb).then_with(|| {
            for &v in self.sequence.iter().rev() {
                if a[v] != b[v] {
                    return b[v].cmp(&a[v]);
                }
            }
            Ordering::Equal
        })
    }

    /// Orient `u` so that its positive part is the leading term. `None` for zero.
    fn orient(&self, u: &mut IVec) -> bool {
        if u.iter().all(|x| *x == 0) {
            return false;
        }
        let plus: IVec = u.iter().map(|&x| x.max(0)).collect();
        let minus: IVec = u.iter().map(|&x| (-x).max(0)).collect();
        if self.cmp(&plus, &minus) == Ordering::Less {
            u.iter_mut().for_each(|x| *x = -*x);
        }
        true
    }
}

#[derive(Debug, Clone)]
struct Element {
    u: IVec,
    lead: IVec,
    mask: u128,
}

fn support_mask(v: &[Int]) -> u128 {
    v.iter().enumerate().filter(|(_, x)| **x > 0).fold(0, |m, (i, _)| m | (1u128 << i))
}

fn divides(a: &[Int], b: &[Int]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl Element {
    fn new(u: IVec) -> Self {
        let lead: IVec = u.iter().map(|&x| x.max(0)).collect();
        let mask = support_mask(&lead);
        Element { u, lead, mask }
    }
}

struct Engine<'a> {
    order: &'a TermOrder,
    elems: Vec<Element>,
}

impl Engine<'_> {
    fn find_divisor(&self, lead: &[Int], mask: u128) -> Option<usize> {
        self.elems.iter().position(|g| g.mask & !mask == 0 && divides(&g.lead, lead))
    }

    /// Reduce the leading term until irreducible; `None` when the binomial vanishes.
    fn reduce(&self, mut u: IVec) -> Option<IVec> {
        loop {
            if !self.order.orient(&mut u) {
                return None;
            }
            let lead: IVec = u.iter().map(|&x| x.max(0)).collect();
            match self.find_divisor(&lead, support_mask(&lead)) {
                Some(i) => {
                    for (x, y) in u.iter_mut().zip(&self.elems[i].u) {
                        *x -= y;
                    }
                }
                None => return Some(u),
            }
        }
    }
}

/// Gröbner basis (as lattice vectors, leading term positive) of the ideal generated
/// by the given binomials, with common factors cancelled throughout.
fn groebner(gens: &[IVec], order: &TermOrder, meter: &mut Meter) -> Result<Vec<IVec>> {
    let k = order.weights.len();
    let mut eng = Engine { order, elems: Vec::new() };
    let mut pending: BTreeSet<(Int, usize, usize)> = BTreeSet::new();
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();
    let lcm_deg = |a: &Element, b: &Element| -> Int {
        (0..k).map(|v| order.weights[v] * a.lead[v].max(b.lead[v])).sum()
    };
    let add = |eng: &mut Engine, u: IVec, pending: &mut BTreeSet<(Int, usize, usize)>, pset: &mut HashSet<(usize, usize)>| {
        let e = Element::new(u);
        let j = eng.elems.len();
        for (i, g) in eng.elems.iter().enumerate() {
            pending.insert((lcm_deg(g, &e), i, j));
            pset.insert((i, j));
        }
        eng.elems.push(e);
    };
    for g in gens {
        if let Some(r) = eng.reduce(g.clone()) {
            add(&mut eng, r, &mut pending, &mut pending_set);
        }
    }
    while let Some(&(d, i, j)) = pending.iter().next() {
        pending.remove(&(d, i, j));
        pending_set.remove(&(i, j));
        let (gi, gj) = (&eng.elems[i], &eng.elems[j]);
        if gi.mask & gj.mask == 0 {
            continue;
        }
        let lcm: IVec = (0..k).map(|v| gi.lead[v].max(gj.lead[v])).collect();
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let chain = eng.elems.iter().enumerate().any(|(m, g)| {
            m != i
                && m != j
                && divides(&g.lead, &lcm)
                && !pending_set.contains(&key(i, m))
                && !pending_set.contains(&key(j, m))
        });
        if chain {
            continue;
        }
        meter.tick("binomial S-pair reductions")?;
        let s: IVec = gj.u.iter().zip(&gi.u).map(|(a, b)| a - b).collect();
        if let Some(r) = eng.reduce(s) {
            add(&mut eng, r, &mut pending, &mut pending_set);
        }
    }
    // Minimalize: drop elements whose leading term is divisible by another's.
    let elems = eng.elems;
    let mut keep: Vec<IVec> = Vec::new();
    for (i, e) in elems.iter().enumerate() {
        let redundant = elems.iter().enumerate().any(|(j, f)| {
            j != i && divides(&f.lead, &e.lead) && (f.lead != e.lead || j < i)
        });
        if !redundant {
            keep.push(e.u.clone());
        }
    }
    Ok(keep)
}

/// Binomial generators of the toric ideal of a set of lattice vectors.
#[derive(Debug, Clone, Serialize)]
pub struct BinomialIdeal {
    /// Exponent vectors index into these (the columns of the matrix `A`).
    pub variables: Vec<IVec>,
    /// Positive grading used by the term order.
    pub weights: IVec,
    /// Gröbner basis for weighted reverse lexicographic order in the natural variable order.
    pub groebner: Vec<Binomial>,
    pub minimal_generators: Vec<Binomial>,
    pub minimal_count: usize,
    /// Work units spent.
    pub work: u64,
}

impl BinomialIdeal {
    pub fn order(&self) -> TermOrder {
        TermOrder { weights: self.weights.clone(), sequence: (0..self.variables.len()).collect() }
    }

    /// Normal form of a monomial with respect to the Gröbner basis.
    pub fn normal_form(&self, m: &[Int]) -> IVec {
        let mut m = m.to_vec();
        loop {
            let Some(g) = self.groebner.iter().find(|g| divides(&g.plus, &m)) else {
                return m;
            };
            for ((x, a), b) in m.iter_mut().zip(&g.plus).zip(&g.minus) {
                *x += b - a;
            }
        }
    }

    /// Ideal membership of `x^plus − x^minus`.
    pub fn contains(&self, plus: &[Int], minus: &[Int]) -> bool {
        self.normal_form(plus) == self.normal_form(minus)
    }

    /// `A·exponents`.
    pub fn multidegree(&self, exps: &[Int]) -> IVec {
        let n = self.variables.first().map_or(0, |v| v.len());
        let mut out = vec![0; n];
        for (e, v) in exps.iter().zip(&self.variables) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += e * x;
            }
        }
        out
    }
}

/// Toric ideal of the vectors `hb` (which must span a pointed cone).
pub fn toric_ideal(hb: &[IVec], budget: Budget) -> Result<BinomialIdeal> {
    let k = hb.len();
    if k > 128 {
        return Err(Error::invalid("more than 128 variables are not supported"));
    }
    let n = hb.first().map_or(0, |v| v.len());
    let mut meter = Meter { used: 0, limit: budget.limit() };
    let weights = positive_grading(hb, n)?;
    let a: IMat = (0..n).map(|r| hb.iter().map(|v| v[r]).collect()).collect();
    let mut gens: Vec<IVec> = if n == 0 { linalg::identity(k) } else { linalg::kernel(&a, k) };
    let mut order = TermOrder { weights: weights.clone(), sequence: (0..k).collect() };
    if !gens.is_empty() {
        for j in 0..k {
            let mut seq: Vec<usize> = (0..k).filter(|&v| v != j).collect();
            seq.push(j);
            order.sequence = seq;
            gens = groebner(&gens, &order, &mut meter)?;
        }
        // Natural order last, so the stored basis is for the documented order.
        order.sequence = (0..k).collect();
        gens = groebner(&gens, &order, &mut meter)?;
    }
    let mut groebner_basis: Vec<Binomial> = gens.iter().map(|u| Binomial::from_lattice(u)).collect();
    groebner_basis.sort();
    let mut ideal = BinomialIdeal {
        variables: hb.to_vec(),
        weights,
        groebner: groebner_basis,
        minimal_generators: Vec::new(),
        minimal_count: 0,
        work: 0,
    };
    let minimal = minimal_generators(&ideal, &mut meter)?;
    ideal.minimal_count = minimal.len();
    ideal.minimal_generators = minimal;
    ideal.work = meter.used;
    Ok(ideal)
}

/// Positive integer weights `w_i = ⟨g, a_i⟩` from an interior point `g` of the dual cone.
fn positive_grading(hb: &[IVec], n: usize) -> Result<IVec> {
    if hb.is_empty() {
        return Ok(Vec::new());
    }
    let cone = crate::cones::RationalCone::positive_hull(hb, n);
    if !cone.lineality.is_empty() || hb.iter().any(|v| v.iter().all(|x| *x == 0)) {
        return Err(Error::invalid("toric ideal needs vectors spanning a pointed cone"));
    }
    let g: IVec = (0..n).map(|i| cone.facets.iter().map(|f| f[i]).sum()).collect();
    let w: IVec = hb.iter().map(|v| linalg::dot(&g, v)).collect();
    if w.iter().any(|x| *x <= 0) {
        return Err(Error::invariant("grading is not positive on the generators"));
    }
    Ok(w)
}

/// All `c ∈ N^k` with `A·c = target`.
pub fn fiber(variables: &[IVec], weights: &[Int], target: &[Int], target_weight: Int, meter_cap: &mut dyn FnMut() -> Result<()>) -> Result<Vec<IVec>> {
    let k = variables.len();
    let mut out = Vec::new();
    let mut cur = vec![0; k];
    let mut rest = target.to_vec();
    fn go(
        i: usize,
        wleft: Int,
        variables: &[IVec],
        weights: &[Int],
        cur: &mut IVec,
        rest: &mut IVec,
        out: &mut Vec<IVec>,
        tick: &mut dyn FnMut() -> Result<()>,
    ) -> Result<()> {
        if i == variables.len() {
            if wleft == 0 && rest.iter().all(|x| *x == 0) {
                tick()?;
                out.push(cur.clone());
            }
            return Ok(());
        }
        let maxc = wleft / weights[i];
        for c in (0..=maxc).rev() {
            cur[i] = c;
            for (r, x) in rest.iter_mut().zip(&variables[i]) {
                *r -= c * x;
            }
            go(i + 1, wleft - c * weights[i], variables, weights, cur, rest, out, tick)?;
            for (r, x) in rest.iter_mut().zip(&variables[i]) {
                *r += c * x;
            }
        }
        cur[i] = 0;
        Ok(())
    }
    go(0, target_weight, variables, weights, &mut cur, &mut rest, &mut out, meter_cap)?;
    out.sort();
    Ok(out)
}

/// Components of the fiber graph (edges join monomials with a common variable).
pub fn fiber_components(points: &[IVec]) -> Vec<Vec<usize>> {
    let m = points.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let k = points.first().map_or(0, |p| p.len());
    for v in 0..k {
        let mut first: Option<usize> = None;
        for (i, p) in points.iter().enumerate() {
            if p[v] > 0 {
                match first {
                    None => first = Some(i),
                    Some(f) => {
                        let (a, b) = (find(&mut parent, f), find(&mut parent, i));
                        if a != b {
                            parent[a] = b;
                        }
                    }
                }
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..m {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = comps.into_values().collect();
    out.sort();
    out
}

fn minimal_generators(ideal: &BinomialIdeal, meter: &mut Meter) -> Result<Vec<Binomial>> {
    let degrees: BTreeSet<IVec> = ideal.groebner.iter().map(|g| ideal.multidegree(&g.plus)).collect();
    let order = ideal.order();
    let mut out = Vec::new();
    for b in degrees {
        let wb: Int = {
            // Weight of a fiber point equals ⟨g, b⟩; read it from any GB element of this degree.
            let g = ideal.groebner.iter().find(|g| ideal.multidegree(&g.plus) == b).unwrap();
            linalg::dot(&ideal.weights, &g.plus)
        };
        let mut tick = || meter.tick("fiber enumeration");
        let pts = fiber(&ideal.variables, &ideal.weights, &b, wb, &mut tick)?;
        let comps = fiber_components(&pts);
        // Each component is represented by its lexicographically smallest point;
        // components are already sorted by that representative.
        let reps: Vec<&IVec> = comps.iter().map(|c| &pts[c[0]]).collect();
        for r in reps.iter().skip(1) {
            let (mut p, mut q) = (reps[0].clone(), (*r).clone());
            if order.cmp(&p, &q) == Ordering::Less {
                std::mem::swap(&mut p, &mut q);
            }
            out.push(Binomial { plus: p, minus: q });
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twisted_cubic() {
        // (3,0),(2,1),(1,2),(0,3): three quadrics.
        let hb = vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]];
        let ideal = toric_ideal(&hb, Budget::default()).unwrap();
        assert_eq!(ideal.minimal_count, 3);
        for g in ideal.minimal_generators.iter().chain(&ideal.groebner) {
            assert_eq!(ideal.multidegree(&g.plus), ideal.multidegree(&g.minus));
        }
    }

    #[test]
    fn free_semigroup_has_zero_ideal() {
        let hb = vec![vec![1, 0], vec![0, 1]];
        let ideal = toric_ideal(&hb, Budget::default()).unwrap();
        assert_eq!(ideal.minimal_count, 0);
    }

    #[test]
    fn saturation_needed() {
        // Kernel basis (1,-2,1) and (0,...) style: the rational normal curve of degree 4
        // needs saturation beyond the lattice basis.
        let hb: Vec<IVec> = (0..5).map(|i| vec![4 - i, i]).collect();
        let ideal = toric_ideal(&hb, Budget::default()).unwrap();
        assert_eq!(ideal.minimal_count, 6);
        assert!(ideal.contains(&[0, 1, 0, 1, 0], &[0, 0, 2, 0, 0]));
        assert!(ideal.contains(&[1, 0, 0, 0, 1], &[0, 0, 2, 0, 0]));
        assert!(!ideal.contains(&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0]));
    }

    #[test]
    fn budget_is_enforced() {
        let hb: Vec<IVec> = (0..6).map(|i| vec![5 - i, i]).collect();
        assert!(matches!(toric_ideal(&hb, Budget::Limited(1)), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn render() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let b = Binomial { plus: vec![2, 0, 0], minus: vec![0, 1, 1] };
        assert_eq!(b.render(&names), "a^2 - b*c");
    }
}
