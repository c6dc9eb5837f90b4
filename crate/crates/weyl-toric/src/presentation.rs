//! Symbolic chart rings and Raynaud presentations.
//!
//! Relations are binomials `lhs - rhs` whose exponents are linear in the
//! residue characteristic `p`. They render to plain strings and parse back.
//! [`ActionWeights`] records the character by which the finite torus scales
//! each variable, so equivariance of every relation can be checked.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lang_cover::{normalization_semigroup, LangMap};
use crate::lattice_galois::dual_frobenius;
use crate::linalg;
use crate::lm_pairs::LMPair;
use crate::semigroups::AffineSemigroup;
use crate::{IMat, IVec, Int, Rat};

/// The exponent `coeff_p · p + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Exponent {
    pub coeff_p: Int,
    pub constant: Int,
}

impl Exponent {
    pub const ONE: Exponent = Exponent { coeff_p: 0, constant: 1 };
    pub const P: Exponent = Exponent { coeff_p: 1, constant: 0 };
    pub const P_MINUS_ONE: Exponent = Exponent { coeff_p: 1, constant: -1 };

    pub fn constant(c: Int) -> Self {
        Exponent { coeff_p: 0, constant: c }
    }

    pub fn at(&self, p: Int) -> Int {
        self.coeff_p * p + self.constant
    }

    fn is_atomic(&self) -> bool {
        (self.coeff_p == 0 && self.constant >= 0) || (self.coeff_p == 1 && self.constant == 0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Exponent { coeff_p: a, constant: b } = *self;
        let mut s = match a {
            0 => return write!(f, "{b}"),
            1 => "p".to_string(),
            -1 => "-p".to_string(),
            _ => format!("{a}p"),
        };
        if b > 0 {
            s.push_str(&format!("+{b}"));
        } else if b < 0 {
            s.push_str(&format!("-{}", -b));
        }
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub name: String,
    pub exponent: Exponent,
}

/// A monomial; `grouped` renders `(a*b)^k` when all factors share the exponent `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub factors: Vec<Factor>,
    pub grouped: bool,
}

impl Term {
    pub fn one() -> Self {
        Term { factors: Vec::new(), grouped: false }
    }

    pub fn atom(name: impl Into<String>) -> Self {
        Term::power(name, Exponent::ONE)
    }

    pub fn power(name: impl Into<String>, exponent: Exponent) -> Self {
        Term { factors: vec![Factor { name: name.into(), exponent }], grouped: false }
    }

    pub fn product(factors: Vec<Factor>) -> Self {
        Term { factors, grouped: false }
    }

    /// `(names[0] * … )^exponent`.
    pub fn grouped_power(names: &[String], exponent: Exponent) -> Self {
        let factors = names.iter().map(|n| Factor { name: n.clone(), exponent }).collect();
        Term { factors, grouped: names.len() > 1 }
    }

    fn render_exponent(e: Exponent) -> String {
        if e == Exponent::ONE {
            String::new()
        } else if e.is_atomic() {
            format!("^{e}")
        } else {
            format!("^({e})")
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        if self.grouped {
            let names: Vec<&str> = self.factors.iter().map(|x| x.name.as_str()).collect();
            return write!(f, "({}){}", names.join("*"), Term::render_exponent(self.factors[0].exponent));
        }
        let parts: Vec<String> =
            self.factors.iter().map(|x| format!("{}{}", x.name, Term::render_exponent(x.exponent))).collect();
        f.write_str(&parts.join("*"))
    }
}

/// The relation `lhs - rhs = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub lhs: Term,
    pub rhs: Term,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", self.lhs, self.rhs)
    }
}

impl Relation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Relation { lhs, rhs }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (l, r) = text
            .split_once(" - ")
            .ok_or_else(|| Error::invalid(format!("relation {text:?} has no ' - ' separator")))?;
        Ok(Relation { lhs: parse_term(l)?, rhs: parse_term(r)? })
    }
}

fn parse_term(text: &str) -> Result<Term> {
    let bad = || Error::invalid(format!("cannot parse monomial {text:?}"));
    if text == "1" {
        return Ok(Term::one());
    }
    if let Some(rest) = text.strip_prefix('(') {
        let close = matching_paren(rest).ok_or_else(bad)?;
        let inner = &rest[..close];
        let exponent = match rest[close + 1..].strip_prefix('^') {
            Some(e) => parse_exponent(e)?,
            None if rest.len() == close + 1 => Exponent::ONE,
            None => return Err(bad()),
        };
        let names: Vec<String> = split_top(inner, '*').into_iter().map(str::to_string).collect();
        if names.len() < 2 || names.iter().any(|n| !valid_name(n)) {
            return Err(bad());
        }
        return Ok(Term::grouped_power(&names, exponent));
    }
    let mut factors = Vec::new();
    for part in split_top(text, '*') {
        let (name, exponent) = match split_top(part, '^')[..] {
            [name] => (name, Exponent::ONE),
            [name, e] => (name, parse_exponent(e)?),
            _ => return Err(bad()),
        };
        if !valid_name(name) {
            return Err(bad());
        }
        factors.push(Factor { name: name.to_string(), exponent });
    }
    Ok(Term::product(factors))
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 1;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Split on `sep` outside parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Identifiers, optionally followed by one parenthesized argument: `u_1`, `delta(s_2)`.
fn valid_name(s: &str) -> bool {
    let ident = |t: &str| {
        let mut cs = t.chars();
        cs.next().is_some_and(|c| c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
    };
    match s.find('(') {
        None => ident(s),
        Some(i) => ident(&s[..i]) && s.ends_with(')') && ident(&s[i + 1..s.len() - 1]),
    }
}

fn parse_exponent(text: &str) -> Result<Exponent> {
    let bad = || Error::invalid(format!("cannot parse exponent {text:?}"));
    let body = match text.strip_prefix('(') {
        Some(rest) => rest.strip_suffix(')').ok_or_else(bad)?,
        None => text,
    };
    if body.is_empty() {
        return Err(bad());
    }
    let (p_part, rest) = match body.find('p') {
        None => return body.parse::<Int>().map(Exponent::constant).map_err(|_| bad()),
        Some(i) => (&body[..i], &body[i + 1..]),
    };
    let coeff_p = match p_part {
        "" => 1,
        "-" => -1,
        s => s.parse::<Int>().map_err(|_| bad())?,
    };
    let constant = match rest {
        "" => 0,
        s if s.starts_with('+') => s[1..].parse::<Int>().map_err(|_| bad())?,
        s if s.starts_with('-') => s.parse::<Int>().map_err(|_| bad())?,
        _ => return Err(bad()),
    };
    Ok(Exponent { coeff_p, constant })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Variable {
    pub name: String,
    /// Where the variable comes from: a semigroup element or a chart coordinate.
    pub provenance: String,
}

/// Characters of the finite torus `T(F_p)` attached to each variable.
///
/// Characters live in `X^*`; a weight is trivial on `T(F_p)` exactly when it lies
/// in `L^*(X^*)`, where `L^* = p·F − 1` with `F` the dual Frobenius. Symbolically
/// `p` therefore acts on characters as `F^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionWeights {
    pub characters: BTreeMap<String, IVec>,
    pub dual_frobenius: IMat,
}

impl ActionWeights {
    fn rank(&self) -> usize {
        self.dual_frobenius.len()
    }

    /// Weight of a term with `p` kept symbolic: `p` acts through `F^{-1}`.
    pub fn symbolic_weight(&self, term: &Term) -> IVec {
        let n = self.rank();
        let p_action = linalg::inverse_unimodular(&self.dual_frobenius);
        let mut total = vec![0; n];
        for f in &term.factors {
            let Some(chi) = self.characters.get(&f.name) else { continue };
            let moved = linalg::mat_vec(&p_action, chi);
            for i in 0..n {
                total[i] += f.exponent.coeff_p * moved[i] + f.exponent.constant * chi[i];
            }
        }
        total
    }

    /// Weight of a term at a concrete prime.
    pub fn weight_at(&self, term: &Term, p: Int) -> IVec {
        let n = self.rank();
        let mut total = vec![0; n];
        for f in &term.factors {
            if let Some(chi) = self.characters.get(&f.name) {
                let k = f.exponent.at(p);
                for i in 0..n {
                    total[i] += k * chi[i];
                }
            }
        }
        total
    }

    /// Whether `lhs` and `rhs` carry the same weight for every `p`.
    pub fn balanced_symbolic(&self, rel: &Relation) -> bool {
        self.symbolic_weight(&rel.lhs) == self.symbolic_weight(&rel.rhs)
    }

    /// Whether `lhs` and `rhs` carry the same character of `T(F_p)`.
    pub fn balanced_at(&self, rel: &Relation, p: Int) -> bool {
        let n = self.rank();
        let l = self.weight_at(&rel.lhs, p);
        let r = self.weight_at(&rel.rhs, p);
        let diff: Vec<Rat> = l.iter().zip(&r).map(|(a, b)| Rat::from_integer(a - b)).collect();
        let lang: IMat = (0..n)
            .map(|i| (0..n).map(|j| p * self.dual_frobenius[i][j] - Int::from(i == j)).collect())
            .collect();
        linalg::solve_rational(&lang, n, &diff).is_some_and(|x| x.iter().all(|c| c.is_integer()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingPresentation {
    pub title: String,
    pub base: String,
    pub variables: Vec<Variable>,
    /// Opaque constants of the base ring used in relations.
    pub constants: Vec<String>,
    pub relations: Vec<Relation>,
    pub weights: ActionWeights,
    /// Set when exponents were computed for one prime; `None` when linear in `p`.
    pub prime: Option<Int>,
}

impl RingPresentation {
    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.to_string()).collect()
    }

    pub fn render(&self) -> String {
        let vars: Vec<&str> = self.variables.iter().map(|v| v.name.as_str()).collect();
        format!("{}[{}]/({})", self.base, vars.join(", "), self.relation_strings().join(", "))
    }

    /// Every relation is balanced (symbolically, or at the recorded prime).
    pub fn equivariant(&self) -> bool {
        self.relations.iter().all(|r| match self.prime {
            None => self.weights.balanced_symbolic(r),
            Some(p) => self.weights.balanced_at(r, p),
        })
    }

    /// Every name in a relation is a declared variable or constant.
    pub fn well_scoped(&self) -> bool {
        let known = |n: &str| self.variables.iter().any(|v| v.name == n) || self.constants.iter().any(|c| c == n);
        self.relations.iter().all(|r| r.lhs.factors.iter().chain(&r.rhs.factors).all(|f| known(&f.name)))
    }
}

fn unit_vector(n: usize, i: usize) -> IVec {
    (0..n).map(|j| Int::from(i == j)).collect()
}

/// Dual Frobenius with `p · e_i ≡ e_{i+1}` on characters, indices mod `d`.
fn cyclic_dual_frobenius(d: usize) -> IMat {
    (0..d).map(|r| (0..d).map(|c| Int::from(r == (c + d - 1) % d)).collect()).collect()
}

fn subscripted(stem: &str, i: usize, plain: bool) -> String {
    if plain {
        stem.to_string()
    } else {
        format!("{stem}_{i}")
    }
}

/// Chart of the Drinfeld local model over `Z_p`: `Z_p[u_1..u_n]/(u_1^(p-1)*…*u_n^(p-1) - p)`.
pub fn drinfeld_chart(n: usize) -> Result<RingPresentation> {
    if n == 0 {
        return Err(Error::invalid("the Drinfeld chart needs n ≥ 1"));
    }
    let names: Vec<String> = (1..=n).map(|i| format!("u_{i}")).collect();
    let variables =
        names.iter().enumerate().map(|(i, v)| Variable { name: v.clone(), provenance: format!("x_{} ↦ {v}^(p-1)", i + 1) });
    let lhs = Term::product(names.iter().map(|v| Factor { name: v.clone(), exponent: Exponent::P_MINUS_ONE }).collect());
    let characters = names.iter().enumerate().map(|(i, v)| (v.clone(), unit_vector(n, i))).collect();
    Ok(RingPresentation {
        title: format!("Drinfeld chart, n = {n}"),
        base: "Z_p".into(),
        variables: variables.collect(),
        constants: vec!["p".into()],
        relations: vec![Relation::new(lhs, Term::atom("p"))],
        weights: ActionWeights { characters, dual_frobenius: linalg::identity(n) },
        prime: None,
    })
}

/// Chart of the fake-unitary local model of degree `d` over `O = W(F_q)`.
pub fn fake_unitary_chart(d: usize) -> Result<RingPresentation> {
    if d == 0 {
        return Err(Error::invalid("the fake-unitary chart needs d ≥ 1"));
    }
    let u: Vec<String> = (1..=d).map(|a| format!("u_{a}")).collect();
    let x: Vec<String> = (1..=d).map(|a| format!("x_{a}")).collect();
    let mut variables: Vec<Variable> =
        x.iter().map(|v| Variable { name: v.clone(), provenance: "local model coordinate".into() }).collect();
    variables.extend(u.iter().map(|v| Variable { name: v.clone(), provenance: "generator coordinate".into() }));
    let mut relations: Vec<Relation> = (0..d)
        .map(|a| {
            let next = (a + 1) % d;
            let rhs = Term::product(vec![
                Factor { name: x[next].clone(), exponent: Exponent::ONE },
                Factor { name: u[next].clone(), exponent: Exponent::ONE },
            ]);
            Relation::new(Term::power(u[a].clone(), Exponent::P), rhs)
        })
        .collect();
    relations.push(Relation::new(Term::grouped_power(&u, Exponent::P_MINUS_ONE), Term::atom("p")));
    let characters = u.iter().enumerate().map(|(a, v)| (v.clone(), unit_vector(d, a))).collect();
    Ok(RingPresentation {
        title: format!("fake-unitary chart, d = {d}"),
        base: "O = W(F_q)".into(),
        variables,
        constants: vec!["p".into()],
        relations,
        weights: ActionWeights { characters, dual_frobenius: cyclic_dual_frobenius(d) },
        prime: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaynaudMode {
    /// The group scheme itself.
    Group,
    /// Its closed subscheme of generators.
    Generators,
}

/// Raynaud `F_{p^d}`-vector space scheme over `R` with free line bundles.
/// For `d = 1` subscripts are dropped, giving the Oort–Tate shape.
pub fn raynaud_presentation(d: usize, mode: RaynaudMode) -> Result<RingPresentation> {
    if d == 0 {
        return Err(Error::invalid("Raynaud presentations need d ≥ 1"));
    }
    let plain = d == 1;
    let u: Vec<String> = (0..d).map(|i| subscripted("u", i, plain)).collect();
    let delta: Vec<String> = (0..d).map(|i| subscripted("delta", i, plain)).collect();
    let mut relations: Vec<Relation> = (0..d)
        .map(|i| {
            let rhs = Term::product(vec![
                Factor { name: delta[i].clone(), exponent: Exponent::ONE },
                Factor { name: u[(i + 1) % d].clone(), exponent: Exponent::ONE },
            ]);
            Relation::new(Term::power(u[i].clone(), Exponent::P), rhs)
        })
        .collect();
    if mode == RaynaudMode::Generators {
        let rhs = Term::product(delta.iter().map(|n| Factor { name: n.clone(), exponent: Exponent::ONE }).collect());
        relations.push(Relation::new(Term::grouped_power(&u, Exponent::P_MINUS_ONE), rhs));
    }
    let label = match mode {
        RaynaudMode::Group => "group",
        RaynaudMode::Generators => "generators",
    };
    Ok(RingPresentation {
        title: format!("Raynaud {label}, d = {d}"),
        base: "R".into(),
        variables: u.iter().map(|v| Variable { name: v.clone(), provenance: "basis of a line bundle".into() }).collect(),
        constants: delta,
        relations,
        weights: ActionWeights {
            characters: u.iter().enumerate().map(|(i, v)| (v.clone(), unit_vector(d, i))).collect(),
            dual_frobenius: cyclic_dual_frobenius(d),
        },
        prime: None,
    })
}

/// Generators of `s` as chart data: Hilbert basis elements, then unit basis vectors.
fn semigroup_generators(s: &AffineSemigroup) -> Vec<IVec> {
    s.hilbert_basis.iter().chain(&s.units).cloned().collect()
}

fn render_vec(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Write `x ∈ S̃` as a product of the Hilbert basis (nonnegative exponents) and
/// the unit basis (integer exponents).
fn decompose(s: &AffineSemigroup, x: &[Int]) -> Result<(Vec<Int>, Vec<Int>)> {
    let mut rest = x.to_vec();
    let mut hb_exp = vec![0; s.hilbert_basis.len()];
    loop {
        let neg: IVec = rest.iter().map(|v| -v).collect();
        if s.contains(&neg) {
            break;
        }
        let k = s
            .hilbert_basis
            .iter()
            .position(|h| s.contains(&rest.iter().zip(h).map(|(a, b)| a - b).collect::<IVec>()))
            .ok_or_else(|| Error::invariant("element of the normalization has no Hilbert basis step"))?;
        hb_exp[k] += 1;
        for (r, h) in rest.iter_mut().zip(&s.hilbert_basis[k]) {
            *r -= h;
        }
    }
    let n = s.ambient_rank;
    let unit_exp = if s.units.is_empty() {
        if rest.iter().any(|v| *v != 0) {
            return Err(Error::invariant("nonzero unit in a pointed semigroup"));
        }
        Vec::new()
    } else {
        let basis_t = linalg::transpose(&s.units, n);
        let rhs: Vec<Rat> = rest.iter().map(|&v| Rat::from_integer(v)).collect();
        let sol = linalg::solve_rational(&basis_t, s.units.len(), &rhs)
            .ok_or_else(|| Error::invariant("unit is outside the unit lattice"))?;
        if sol.iter().any(|c| !c.is_integer()) {
            return Err(Error::invariant("unit basis does not generate the unit group"));
        }
        sol.iter().map(|c| c.to_integer()).collect()
    };
    Ok((hb_exp, unit_exp))
}

/// The chart `R[S̃]/(L^*(s_i) - δ^*(s_i))` over the generators `s_i` of `S`.
///
/// For split tori `S̃ = S` and `L^*(s) = s^(p-1)`, so exponents stay symbolic.
/// Otherwise `S̃` is computed at the pair's prime and its Hilbert basis `t_k`
/// (and unit basis `w_j`) become the variables.
pub fn chart_presentation(pair: &LMPair, s: &AffineSemigroup) -> Result<RingPresentation> {
    let gens = semigroup_generators(s);
    let s_names: Vec<String> = (1..=gens.len()).map(|i| format!("s_{i}")).collect();
    let deltas: Vec<String> = s_names.iter().map(|n| format!("delta({n})")).collect();
    let n = pair.rank();
    if pair.lattice.is_split() {
        let relations = s_names
            .iter()
            .zip(&deltas)
            .map(|(v, d)| Relation::new(Term::power(v.clone(), Exponent::P_MINUS_ONE), Term::atom(d.clone())))
            .collect();
        return Ok(RingPresentation {
            title: format!("generic chart of {}", pair.name),
            base: "R".into(),
            variables: s_names
                .iter()
                .zip(&gens)
                .map(|(v, g)| Variable { name: v.clone(), provenance: format!("semigroup element {}", render_vec(g)) })
                .collect(),
            constants: deltas,
            relations,
            weights: ActionWeights {
                characters: s_names.iter().cloned().zip(gens.iter().cloned()).collect(),
                dual_frobenius: linalg::identity(n),
            },
            prime: None,
        });
    }
    let lm = LangMap::for_pair(pair)?;
    let tilde = normalization_semigroup(&lm, s)?;
    let t_names: Vec<String> = (1..=tilde.hilbert_basis.len()).map(|k| format!("t_{k}")).collect();
    let w_names: Vec<String> = (1..=tilde.units.len()).map(|k| format!("w_{k}")).collect();
    let mut variables: Vec<Variable> = Vec::new();
    let mut characters = BTreeMap::new();
    for (name, v) in t_names.iter().zip(&tilde.hilbert_basis).chain(w_names.iter().zip(&tilde.units)) {
        variables.push(Variable { name: name.clone(), provenance: format!("normalization element {}", render_vec(v)) });
        characters.insert(name.clone(), v.clone());
    }
    let mut relations = Vec::new();
    for (g, d) in gens.iter().zip(&deltas) {
        let image = linalg::mat_vec(&lm.l_star_dual, g);
        let (hb_exp, unit_exp) = decompose(&tilde, &image)?;
        let factors: Vec<Factor> = t_names
            .iter()
            .zip(&hb_exp)
            .chain(w_names.iter().zip(&unit_exp))
            .filter(|(_, &k)| k != 0)
            .map(|(name, &k)| Factor { name: name.clone(), exponent: Exponent::constant(k) })
            .collect();
        relations.push(Relation::new(Term::product(factors), Term::atom(d.clone())));
    }
    Ok(RingPresentation {
        title: format!("generic chart of {} at p = {}", pair.name, pair.p),
        base: "R".into(),
        variables,
        constants: deltas,
        relations,
        weights: ActionWeights { characters, dual_frobenius: dual_frobenius_of(pair) },
        prime: Some(pair.p),
    })
}

/// `σ^T` on characters; [`dual_frobenius`] returns the contragredient `σ^{-T}`.
fn dual_frobenius_of(pair: &LMPair) -> IMat {
    linalg::inverse_unimodular(&dual_frobenius(&pair.lattice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lm_pairs;

    #[test]
    fn drinfeld_chart_renders() {
        let c = drinfeld_chart(2).unwrap();
        assert_eq!(c.render(), "Z_p[u_1, u_2]/(u_1^(p-1)*u_2^(p-1) - p)");
        assert!(c.equivariant());
    }

    #[test]
    fn raynaud_small_cases() {
        let g = raynaud_presentation(1, RaynaudMode::Generators).unwrap();
        assert_eq!(g.relation_strings(), ["u^p - delta*u", "u^(p-1) - delta"]);
        let g = raynaud_presentation(2, RaynaudMode::Group).unwrap();
        assert_eq!(g.relation_strings(), ["u_0^p - delta_0*u_1", "u_1^p - delta_1*u_0"]);
        assert!(g.equivariant());
    }

    #[test]
    fn fake_unitary_relations() {
        let c = fake_unitary_chart(3).unwrap();
        assert_eq!(
            c.relation_strings(),
            ["u_1^p - x_2*u_2", "u_2^p - x_3*u_3", "u_3^p - x_1*u_1", "(u_1*u_2*u_3)^(p-1) - p"]
        );
        assert!(c.equivariant() && c.well_scoped());
    }

    #[test]
    fn relations_round_trip() {
        for c in [drinfeld_chart(3).unwrap(), fake_unitary_chart(2).unwrap()] {
            for r in &c.relations {
                assert_eq!(&Relation::parse(&r.to_string()).unwrap(), r);
            }
        }
        assert_eq!(parse_exponent("(2p+1)").unwrap(), Exponent { coeff_p: 2, constant: 1 });
        assert_eq!(parse_exponent("(-3)").unwrap(), Exponent::constant(-3));
    }

    #[test]
    fn generic_charts_are_equivariant() {
        let pair = lm_pairs::gsp(2, 3).unwrap();
        let c = chart_presentation(&pair, &pair.semigroup_max()).unwrap();
        assert_eq!(c.relations.len(), 4);
        assert!(c.equivariant() && c.well_scoped());
        let pair = lm_pairs::division_algebra(3, 2).unwrap();
        let c = chart_presentation(&pair, &pair.semigroup_max()).unwrap();
        assert!(c.equivariant() && c.well_scoped());
        assert!(c.relations.iter().all(|r| Relation::parse(&r.to_string()).as_ref() == Ok(r)));
    }
}
