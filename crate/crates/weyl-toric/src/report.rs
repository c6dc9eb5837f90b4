//! Deterministic JSON reports assembled from the other modules.
//!
//! Every section is computed independently; a failing section carries an
//! `error` object and the rest of the report is still produced. Object keys are
//! sorted, so identical input gives byte-identical output.

use std::collections::BTreeSet;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::affine_weyl::{self, AdmissiblePoset};
use crate::cones::{self, RationalCone};
use crate::error::{Error, Result};
use crate::lang_cover::{self, LangMap};
use crate::lattice_galois;
use crate::lm_pairs::{self, render_qvec, LMPair, PairKind};
use crate::presentation::{self, RingPresentation};
use crate::semigroups::{self, AffineSemigroup, Budget};
use crate::{IVec, Int};

pub const SCHEMA: &str = "weyl-toric/1";

/// Which semigroup `S ⊂ S_{𝒢,μ}` to analyze.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SemigroupChoice {
    #[default]
    Max,
    Free,
    /// JSON file `{"generators": [[...], ...]}`.
    File(String),
}

impl SemigroupChoice {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(SemigroupChoice::Max),
            "free" => Ok(SemigroupChoice::Free),
            _ => match s.strip_prefix("file:") {
                Some(path) => Ok(SemigroupChoice::File(path.to_string())),
                None => Err(Error::invalid(format!("semigroup must be max, free or file:<path>, got {s:?}"))),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            SemigroupChoice::Max => "max".into(),
            SemigroupChoice::Free => "free".into(),
            SemigroupChoice::File(p) => format!("file:{p}"),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    generators: Vec<IVec>,
}

pub fn select_semigroup(pair: &LMPair, choice: &SemigroupChoice) -> Result<AffineSemigroup> {
    match choice {
        SemigroupChoice::Max => Ok(pair.semigroup_max()),
        SemigroupChoice::Free => pair.semigroup_free(),
        SemigroupChoice::File(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {path}: {e}")))?;
            let file: GeneratorFile =
                serde_json::from_str(&text).map_err(|e| Error::invalid(format!("{path}: {e}")))?;
            let dual = pair.cone().dual();
            if let Some(g) = file.generators.iter().find(|g| g.len() != pair.rank() || !dual.contains(g)) {
                return Err(Error::invalid(format!("generator {g:?} is not in S_max")));
            }
            AffineSemigroup::from_generators(&file.generators, pair.rank())
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub semigroup: SemigroupChoice,
    pub budget: Budget,
    pub include_ideal: bool,
    pub include_adm: bool,
    pub adm_limit: usize,
    /// Characters for the divisor section; standard basis when empty.
    pub characters: Vec<IVec>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            semigroup: SemigroupChoice::Max,
            budget: Budget::default(),
            include_ideal: true,
            include_adm: true,
            adm_limit: affine_weyl::DEFAULT_ADM_LIMIT,
            characters: Vec::new(),
        }
    }
}

pub fn error_value(e: &Error) -> Value {
    let kind = match e {
        Error::InvalidInput(_) => "invalid_input",
        Error::BudgetExceeded { .. } => "budget_exceeded",
        Error::Invariant(_) => "invariant_violation",
    };
    json!({ "error": { "kind": kind, "message": e.to_string() } })
}

fn section(r: Result<Value>) -> Value {
    r.unwrap_or_else(|e| error_value(&e))
}

/// Names in the customary notation: `e_i` for unit vectors, `f_i` for
/// `ab − k·e_i` (`k = 2` for `GL_n`, `1` for `GSp_2g`), `x_{U}` for spin
/// generators, `x_i` otherwise.
pub fn generator_names(pair: &LMPair, gens: &[IVec]) -> Vec<String> {
    let fallback = || (1..=gens.len()).map(|i| format!("x_{i}")).collect();
    let n = pair.rank();
    let k = match pair.kind {
        PairKind::Gl { .. } => 2,
        _ => 1,
    };
    match &pair.kind {
        PairKind::Gl { .. } | PairKind::Gsp { .. } => {
            let Some(ab) = &pair.ab_character else { return fallback() };
            let unit = |i: usize| -> IVec { (0..n).map(|j| Int::from(i == j)).collect() };
            let names: Option<Vec<String>> = gens
                .iter()
                .map(|v| {
                    (0..n).find_map(|i| {
                        let e = unit(i);
                        let f: IVec = ab.iter().zip(&e).map(|(a, b)| a - k * b).collect();
                        if *v == e {
                            Some(format!("e_{}", i + 1))
                        } else if *v == f {
                            Some(format!("f_{}", i + 1))
                        } else {
                            None
                        }
                    })
                })
                .collect();
            names.unwrap_or_else(fallback)
        }
        PairKind::Gspin { g } => {
            let names: Option<Vec<String>> = gens
                .iter()
                .map(|v| {
                    let ok = v[*g] == 1 && v[..*g].iter().all(|x| *x == 0 || *x == 1);
                    ok.then(|| {
                        let u: Vec<String> = (0..*g).filter(|&i| v[i] == 1).map(|i| (i + 1).to_string()).collect();
                        format!("x_{{{}}}", u.join(","))
                    })
                })
                .collect();
            names.unwrap_or_else(fallback)
        }
        _ => fallback(),
    }
}

pub fn pair_section(pair: &LMPair) -> Value {
    json!({
        "name": pair.name,
        "p": pair.p,
        "e": pair.e,
        "rank": pair.rank(),
        "split": pair.lattice.is_split(),
        "iwahori": pair.iwahori,
        "orbit": pair.orbit.iter().map(|v| render_qvec(v)).collect::<Vec<_>>(),
        "adjoint_class": format!("{:?}", pair.adjoint_class),
    })
}

fn cone_value(c: &RationalCone) -> Value {
    let p = c.predicates();
    json!({
        "rays": c.rays,
        "lineality": c.lineality,
        "facets": c.facets,
        "equations": c.equations,
        "dim": c.dim(),
        "f_vector": c.f_vector(),
        "strictly_convex": p.strictly_convex,
        "full_dimensional": p.full_dimensional,
        "simplicial": p.simplicial,
    })
}

pub fn cone_section(pair: &LMPair) -> Result<Value> {
    let cone = pair.cone();
    let dual = cone.dual();
    let mut v = json!({ "orbit_cone": cone_value(&cone), "dual_cone": cone_value(&dual) });
    if let Some(z) = &pair.central_vector {
        let (values, free) = cones::free_action_values(&dual, z);
        v["central_action"] = json!({ "values": values, "free": free });
    }
    Ok(v)
}

pub fn hilbert_section(pair: &LMPair, s: &AffineSemigroup, choice: &SemigroupChoice) -> Result<Value> {
    let names = generator_names(pair, &s.hilbert_basis);
    let elements: Vec<Value> =
        names.iter().zip(&s.hilbert_basis).map(|(n, v)| json!({ "name": n, "vector": v })).collect();
    Ok(json!({
        "semigroup": choice.label(),
        "count": s.hilbert_basis.len(),
        "elements": elements,
        "units": s.units,
        "saturated": s.saturated,
        "free": semigroups::is_free(s),
    }))
}

pub fn ideal_section(pair: &LMPair, s: &AffineSemigroup, budget: Budget) -> Result<Value> {
    if !s.is_pointed() {
        return Err(Error::invalid("the toric ideal is computed for pointed semigroups only"));
    }
    let ideal = semigroups::toric_ideal(&s.hilbert_basis, budget)?;
    let names = generator_names(pair, &s.hilbert_basis);
    let mut gens: Vec<String> =
        ideal.minimal_generators.iter().map(|b| canonical_binomial(&b.plus, &b.minus, &names)).collect();
    gens.sort_by_key(|g| natural_key(g));
    Ok(json!({
        "variables": names,
        "minimal_count": ideal.minimal_count,
        "minimal_generators": gens,
        "groebner_size": ideal.groebner.len(),
        "work": ideal.work,
    }))
}

/// Sort key comparing digit runs numerically, so `x_2 < x_10`.
pub fn natural_key(s: &str) -> Vec<(String, u64)> {
    let mut out = Vec::new();
    let mut text = String::new();
    let mut digits = String::new();
    for c in s.chars() {
        if c.is_ascii_digit() {
            digits.push(c);
        } else {
            if !digits.is_empty() {
                out.push((std::mem::take(&mut text), digits.parse().unwrap_or(u64::MAX)));
                digits.clear();
            }
            text.push(c);
        }
    }
    out.push((text, digits.parse().unwrap_or(0)));
    out
}

fn canonical_monomial(exps: &[Int], names: &[String]) -> String {
    let mut factors: Vec<(&String, Int)> = names.iter().zip(exps).filter(|(_, &k)| k != 0).map(|(n, &k)| (n, k)).collect();
    factors.sort_by_key(|(n, _)| natural_key(n));
    if factors.is_empty() {
        return "1".into();
    }
    let parts: Vec<String> =
        factors.iter().map(|(n, k)| if *k == 1 { n.to_string() } else { format!("{n}^{k}") }).collect();
    parts.join("*")
}

/// `a - b` with factors in natural name order and the smaller monomial first.
pub fn canonical_binomial(plus: &[Int], minus: &[Int], names: &[String]) -> String {
    let mut sides = [canonical_monomial(plus, names), canonical_monomial(minus, names)];
    sides.sort_by_key(|m| natural_key(m));
    format!("{} - {}", sides[0], sides[1])
}

pub fn lang_section(pair: &LMPair, s: &AffineSemigroup) -> Result<Value> {
    let lm = LangMap::for_pair(pair)?;
    let r = lang_cover::lang_report(&lm, s)?;
    let rays: Vec<Value> = r
        .ramification
        .rays
        .iter()
        .map(|x| json!({ "ray": x.lambda_tilde, "image_ray": x.lambda, "degree": x.e }))
        .collect();
    Ok(json!({
        "group_order": r.group_order,
        "ramification": rays,
        "fiber_length": r.fiber_length,
        "flat": r.flat,
        "smooth": r.smooth,
        "flat_iff_smooth": r.flat_iff_smooth,
    }))
}

pub fn classification_section(pair: &LMPair) -> Result<Value> {
    let c = pair.classify()?;
    Ok(json!({ "simplicial": c.simplicial, "free": c.free, "drinfeld_case": c.drinfeld_case }))
}

pub fn r1_section(pair: &LMPair) -> Value {
    let r = pair.r1_criterion();
    let verdicts: Vec<Value> = r
        .verdicts
        .iter()
        .map(|v| {
            json!({
                "orbit_element": render_qvec(&v.orbit_element),
                "scaled": v.scaled,
                "content": v.content,
                "indivisible": v.indivisible,
            })
        })
        .collect();
    json!({ "pass": r.pass, "verdicts": verdicts })
}

pub fn dimension_section(pair: &LMPair) -> Value {
    let d = pair.dim_t_mu();
    json!({ "dim": d.dim, "bound": d.bound, "consistent": d.consistent })
}

fn standard_characters(n: usize) -> Vec<IVec> {
    (0..n).map(|i| (0..n).map(|j| Int::from(i == j)).collect()).collect()
}

pub fn divisor_section(pair: &LMPair, characters: &[IVec]) -> Result<Value> {
    let chars = if characters.is_empty() { standard_characters(pair.rank()) } else { characters.to_vec() };
    let mut out = Vec::new();
    for chi in &chars {
        let m = lattice_galois::divisor_multiplicities(pair, chi)?;
        let rows: Vec<Value> =
            m.iter().map(|(v, k)| json!({ "orbit_element": render_qvec(v), "multiplicity": k })).collect();
        out.push(json!({ "character": chi, "multiplicities": rows }));
    }
    Ok(Value::Array(out))
}

pub fn admissible(pair: &LMPair, limit: usize) -> Result<(affine_weyl::AffineWeyl, AdmissiblePoset)> {
    affine_weyl::admissible_set(pair, limit)
}

pub fn adm_section(pair: &LMPair, limit: usize, with_faces: bool) -> Result<Value> {
    let (aw, poset) = admissible(pair, limit)?;
    let elements: Vec<Value> = poset
        .elements
        .iter()
        .map(|x| {
            json!({
                "lambda": x.translation,
                "w_word": aw.finite_word(&x.finite),
                "length": x.length,
                "omega": x.omega,
            })
        })
        .collect();
    let covers: Vec<[usize; 2]> = poset.covers.iter().map(|&(a, b)| [a, b]).collect();
    let mut v = json!({
        "size": poset.len(),
        "elements": elements,
        "covers": covers,
        "maximal": poset.maximal,
        "minimum": poset.minimum,
    });
    if with_faces {
        let faces = affine_weyl::face_map_all(pair, &poset)?;
        // Every element lies below some translation, so the empty face is never hit.
        let nonempty = pair.cone().face_poset().into_iter().filter(|f| !f.rays.is_empty()).count();
        let hit: BTreeSet<&Vec<usize>> = faces.iter().map(|f| &f.rays).collect();
        v["faces"] = json!(faces
            .iter()
            .map(|f| json!({ "dim": f.dim, "rays": f.rays, "tight_facets": f.tight_facets }))
            .collect::<Vec<_>>());
        v["face_map_surjective"] = json!(hit.len() == nonempty);
        v["face_map_injective"] = json!(hit.len() == faces.len());
    }
    Ok(v)
}

fn chart_value(c: &RingPresentation) -> Value {
    let vars: Vec<Value> =
        c.variables.iter().map(|v| json!({ "name": v.name, "provenance": v.provenance })).collect();
    json!({
        "title": c.title,
        "base": c.base,
        "variables": vars,
        "relations": c.relation_strings(),
        "presentation": c.render(),
        "equivariant": c.equivariant(),
    })
}

/// The generic chart for `S`, plus the named specializations that apply to the pair.
pub fn charts(pair: &LMPair, s: &AffineSemigroup) -> Vec<Result<RingPresentation>> {
    let mut out = vec![presentation::chart_presentation(pair, s)];
    match pair.kind {
        PairKind::Gl { n, j: 1 } => out.push(presentation::drinfeld_chart(n)),
        PairKind::FakeUnitary { d } => out.push(presentation::fake_unitary_chart(d)),
        _ => {}
    }
    out
}

pub fn chart_section(pair: &LMPair, s: &AffineSemigroup) -> Value {
    Value::Array(charts(pair, s).into_iter().map(|c| section(c.map(|c| chart_value(&c)))).collect())
}

pub fn raynaud_value(c: &RingPresentation) -> Value {
    chart_value(c)
}

/// The full analysis of a catalog pair.
pub fn report(name: &str, p: Int, opts: &ReportOptions) -> Value {
    let pair = match lm_pairs::catalog(name, p) {
        Ok(pair) => pair,
        Err(e) => {
            let mut v = error_value(&e);
            v["schema"] = json!(SCHEMA);
            v["pair"] = json!(name);
            return v;
        }
    };
    let semigroup = select_semigroup(&pair, &opts.semigroup);
    let with_s = |f: &dyn Fn(&AffineSemigroup) -> Result<Value>| match &semigroup {
        Ok(s) => section(f(s)),
        Err(e) => error_value(e),
    };
    let mut v = json!({
        "schema": SCHEMA,
        "pair": pair_section(&pair),
        "cone": section(cone_section(&pair)),
        "hilbert_basis": with_s(&|s| hilbert_section(&pair, s, &opts.semigroup)),
        "lang": with_s(&|s| lang_section(&pair, s)),
        "classification": section(classification_section(&pair)),
        "r1": r1_section(&pair),
        "dimension": dimension_section(&pair),
        "divisor": section(divisor_section(&pair, &opts.characters)),
        "charts": with_s(&|s| Ok(chart_section(&pair, s))),
    });
    v["ideal"] = if opts.include_ideal {
        with_s(&|s| ideal_section(&pair, s, opts.budget))
    } else {
        Value::Null
    };
    v["adm"] = if opts.include_adm { section(adm_section(&pair, opts.adm_limit, true)) } else { Value::Null };
    v
}
