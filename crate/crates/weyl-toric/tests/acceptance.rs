//! Acceptance criteria. Each criterion prints one `PASS`/`FAIL` line with the
//! measured values; the test fails if any criterion fails.
//!
//! The 1181-generator permutohedral ideal needs minutes and runs only with
//! `WEYL_TORIC_FULL=1` (or via the ignored test at the bottom).

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use weyl_toric::affine_weyl::{self, face_map};
use weyl_toric::cones::RationalCone;
use weyl_toric::lang_cover::{self, LangMap};
use weyl_toric::lattice_galois::{self, GaloisLattice};
use weyl_toric::lm_pairs::{self, LMPair};
use weyl_toric::presentation::{self, RaynaudMode, RingPresentation};
use weyl_toric::root_data::{self, CartanType, RootSystem};
use weyl_toric::semigroups::{self, toric_ideal, Budget};
use weyl_toric::{linalg, IVec, Int, Rat};

/// Wall-clock allowance for criteria 1 and 6.
const FAST_LIMIT: Duration = Duration::from_secs(60);
/// Expected minimal generator count of the permutohedral (5,2,1) toric ideal.
const PERMUTOHEDRAL_IDEAL_COUNT: usize = 1181;
const PERMUTOHEDRAL_HB_COUNT: usize = 30;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Written to the raw stderr handle so the line shows without `--nocapture`.
fn report(id: u32, title: &str, o: &Outcome) {
    let line = format!("{} [{id:>2}] {title}: {}\n", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    std::io::stderr().write_all(line.as_bytes()).expect("stderr is writable");
}

fn unit(n: usize, i: usize) -> IVec {
    (0..n).map(|j| Int::from(i == j)).collect()
}

fn full_mode() -> bool {
    std::env::var("WEYL_TORIC_FULL").is_ok_and(|v| v == "1")
}

fn hb_set(pair: &LMPair) -> BTreeSet<IVec> {
    pair.semigroup_max().hilbert_basis.into_iter().collect()
}

fn criterion_hilbert_counts() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for n in 3..=5 {
        let pair = lm_pairs::gl(n, 2, 3).unwrap();
        // e_i and f_i = (1,…,1) − 2e_i.
        let mut expected: BTreeSet<IVec> = (0..n).map(|i| unit(n, i)).collect();
        expected.extend((0..n).map(|i| (0..n).map(|j| if i == j { -1 } else { 1 }).collect::<IVec>()));
        let got = hb_set(&pair);
        summary.push(format!("gl({n},2)={}", got.len()));
        if got != expected || got.len() != 2 * n {
            failures.push(format!("gl({n},2)"));
        }
    }
    for g in 1..=4 {
        let got = hb_set(&lm_pairs::gsp(g, 3).unwrap()).len();
        summary.push(format!("gsp({g})={got}"));
        if got != 2 * g {
            failures.push(format!("gsp({g})"));
        }
        let got = hb_set(&lm_pairs::gspin(g, 3).unwrap()).len();
        summary.push(format!("gspin({g})={got}"));
        if got != 1 << g {
            failures.push(format!("gspin({g})"));
        }
    }
    let got = hb_set(&lm_pairs::res_ramified_gl(&[5, 2, 1], 3).unwrap()).len();
    summary.push(format!("perm(5,2,1)={got}"));
    if got != PERMUTOHEDRAL_HB_COUNT {
        failures.push("perm(5,2,1)".into());
    }
    let elapsed = start.elapsed();
    if elapsed >= FAST_LIMIT {
        failures.push(format!("runtime {elapsed:?} ≥ {FAST_LIMIT:?}"));
    }
    outcome(failures.is_empty(), format!("{} in {elapsed:.2?}; failures {failures:?}", summary.join(" ")))
}

fn criterion_toric_ideals() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let gsp = lm_pairs::gsp(2, 3).unwrap();
    let s = gsp.semigroup_max();
    let ideal = toric_ideal(&s.hilbert_basis, Budget::default()).unwrap();
    let names = weyl_toric::report::generator_names(&gsp, &s.hilbert_basis);
    let rendered: Vec<String> = ideal
        .minimal_generators
        .iter()
        .map(|b| weyl_toric::report::canonical_binomial(&b.plus, &b.minus, &names))
        .collect();
    let ok = rendered == ["e_1*f_1 - e_2*f_2"];
    pass &= ok;
    notes.push(format!("gsp(2) {rendered:?}"));

    // gu(3,2,1): a single relation of shape x_a^2 − x_b·x_c with a, b, c distinct.
    let gu = lm_pairs::gu_ramified(3, 2, 1, 3).unwrap();
    let ideal = toric_ideal(&gu.semigroup_max().hilbert_basis, Budget::default()).unwrap();
    let shape_ok = ideal.minimal_count == 1 && {
        let b = &ideal.minimal_generators[0];
        let mut sides = [b.plus.clone(), b.minus.clone()];
        sides.sort_by_key(|v| v.iter().filter(|x| **x != 0).count());
        let square = sides[0].iter().filter(|x| **x == 2).count() == 1 && sides[0].iter().filter(|x| **x != 0).count() == 1;
        let pair = sides[1].iter().filter(|x| **x == 1).count() == 2 && sides[1].iter().filter(|x| **x != 0).count() == 2;
        let disjoint = sides[0].iter().zip(&sides[1]).all(|(a, b)| *a == 0 || *b == 0);
        square && pair && disjoint
    };
    pass &= shape_ok;
    notes.push(format!("gu(3,2,1) count {} shape {}", ideal.minimal_count, shape_ok));

    // gspin(3): x_U x_U' − x_{U∩U'} x_{U∪U'} for all U, U'.
    let g = 3;
    let spin = lm_pairs::gspin(g, 3).unwrap();
    let hb = spin.semigroup_max().hilbert_basis;
    let ideal = toric_ideal(&hb, Budget::default()).unwrap();
    let x_of = |mask: usize| -> usize {
        let v: IVec = (0..g).map(|i| Int::from(mask >> i & 1 == 1)).chain([1]).collect();
        hb.iter().position(|h| *h == v).expect("spin generator")
    };
    let mut checked = 0;
    let mut all_in = true;
    for u in 0..1usize << g {
        for w in 0..1usize << g {
            let mut plus = vec![0; hb.len()];
            let mut minus = vec![0; hb.len()];
            plus[x_of(u)] += 1;
            plus[x_of(w)] += 1;
            minus[x_of(u & w)] += 1;
            minus[x_of(u | w)] += 1;
            all_in &= ideal.contains(&plus, &minus);
            checked += 1;
        }
    }
    pass &= all_in;
    notes.push(format!("gspin(3) {checked} lattice relations in ideal: {all_in}"));

    if full_mode() {
        let start = Instant::now();
        let perm = lm_pairs::res_ramified_gl(&[5, 2, 1], 3).unwrap();
        match toric_ideal(&perm.semigroup_max().hilbert_basis, Budget::Unlimited) {
            Ok(ideal) => {
                let ok = ideal.minimal_count == PERMUTOHEDRAL_IDEAL_COUNT;
                pass &= ok;
                notes.push(format!(
                    "perm(5,2,1) minimal count {} (expected {PERMUTOHEDRAL_IDEAL_COUNT}) in {:.1?}",
                    ideal.minimal_count,
                    start.elapsed()
                ));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("perm(5,2,1) failed: {e}"));
            }
        }
    } else {
        notes.push("perm(5,2,1) count skipped (set WEYL_TORIC_FULL=1)".into());
    }
    outcome(pass, notes.join("; "))
}

fn criterion_veronese() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for n in 3..=4usize {
        let k = (n - 1) as Int;
        let pair = lm_pairs::gl(n, n - 1, 3).unwrap();
        let s = pair.semigroup_max();
        let Some(m) = semigroups::veronese_map(&s, n, k) else {
            pass = false;
            notes.push(format!("gl({n},{}) not recognized", n - 1));
            continue;
        };
        let index_ok = linalg::det(&m).abs() == k;
        // Box oracle: x ∈ S (pairing with the orbit) iff M x is a Veronese exponent.
        let orbit = pair.scaled_orbit();
        let mut agree = true;
        for x in common::box_points(n, 4) {
            let in_s = orbit.iter().all(|l| linalg::dot(l, &x) >= 0);
            let y = linalg::mat_vec(&m, &x);
            let in_v = y.iter().all(|v| *v >= 0) && y.iter().sum::<Int>() % k == 0;
            agree &= in_s == in_v;
        }
        pass &= agree && index_ok;
        notes.push(format!("gl({n},{}) map {m:?} box-agrees {agree}", n - 1));
    }
    outcome(pass, notes.join("; "))
}

fn smith_order(m: &[IVec]) -> Int {
    let n = m.len();
    let s = linalg::smith(&m.to_vec(), n);
    if s.rank() < n {
        return 0;
    }
    s.diag.iter().map(|d| d.abs()).product()
}

fn criterion_lang_covers() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for p in [3, 5] {
        for pair in [lm_pairs::gl(3, 1, p).unwrap(), lm_pairs::gsp(2, p).unwrap()] {
            let lm = LangMap::for_pair(&pair).unwrap();
            let r = pair.rank() as u32;
            let order = lang_cover::group_order(&lm);
            let ok = order == (p - 1).pow(r) && order == smith_order(&lm.l_star);
            pass &= ok;
            let rep = lang_cover::ramification_degrees(&lm, &pair.cone()).unwrap();
            let degrees_ok = rep.rays.iter().all(|x| x.e == p - 1);
            pass &= degrees_ok;
            notes.push(format!("{} p={p}: |T(F_p)|={order} degrees p-1 {degrees_ok}", pair.name));
        }
        for d in [2, 3] {
            let pair = lm_pairs::division_algebra(d, p).unwrap();
            let lm = LangMap::for_pair(&pair).unwrap();
            let order = lang_cover::group_order(&lm);
            let expect = p.pow(d as u32) - 1;
            let s = pair.semigroup_max();
            let rep = lang_cover::ramification_degrees(&lm, &pair.cone()).unwrap();
            let degrees_ok = !rep.rays.is_empty() && rep.rays.iter().all(|x| x.e == expect);
            let flat = lang_cover::is_flat(&lm, &s).unwrap();
            let ok = order == expect && order == smith_order(&lm.l_star) && degrees_ok && flat;
            pass &= ok;
            notes.push(format!("Res d={d} p={p}: order {order} degrees {degrees_ok} flat {flat}"));
        }
    }
    // Swap Frobenius on Z^2 with τ spanned by (−1, p), (p, −1).
    let p = 3;
    let lm = LangMap::new(GaloisLattice::with_frobenius(vec![vec![0, 1], vec![1, 0]]).unwrap(), p).unwrap();
    let tau = RationalCone::positive_hull(&[vec![-1, p], vec![p, -1]], 2);
    let pulled = lang_cover::pullback_cone(&lm, &tau);
    let rep = lang_cover::ramification_degrees(&lm, &tau).unwrap();
    let degrees: Vec<Int> = rep.rays.iter().map(|r| r.e).collect();
    let quadrant = pulled.rays == vec![vec![0, 1], vec![1, 0]];
    let ok = degrees == [1, 1] && quadrant;
    pass &= ok;
    notes.push(format!("swap case degrees {degrees:?} quadrant {quadrant}"));
    outcome(pass, notes.join("; "))
}

fn split_catalog(p: Int) -> Vec<LMPair> {
    let mut out = Vec::new();
    for n in 2..=5 {
        for j in 1..n {
            out.push(lm_pairs::gl(n, j, p).unwrap());
        }
    }
    for g in 1..=3 {
        out.push(lm_pairs::gsp(g, p).unwrap());
        out.push(lm_pairs::gspin(g, p).unwrap());
    }
    out
}

fn criterion_flatness() -> Outcome {
    let p = 3;
    let mut pass = true;
    let mut notes = Vec::new();
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for pair in split_catalog(p) {
        let lm = LangMap::for_pair(&pair).unwrap();
        let mut semigroups = vec![pair.semigroup_max()];
        if let Ok(s) = pair.semigroup_free() {
            semigroups.push(s);
        }
        for s in semigroups {
            let r = lang_cover::lang_report(&lm, &s).unwrap();
            let consistent = r.flat == r.smooth
                && r.fiber_length >= r.group_order
                && (r.fiber_length == r.group_order) == r.flat;
            if !consistent {
                mismatches.push(pair.name.clone());
            }
            checked += 1;
        }
    }
    pass &= mismatches.is_empty();
    notes.push(format!("{checked} split cases, mismatches {mismatches:?}"));
    for n in 2..=5 {
        let pair = lm_pairs::gl(n, 1, p).unwrap();
        let flat = lang_cover::is_flat(&LangMap::for_pair(&pair).unwrap(), &pair.semigroup_max()).unwrap();
        pass &= flat;
        notes.push(format!("gl({n},1) flat {flat}"));
    }
    for g in 2..=3 {
        let pair = lm_pairs::gsp(g, p).unwrap();
        let flat = lang_cover::is_flat(&LangMap::for_pair(&pair).unwrap(), &pair.semigroup_max()).unwrap();
        pass &= !flat;
        notes.push(format!("gsp({g}) flat {flat}"));
    }
    outcome(pass, notes.join("; "))
}

fn irreducible_types(max_rank: usize) -> Vec<(CartanType, usize)> {
    let mut out = Vec::new();
    for n in 1..=max_rank {
        out.push((CartanType::A, n));
        if n >= 2 {
            out.push((CartanType::B, n));
            out.push((CartanType::C, n));
        }
        if n >= 4 {
            out.push((CartanType::D, n));
        }
    }
    out.extend([(CartanType::E, 6), (CartanType::F, 4), (CartanType::G, 2)]);
    out
}

/// End nodes of the A_n diagram in the crate's Cartan labelling.
fn is_a_end_node(t: CartanType, n: usize, omitted: usize) -> bool {
    t == CartanType::A && (omitted == 0 || omitted == n - 1)
}

fn criterion_weyl_inequality() -> Outcome {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut cases = 0;
    for (t, n) in irreducible_types(6) {
        let rs = RootSystem::abstract_type(t, n).unwrap();
        let whole = rs.group_order(&(0..n).collect::<Vec<_>>());
        for omitted in 0..n {
            let j: Vec<usize> = (0..n).filter(|&i| i != omitted).collect();
            let (size, equal) = root_data::parabolic_quotient_size(&rs, &j).unwrap();
            // Oracle: |W| / |W_J| from enumerated group orders.
            let oracle = whole / rs.group_order(&j);
            let expect_equal = is_a_end_node(t, n, omitted);
            if size != oracle || size < n + 1 || equal != expect_equal || (size == n + 1) != expect_equal {
                violations.push(format!("{t:?}{n} J omits {omitted}: {size} vs oracle {oracle}"));
            }
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = violations.is_empty() && elapsed < FAST_LIMIT;
    outcome(pass, format!("{cases} (type, J) cases in {elapsed:.2?}; violations {violations:?}"))
}

fn criterion_r1() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let unramified_iwahori = [
        lm_pairs::gl(3, 1, 3).unwrap(),
        lm_pairs::gl(4, 2, 3).unwrap(),
        lm_pairs::gsp(2, 3).unwrap(),
        lm_pairs::gsp(3, 3).unwrap(),
        lm_pairs::gspin(3, 3).unwrap(),
        lm_pairs::hilbert_siegel(2, 2, 3).unwrap(),
        lm_pairs::division_algebra(3, 3).unwrap(),
    ];
    for pair in &unramified_iwahori {
        let ok = pair.r1_criterion().pass;
        pass &= ok;
        notes.push(format!("{} {}", pair.name, if ok { "passes" } else { "fails" }));
    }
    for (n, r) in [(3, 2), (4, 2), (4, 3)] {
        let pair = lm_pairs::gl_two_step_parahoric(n, r, 3).unwrap();
        let rep = pair.r1_criterion();
        let target: Vec<Rat> = vec![Rat::from_integer(0), Rat::from_integer(r as Int)];
        let bad = rep.verdicts.iter().find(|v| !v.indivisible);
        let ok = !rep.pass && bad.is_some_and(|v| v.orbit_element == target && v.content == r as Int);
        pass &= ok;
        notes.push(format!("two-step({n},{r}) fails on (0,{r}): {ok}"));
    }
    let pair = lm_pairs::res_gl_ramified_example(2, 3).unwrap();
    let rep = pair.r1_criterion();
    let ok = !rep.pass && rep.verdicts.iter().all(|v| v.content == 2);
    pass &= ok;
    notes.push(format!("order-4 ramified Res fails with content 2: {ok}"));
    outcome(pass, notes.join("; "))
}

fn criterion_admissible() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (pair, size) in [
        (lm_pairs::gl(2, 1, 3).unwrap(), 3),
        (lm_pairs::gl(3, 1, 3).unwrap(), 7),
        (lm_pairs::gsp(2, 3).unwrap(), 13),
    ] {
        let (aw, poset) = affine_weyl::admissible_set(&pair, affine_weyl::DEFAULT_ADM_LIMIT).unwrap();
        let simple = common::affine_simple_reflections(&aw);
        let mut oracle = BTreeSet::new();
        for &m in &poset.maximal {
            oracle.extend(common::lower_interval_by_subwords(&aw, &simple, &poset.elements[m]));
        }
        let elems: BTreeSet<_> = poset.elements.iter().cloned().collect();
        let size_ok = poset.len() == size && oracle == elems;

        let cone = pair.cone();
        let faces = affine_weyl::face_map_all(&pair, &poset).unwrap();
        let tops_ok = poset.maximal.iter().zip(&poset.orbit).all(|(&m, lambda)| {
            let f = &faces[m];
            f.rays.len() == 1 && cone.rays[f.rays[0]] == linalg::primitive(lambda)
        });
        let bottom_ok = face_map(&pair, &poset, poset.minimum).unwrap().rays.len() == cone.rays.len();
        let mut reversal_ok = true;
        for i in 0..poset.len() {
            for j in 0..poset.len() {
                if common::bruhat_leq_by_descents(&aw, &simple, &poset.elements[i], &poset.elements[j]) {
                    // w_i ≤ w_j ⇒ face(w_j) is a face of face(w_i).
                    let fi: BTreeSet<_> = faces[i].rays.iter().collect();
                    reversal_ok &= faces[j].rays.iter().all(|r| fi.contains(r));
                }
            }
        }
        let hit: BTreeSet<_> = faces.iter().map(|f| f.rays.clone()).collect();
        let nonempty_faces = cone.face_poset().into_iter().filter(|f| !f.rays.is_empty()).count();
        let surjective = hit.len() == nonempty_faces;
        let ok = size_ok && tops_ok && bottom_ok && reversal_ok && surjective;
        pass &= ok;
        notes.push(format!(
            "{} |Adm|={} oracle={} tops {tops_ok} min {bottom_ok} reversal {reversal_ok} surjective {surjective}",
            pair.name,
            poset.len(),
            oracle.len()
        ));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_divisors() -> Outcome {
    let mut pass = true;
    let mut checked = 0;
    for name in lm_pairs::EXAMPLE_NAMES {
        let pair = lm_pairs::catalog(name, 3).unwrap();
        let n = pair.rank();
        for i in 0..n {
            let chi = unit(n, i);
            let Ok(m) = lattice_galois::divisor_multiplicities(&pair, &chi) else {
                pass = false;
                continue;
            };
            for (v, k) in &m {
                let direct = v.iter().zip(&chi).fold(Rat::from_integer(0), |a, (x, c)| a + x * Rat::from_integer(*c))
                    * Rat::from_integer(pair.e);
                pass &= direct.is_integer() && direct.to_integer() == *k;
                checked += 1;
            }
        }
    }
    let gl2 = lm_pairs::gl(2, 1, 3).unwrap();
    let m = lattice_galois::divisor_multiplicities(&gl2, &[1, 0]).unwrap();
    let at = |v: [Int; 2]| {
        m.iter()
            .find(|(w, _)| *w == v.iter().map(|&x| Rat::from_integer(x)).collect::<Vec<_>>())
            .map(|(_, k)| *k)
    };
    let gl2_ok = (at([1, 0]), at([0, 1])) == (Some(1), Some(0));
    pass &= gl2_ok;
    outcome(pass, format!("{checked} multiplicities integral and matching; GL_2 χ=e_1 gives (1,0): {gl2_ok}"))
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}.txt", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}")).trim_end().to_string()
}

fn criterion_charts() -> Outcome {
    let gl3 = lm_pairs::gl(3, 1, 3).unwrap();
    let cases: Vec<(&str, RingPresentation)> = vec![
        ("drinfeld_2", presentation::drinfeld_chart(2).unwrap()),
        ("drinfeld_3", presentation::drinfeld_chart(3).unwrap()),
        ("split_generic_gl3", presentation::chart_presentation(&gl3, &gl3.semigroup_max()).unwrap()),
        ("fake_unitary_2", presentation::fake_unitary_chart(2).unwrap()),
        ("fake_unitary_3", presentation::fake_unitary_chart(3).unwrap()),
        ("raynaud_group_1", presentation::raynaud_presentation(1, RaynaudMode::Group).unwrap()),
        ("raynaud_generators_1", presentation::raynaud_presentation(1, RaynaudMode::Generators).unwrap()),
        ("raynaud_group_2", presentation::raynaud_presentation(2, RaynaudMode::Group).unwrap()),
        ("raynaud_generators_2", presentation::raynaud_presentation(2, RaynaudMode::Generators).unwrap()),
    ];
    let mut bad = Vec::new();
    for (name, c) in &cases {
        let golden_ok = c.render() == golden(name);
        let weights_ok = c.equivariant() && [3, 5, 7].iter().all(|&p| c.relations.iter().all(|r| c.weights.balanced_at(r, p)));
        if !golden_ok || !weights_ok {
            bad.push(format!("{name} golden {golden_ok} weights {weights_ok}"));
        }
    }
    outcome(bad.is_empty(), format!("{} presentations; mismatches {bad:?}", cases.len()))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        (1, "Hilbert-basis counts", criterion_hilbert_counts),
        (2, "toric-ideal generators", criterion_toric_ideals),
        (3, "Veronese identification", criterion_veronese),
        (4, "Lang covers", criterion_lang_covers),
        (5, "flatness classification", criterion_flatness),
        (6, "Weyl inequality", criterion_weyl_inequality),
        (7, "R1 criterion", criterion_r1),
        (8, "admissible sets and face map", criterion_admissible),
        (9, "divisor multiplicities", criterion_divisors),
        (10, "chart presentations", criterion_charts),
    ];
    let mut failed = Vec::new();
    for (id, title, run) in criteria {
        let o = run();
        report(id, title, &o);
        if !o.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

/// The slow part of criterion 2, kept out of the default run.
#[test]
#[ignore = "minutes of work; run with --ignored or WEYL_TORIC_FULL=1"]
fn permutohedral_ideal_count() {
    let perm = lm_pairs::res_ramified_gl(&[5, 2, 1], 3).unwrap();
    let ideal = toric_ideal(&perm.semigroup_max().hilbert_basis, Budget::Unlimited).unwrap();
    println!("permutohedral (5,2,1): {} minimal generators", ideal.minimal_count);
    assert_eq!(ideal.minimal_count, PERMUTOHEDRAL_IDEAL_COUNT);
}
