//! Implementation against independent brute-force routes.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use weyl_toric::affine_weyl::{self, AffineWeyl};
use weyl_toric::cones::RationalCone;
use weyl_toric::lang_cover::{self, LangMap};
use weyl_toric::lm_pairs::{self, LMPair};
use weyl_toric::semigroups::{toric_ideal, Budget};
use weyl_toric::{linalg, IVec, Int};

fn pairs_for_box() -> Vec<(LMPair, Int)> {
    vec![
        (lm_pairs::gl(3, 1, 3).unwrap(), 2),
        (lm_pairs::gl(3, 2, 3).unwrap(), 2),
        (lm_pairs::gl(4, 2, 3).unwrap(), 2),
        (lm_pairs::gsp(2, 3).unwrap(), 2),
        (lm_pairs::gspin(2, 3).unwrap(), 2),
        (lm_pairs::gu_ramified(3, 2, 1, 3).unwrap(), 3),
    ]
}

#[test]
fn hilbert_bases_match_box_enumeration() {
    for (pair, bound) in pairs_for_box() {
        let s = pair.semigroup_max();
        assert!(s.units.is_empty(), "{}: box oracle needs a pointed semigroup", pair.name);
        let got: BTreeSet<IVec> = s.hilbert_basis.iter().cloned().collect();
        let oracle = common::box_hilbert_basis(&pair.scaled_orbit(), pair.rank(), bound);
        assert_eq!(got, oracle, "{}", pair.name);
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Minimal generator count of the toric ideal of `hb`, from fiber graphs: for
/// each multidegree, monomials sharing a variable are joined, and every component
/// beyond the first needs one generator. Monomials are enumerated up to
/// `max_degree` in the grading `weights`.
fn minimal_count_by_fibers(hb: &[IVec], weights: &[Int], max_degree: Int) -> usize {
    fn enumerate(i: usize, left: Int, w: &[Int], cur: &mut IVec, out: &mut Vec<IVec>) {
        if i == w.len() {
            out.push(cur.clone());
            return;
        }
        let mut e = 0;
        while e * w[i] <= left {
            cur[i] = e;
            enumerate(i + 1, left - e * w[i], w, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    let mut monomials = Vec::new();
    enumerate(0, max_degree, weights, &mut vec![0; hb.len()], &mut monomials);
    let n = hb[0].len();
    let mut fibers: BTreeMap<IVec, Vec<usize>> = BTreeMap::new();
    for (idx, u) in monomials.iter().enumerate() {
        let degree: IVec = (0..n).map(|r| u.iter().zip(hb).map(|(c, h)| c * h[r]).sum()).collect();
        fibers.entry(degree).or_default().push(idx);
    }
    let mut total = 0;
    for members in fibers.values().filter(|f| f.len() > 1) {
        let mut parent: Vec<usize> = (0..members.len()).collect();
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                let (x, y) = (&monomials[members[a]], &monomials[members[b]]);
                if x.iter().zip(y).any(|(s, t)| *s > 0 && *t > 0) {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        total += (0..members.len()).filter(|&i| find(&mut parent, i) == i).count() - 1;
    }
    total
}

#[test]
fn minimal_generator_counts_match_fiber_graphs() {
    let cases = [
        lm_pairs::gsp(2, 3).unwrap(),
        lm_pairs::gsp(3, 3).unwrap(),
        lm_pairs::gl(4, 2, 3).unwrap(),
        lm_pairs::gspin(3, 3).unwrap(),
        lm_pairs::gu_ramified(3, 2, 1, 3).unwrap(),
    ];
    for pair in cases {
        let hb = pair.semigroup_max().hilbert_basis;
        let ideal = toric_ideal(&hb, Budget::Unlimited).unwrap();
        // Pairing with the sum of the orbit is positive on the pointed semigroup.
        let n = pair.rank();
        let interior: IVec = (0..n).map(|i| pair.scaled_orbit().iter().map(|v| v[i]).sum()).collect();
        let weights: IVec = hb.iter().map(|h| linalg::dot(h, &interior)).collect();
        assert!(weights.iter().all(|w| *w > 0));
        let degree = |u: &[Int]| linalg::dot(u, &weights);
        // Any generating set bounds the degrees of a minimal one.
        let max_degree = ideal.groebner.iter().map(|b| degree(&b.plus).max(degree(&b.minus))).max().unwrap_or(0);
        let oracle = minimal_count_by_fibers(&hb, &weights, max_degree);
        assert_eq!(ideal.minimal_count, oracle, "{}", pair.name);
    }
}

#[test]
fn gl_4_2_has_ten_relations() {
    let hb = lm_pairs::gl(4, 2, 3).unwrap().semigroup_max().hilbert_basis;
    assert_eq!(toric_ideal(&hb, Budget::default()).unwrap().minimal_count, 10);
}

#[test]
fn lengths_match_hyperplane_count() {
    for pair in [lm_pairs::gl(2, 1, 3).unwrap(), lm_pairs::gl(3, 1, 3).unwrap(), lm_pairs::gsp(2, 3).unwrap()] {
        let (aw, poset) = affine_weyl::admissible_set(&pair, affine_weyl::DEFAULT_ADM_LIMIT).unwrap();
        for x in &poset.elements {
            assert_eq!(x.length, common::alcove_length(&aw, x), "{} {:?}", pair.name, x.translation);
        }
    }
}

#[test]
fn gsp4_translation_length_is_three() {
    // t_(1,1,1) pairs to 0 with the short root and to 1 with the other three.
    let aw = AffineWeyl::for_pair(&lm_pairs::gsp(2, 3).unwrap()).unwrap();
    let t = aw.translation(&[1, 1, 1]).unwrap();
    assert_eq!(t.length, 3);
    assert_eq!(common::alcove_length(&aw, &t), 3);
}

#[test]
fn bruhat_order_matches_lifting_property() {
    for pair in [lm_pairs::gl(3, 1, 3).unwrap(), lm_pairs::gsp(2, 3).unwrap()] {
        let (aw, poset) = affine_weyl::admissible_set(&pair, affine_weyl::DEFAULT_ADM_LIMIT).unwrap();
        let simple = common::affine_simple_reflections(&aw);
        for (i, x) in poset.elements.iter().enumerate() {
            for (j, y) in poset.elements.iter().enumerate() {
                assert_eq!(poset.leq(i, j), common::bruhat_leq_by_descents(&aw, &simple, x, y));
                assert_eq!(aw.bruhat_leq(x, y), poset.leq(i, j));
            }
        }
    }
}

/// Standard monomials of `k[S]/(h^(p-1))` for split tori: they lie in the
/// zonotope `Σ [0, p-2]·h`, so enumerating it and discarding anything with a
/// `(p-1)h` translate left inside `S` counts them.
fn split_fiber_length_by_zonotope(pair: &LMPair) -> Int {
    let s = pair.semigroup_max();
    let step = pair.p - 1;
    let mut points: BTreeSet<IVec> = BTreeSet::from([vec![0; pair.rank()]]);
    for h in &s.hilbert_basis {
        let mut next = BTreeSet::new();
        for x in &points {
            for c in 0..step {
                next.insert(x.iter().zip(h).map(|(a, b)| a + c * b).collect::<IVec>());
            }
        }
        points = next;
    }
    points
        .iter()
        .filter(|x| {
            s.hilbert_basis.iter().all(|h| {
                let rest: IVec = x.iter().zip(h).map(|(a, b)| a - step * b).collect();
                !s.contains(&rest)
            })
        })
        .count() as Int
}

#[test]
fn split_fiber_lengths_match_zonotope_count() {
    for p in [3, 5] {
        let mut pairs = vec![lm_pairs::gsp(2, p).unwrap(), lm_pairs::gspin(2, p).unwrap()];
        pairs.extend((2..=4).flat_map(|n| (1..n).map(move |j| lm_pairs::gl(n, j, p).unwrap())));
        if p == 3 {
            pairs.push(lm_pairs::gsp(3, p).unwrap());
            pairs.push(lm_pairs::gspin(3, p).unwrap());
        }
        for pair in pairs {
            let lm = LangMap::for_pair(&pair).unwrap();
            let s = pair.semigroup_max();
            assert!(s.units.is_empty());
            let got = lang_cover::fiber_length_over_closed_orbit(&lm, &s).unwrap();
            assert_eq!(got, split_fiber_length_by_zonotope(&pair), "{} p={p}", pair.name);
        }
    }
}

#[test]
fn pullback_matches_transposed_inequalities() {
    let cases: Vec<(LangMap, RationalCone)> = vec![
        {
            let pair = lm_pairs::division_algebra(3, 3).unwrap();
            (LangMap::for_pair(&pair).unwrap(), pair.cone())
        },
        {
            let pair = lm_pairs::gsp(2, 5).unwrap();
            (LangMap::for_pair(&pair).unwrap(), pair.cone())
        },
        {
            let pair = lm_pairs::fake_unitary(3, 3).unwrap();
            (LangMap::for_pair(&pair).unwrap(), pair.cone())
        },
    ];
    for (lm, tau) in cases {
        let n = lm.rank();
        // {x : L_* x ∈ τ} is cut out by f ∘ L_* for the facets and equations f of τ.
        let pull = |f: &IVec| linalg::mat_vec(&lm.l_star_dual, f);
        let ineqs: Vec<IVec> = tau.facets.iter().map(pull).collect();
        let eqs: Vec<IVec> = tau.equations.iter().map(pull).collect();
        let oracle = RationalCone::from_inequalities(&ineqs, &eqs, n);
        let got = lang_cover::pullback_cone(&lm, &tau);
        assert_eq!(got.rays, oracle.rays);
        assert_eq!(got.lineality.len(), oracle.lineality.len());
    }
}

#[test]
fn veronese_maps_pass_lattice_check() {
    for n in 3..=4usize {
        let k = (n - 1) as Int;
        let s = lm_pairs::gl(n, n - 1, 3).unwrap().semigroup_max();
        let m = weyl_toric::semigroups::veronese_map(&s, n, k).expect("recognized");
        // The Hilbert basis of the Veronese semigroup is every degree-k monomial.
        let images: BTreeSet<IVec> = s.hilbert_basis.iter().map(|h| linalg::mat_vec(&m, h)).collect();
        let mut degree_k = BTreeSet::new();
        for x in common::box_points(n, k) {
            if x.iter().all(|v| *v >= 0) && x.iter().sum::<Int>() == k {
                degree_k.insert(x);
            }
        }
        assert_eq!(images, degree_k);
    }
}
