//! Independent oracles shared by the integration tests. None of these call the
//! routine they check; each takes a different computational route.

#![allow(dead_code)]

use std::collections::BTreeSet;

use weyl_toric::affine_weyl::{AffWeylElement, AffineWeyl};
use weyl_toric::root_data::RootPair;
use weyl_toric::{IVec, Int, Rat};

/// All integer points of `[-bound, bound]^n`.
pub fn box_points(n: usize, bound: Int) -> Vec<IVec> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: IVec| {
                (-bound..=bound).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Irreducible elements of `{x : ⟨x, g⟩ ≥ 0 for every g}` inside a box, found
/// by pairwise subtraction. Assumes the semigroup is pointed and the box large
/// enough to contain its minimal generators.
pub fn box_hilbert_basis(pairing_with: &[IVec], n: usize, bound: Int) -> BTreeSet<IVec> {
    let inside = |x: &[Int]| pairing_with.iter().all(|g| g.iter().zip(x).map(|(a, b)| a * b).sum::<Int>() >= 0);
    let pts: Vec<IVec> = box_points(n, bound).into_iter().filter(|x| x.iter().any(|v| *v != 0) && inside(x)).collect();
    let set: BTreeSet<&IVec> = pts.iter().collect();
    pts.iter()
        .filter(|x| {
            !pts.iter().any(|y| {
                let rest: IVec = x.iter().zip(y).map(|(a, b)| a - b).collect();
                rest.iter().any(|v| *v != 0) && set.contains(&rest)
            })
        })
        .cloned()
        .collect()
}

/// A point of the base alcove off every affine root hyperplane.
pub fn generic_alcove_point(aw: &AffineWeyl) -> Vec<Rat> {
    let rs = &aw.root_system;
    let r = rs.rank();
    let n = rs.ambient_rank;
    let height: Int = aw.positive.iter().map(|p| p.simple_coeffs.iter().sum::<Int>()).max().unwrap_or(1);
    // ⟨α_i, c⟩ = 1 / ((height + 1)·(i + 2)) keeps every positive root inside (0, 1).
    let targets: Vec<Rat> = (0..r).map(|i| Rat::new(1, (height + 1) * (i as Int + 2))).collect();
    // Solve simple_roots · c = targets by Gaussian elimination over Q.
    let mut rows: Vec<Vec<Rat>> = (0..r)
        .map(|i| {
            let mut row: Vec<Rat> = rs.simple_roots[i].iter().map(|&x| Rat::from_integer(x)).collect();
            row.push(targets[i]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for c in 0..n {
        let Some(p) = (lead..r).find(|&i| rows[i][c] != Rat::from_integer(0)) else { continue };
        rows.swap(lead, p);
        let piv = rows[lead][c];
        for x in rows[lead].iter_mut() {
            *x /= piv;
        }
        for i in 0..r {
            if i != lead {
                let f = rows[i][c];
                for j in 0..=n {
                    let v = rows[lead][j];
                    rows[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        lead += 1;
    }
    let mut c = vec![Rat::from_integer(0); n];
    for (i, &col) in pivots.iter().enumerate() {
        c[col] = rows[i][n];
    }
    c
}

fn pair_q(a: &[Int], v: &[Rat]) -> Rat {
    a.iter().zip(v).fold(Rat::from_integer(0), |acc, (x, y)| acc + Rat::from_integer(*x) * y)
}

/// Number of affine root hyperplanes crossed between `c` and `x(c)`.
pub fn alcove_length(aw: &AffineWeyl, x: &AffWeylElement) -> usize {
    let c = generic_alcove_point(aw);
    let n = c.len();
    let image: Vec<Rat> = (0..n)
        .map(|i| pair_q(&x.finite[i], &c) + Rat::from_integer(x.translation[i]))
        .collect();
    aw.positive
        .iter()
        .map(|r| {
            let a = pair_q(&r.root, &c).floor().to_integer();
            let b = pair_q(&r.root, &image).floor().to_integer();
            (b - a).unsigned_abs() as usize
        })
        .sum()
}

/// Reflections in the walls of the base alcove: the simple ones and `⟨θ, v⟩ = 1`
/// for each highest root `θ`.
pub fn affine_simple_reflections(aw: &AffineWeyl) -> Vec<AffWeylElement> {
    let rs = &aw.root_system;
    let roots: BTreeSet<&IVec> = aw.positive.iter().map(|p| &p.root).collect();
    let mut out: Vec<AffWeylElement> = (0..rs.rank())
        .map(|i| {
            let pair = aw.positive.iter().find(|p| p.root == rs.simple_roots[i]).expect("simple roots are positive");
            aw.affine_reflection(pair, 0)
        })
        .collect();
    let highest: Vec<&RootPair> = aw
        .positive
        .iter()
        .filter(|p| {
            rs.simple_roots.iter().all(|a| {
                let s: IVec = p.root.iter().zip(a).map(|(x, y)| x + y).collect();
                !roots.contains(&s)
            })
        })
        .collect();
    out.extend(highest.into_iter().map(|p| aw.affine_reflection(p, 1)));
    out
}

/// `x ≤ y` by the lifting property along right descents.
pub fn bruhat_leq_by_descents(aw: &AffineWeyl, simple: &[AffWeylElement], x: &AffWeylElement, y: &AffWeylElement) -> bool {
    if y.length == 0 {
        return x == y;
    }
    if x.length > y.length {
        return false;
    }
    let (s, ys) = simple
        .iter()
        .find_map(|s| {
            let ys = aw.compose(y, s);
            (ys.length < y.length).then_some((s, ys))
        })
        .expect("positive length has a descent");
    let xs = aw.compose(x, s);
    if xs.length < x.length {
        bruhat_leq_by_descents(aw, simple, &xs, &ys)
    } else {
        bruhat_leq_by_descents(aw, simple, x, &ys)
    }
}

/// Everything below `y`, via the subword property of a reduced word.
pub fn lower_interval_by_subwords(aw: &AffineWeyl, simple: &[AffWeylElement], y: &AffWeylElement) -> BTreeSet<AffWeylElement> {
    let mut word = Vec::new();
    let mut cur = y.clone();
    while cur.length > 0 {
        let (i, shorter) = simple
            .iter()
            .enumerate()
            .find_map(|(i, s)| {
                let c = aw.compose(&cur, s);
                (c.length < cur.length).then_some((i, c))
            })
            .expect("positive length has a descent");
        word.push(i);
        cur = shorter;
    }
    word.reverse();
    let mut elems: BTreeSet<AffWeylElement> = BTreeSet::from([cur]);
    for &i in &word {
        let more: Vec<AffWeylElement> = elems.iter().map(|e| aw.compose(e, &simple[i])).collect();
        elems.extend(more);
    }
    elems
}
