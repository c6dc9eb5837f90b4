//! Exact integer and rational linear algebra over an arbitrary exact integer type.
//!
//! Matrices are row-major `Vec<Vec<T>>`; vectors are `Vec<T>`. Everything here is
//! generic over [`Scalar`], so the same code runs on `i64`, `i128` or `BigInt`.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::fmt::{Debug, Display};
use std::hash::Hash;

/// An exact signed integer type.
pub trait Scalar: Clone + Debug + Display + Hash + Ord + Integer + Signed + Send + Sync {}

impl<T> Scalar for T where T: Clone + Debug + Display + Hash + Ord + Integer + Signed + Send + Sync {}

pub type Mat<T> = Vec<Vec<T>>;

pub fn identity<T: Scalar>(n: usize) -> Mat<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn zeros<T: Scalar>(m: usize, n: usize) -> Mat<T> {
    vec![vec![T::zero(); n]; m]
}

pub fn transpose<T: Scalar>(a: &Mat<T>, ncols: usize) -> Mat<T> {
    (0..ncols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<T: Scalar>(a: &Mat<T>, b: &Mat<T>, bcols: usize) -> Mat<T> {
    a.iter()
        .map(|row| {
            (0..bcols)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(T::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<T: Scalar>(a: &Mat<T>, v: &[T]) -> Vec<T> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Gcd of all entries (zero for the zero vector).
pub fn content<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |g, x| g.gcd(x))
}

/// Divide by the content; the zero vector is returned unchanged.
pub fn primitive<T: Scalar>(v: &[T]) -> Vec<T> {
    let g = content(v);
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x.clone() / g.clone()).collect()
}

/// Primitive and with first nonzero coordinate positive (for lines, not rays).
pub fn sign_normalized<T: Scalar>(v: &[T]) -> Vec<T> {
    let p = primitive(v);
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => p.iter().map(|y| -y.clone()).collect(),
        _ => p,
    }
}

fn swap_cols<T>(a: &mut Mat<T>, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// `row_dst += k * row_src`
fn add_row<T: Scalar>(a: &mut Mat<T>, dst: usize, src: usize, k: &T) {
    if k.is_zero() {
        return;
    }
    let src_row = a[src].clone();
    for (x, y) in a[dst].iter_mut().zip(src_row) {
        *x = x.clone() + k.clone() * y;
    }
}

/// `col_dst += k * col_src`
fn add_col<T: Scalar>(a: &mut Mat<T>, dst: usize, src: usize, k: &T) {
    if k.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let y = row[src].clone();
        row[dst] = row[dst].clone() + k.clone() * y;
    }
}

/// Row-style Hermite normal form: returns `(h, u, pivots)` with `u * a = h`, `u`
/// unimodular, `h` in row echelon form with positive pivots and the entries above
/// each pivot reduced into `[0, pivot)`.
pub fn hermite<T: Scalar>(a: &Mat<T>, ncols: usize) -> (Mat<T>, Mat<T>, Vec<usize>) {
    let m = a.len();
    let mut h = a.clone();
    let mut u = identity::<T>(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(first) = (r..m).find(|&i| !h[i][c].is_zero()) else {
            continue;
        };
        h.swap(r, first);
        u.swap(r, first);
        for i in (r + 1)..m {
            if h[i][c].is_zero() {
                continue;
            }
            let a_rc = h[r][c].clone();
            let a_ic = h[i][c].clone();
            let eg = a_rc.extended_gcd(&a_ic);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let p = a_rc.clone() / g.clone();
            let q = a_ic.clone() / g.clone();
            // [x y; -q p] has determinant x*p + y*q = 1.
            for mat in [&mut h, &mut u] {
                let row_r = mat[r].clone();
                let row_i = mat[i].clone();
                mat[r] = row_r
                    .iter()
                    .zip(&row_i)
                    .map(|(s, t)| x.clone() * s.clone() + y.clone() * t.clone())
                    .collect();
                mat[i] = row_r
                    .iter()
                    .zip(&row_i)
                    .map(|(s, t)| p.clone() * t.clone() - q.clone() * s.clone())
                    .collect();
            }
        }
        if h[r][c].is_negative() {
            for mat in [&mut h, &mut u] {
                for x in mat[r].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                let k = -q;
                add_row(&mut h, i, r, &k);
                add_row(&mut u, i, r, &k);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (h, u, pivots)
}

/// Smith normal form `u * a * v = d` with `diag` the nonzero invariant factors,
/// each dividing the next.
#[derive(Debug, Clone)]
pub struct Smith<T> {
    pub u: Mat<T>,
    pub v: Mat<T>,
    pub diag: Vec<T>,
}

impl<T: Scalar> Smith<T> {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

pub fn smith<T: Scalar>(a: &Mat<T>, ncols: usize) -> Smith<T> {
    let m = a.len();
    let n = ncols;
    let mut w = a.clone();
    let mut u = identity::<T>(m);
    let mut v = identity::<T>(n);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !w[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| w[i][j].abs() < w[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut w, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut clean = true;
            for i in (t + 1)..m {
                if !w[i][t].is_zero() {
                    let q = -(w[i][t].div_floor(&w[t][t]));
                    add_row(&mut w, i, t, &q);
                    add_row(&mut u, i, t, &q);
                    if !w[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..n {
                if !w[t][j].is_zero() {
                    let q = -(w[t][j].div_floor(&w[t][t]));
                    add_col(&mut w, j, t, &q);
                    add_col(&mut v, j, t, &q);
                    if !w[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                let mut best: Option<(usize, usize)> = None;
                for i in t..m {
                    let cand = (i, t);
                    if !w[i][t].is_zero()
                        && best.map_or(true, |(bi, bj)| w[i][t].abs() < w[bi][bj].abs())
                    {
                        best = Some(cand);
                    }
                }
                for j in t..n {
                    if !w[t][j].is_zero()
                        && best.map_or(true, |(bi, bj)| w[t][j].abs() < w[bi][bj].abs())
                    {
                        best = Some((t, j));
                    }
                }
                let (bi, bj) = best.expect("pivot row/column nonzero");
                w.swap(t, bi);
                u.swap(t, bi);
                swap_cols(&mut w, t, bj);
                swap_cols(&mut v, t, bj);
                continue;
            }
            // Divisibility condition on the trailing block.
            let bad = ((t + 1)..m).find(|&i| ((t + 1)..n).any(|j| !(w[i][j].is_multiple_of(&w[t][t]))));
            match bad {
                Some(i) => {
                    let one = T::one();
                    add_row(&mut w, t, i, &one);
                    add_row(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if w[t][t].is_negative() {
            for x in w[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        diag.push(w[t][t].clone());
        t += 1;
    }
    Smith { u, v, diag }
}

pub fn rank<T: Scalar>(a: &Mat<T>, ncols: usize) -> usize {
    hermite(a, ncols).2.len()
}

/// Integer basis (as rows) of the right kernel `{x : a x = 0}`. The kernel of an
/// integer matrix is saturated, so this is also a basis of its rational span's
/// lattice points.
pub fn kernel<T: Scalar>(a: &Mat<T>, ncols: usize) -> Mat<T> {
    let at = transpose(a, ncols);
    let (h, u, pivots) = hermite(&at, a.len());
    let r = pivots.len();
    debug_assert!(h[r..].iter().all(|row| row.iter().all(|x| x.is_zero())));
    let mut basis: Mat<T> = u[r..].to_vec();
    hermite_rows_in_place(&mut basis, ncols);
    basis
}

/// Replace a list of rows by the nonzero rows of their Hermite form (canonical basis).
pub fn hermite_rows_in_place<T: Scalar>(rows: &mut Mat<T>, ncols: usize) {
    let (h, _, pivots) = hermite(rows, ncols);
    *rows = h.into_iter().take(pivots.len()).collect();
}

/// Basis (Hermite rows) of `span_Q(rows) ∩ Z^n`.
pub fn saturated_span<T: Scalar>(rows: &Mat<T>, ncols: usize) -> Mat<T> {
    if rows.is_empty() {
        return Vec::new();
    }
    let k = kernel(rows, ncols);
    if k.is_empty() {
        return identity(ncols);
    }
    kernel(&k, ncols)
}

/// Extend a basis of a saturated sublattice of `Z^n` to a basis of `Z^n`; returns
/// complementary rows only.
pub fn complement_basis<T: Scalar>(rows: &Mat<T>, ncols: usize) -> Mat<T> {
    if rows.is_empty() {
        return identity(ncols);
    }
    let s = smith(rows, ncols);
    debug_assert!(s.diag.iter().all(|d| d.is_one()), "sublattice must be saturated");
    let vinv = inverse_unimodular(&s.v);
    vinv[s.rank()..].to_vec()
}

/// Fraction-free (Bareiss) determinant.
pub fn det<T: Scalar>(a: &Mat<T>) -> T {
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    let mut m = a.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(s) = ((k + 1)..n).find(|&i| !m[i][k].is_zero()) else {
                return T::zero();
            };
            m.swap(k, s);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let val = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = val / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Inverse of a unimodular integer matrix.
pub fn inverse_unimodular<T: Scalar>(a: &Mat<T>) -> Mat<T> {
    let inv = inverse_rational(a).expect("unimodular matrix is invertible");
    inv.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    assert!(x.is_integer(), "matrix is not unimodular");
                    x.to_integer()
                })
                .collect()
        })
        .collect()
}

pub fn to_rational<T: Scalar>(a: &Mat<T>) -> Mat<Ratio<T>> {
    a.iter().map(|r| r.iter().map(|x| Ratio::from_integer(x.clone())).collect()).collect()
}

/// Gauss-Jordan inverse over the rationals; `None` if singular.
pub fn inverse_rational<T: Scalar>(a: &Mat<T>) -> Option<Mat<Ratio<T>>> {
    let n = a.len();
    let mut m = to_rational(a);
    let mut inv = to_rational(&identity::<T>(n));
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        inv.swap(c, p);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x = x.clone() / piv.clone();
        }
        for x in inv[c].iter_mut() {
            *x = x.clone() / piv.clone();
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let (mc, ic) = (m[c][j].clone(), inv[c][j].clone());
                    m[i][j] = m[i][j].clone() - f.clone() * mc;
                    inv[i][j] = inv[i][j].clone() - f.clone() * ic;
                }
            }
        }
    }
    Some(inv)
}

/// One rational solution of `a x = b`, or `None` if inconsistent.
pub fn solve_rational<T: Scalar>(a: &Mat<T>, ncols: usize, b: &[Ratio<T>]) -> Option<Vec<Ratio<T>>> {
    let m = a.len();
    let mut aug: Mat<Ratio<T>> = to_rational(a);
    for (row, bi) in aug.iter_mut().zip(b) {
        row.push(bi.clone());
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let piv = aug[r][c].clone();
        for x in aug[r].iter_mut() {
            *x = x.clone() / piv.clone();
        }
        for i in 0..m {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..=ncols {
                    let v = aug[r][j].clone();
                    aug[i][j] = aug[i][j].clone() - f.clone() * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if aug[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Ratio::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][ncols].clone();
    }
    Some(x)
}

/// Clear denominators and return the primitive integer vector on the same ray.
pub fn primitive_from_rational<T: Scalar>(v: &[Ratio<T>]) -> Vec<T> {
    let l = v.iter().fold(T::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<T> = v.iter().map(|x| (x.clone() * Ratio::from_integer(l.clone())).to_integer()).collect();
    primitive(&ints)
}

/// Reduce `x` modulo a list of positive moduli (torsion coordinates).
pub fn reduce_mod<T: Scalar>(x: &T, m: &T) -> T {
    x.mod_floor(m)
}

/// Convert between scalar types through `i128` (sufficient for the sizes used here).
pub fn convert<S, T>(v: &[S]) -> Vec<T>
where
    S: Scalar + num_traits::ToPrimitive,
    T: Scalar + num_traits::FromPrimitive,
{
    v.iter()
        .map(|x| T::from_i128(x.to_i128().expect("value fits in i128")).expect("value fits target"))
        .collect()
}
