//! Seeded random instances for the property suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classes::{is_mn, is_rn};
use crate::cones::{simplex_minimum, MAX_ENUMERATION_DIM};
use crate::group::GroupElement;
use crate::matrix::SymMatrix;
use crate::tol::Tolerances;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform entries in `[-r, r]`.
pub fn symmetric(rng: &mut TestRng, n: usize, r: f64) -> SymMatrix {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(-r..=r);
            v[i * n + j] = x;
            v[j * n + i] = x;
        }
    }
    SymMatrix::from_row_major(n, &v).expect("symmetric")
}

/// Nonnegative increment, exactly zero about a third of the time so that
/// ties appear.
fn increment(rng: &mut TestRng) -> f64 {
    if rng.gen_bool(0.3) {
        0.0
    } else {
        rng.gen_range(0.0..1.0)
    }
}

/// Ordered matrix: `a_ij = F(min(i,j), max(i,j))` for `F` a two-dimensional
/// cumulative sum of nonnegative increments plus an offset, so off-diagonal
/// entries mix signs and contain ties. Diagonal entries are free.
pub fn mn_matrix(rng: &mut TestRng, n: usize) -> SymMatrix {
    let mut f = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let up = if i > 0 { f[(i - 1) * n + j] } else { 0.0 };
            let left = if j > 0 { f[i * n + j - 1] } else { 0.0 };
            let diag = if i > 0 && j > 0 { f[(i - 1) * n + j - 1] } else { 0.0 };
            f[i * n + j] = up + left - diag + increment(rng);
        }
    }
    let offset = rng.gen_range(-0.6..0.2) * f[n * n - 1];
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..3.0)).collect();
    SymMatrix::from_fn(n, |i, j| {
        if i == j {
            diag[i]
        } else {
            f[i.min(j) * n + i.max(j)] + offset
        }
    })
}

/// Ordered matrix whose first row is strictly negative off the diagonal,
/// with a positive first pivot.
pub fn mn_negative_first_row(rng: &mut TestRng, n: usize) -> SymMatrix {
    let a = mn_matrix(rng, n);
    with_negative_first_row(rng, &a)
}

/// Shifts the off-diagonal entries down until row 0 is strictly negative
/// and puts a positive pivot in the corner. Shifting keeps both orderings.
fn with_negative_first_row(rng: &mut TestRng, a: &SymMatrix) -> SymMatrix {
    let n = a.n();
    let top = (1..n).map(|j| a.get(0, j)).fold(f64::NEG_INFINITY, f64::max);
    let shift = if top > -0.05 { top + rng.gen_range(0.05..1.0) } else { 0.0 };
    let pivot = rng.gen_range(0.2..3.0);
    SymMatrix::from_fn(n, |i, j| match (i, j) {
        (0, 0) => pivot,
        _ if i == j => a.get(i, i),
        _ => a.get(i, j) - shift,
    })
}

/// Relaxed-ordered matrix: an ordered matrix whose leading block is
/// replaced by arbitrary nonpositive entries, kept only if it passes the
/// class test. Falls back to an ordered matrix after repeated rejections.
pub fn rn_matrix(rng: &mut TestRng, n: usize, tol: &Tolerances) -> SymMatrix {
    for _ in 0..200 {
        let base = mn_matrix(rng, n);
        let k = rng.gen_range(2..=n);
        let mut v = base.as_slice().to_vec();
        for i in 0..k {
            for j in i + 1..k {
                let x = -rng.gen_range(0.0..3.0);
                v[i * n + j] = x;
                v[j * n + i] = x;
            }
        }
        let a = SymMatrix::from_row_major(n, &v).expect("symmetric");
        if is_rn(&a, tol) && !is_mn(&a, tol) {
            return a;
        }
    }
    mn_matrix(rng, n)
}

/// Relaxed-ordered matrix with a strictly negative first row and positive
/// first pivot. The first row is negative by construction when the leading
/// block spans the whole matrix, so rejection terminates quickly.
pub fn rn_negative_first_row(rng: &mut TestRng, n: usize, tol: &Tolerances) -> SymMatrix {
    loop {
        let a = rn_matrix(rng, n, tol);
        if (1..n).all(|j| a.get(0, j) < -tol.eps_ord) {
            let pivot = rng.gen_range(0.2..3.0);
            return SymMatrix::from_fn(n, |i, j| if (i, j) == (0, 0) { pivot } else { a.get(i, j) });
        }
    }
}

/// Copositive ordered matrix `A - (z* - t) E` with `t` in `[0, 1]`,
/// exactly on the boundary about a fifth of the time.
pub fn copositive_mn(rng: &mut TestRng, n: usize, tol: &Tolerances) -> SymMatrix {
    assert!(n <= MAX_ENUMERATION_DIM);
    let a = mn_matrix(rng, n);
    let (z, _, _) = simplex_minimum(&a, tol).expect("small n");
    let t = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..1.0) };
    a.shift_all(t - z)
}

pub fn separable_params(rng: &mut TestRng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let a = (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect();
    let b = (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect();
    (a, b)
}

/// Random permutation with diagonal entries log-uniform in `[1/5, 5]`.
pub fn group_element(rng: &mut TestRng, n: usize) -> GroupElement {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let diag = (0..n).map(|_| rng.gen_range(-1.6f64..1.6).exp()).collect();
    GroupElement::new(perm, diag).expect("valid")
}

/// Strictly diagonally dominant matrix with nonpositive off-diagonals.
pub fn dominant_z_matrix(rng: &mut TestRng, n: usize) -> SymMatrix {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let x = if rng.gen_bool(0.25) { 0.0 } else { -rng.gen_range(0.0..2.0) };
            v[i * n + j] = x;
            v[j * n + i] = x;
        }
    }
    for i in 0..n {
        let row: f64 = (0..n).filter(|&j| j != i).map(|j| -v[i * n + j]).sum();
        v[i * n + i] = row + rng.gen_range(0.01..1.0);
    }
    SymMatrix::from_row_major(n, &v).expect("symmetric")
}

/// Copositive `4 x 4` matrix: half are `B B^T + N` with `N` nonnegative,
/// half are sign-indefinite draws rejected until the exact test accepts.
pub fn copositive_4x4(rng: &mut TestRng, tol: &Tolerances) -> SymMatrix {
    let n = 4;
    if rng.gen_bool(0.5) {
        let b: Vec<f64> = (0..n * 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = SymMatrix::from_fn(n, |i, j| (0..2).map(|k| b[i * 2 + k] * b[j * 2 + k]).sum());
        let nn = symmetric(rng, n, 1.0).map(|x| x.max(0.0));
        return p.add(&nn);
    }
    loop {
        let a = symmetric(rng, n, 1.0);
        let a = a.add(&SymMatrix::diagonal(&[1.0; 4]));
        let (z, _, _) = simplex_minimum(&a, tol).expect("n = 4");
        if z >= 0.0 {
            return a;
        }
    }
}
