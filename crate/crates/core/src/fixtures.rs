//! Named matrices used by the tests, the CLI self-test, and the files under
//! `fixtures/`.

use crate::matrix::SymMatrix;

/// The 5x5 Horn matrix: copositive but not a sum of a PSD and a nonnegative
/// matrix.
pub fn horn() -> SymMatrix {
    SymMatrix::from_rows(&[
        [1.0, -1.0, 1.0, 1.0, -1.0],
        [-1.0, 1.0, -1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0, 1.0, -1.0],
        [-1.0, 1.0, 1.0, -1.0, 1.0],
    ])
    .expect("horn")
}

/// Objective of a 5-variable standard quadratic program whose permuted form
/// has ordered off-diagonal entries; its simplex minimum is 1.
pub fn extraneous_q() -> SymMatrix {
    SymMatrix::from_rows(&[
        [2.0, 2.0, 2.0, 2.0, 2.0],
        [2.0, 2.0, 2.0, 2.0, 2.0],
        [2.0, 2.0, 2.0, 1.0, 2.0],
        [2.0, 2.0, 1.0, 2.0, 0.0],
        [2.0, 2.0, 2.0, 0.0, 2.0],
    ])
    .expect("extraneous q")
}

fn bordered_by_sqrt2(tail: [[f64; 5]; 5]) -> SymMatrix {
    let s = -std::f64::consts::SQRT_2;
    SymMatrix::from_fn(6, |i, j| match (i, j) {
        (0, 0) => 1.0,
        (0, _) | (_, 0) => s,
        _ => tail[i - 1][j - 1],
    })
}

/// 6x6 matrix whose Schur complement on the first pivot is the Horn matrix.
/// Its sign graphs are threshold, yet no group element maps it into the
/// ordered class.
pub fn sign_pattern_a() -> SymMatrix {
    bordered_by_sqrt2([
        [3.0, 1.0, 3.0, 3.0, 1.0],
        [1.0, 3.0, 1.0, 3.0, 3.0],
        [3.0, 1.0, 3.0, 1.0, 3.0],
        [3.0, 3.0, 1.0, 3.0, 1.0],
        [1.0, 3.0, 3.0, 1.0, 3.0],
    ])
}

/// Same sign pattern as [`sign_pattern_a`], with ordered off-diagonal
/// entries.
pub fn sign_pattern_b() -> SymMatrix {
    bordered_by_sqrt2([[3.0; 5]; 5])
}

/// Nonnegative matrix whose off-diagonal support is a 5-cycle.
pub fn five_cycle() -> SymMatrix {
    SymMatrix::from_rows(&[
        [1.0, 1.0, 0.0, 0.0, 1.0],
        [1.0, 1.0, 1.0, 0.0, 0.0],
        [0.0, 1.0, 1.0, 1.0, 0.0],
        [0.0, 0.0, 1.0, 1.0, 1.0],
        [1.0, 0.0, 0.0, 1.0, 1.0],
    ])
    .expect("five cycle")
}

/// 4x4 block sign-pattern matrix: nonpositive leading 2x2 block,
/// nonpositive row-ordered coupling block, ordered trailing block.
pub fn block_sign_example() -> SymMatrix {
    SymMatrix::from_rows(&[
        [1.0, -5.0, -3.0, -1.0],
        [-5.0, 1.0, -4.0, -2.0],
        [-3.0, -4.0, 1.0, 2.0],
        [-1.0, -2.0, 2.0, 1.0],
    ])
    .expect("block sign")
}

/// `v v^T` for `v = (-1, -1, 1, ..., 1)`: PSD, copositive, outside the cone
/// generated by the orbit.
pub fn two_negative_rank_one(n: usize) -> SymMatrix {
    assert!(n >= 4);
    let v: Vec<f64> = (0..n).map(|i| if i < 2 { -1.0 } else { 1.0 }).collect();
    SymMatrix::outer(&v)
}

/// `E_ij`: ones at `(i, j)` and `(j, i)`, zero elsewhere.
pub fn unit_pair(i: usize, j: usize, n: usize) -> SymMatrix {
    SymMatrix::from_fn(n, |r, c| if (r, c) == (i, j) || (r, c) == (j, i) { 1.0 } else { 0.0 })
}

/// Every named fixture with its file stem.
pub fn all() -> Vec<(&'static str, SymMatrix)> {
    vec![
        ("horn", horn()),
        ("extraneous_q", extraneous_q()),
        ("extraneous_q_minus_e", extraneous_q().shift_all(-1.0)),
        ("sign_pattern_a", sign_pattern_a()),
        ("sign_pattern_b", sign_pattern_b()),
        ("five_cycle", five_cycle()),
        ("block_sign", block_sign_example()),
        ("two_negative_rank_one_5", two_negative_rank_one(5)),
        ("identity_3", SymMatrix::identity(3)),
        ("ones_4", SymMatrix::ones(4)),
        ("generator_unit_pair", unit_pair(0, 2, 5)),
        ("generator_signed_vector", SymMatrix::outer(&[-1.0, 2.0, 0.5, 1.0, 3.0])),
        ("generator_plus_minus", SymMatrix::outer(&[1.0, 0.0, 0.0, -1.0, 0.0])),
    ]
}
