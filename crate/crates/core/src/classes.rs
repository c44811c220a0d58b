//! Entry-pattern predicates for the ordered matrix classes.
//!
//! All row and column indices are zero-based. Every inequality is tested
//! with slack `eps_ord`; "strictly negative" means `< -eps_ord` and
//! "positive" means `> eps_ord`.

use serde::{Deserialize, Serialize};

use crate::eigen::min_eigenvalue;
use crate::matrix::{MatrixError, SymMatrix};
use crate::tol::Tolerances;

/// A class membership established for a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", content = "detail")]
pub enum ClassLabel {
    /// Off-diagonal entries nondecreasing along rows and columns.
    Mn,
    /// Relaxed ordering; carries the positive index.
    Rn(usize),
    /// Block sign pattern; carries the size of the leading block.
    BlockSign(usize),
    /// Two ordered blocks overlapping in one row; carries the overlap row.
    AlmostBlock(usize),
    QMin,
    QPlus,
    QMinus,
    ZMatrix,
    Nonnegative,
}

/// Rows grouped by the signs of their off-diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowSignSummary {
    pub nonneg_rows: Vec<usize>,
    pub nonpos_rows: Vec<usize>,
    /// Rows in `nonpos_rows` that have at least one strictly negative entry.
    pub strictly_neg_rows: Vec<usize>,
}

/// `true` iff the off-diagonal entries of every row, read left to right, are
/// nondecreasing. By symmetry this is the full two-sided ordering.
pub fn is_mn(a: &SymMatrix, tol: &Tolerances) -> bool {
    let n = a.n();
    (0..n).all(|i| {
        let mut running_max = f64::NEG_INFINITY;
        for j in (0..n).filter(|&j| j != i) {
            let v = a.get(i, j);
            if running_max > v + tol.eps_ord {
                return false;
            }
            running_max = running_max.max(v);
        }
        true
    })
}

/// Positive index: the first row holding an off-diagonal entry above
/// `eps_ord`, or `n` when there is none.
pub fn positive_index(a: &SymMatrix, tol: &Tolerances) -> usize {
    let n = a.n();
    (0..n)
        .find(|&i| (0..n).any(|j| j != i && a.get(i, j) > tol.eps_ord))
        .unwrap_or(n)
}

/// Relaxed ordering class: positive entries are no larger than their right
/// and lower off-diagonal neighbours, and every row is nondecreasing to the
/// right of both the diagonal and the positive index.
pub fn is_rn(a: &SymMatrix, tol: &Tolerances) -> bool {
    let n = a.n();
    let eps = tol.eps_ord;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let v = a.get(i, j);
            if v <= eps {
                continue;
            }
            if i + 1 < n && i + 1 != j && v > a.get(i + 1, j) + eps {
                return false;
            }
            if j + 1 < n && j + 1 != i && v > a.get(i, j + 1) + eps {
                return false;
            }
        }
    }
    let k = positive_index(a, tol);
    for i in 0..n.saturating_sub(1) {
        let start = k.max(i + 1);
        for j in start..n.saturating_sub(1) {
            if a.get(i, j) > a.get(i, j + 1) + eps {
                return false;
            }
        }
    }
    true
}

/// Block sign pattern with a leading `k x k` block: nonpositive off-diagonal
/// leading block, nonpositive coupling block with nondecreasing rows, and an
/// ordered trailing block.
pub fn is_block_sign(a: &SymMatrix, k: usize, tol: &Tolerances) -> bool {
    let n = a.n();
    if k == 0 || k >= n {
        return false;
    }
    let eps = tol.eps_ord;
    for i in 0..k {
        for j in 0..k {
            if i != j && a.get(i, j) > eps {
                return false;
            }
        }
        let mut running_max = f64::NEG_INFINITY;
        for j in k..n {
            let v = a.get(i, j);
            if v > eps || running_max > v + eps {
                return false;
            }
            running_max = running_max.max(v);
        }
    }
    let trailing: Vec<usize> = (k..n).collect();
    is_mn(&a.principal_submatrix(&trailing), tol)
}

/// Two ordered blocks on rows `0..=k` and `k..n` overlapping in row `k`,
/// with a zero coupling between rows before `k` and rows after `k`.
pub fn is_almost_block(a: &SymMatrix, k: usize, tol: &Tolerances) -> bool {
    let n = a.n();
    if k == 0 || k + 1 >= n {
        return false;
    }
    for i in 0..k {
        for j in (k + 1)..n {
            if a.get(i, j).abs() > tol.eps_ord {
                return false;
            }
        }
    }
    let head: Vec<usize> = (0..=k).collect();
    let tail: Vec<usize> = (k..n).collect();
    is_mn(&a.principal_submatrix(&head), tol) && is_mn(&a.principal_submatrix(&tail), tol)
}

/// The global minimum entry sits on the diagonal.
pub fn is_qmin(a: &SymMatrix, tol: &Tolerances) -> bool {
    a.min_diag() <= a.min_entry() + tol.eps_ord
}

/// Orthonormal basis of the complement of `e`, as the last `n-1` columns of
/// the Householder reflector sending `e / sqrt(n)` to `-e_1`.
/// Returned row-major with shape `n x (n-1)`.
fn ones_complement_basis(n: usize) -> Vec<f64> {
    let u = 1.0 / (n as f64).sqrt();
    let mut w = vec![u; n];
    w[0] += 1.0;
    let ww: f64 = w.iter().map(|x| x * x).sum();
    let m = n - 1;
    let mut basis = vec![0.0; n * m];
    for i in 0..n {
        for c in 0..m {
            let col = c + 1;
            let delta = if i == col { 1.0 } else { 0.0 };
            basis[i * m + c] = delta - 2.0 * w[i] * w[col] / ww;
        }
    }
    basis
}

/// `d^T A d >= 0` for every `d` orthogonal to the all-ones vector.
pub fn is_qplus(a: &SymMatrix, tol: &Tolerances) -> Result<bool, MatrixError> {
    let n = a.n();
    if n == 1 {
        return Ok(true);
    }
    let m = n - 1;
    let v = ones_complement_basis(n);
    let av: Vec<f64> = (0..n)
        .flat_map(|i| {
            let v = &v;
            (0..m).map(move |c| (0..n).map(|k| a.get(i, k) * v[k * m + c]).sum::<f64>())
        })
        .collect();
    let reduced = SymMatrix::from_fn(m, |r, c| (0..n).map(|i| v[i * m + r] * av[i * m + c]).sum());
    Ok(min_eigenvalue(&reduced)? >= -tol.eps_psd)
}

/// `d^T A d <= 0` for every `d` orthogonal to the all-ones vector.
pub fn is_qminus(a: &SymMatrix, tol: &Tolerances) -> Result<bool, MatrixError> {
    is_qplus(&a.scale(-1.0), tol)
}

pub fn is_zmatrix(a: &SymMatrix, tol: &Tolerances) -> bool {
    a.off_diagonal().all(|(_, _, v)| v <= tol.eps_ord)
}

pub fn is_nonnegative(a: &SymMatrix, tol: &Tolerances) -> bool {
    a.is_nonnegative(tol.eps_ord)
}

pub fn row_sign_summary(a: &SymMatrix, tol: &Tolerances) -> RowSignSummary {
    let n = a.n();
    let eps = tol.eps_ord;
    let mut summary = RowSignSummary {
        nonneg_rows: Vec::new(),
        nonpos_rows: Vec::new(),
        strictly_neg_rows: Vec::new(),
    };
    for i in 0..n {
        let off = || (0..n).filter(move |&j| j != i).map(move |j| a.get(i, j));
        if off().all(|v| v >= -eps) {
            summary.nonneg_rows.push(i);
        }
        if off().all(|v| v <= eps) {
            summary.nonpos_rows.push(i);
            if off().any(|v| v < -eps) {
                summary.strictly_neg_rows.push(i);
            }
        }
    }
    summary
}

/// `true` iff every block passes the predicate given for its position.
pub fn block_diag_class(
    blocks: &[SymMatrix],
    mut predicate: impl FnMut(usize, &SymMatrix) -> bool,
) -> bool {
    blocks.iter().enumerate().all(|(i, b)| predicate(i, b))
}

/// Every label the matrix satisfies.
pub fn classify(a: &SymMatrix, tol: &Tolerances) -> Result<Vec<ClassLabel>, MatrixError> {
    let n = a.n();
    let mut labels = Vec::new();
    if is_mn(a, tol) {
        labels.push(ClassLabel::Mn);
    }
    if is_rn(a, tol) {
        labels.push(ClassLabel::Rn(positive_index(a, tol)));
    }
    labels.extend(
        (1..n)
            .filter(|&k| is_block_sign(a, k, tol))
            .map(ClassLabel::BlockSign),
    );
    labels.extend(
        (1..n.saturating_sub(1))
            .filter(|&k| is_almost_block(a, k, tol))
            .map(ClassLabel::AlmostBlock),
    );
    if is_qmin(a, tol) {
        labels.push(ClassLabel::QMin);
    }
    if is_qplus(a, tol)? {
        labels.push(ClassLabel::QPlus);
    }
    if is_qminus(a, tol)? {
        labels.push(ClassLabel::QMinus);
    }
    if is_zmatrix(a, tol) {
        labels.push(ClassLabel::ZMatrix);
    }
    if is_nonnegative(a, tol) {
        labels.push(ClassLabel::Nonnegative);
    }
    Ok(labels)
}
