//! Dense real symmetric matrices and the shared plain-text encoding.
//!
//! The text encoding is a dimension `n` followed by `n*n` reals in row-major
//! order, separated by arbitrary whitespace. A `#` starts a comment that
//! runs to the end of the line. The writer emits 17 significant digits so a
//! written matrix reads back bit-for-bit.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Relative asymmetry above which construction is refused.
const ASYMMETRY_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix must have at least one row")]
    Empty,
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("entry ({i}, {j}) is not finite")]
    NonFinite { i: usize, j: usize },
    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {diff:e}")]
    Asymmetric { i: usize, j: usize, diff: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("index {index} out of bounds for dimension {n}")]
    IndexOutOfBounds { index: usize, n: usize },
    #[error("pivot a[{index}][{index}] = {value:e} is numerically zero")]
    ZeroPivot { index: usize, value: f64 },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("tolerances must be positive and max_iter at least 1")]
    InvalidTolerances,
}

/// A dense `n x n` real symmetric matrix stored row-major.
///
/// Symmetry holds exactly: constructors average `a[i][j]` and `a[j][i]`.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds a matrix from row-major entries, symmetrizing by `(A + A^T)/2`.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != n * n {
            return Err(MatrixError::WrongLength {
                expected: n * n,
                got: entries.len(),
            });
        }
        let mut scale = 1.0f64;
        for i in 0..n {
            for j in 0..n {
                let v = entries[i * n + j];
                if !v.is_finite() {
                    return Err(MatrixError::NonFinite { i, j });
                }
                scale = scale.max(v.abs());
            }
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = entries[i * n + i];
            for j in (i + 1)..n {
                let (a, b) = (entries[i * n + j], entries[j * n + i]);
                let diff = (a - b).abs();
                if diff > ASYMMETRY_TOL * scale {
                    return Err(MatrixError::Asymmetric { i, j, diff });
                }
                let v = if a == b { a } else { 0.5 * (a + b) };
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Ok(SymMatrix { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut flat = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(MatrixError::WrongLength {
                    expected: n,
                    got: r.len(),
                });
            }
            flat.extend_from_slice(r);
        }
        Self::from_row_major(n, &flat)
    }

    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle.
    ///
    /// Panics on non-finite values; meant for internal construction from
    /// already-validated data.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n > 0, "dimension must be positive");
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                assert!(v.is_finite(), "non-finite entry at ({i}, {j})");
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymMatrix { n, data }
    }

    /// Wraps a buffer already known to be symmetric and finite.
    pub(crate) fn from_vec_unchecked(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        SymMatrix { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| 0.0)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// The all-ones matrix `E`.
    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| 1.0)
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    /// `v v^T`.
    pub fn outer(v: &[f64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Iterator over `(i, j, a_ij)` for `i != j`.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| {
            (0..n)
                .filter(move |&j| j != i)
                .map(move |j| (i, j, self.get(i, j)))
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn min_diag(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).fold(f64::INFINITY, f64::min)
    }

    /// Smallest off-diagonal entry, `+inf` when `n == 1`.
    pub fn min_off_diagonal(&self) -> f64 {
        self.off_diagonal()
            .map(|(_, _, v)| v)
            .fold(f64::INFINITY, f64::min)
    }

    /// Trace inner product `A . B = sum_ij a_ij b_ij`.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Sum of all entries, i.e. `E . A`.
    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            let row = self.row(i);
            let mut s = 0.0;
            for j in 0..n {
                s += row[j] * x[j];
            }
            acc += x[i] * s;
        }
        acc
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &SymMatrix, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &SymMatrix) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SymMatrix) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// `A + lambda E`.
    pub fn shift_all(&self, lambda: f64) -> Self {
        self.map(|v| v + lambda)
    }

    /// `A + lambda I`.
    pub fn shift_diag(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += lambda;
        }
        out
    }

    pub fn is_nonnegative(&self, eps: f64) -> bool {
        self.data.iter().all(|&v| v >= -eps)
    }

    /// Principal submatrix on `indices`, in the given order.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |a, b| self.get(indices[a], indices[b]))
    }

    /// `A(i)`: the matrix with row and column `i` removed.
    pub fn delete_row_col(&self, i: usize) -> Result<Self, MatrixError> {
        if i >= self.n {
            return Err(MatrixError::IndexOutOfBounds {
                index: i,
                n: self.n,
            });
        }
        if self.n < 2 {
            return Err(MatrixError::Empty);
        }
        let keep: Vec<usize> = (0..self.n).filter(|&k| k != i).collect();
        Ok(self.principal_submatrix(&keep))
    }

    /// Schur complement with respect to the `1 x 1` pivot `a_ii`:
    /// `A(i) - v v^T / a_ii` where `v` is row `i` without its diagonal.
    pub fn schur_complement(&self, i: usize, eps_ord: f64) -> Result<Self, MatrixError> {
        if i >= self.n {
            return Err(MatrixError::IndexOutOfBounds {
                index: i,
                n: self.n,
            });
        }
        if self.n < 2 {
            return Err(MatrixError::Empty);
        }
        let pivot = self.get(i, i);
        if pivot.abs() <= eps_ord {
            return Err(MatrixError::ZeroPivot {
                index: i,
                value: pivot,
            });
        }
        let keep: Vec<usize> = (0..self.n).filter(|&k| k != i).collect();
        Ok(Self::from_fn(keep.len(), |a, b| {
            let (r, s) = (keep[a], keep[b]);
            self.get(r, s) - self.get(i, r) * self.get(i, s) / pivot
        }))
    }

    /// Inserts `self` into an `(n+1)`-dimensional zero matrix, leaving row and
    /// column `at` empty.
    pub fn embed_skipping(&self, at: usize) -> Self {
        let m = self.n + 1;
        let src = |k: usize| if k < at { k } else { k - 1 };
        Self::from_fn(m, |a, b| {
            if a == at || b == at {
                0.0
            } else {
                self.get(src(a), src(b))
            }
        })
    }

    /// Block-diagonal assembly.
    pub fn block_diagonal(blocks: &[SymMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for b in blocks {
            offsets.push(acc);
            acc += b.n;
        }
        Self::from_fn(n, |i, j| {
            for (b, &off) in blocks.iter().zip(&offsets) {
                if i >= off && i < off + b.n {
                    return if j >= off && j < off + b.n {
                        b.get(i - off, j - off)
                    } else {
                        0.0
                    };
                }
            }
            0.0
        })
    }

    /// Writes the shared text encoding with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the shared text encoding.
    pub fn from_text(text: &str) -> Result<Self, MatrixError> {
        let (n, entries) = read_counted(text, |n| n * n)?;
        Self::from_row_major(n, &entries).map_err(|e| MatrixError::Parse {
            line: 1,
            column: 1,
            message: e.to_string(),
        })
    }
}

/// A vector in the same encoding: a length `n`, then `n` reals.
pub fn vector_from_text(text: &str) -> Result<Vec<f64>, MatrixError> {
    read_counted(text, |n| n).map(|(_, v)| v)
}

fn read_counted(text: &str, count: impl Fn(usize) -> usize) -> Result<(usize, Vec<f64>), MatrixError> {
    let tokens = tokenize(text);
    let mut it = tokens.into_iter();
    let (line, column, tok) = it.next().ok_or(MatrixError::Parse {
        line: 1,
        column: 1,
        message: "empty input, expected dimension".into(),
    })?;
    let n: usize = tok.parse().map_err(|_| MatrixError::Parse {
        line,
        column,
        message: format!("invalid dimension '{tok}'"),
    })?;
    if n == 0 {
        return Err(MatrixError::Parse {
            line,
            column,
            message: "dimension must be positive".into(),
        });
    }
    let want = count(n);
    let mut entries = Vec::with_capacity(want);
    let mut last = (line, column + tok.len());
    for (line, column, tok) in it {
        if entries.len() == want {
            return Err(MatrixError::Parse {
                line,
                column,
                message: format!("unexpected extra value '{tok}' after {want} entries"),
            });
        }
        let v: f64 = tok.parse().map_err(|_| MatrixError::Parse {
            line,
            column,
            message: format!("invalid number '{tok}'"),
        })?;
        if !v.is_finite() {
            return Err(MatrixError::Parse {
                line,
                column,
                message: format!("non-finite value '{tok}'"),
            });
        }
        entries.push(v);
        last = (line, column + tok.len());
    }
    if entries.len() != want {
        return Err(MatrixError::Parse {
            line: last.0,
            column: last.1,
            message: format!("expected {want} entries, found {}", entries.len()),
        });
    }
    Ok((n, entries))
}

/// Splits into `(line, column, token)` triples, both 1-based, dropping
/// comments.
fn tokenize(text: &str) -> Vec<(usize, usize, &str)> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut start = None;
        for (idx, ch) in line.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push((ln + 1, s + 1, &line[s..idx]));
                }
            } else if start.is_none() {
                start = Some(idx);
            }
        }
        if let Some(s) = start {
            out.push((ln + 1, s + 1, &line[s..]));
        }
    }
    out
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:>10.4}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        SymMatrix::from_text(&text).map_err(serde::de::Error::custom)
    }
}
