//! Small dense solvers used by the simplex enumeration and the test suites.

use crate::eigen::sym_eigen;
use crate::matrix::SymMatrix;

/// LU factorization with partial pivoting of a row-major square matrix.
struct Lu {
    n: usize,
    lu: Vec<f64>,
    piv: Vec<usize>,
    sign: f64,
    min_pivot: f64,
}

fn lu_factor(n: usize, a: &[f64]) -> Lu {
    let mut lu = a.to_vec();
    let mut piv: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let mut p = k;
        let mut best = lu[k * n + k].abs();
        for r in (k + 1)..n {
            let v = lu[r * n + k].abs();
            if v > best {
                best = v;
                p = r;
            }
        }
        min_pivot = min_pivot.min(best);
        if p != k {
            for c in 0..n {
                lu.swap(k * n + c, p * n + c);
            }
            piv.swap(k, p);
            sign = -sign;
        }
        let d = lu[k * n + k];
        if d == 0.0 {
            continue;
        }
        for r in (k + 1)..n {
            let f = lu[r * n + k] / d;
            lu[r * n + k] = f;
            if f != 0.0 {
                for c in (k + 1)..n {
                    lu[r * n + c] -= f * lu[k * n + c];
                }
            }
        }
    }
    Lu {
        n,
        lu,
        piv,
        sign,
        min_pivot,
    }
}

impl Lu {
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] -= self.lu[i * n + k] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                x[i] -= self.lu[i * n + k] * x[k];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

/// Solves a general square system; `None` when a pivot falls below
/// `rel_tol` times the largest entry.
pub fn solve_dense(n: usize, a: &[f64], b: &[f64], rel_tol: f64) -> Option<Vec<f64>> {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    let lu = lu_factor(n, a);
    if lu.min_pivot <= rel_tol * scale {
        return None;
    }
    Some(lu.solve(b))
}

/// Minimum-norm least-squares solution of a symmetric system via the
/// eigenvalue pseudo-inverse.
pub fn solve_symmetric_min_norm(a: &SymMatrix, b: &[f64]) -> Option<Vec<f64>> {
    let eig = sym_eigen(a).ok()?;
    let n = a.n();
    let cutoff = 1e-10 * eig.values.iter().fold(0.0f64, |m, l| m.max(l.abs())).max(1e-300);
    let mut x = vec![0.0; n];
    for k in 0..n {
        let l = eig.values[k];
        if l.abs() <= cutoff {
            continue;
        }
        let vk = eig.vector(k);
        let coef = vk.iter().zip(b).map(|(v, bi)| v * bi).sum::<f64>() / l;
        for i in 0..n {
            x[i] += coef * vk[i];
        }
    }
    Some(x)
}

pub fn determinant(a: &SymMatrix) -> f64 {
    let n = a.n();
    let lu = lu_factor(n, a.as_slice());
    (0..n).fold(lu.sign, |acc, i| acc * lu.lu[i * n + i])
}

/// Dense inverse as a row-major buffer; `None` if numerically singular.
pub fn inverse(a: &SymMatrix) -> Option<Vec<f64>> {
    let n = a.n();
    let scale = a.max_abs();
    let lu = lu_factor(n, a.as_slice());
    if scale == 0.0 || lu.min_pivot <= 1e-14 * scale {
        return None;
    }
    let mut inv = vec![0.0; n * n];
    let mut e = vec![0.0; n];
    for c in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[c] = 1.0;
        let col = lu.solve(&e);
        for r in 0..n {
            inv[r * n + c] = col[r];
        }
    }
    Some(inv)
}
