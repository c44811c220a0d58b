//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use crate::matrix::{MatrixError, SymMatrix};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `A = V diag(values) V^T`, eigenvalues ascending.
///
/// `vectors` is row-major `n x n`; column `k` is the eigenvector for
/// `values[k]`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
    n: usize,
}

impl SymEigen {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.vectors[i * self.n + k]).collect()
    }

    /// `V diag(f(values)) V^T`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.n;
        let w: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        SymMatrix::from_fn(n, |i, j| {
            let (vi, vj) = (&self.vectors[i * n..(i + 1) * n], &self.vectors[j * n..(j + 1) * n]);
            let mut s = 0.0;
            for k in 0..n {
                if w[k] != 0.0 {
                    s += vi[k] * w[k] * vj[k];
                }
            }
            s
        })
    }
}

/// Eigen-decomposition by cyclic Jacobi rotations.
///
/// Sweeps stop once the off-diagonal Frobenius mass falls to machine
/// precision relative to `||A||_F`; `max_sweeps` bounds the work.
pub fn sym_eigen_with(a: &SymMatrix, max_sweeps: usize) -> Result<SymEigen, MatrixError> {
    let n = a.n();
    let mut m = a.as_slice().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = a.frobenius_norm();
    let target = f64::EPSILON * norm;
    let mut converged = n == 1 || norm == 0.0;
    let mut sweep = 0;
    while !converged {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum::<f64>()
            .sqrt()
            * std::f64::consts::SQRT_2;
        if off <= target {
            converged = true;
            break;
        }
        if sweep >= max_sweeps {
            break;
        }
        sweep += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (m[p * n + p], m[q * n + q]);
                // Skip rotations that no longer change the diagonal.
                let g = 100.0 * apq.abs();
                if sweep > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = m[k * n + p];
                        let akq = m[k * n + q];
                        let nkp = c * akp - s * akq;
                        let nkq = s * akp + c * akq;
                        m[k * n + p] = nkp;
                        m[p * n + k] = nkp;
                        m[k * n + q] = nkq;
                        m[q * n + k] = nkq;
                    }
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(MatrixError::NoConvergence { sweeps: max_sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[x * n + x].total_cmp(&m[y * n + y]));
    let values = order.iter().map(|&k| m[k * n + k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + dst] = v[i * n + src];
        }
    }
    Ok(SymEigen { values, vectors, n })
}

pub fn sym_eigen(a: &SymMatrix) -> Result<SymEigen, MatrixError> {
    sym_eigen_with(a, MAX_SWEEPS)
}

pub fn min_eigenvalue(a: &SymMatrix) -> Result<f64, MatrixError> {
    Ok(sym_eigen(a)?.min_value())
}

/// Frobenius-nearest positive semidefinite matrix: negative eigenvalues are
/// clamped to zero.
pub fn project_psd(a: &SymMatrix) -> Result<SymMatrix, MatrixError> {
    let eig = sym_eigen(a)?;
    if eig.min_value() >= 0.0 {
        return Ok(a.clone());
    }
    Ok(eig.reconstruct_with(|l| l.max(0.0)))
}

/// PSD projection together with the eigenvalues of the input, saving a
/// second decomposition when the caller needs both.
pub(crate) fn project_psd_with_min(a: &SymMatrix) -> Result<(SymMatrix, f64), MatrixError> {
    let eig = sym_eigen(a)?;
    let min = eig.min_value();
    if min >= 0.0 {
        return Ok((a.clone(), min));
    }
    Ok((eig.reconstruct_with(|l| l.max(0.0)), min))
}
