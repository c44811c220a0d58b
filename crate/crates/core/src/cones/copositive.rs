use serde::{Deserialize, Serialize};

use super::ConeError;
use crate::linalg::{solve_dense, solve_symmetric_min_norm};
use crate::matrix::SymMatrix;
use crate::tol::Tolerances;

/// Largest dimension accepted by the support enumeration.
pub const MAX_ENUMERATION_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopositivityReport {
    pub min_value: f64,
    pub minimizer: Vec<f64>,
    pub copositive: bool,
    pub faces_examined: u64,
}

/// Global minimum of `x^T A x` over the standard simplex, by enumerating
/// the stationary points of every face.
///
/// On the relative interior of a face `S` a minimizer satisfies
/// `A_S x_S = mu e`, `e^T x_S = 1`. Singular faces use the minimum-norm
/// solution; any stationary set they hide reaches a smaller face with the
/// same value, and the vertices are always evaluated.
pub fn simplex_minimum(a: &SymMatrix, tol: &Tolerances) -> Result<(f64, Vec<f64>, u64), ConeError> {
    let n = a.n();
    if n > MAX_ENUMERATION_DIM {
        return Err(ConeError::DimensionTooLarge {
            n,
            max: MAX_ENUMERATION_DIM,
        });
    }
    let mut best_val = f64::INFINITY;
    let mut best_x = vec![0.0; n];
    let mut faces = 0u64;

    for i in 0..n {
        let v = a.get(i, i);
        if v < best_val {
            best_val = v;
            best_x = vec![0.0; n];
            best_x[i] = 1.0;
        }
    }

    let mut support = Vec::with_capacity(n);
    let mut x = vec![0.0; n];
    for mask in 1u32..(1u32 << n) {
        faces += 1;
        if mask.count_ones() < 2 {
            continue;
        }
        support.clear();
        support.extend((0..n).filter(|&i| mask & (1 << i) != 0));
        let Some(xs) = face_stationary_point(a, &support) else {
            continue;
        };
        if xs.iter().any(|&v| v < -tol.eps_feas) {
            continue;
        }
        let total: f64 = xs.iter().map(|v| v.max(0.0)).sum();
        if total <= 0.0 {
            continue;
        }
        x.iter_mut().for_each(|v| *v = 0.0);
        for (&i, &v) in support.iter().zip(&xs) {
            x[i] = v.max(0.0) / total;
        }
        let val = a.quad_form(&x);
        if val < best_val {
            best_val = val;
            best_x.copy_from_slice(&x);
        }
    }
    Ok((best_val, best_x, faces))
}

fn face_stationary_point(a: &SymMatrix, support: &[usize]) -> Option<Vec<f64>> {
    let k = support.len();
    let m = k + 1;
    let mut sys = vec![0.0; m * m];
    for (r, &i) in support.iter().enumerate() {
        for (c, &j) in support.iter().enumerate() {
            sys[r * m + c] = a.get(i, j);
        }
        sys[r * m + k] = 1.0;
        sys[k * m + r] = 1.0;
    }
    let mut rhs = vec![0.0; m];
    rhs[k] = 1.0;
    let sol = match solve_dense(m, &sys, &rhs, 1e-12) {
        Some(s) => s,
        None => {
            let bordered = SymMatrix::from_row_major(m, &sys).ok()?;
            let s = solve_symmetric_min_norm(&bordered, &rhs)?;
            let sum: f64 = s[..k].iter().sum();
            if (sum - 1.0).abs() > 1e-6 {
                return None;
            }
            s
        }
    };
    if sol.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(sol[..k].to_vec())
}

/// Decides copositivity exactly (up to rounding) for `n <= 20`.
pub fn copositive_oracle(a: &SymMatrix, tol: &Tolerances) -> Result<CopositivityReport, ConeError> {
    let (min_value, minimizer, faces_examined) = simplex_minimum(a, tol)?;
    Ok(CopositivityReport {
        min_value,
        copositive: min_value >= -tol.eps_psd,
        minimizer,
        faces_examined,
    })
}
