//! `min C . X` over doubly nonnegative `X` with `E . X = 1`.
//!
//! Splitting `X` (positive semidefinite) from `Y` (entrywise nonnegative,
//! entries summing to one) gives an ADMM scheme whose iterates yield two
//! bounds at every check:
//!
//! * an upper bound from `X + cE` rescaled onto the feasible set, and
//! * a lower bound `min_ij (C - P)` for the PSD dual matrix `P`, valid since
//!   `C - lambda E = P + N` with `N >= 0` makes `C . X >= lambda` on the
//!   feasible set.

use crate::eigen::sym_eigen;
use crate::matrix::{MatrixError, SymMatrix};

const RELAXATION: f64 = 1.6;
const CHECK_EVERY: usize = 10;
const BALANCE_EVERY: usize = 50;

/// Iterates kept between calls. `w` is the unscaled dual of `X = Y`
/// relative to the cost `c_ref`; re-targeting to a new cost keeps
/// `w + c_ref` fixed, which makes the iteration exact under `C -> C - tE`.
#[derive(Debug, Clone)]
pub struct DnnState {
    y: Vec<f64>,
    w: Vec<f64>,
    c_ref: Vec<f64>,
    rho: f64,
}

impl DnnState {
    pub fn n(&self) -> usize {
        (self.y.len() as f64).sqrt().round() as usize
    }
}

#[derive(Debug, Clone)]
pub struct DnnBounds {
    pub lower: f64,
    /// PSD matrix with `C - lower E - P >= 0` entrywise.
    pub dual_psd: SymMatrix,
    pub upper: f64,
    /// Doubly nonnegative, entries summing to one, `C . X = upper`.
    pub primal: SymMatrix,
    pub iterations: usize,
}

impl DnnBounds {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// When to stop before the gap closes.
#[derive(Debug, Clone, Copy)]
pub struct StopRule {
    pub gap: f64,
    /// Stop once `lower >= lower_at_least`.
    pub lower_at_least: f64,
    /// Stop once `upper < upper_below`.
    pub upper_below: f64,
    pub max_iter: usize,
}

impl StopRule {
    pub fn to_gap(gap: f64, max_iter: usize) -> Self {
        StopRule {
            gap,
            lower_at_least: f64::INFINITY,
            upper_below: f64::NEG_INFINITY,
            max_iter,
        }
    }
}

/// Euclidean projection of all entries onto `{y >= 0, sum y = 1}`.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &s) in sorted.iter().enumerate() {
        cum += s;
        let t = (cum - 1.0) / (k + 1) as f64;
        if s - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn dnn_from_psd(x: &SymMatrix) -> Option<SymMatrix> {
    let shift = (-x.min_entry()).max(0.0);
    let shifted = x.shift_all(shift);
    let total = shifted.sum();
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    Some(shifted.scale(1.0 / total))
}

fn fresh_state(c: &SymMatrix) -> DnnState {
    let n = c.n();
    let m = (n * n) as f64;
    DnnState {
        y: vec![1.0 / m; n * n],
        w: vec![0.0; n * n],
        c_ref: c.as_slice().to_vec(),
        rho: c.max_abs().max(1.0) * n as f64,
    }
}

/// Runs the splitting on cost `c`, optionally continuing from `state`.
pub fn solve(
    c: &SymMatrix,
    state: Option<DnnState>,
    stop: StopRule,
) -> Result<(DnnBounds, DnnState), MatrixError> {
    let n = c.n();
    let cs = c.as_slice();
    let mut st = match state {
        Some(mut s) if s.n() == n => {
            for k in 0..n * n {
                s.w[k] += s.c_ref[k] - cs[k];
            }
            s.c_ref = cs.to_vec();
            s
        }
        _ => fresh_state(c),
    };

    let e_over = SymMatrix::ones(n).scale(1.0 / (n * n) as f64);
    let mut best = DnnBounds {
        lower: c.min_entry(),
        dual_psd: SymMatrix::zeros(n),
        upper: c.dot(&e_over),
        primal: e_over,
        iterations: 0,
    };
    if n == 1 {
        best.lower = best.upper;
        return Ok((best, st));
    }

    let mut v = vec![0.0; n * n];
    let mut xhat = vec![0.0; n * n];
    for it in 1..=stop.max_iter {
        for k in 0..n * n {
            v[k] = st.y[k] - (st.w[k] + cs[k]) / st.rho;
        }
        let vm = SymMatrix::from_vec_unchecked(n, v.clone());
        let eig = sym_eigen(&vm)?;
        let x = eig.reconstruct_with(|l| l.max(0.0));
        let xs = x.as_slice();

        let check = it % CHECK_EVERY == 0 || it == stop.max_iter;
        if check {
            // rho (X - V) is PSD and equals C + W after convergence.
            let p = eig.reconstruct_with(|l| st.rho * (-l).max(0.0));
            let lower = c.sub(&p).min_entry();
            if lower > best.lower {
                best.lower = lower;
                best.dual_psd = p;
            }
            if let Some(xd) = dnn_from_psd(&x) {
                let upper = c.dot(&xd);
                if upper < best.upper {
                    best.upper = upper;
                    best.primal = xd;
                }
            }
            best.iterations = it;
            if best.gap() <= stop.gap
                || best.lower >= stop.lower_at_least
                || best.upper < stop.upper_below
            {
                break;
            }
        }

        for k in 0..n * n {
            xhat[k] = RELAXATION * xs[k] + (1.0 - RELAXATION) * st.y[k];
        }
        let arg: Vec<f64> = (0..n * n).map(|k| xhat[k] + st.w[k] / st.rho).collect();
        let y_new = project_simplex(&arg);
        let mut r_primal = 0.0;
        let mut r_dual = 0.0;
        for k in 0..n * n {
            st.w[k] += st.rho * (xhat[k] - y_new[k]);
            r_primal += (xs[k] - y_new[k]).powi(2);
            r_dual += (y_new[k] - st.y[k]).powi(2);
        }
        st.y = y_new;
        if it % BALANCE_EVERY == 0 {
            let (rp, rd) = (r_primal.sqrt(), st.rho * r_dual.sqrt());
            if rp > 10.0 * rd {
                st.rho *= 2.0;
            } else if rd > 10.0 * rp {
                st.rho /= 2.0;
            }
        }
    }
    Ok((best, st))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        for v in &p {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        let p = project_simplex(&[2.0, 0.0, -1.0]);
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
        let p = project_simplex(&[0.3, 0.1]);
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.4).abs() < 1e-15);
    }

    fn check_bounds(c: &SymMatrix, b: &DnnBounds) {
        assert!(crate::eigen::min_eigenvalue(&b.dual_psd).unwrap() >= -1e-9 * (1.0 + b.dual_psd.frobenius_norm()));
        assert!(c.sub(&b.dual_psd).shift_all(-b.lower).min_entry() >= -1e-12);
        assert!(crate::eigen::min_eigenvalue(&b.primal).unwrap() >= -1e-12);
        assert!(b.primal.min_entry() >= 0.0);
        assert!((b.primal.sum() - 1.0).abs() < 1e-12);
        assert!((c.dot(&b.primal) - b.upper).abs() < 1e-12);
    }

    #[test]
    fn ones_and_identity() {
        let c = SymMatrix::ones(3);
        let (b, _) = solve(&c, None, StopRule::to_gap(1e-10, 20_000)).unwrap();
        assert!((b.upper - 1.0).abs() < 1e-9 && (b.lower - 1.0).abs() < 1e-9);
        let c = SymMatrix::identity(2);
        let (b, _) = solve(&c, None, StopRule::to_gap(1e-10, 20_000)).unwrap();
        check_bounds(&c, &b);
        assert!((b.upper - 0.5).abs() < 1e-9, "{b:?}");
    }

    #[test]
    fn horn_value_is_negative() {
        let c = fixtures::horn();
        let (b, _) = solve(&c, None, StopRule::to_gap(1e-9, 50_000)).unwrap();
        check_bounds(&c, &b);
        assert!(b.gap() <= 1e-9, "{b:?}");
        assert!(b.upper < -1e-3, "{}", b.upper);
    }

    #[test]
    fn shift_warm_start_is_exact() {
        let c = fixtures::extraneous_q();
        let (b0, st) = solve(&c, None, StopRule::to_gap(1e-10, 50_000)).unwrap();
        assert!((b0.upper - 1.0).abs() < 1e-8, "{b0:?}");
        let shifted = c.shift_all(-0.25);
        let (b1, _) = solve(&shifted, Some(st), StopRule::to_gap(1e-10, 50_000)).unwrap();
        assert!((b1.upper - 0.75).abs() < 1e-8);
        assert!(b1.iterations <= 20, "{}", b1.iterations);
    }
}
