//! Dense two-phase simplex for `min c^T x` subject to `G x >= h`, `x >= 0`.
//!
//! Bland's rule picks both the entering and the leaving variable, so the
//! method cannot cycle. Intended for a few hundred rows.

use thiserror::Error;

const PIVOT_TOL: f64 = 1e-11;
/// Phase one accepts infeasibility up to this much.
pub const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("simplex exceeded {0} pivots")]
    PivotLimit(usize),
    #[error("row {row} has {got} coefficients, expected {expected}")]
    Shape { row: usize, got: usize, expected: usize },
    #[error("non-finite coefficient in row {0}")]
    NonFinite(usize),
}

/// Inequality rows `coeffs . x >= rhs` over `vars` nonnegative variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub vars: usize,
    pub rows: Vec<(Vec<f64>, f64)>,
    pub objective: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible { phase_one_value: f64 },
    Unbounded,
}

struct Tableau {
    m: usize,
    cols: usize,
    // (m + 1) x (cols + 1), last row is the reduced-cost row, last column
    // the right-hand side.
    t: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * (self.cols + 1) + c]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.cols + 1;
        let p = self.t[r * w + c];
        for k in 0..w {
            self.t[r * w + k] /= p;
        }
        for i in 0..=self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * w + c];
            if f == 0.0 {
                continue;
            }
            for k in 0..w {
                self.t[i * w + k] -= f * self.t[r * w + k];
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes the cost row over columns `< allowed`. Returns `false` when
    /// unbounded.
    fn run(&mut self, allowed: usize, pivots: &mut usize, cap: usize) -> Result<bool, LpError> {
        loop {
            let Some(c) = (0..allowed).find(|&c| self.at(self.m, c) < -PIVOT_TOL) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, c);
                if a > PIVOT_TOL {
                    let ratio = self.at(r, self.cols) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((br, bv)) => {
                            if ratio < bv - 1e-12 || (ratio <= bv + 1e-12 && self.basis[r] < self.basis[br]) {
                                Some((r, ratio))
                            } else {
                                Some((br, bv))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.pivot(r, c);
            *pivots += 1;
            if *pivots > cap {
                return Err(LpError::PivotLimit(cap));
            }
        }
    }
}

pub fn solve(lp: &LpProblem, pivot_cap: usize) -> Result<LpOutcome, LpError> {
    let nv = lp.vars;
    let m = lp.rows.len();
    for (r, (coeffs, rhs)) in lp.rows.iter().enumerate() {
        if coeffs.len() != nv {
            return Err(LpError::Shape {
                row: r,
                got: coeffs.len(),
                expected: nv,
            });
        }
        if coeffs.iter().any(|v| !v.is_finite()) || !rhs.is_finite() {
            return Err(LpError::NonFinite(r));
        }
    }
    // Columns: structural, one surplus per row, one artificial per row with
    // a positive right-hand side.
    let needs_art: Vec<bool> = lp.rows.iter().map(|(_, h)| *h > 0.0).collect();
    let n_art = needs_art.iter().filter(|&&b| b).count();
    let cols = nv + m + n_art;
    let w = cols + 1;
    let mut tab = Tableau {
        m,
        cols,
        t: vec![0.0; (m + 1) * w],
        basis: vec![0; m],
    };
    let mut art = nv + m;
    for (r, (coeffs, rhs)) in lp.rows.iter().enumerate() {
        // g.x - s = h. Rows with h <= 0 are negated so the surplus is basic.
        let sign = if needs_art[r] { 1.0 } else { -1.0 };
        for (k, &g) in coeffs.iter().enumerate() {
            tab.t[r * w + k] = sign * g;
        }
        tab.t[r * w + nv + r] = -sign;
        tab.t[r * w + cols] = sign * rhs;
        if needs_art[r] {
            tab.t[r * w + art] = 1.0;
            tab.basis[r] = art;
            art += 1;
        } else {
            tab.basis[r] = nv + r;
        }
    }

    let mut pivots = 0;
    if n_art > 0 {
        // Phase one cost: sum of artificials, expressed in nonbasic terms.
        for r in 0..m {
            if needs_art[r] {
                for k in 0..w {
                    tab.t[m * w + k] -= tab.t[r * w + k];
                }
            }
        }
        for c in nv + m..cols {
            tab.t[m * w + c] = 0.0;
        }
        tab.run(cols, &mut pivots, pivot_cap)?;
        let phase_one_value = -tab.at(m, cols);
        if phase_one_value > FEAS_TOL {
            return Ok(LpOutcome::Infeasible { phase_one_value });
        }
        // Drive remaining artificials out of the basis where possible.
        for r in 0..m {
            if tab.basis[r] >= nv + m {
                if let Some(c) = (0..nv + m).find(|&c| tab.at(r, c).abs() > PIVOT_TOL) {
                    tab.pivot(r, c);
                }
            }
        }
    }

    // Phase two over structural and surplus columns only.
    for k in 0..w {
        tab.t[m * w + k] = 0.0;
    }
    for (k, &c) in lp.objective.iter().enumerate() {
        tab.t[m * w + k] = c;
    }
    for r in 0..m {
        let b = tab.basis[r];
        let cb = if b < nv { lp.objective[b] } else { 0.0 };
        if cb != 0.0 {
            for k in 0..w {
                tab.t[m * w + k] -= cb * tab.t[r * w + k];
            }
        }
    }
    if !tab.run(nv + m, &mut pivots, pivot_cap)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![0.0; nv];
    for r in 0..m {
        if tab.basis[r] < nv {
            x[tab.basis[r]] = tab.at(r, cols).max(0.0);
        }
    }
    let value = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
    Ok(LpOutcome::Optimal { x, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_optimum() {
        // min x + y  s.t.  x + 2y >= 2, 3x + y >= 3.
        let lp = LpProblem {
            vars: 2,
            rows: vec![(vec![1.0, 2.0], 2.0), (vec![3.0, 1.0], 3.0)],
            objective: vec![1.0, 1.0],
        };
        let LpOutcome::Optimal { x, value } = solve(&lp, 1000).unwrap() else {
            panic!()
        };
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 0.6).abs() < 1e-12);
        assert!((value - 1.4).abs() < 1e-12);
    }

    #[test]
    fn infeasible() {
        // x >= 2 and -x >= -1.
        let lp = LpProblem {
            vars: 1,
            rows: vec![(vec![1.0], 2.0), (vec![-1.0], -1.0)],
            objective: vec![1.0],
        };
        assert!(matches!(solve(&lp, 1000).unwrap(), LpOutcome::Infeasible { .. }));
    }

    #[test]
    fn unbounded() {
        let lp = LpProblem {
            vars: 1,
            rows: vec![(vec![1.0], 1.0)],
            objective: vec![-1.0],
        };
        assert_eq!(solve(&lp, 1000).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_rows_do_not_cycle() {
        // Many redundant constraints through the optimum.
        let mut rows = Vec::new();
        for k in 1..30 {
            let t = k as f64 / 30.0;
            rows.push((vec![t, 1.0 - t], 0.5));
        }
        let lp = LpProblem {
            vars: 2,
            rows,
            objective: vec![1.0, 1.0],
        };
        let LpOutcome::Optimal { value, .. } = solve(&lp, 10_000).unwrap() else {
            panic!()
        };
        assert!((value - 1.0).abs() < 1e-9, "{value}");
    }
}
