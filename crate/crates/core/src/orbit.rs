//! Membership in the orbit of the ordered class under permutations and
//! positive diagonal scalings, and the extreme-ray generators of its cone.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::is_mn;
use crate::group::GroupElement;
use crate::lp::{self, LpError, LpOutcome, LpProblem};
use crate::matrix::SymMatrix;
use crate::tol::Tolerances;

/// Largest dimension for the exhaustive permutation search.
pub const MAX_JOINT_DIM: usize = 8;
const PIVOT_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("dimension {n} exceeds the exhaustive search limit {max}")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("rescaling LP failed: {0}")]
    LpNumericalFailure(String),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

impl From<LpError> for OrbitError {
    fn from(e: LpError) -> Self {
        OrbitError::LpNumericalFailure(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitMethod {
    RescaleOnly,
    PermuteOnly,
    Joint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitResult {
    pub found: bool,
    #[serde(skip)]
    pub witness: Option<GroupElement>,
    pub method: OrbitMethod,
    /// Permutations accounted for by the joint search, tested or pruned.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutations_covered: Option<u64>,
}

impl OrbitResult {
    fn none(method: OrbitMethod) -> Self {
        OrbitResult {
            found: false,
            witness: None,
            method,
            permutations_covered: None,
        }
    }

    /// JSON document with `perm` and `diag` taken from the witness.
    pub fn to_json(&self) -> serde_json::Value {
        let (perm, diag) = match &self.witness {
            Some(g) => (serde_json::json!(g.perm()), serde_json::json!(g.diag())),
            None => (serde_json::Value::Null, serde_json::Value::Null),
        };
        let mut v = serde_json::json!({
            "found": self.found,
            "perm": perm,
            "diag": diag,
            "method": self.method,
        });
        if let Some(c) = self.permutations_covered {
            v["permutations_covered"] = c.into();
        }
        v
    }
}

/// The inequalities `d_k a_ik - d_j a_ij >= 0` for `j < k`, `i` distinct
/// from both, written in `u = d - 1 >= 0`.
pub fn rescale_lp(a: &SymMatrix) -> LpProblem {
    let n = a.n();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                if i == j || i == k {
                    continue;
                }
                let (aij, aik) = (a.get(i, j), a.get(i, k));
                if aij == 0.0 && aik == 0.0 {
                    continue;
                }
                let mut coeffs = vec![0.0; n];
                coeffs[k] += aik;
                coeffs[j] -= aij;
                rows.push((coeffs, aij - aik));
            }
        }
    }
    LpProblem {
        vars: n,
        rows,
        objective: vec![1.0; n],
    }
}

fn rescale_diag(a: &SymMatrix) -> Result<Option<Vec<f64>>, OrbitError> {
    match lp::solve(&rescale_lp(a), PIVOT_CAP)? {
        LpOutcome::Optimal { x, .. } => Ok(Some(x.iter().map(|u| 1.0 + u).collect())),
        LpOutcome::Infeasible { .. } => Ok(None),
        LpOutcome::Unbounded => Err(OrbitError::LpNumericalFailure("unbounded phase two".into())),
    }
}

/// Diagonal scaling `D` with `DAD` ordered, found by linear programming.
pub fn rescale_into_mn(a: &SymMatrix, tol: &Tolerances) -> Result<OrbitResult, OrbitError> {
    let Some(d) = rescale_diag(a)? else {
        return Ok(OrbitResult::none(OrbitMethod::RescaleOnly));
    };
    let g = GroupElement::scaling(d).map_err(|e| OrbitError::LpNumericalFailure(e.to_string()))?;
    if !is_mn(&g.apply(a), tol) {
        return Err(OrbitError::LpNumericalFailure(
            "LP solution does not order the scaled matrix".into(),
        ));
    }
    Ok(OrbitResult {
        found: true,
        witness: Some(g),
        method: OrbitMethod::RescaleOnly,
        permutations_covered: None,
    })
}

/// Arcs `j -> k` whenever some row forces `j` before `k`.
pub fn order_digraph(a: &SymMatrix, tol: &Tolerances) -> Vec<Vec<bool>> {
    let n = a.n();
    let mut arc = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if j != k && i != j && i != k && a.get(i, j) < a.get(i, k) - tol.eps_ord {
                    arc[j][k] = true;
                }
            }
        }
    }
    arc
}

/// Permutation `P` with `P^T A P` ordered: any topological order of the
/// forcing digraph, smallest index first among ready vertices.
pub fn permute_into_mn(a: &SymMatrix, tol: &Tolerances) -> OrbitResult {
    let n = a.n();
    let arc = order_digraph(a, tol);
    let mut indeg: Vec<usize> = (0..n).map(|k| (0..n).filter(|&j| arc[j][k]).count()).collect();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let Some(v) = (0..n).find(|&v| !done[v] && indeg[v] == 0) else {
            return OrbitResult::none(OrbitMethod::PermuteOnly);
        };
        done[v] = true;
        order.push(v);
        for k in 0..n {
            if arc[v][k] {
                indeg[k] -= 1;
            }
        }
    }
    let g = GroupElement::permutation(order).expect("topological order is a permutation");
    OrbitResult {
        found: true,
        witness: Some(g),
        method: OrbitMethod::PermuteOnly,
        permutations_covered: None,
    }
}

fn sign(v: f64, eps: f64) -> i8 {
    if v > eps {
        1
    } else if v < -eps {
        -1
    } else {
        0
    }
}

struct JointSearch<'a> {
    a: &'a SymMatrix,
    s: Vec<Vec<i8>>,
    tol: &'a Tolerances,
    prefix: Vec<usize>,
    used: Vec<bool>,
    covered: u64,
    fact: Vec<u64>,
}

impl JointSearch<'_> {
    /// Scaling preserves signs, so every row of an ordered matrix reads
    /// negative, zero, positive from left to right. Checks the rows placed so
    /// far, including against the columns still to come.
    fn prefix_ok(&self) -> bool {
        let n = self.a.n();
        let m = self.prefix.len();
        for r in 0..m {
            let i = self.prefix[r];
            let mut max_sign = -1;
            for c in 0..m {
                if c == r {
                    continue;
                }
                let sg = self.s[i][self.prefix[c]];
                if sg < max_sign {
                    return false;
                }
                max_sign = sg;
            }
            if (0..n).any(|u| !self.used[u] && self.s[i][u] < max_sign) {
                return false;
            }
        }
        true
    }

    fn run(&mut self) -> Result<Option<GroupElement>, OrbitError> {
        let n = self.a.n();
        let m = self.prefix.len();
        if m == n {
            self.covered += 1;
            let g = GroupElement::permutation(self.prefix.clone()).expect("bijection");
            let b = g.apply(self.a);
            if let Some(d) = rescale_diag(&b)? {
                let h = g.compose(&GroupElement::scaling(d).expect("d >= 1"));
                if is_mn(&h.apply(self.a), self.tol) {
                    return Ok(Some(h));
                }
            }
            return Ok(None);
        }
        for v in 0..n {
            if self.used[v] {
                continue;
            }
            self.prefix.push(v);
            self.used[v] = true;
            if self.prefix_ok() {
                if let Some(g) = self.run()? {
                    return Ok(Some(g));
                }
            } else {
                self.covered += self.fact[n - m - 1];
            }
            self.prefix.pop();
            self.used[v] = false;
        }
        Ok(None)
    }
}

/// Exhaustive search over permutations, each followed by the rescaling LP.
/// Prefixes whose sign pattern cannot be ordered are pruned whole.
pub fn joint_orbit_search(a: &SymMatrix, tol: &Tolerances) -> Result<OrbitResult, OrbitError> {
    let n = a.n();
    if n > MAX_JOINT_DIM {
        return Err(OrbitError::DimensionTooLarge {
            n,
            max: MAX_JOINT_DIM,
        });
    }
    let s = (0..n)
        .map(|i| (0..n).map(|j| sign(a.get(i, j), tol.eps_ord)).collect())
        .collect();
    let mut fact = vec![1u64; n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1] * k as u64;
    }
    let mut search = JointSearch {
        a,
        s,
        tol,
        prefix: Vec::with_capacity(n),
        used: vec![false; n],
        covered: 0,
        fact,
    };
    let witness = search.run()?;
    Ok(OrbitResult {
        found: witness.is_some(),
        witness,
        method: OrbitMethod::Joint,
        permutations_covered: Some(search.covered),
    })
}

/// Extreme rays of the SPN cone that lie in the cone generated by the orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum KnGenerator {
    /// `E_ij`: ones at `(i, j)` and `(j, i)`.
    UnitPair { i: usize, j: usize, n: usize },
    /// `v v^T` with no zero entry and at most one negative entry in `v` or
    /// in `-v`.
    RankOneSignedVector(Vec<f64>),
    /// `v v^T` with `v_i = 1`, `v_j = -1`, other entries zero.
    RankOnePlusMinus { i: usize, j: usize, n: usize },
}

pub fn kn_generator(kind: &KnGenerator) -> Result<SymMatrix, OrbitError> {
    let pair = |i: usize, j: usize, n: usize| {
        if n < 2 || i >= n || j >= n || i == j {
            Err(OrbitError::InvalidParams(format!(
                "need distinct indices below n >= 2, got ({i}, {j}) with n = {n}"
            )))
        } else {
            Ok(())
        }
    };
    match kind {
        KnGenerator::UnitPair { i, j, n } => {
            pair(*i, *j, *n)?;
            Ok(SymMatrix::from_fn(*n, |r, s| {
                if (r, s) == (*i, *j) || (r, s) == (*j, *i) {
                    1.0
                } else {
                    0.0
                }
            }))
        }
        KnGenerator::RankOneSignedVector(v) => {
            if v.is_empty() || v.iter().any(|x| !x.is_finite() || *x == 0.0) {
                return Err(OrbitError::InvalidParams(
                    "vector must be nonempty with finite nonzero entries".into(),
                ));
            }
            let neg = v.iter().filter(|x| **x < 0.0).count();
            if neg > 1 && v.len() - neg > 1 {
                return Err(OrbitError::InvalidParams(format!(
                    "v has {neg} negative and {} positive entries",
                    v.len() - neg
                )));
            }
            Ok(SymMatrix::outer(v))
        }
        KnGenerator::RankOnePlusMinus { i, j, n } => {
            pair(*i, *j, *n)?;
            let mut v = vec![0.0; *n];
            v[*i] = 1.0;
            v[*j] = -1.0;
            Ok(SymMatrix::outer(&v))
        }
    }
}
