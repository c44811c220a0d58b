use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::SymMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("permutation is not a bijection on 0..{n}")]
    NotBijection { n: usize },
    #[error("diagonal entry {index} = {value} is not strictly positive")]
    NonPositiveDiag { index: usize, value: f64 },
    #[error("permutation has length {perm} but diagonal has length {diag}")]
    LengthMismatch { perm: usize, diag: usize },
}

/// An element `PD` of the group generated by permutation matrices and
/// positive diagonal matrices, acting on symmetric matrices by congruence
/// `g . X = (PD)^T X (PD)`.
///
/// Column `r` of `PD` holds `diag[r]` in row `perm[r]`, so
/// `(g . A)[r][s] = diag[r] * diag[s] * A[perm[r]][perm[s]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    perm: Vec<usize>,
    diag: Vec<f64>,
}

impl GroupElement {
    pub fn new(perm: Vec<usize>, diag: Vec<f64>) -> Result<Self, GroupError> {
        let n = perm.len();
        if diag.len() != n {
            return Err(GroupError::LengthMismatch {
                perm: n,
                diag: diag.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(GroupError::NotBijection { n });
            }
            seen[p] = true;
        }
        if let Some((index, &value)) = diag
            .iter()
            .enumerate()
            .find(|(_, d)| !(d.is_finite() && **d > 0.0))
        {
            return Err(GroupError::NonPositiveDiag { index, value });
        }
        Ok(GroupElement { perm, diag })
    }

    pub fn identity(n: usize) -> Self {
        GroupElement {
            perm: (0..n).collect(),
            diag: vec![1.0; n],
        }
    }

    pub fn permutation(perm: Vec<usize>) -> Result<Self, GroupError> {
        let n = perm.len();
        Self::new(perm, vec![1.0; n])
    }

    pub fn scaling(diag: Vec<f64>) -> Result<Self, GroupError> {
        Self::new((0..diag.len()).collect(), diag)
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// `g . A = (PD)^T A (PD)`.
    pub fn apply(&self, a: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n(), a.n(), "group element and matrix dimensions differ");
        SymMatrix::from_fn(a.n(), |r, s| {
            self.diag[r] * self.diag[s] * a.get(self.perm[r], self.perm[s])
        })
    }

    /// Matrix product `self * other`, so that
    /// `apply(self.compose(other), A) == other.apply(self.apply(A))`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.n(), other.n());
        let perm = other.perm.iter().map(|&p| self.perm[p]).collect();
        let diag = other
            .perm
            .iter()
            .zip(&other.diag)
            .map(|(&p, &d)| self.diag[p] * d)
            .collect();
        GroupElement { perm, diag }
    }

    /// The same element with its diagonal multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> GroupElement {
        assert!(c > 0.0);
        GroupElement {
            perm: self.perm.clone(),
            diag: self.diag.iter().map(|d| d * c).collect(),
        }
    }
}

pub fn apply_group(g: &GroupElement, a: &SymMatrix) -> SymMatrix {
    g.apply(a)
}
