//! Copositivity, SPN membership and constructive SPN decompositions.

mod copositive;
mod decompose;
pub mod dnn;
mod spn;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{MatrixError, SymMatrix};

pub use copositive::{copositive_oracle, simplex_minimum, CopositivityReport, MAX_ENUMERATION_DIM};
pub use decompose::{spn_decompose_recursive, validate_certificate};
pub use spn::{spn_oracle, spn_oracle_with_state, OracleState, SpnOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("dimension {n} exceeds the enumeration limit {max}")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("neither an SPN certificate nor a DNN witness was found (best bounds [{lower:e}, {upper:e}])")]
    Undecided { lower: f64, upper: f64 },
    #[error("matrix is not copositive (simplex minimum {min_value:e})")]
    NotCopositive { min_value: f64 },
    #[error("matrix is not in a class the recursive decomposition handles: {reason}")]
    NotInSupportedClass { reason: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// One step of the recursive decomposition. Indices refer to rows of the
/// original input matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceStep {
    StripRow(usize),
    SchurStep(usize),
    BaseCase(usize),
}

/// `A = psd_part + nonneg_part` up to `residual` in Frobenius norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpnCertificate {
    pub psd_part: SymMatrix,
    pub nonneg_part: SymMatrix,
    pub residual: f64,
    pub trace: Vec<TraceStep>,
}

/// A doubly nonnegative `X` with `E . X = 1`; a negative `A . X` proves `A`
/// is not SPN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DnnWitness {
    #[serde(rename = "X")]
    pub x: SymMatrix,
    pub objective: f64,
}

impl DnnWitness {
    /// Re-checks PSD-ness, nonnegativity, normalization and the sign of the
    /// objective against `a`.
    pub fn is_valid_for(&self, a: &SymMatrix, tol: &crate::tol::Tolerances) -> bool {
        let Ok(min_eig) = crate::eigen::min_eigenvalue(&self.x) else {
            return false;
        };
        let objective = a.dot(&self.x);
        min_eig >= -tol.eps_psd
            && self.x.min_entry() >= -tol.eps_feas
            && (self.x.sum() - 1.0).abs() <= tol.eps_feas
            && objective < -tol.eps_feas
            && (objective - self.objective).abs() <= tol.eps_feas * (1.0 + a.max_abs())
    }
}
