use serde::{Deserialize, Serialize};

use crate::matrix::MatrixError;

/// Numerical slack used throughout the crate.
///
/// `eps_ord` governs every sign and ordering comparison in the class
/// predicates, `eps_psd` bounds how negative an eigenvalue may be for a
/// matrix still called positive semidefinite, `eps_feas` is the residual
/// accepted for decompositions and witnesses, and `eps_opt` is the width at
/// which bisections stop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub eps_ord: f64,
    pub eps_psd: f64,
    pub eps_feas: f64,
    pub eps_opt: f64,
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_ord: 1e-9,
            eps_psd: 1e-9,
            eps_feas: 1e-8,
            eps_opt: 1e-6,
            max_iter: 100_000,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), MatrixError> {
        let all = [self.eps_ord, self.eps_psd, self.eps_feas, self.eps_opt];
        if all.iter().any(|e| !(e.is_finite() && *e > 0.0)) || self.max_iter == 0 {
            return Err(MatrixError::InvalidTolerances);
        }
        Ok(())
    }

    /// Iteration cap for the witness search, half the general cap.
    pub fn witness_iter(&self) -> usize {
        (self.max_iter / 2).max(1)
    }
}
