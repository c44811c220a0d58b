use super::spn::{residual_limit, spn_oracle};
use super::{copositive_oracle, ConeError, SpnCertificate, SpnOutcome, TraceStep};
use crate::classes::{is_block_sign, is_mn, is_rn};
use crate::eigen::min_eigenvalue;
use crate::matrix::SymMatrix;
use crate::tol::Tolerances;

/// Builds `A = P + N` by stripping nonnegative rows and taking Schur
/// complements on nonpositive rows until at most four rows remain.
pub fn spn_decompose_recursive(a: &SymMatrix, tol: &Tolerances) -> Result<SpnCertificate, ConeError> {
    tol.validate()?;
    let n = a.n();
    let report = copositive_oracle(a, tol)?;
    if !report.copositive {
        return Err(ConeError::NotCopositive {
            min_value: report.min_value,
        });
    }
    let supported =
        n <= 4 || is_mn(a, tol) || is_rn(a, tol) || (1..n).any(|k| is_block_sign(a, k, tol));
    if !supported {
        return Err(ConeError::NotInSupportedClass {
            reason: "not ordered, not relaxed-ordered, no block sign split, and n > 4".into(),
        });
    }
    let mut trace = Vec::new();
    let orig: Vec<usize> = (0..n).collect();
    let (p, nn) = recurse(a, &orig, tol, &mut trace)?;
    let residual = a.sub(&p).sub(&nn).frobenius_norm();
    Ok(SpnCertificate {
        psd_part: p,
        nonneg_part: nn,
        residual,
        trace,
    })
}

fn recurse(
    a: &SymMatrix,
    orig: &[usize],
    tol: &Tolerances,
    trace: &mut Vec<TraceStep>,
) -> Result<(SymMatrix, SymMatrix), ConeError> {
    let n = a.n();
    if n <= 4 {
        trace.push(TraceStep::BaseCase(n));
        return match spn_oracle(a, tol)? {
            SpnOutcome::Certificate(c) => Ok((c.psd_part, c.nonneg_part)),
            SpnOutcome::Witness(w) => Err(ConeError::NotCopositive {
                min_value: w.objective,
            }),
        };
    }

    let off = |i: usize| (0..n).filter(move |&j| j != i).map(move |j| a.get(i, j));
    if let Some(i) = (0..n).rev().find(|&i| off(i).all(|v| v >= -tol.eps_ord)) {
        trace.push(TraceStep::StripRow(orig[i]));
        let sub_orig: Vec<usize> = orig.iter().copied().filter(|&k| k != orig[i]).collect();
        let (p, nn) = recurse(&a.delete_row_col(i)?, &sub_orig, tol, trace)?;
        let strip = SymMatrix::from_fn(n, |r, s| if r == i || s == i { a.get(r, s) } else { 0.0 });
        return Ok((p.embed_skipping(i), nn.embed_skipping(i).add(&strip)));
    }

    let pivot = (0..n).find(|&i| {
        a.get(i, i) > tol.eps_ord
            && off(i).all(|v| v <= tol.eps_ord)
            && off(i).any(|v| v < -tol.eps_ord)
    });
    let Some(i) = pivot else {
        return Err(ConeError::NotInSupportedClass {
            reason: format!("no nonnegative row and no usable pivot at size {n}"),
        });
    };
    trace.push(TraceStep::SchurStep(orig[i]));
    let sub_orig: Vec<usize> = orig.iter().copied().filter(|&k| k != orig[i]).collect();
    let s = a.schur_complement(i, tol.eps_ord)?;
    let (p, nn) = recurse(&s, &sub_orig, tol, trace)?;
    let aii = a.get(i, i);
    let row = a.row(i).to_vec();
    let rank_one = SymMatrix::from_fn(n, |r, c| row[r] * row[c] / aii);
    Ok((rank_one.add(&p.embed_skipping(i)), nn.embed_skipping(i)))
}

/// Re-checks a certificate against `a`: `P` PSD (relative to its size),
/// `N` nonnegative, and the residual recomputed from scratch.
pub fn validate_certificate(a: &SymMatrix, c: &SpnCertificate, tol: &Tolerances) -> bool {
    if c.psd_part.n() != a.n() || c.nonneg_part.n() != a.n() {
        return false;
    }
    let Ok(min_eig) = min_eigenvalue(&c.psd_part) else {
        return false;
    };
    let residual = a.sub(&c.psd_part).sub(&c.nonneg_part).frobenius_norm();
    min_eig >= -tol.eps_psd * c.psd_part.frobenius_norm().max(1.0)
        && c.nonneg_part.min_entry() >= -tol.eps_feas
        && residual <= residual_limit(a, tol)
}
