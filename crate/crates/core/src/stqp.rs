//! Standard quadratic programs `min x^T Q x` over the simplex: the exact
//! value, the SPN and DNN relaxation values, and class-based certificates
//! that the relaxation is exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::{is_block_sign, is_mn, is_qmin, is_qminus, is_qplus, is_rn};
use crate::cones::dnn::{self, StopRule};
use crate::cones::{
    simplex_minimum, spn_oracle_with_state, ConeError, OracleState, SpnCertificate, SpnOutcome,
};
use crate::eigen::min_eigenvalue;
use crate::matrix::{MatrixError, SymMatrix};
use crate::orbit::permute_into_mn;
use crate::tol::Tolerances;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StqpError {
    #[error("alpha has length {alpha} but beta has length {beta}")]
    LengthMismatch { alpha: usize, beta: usize },
    #[error("bisection stopped on an undecided probe; value lies in [{lo:e}, {hi:e}]")]
    Undecided { lo: f64, hi: f64 },
    #[error("DNN solver stopped with bounds [{lower:e}, {upper:e}]")]
    NoConvergence { lower: f64, upper: f64 },
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    Raw,
    Separable { alpha: Vec<f64>, beta: Vec<f64> },
    Affine { q_tilde: SymMatrix, alpha: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StqpInstance {
    pub q: SymMatrix,
    pub provenance: Provenance,
}

impl StqpInstance {
    pub fn raw(q: SymMatrix) -> Self {
        StqpInstance {
            q,
            provenance: Provenance::Raw,
        }
    }

    pub fn n(&self) -> usize {
        self.q.n()
    }
}

/// `q(x) = sum 2 alpha_i x_i + beta_i x_i^2` as a quadratic form on the
/// simplex: off-diagonal `alpha_i + alpha_j`, diagonal `beta_i + 2 alpha_i`.
pub fn build_separable(alpha: &[f64], beta: &[f64]) -> Result<StqpInstance, StqpError> {
    if alpha.len() != beta.len() || alpha.is_empty() {
        return Err(StqpError::LengthMismatch {
            alpha: alpha.len(),
            beta: beta.len(),
        });
    }
    let q = SymMatrix::from_fn(alpha.len(), |i, j| {
        if i == j {
            beta[i] + 2.0 * alpha[i]
        } else {
            alpha[i] + alpha[j]
        }
    });
    Ok(StqpInstance {
        q,
        provenance: Provenance::Separable {
            alpha: alpha.to_vec(),
            beta: beta.to_vec(),
        },
    })
}

/// `x^T Q~ x + 2 alpha^T x` on the simplex, homogenized to
/// `Q = Q~ + alpha e^T + e alpha^T`.
pub fn build_affine(q_tilde: &SymMatrix, alpha: &[f64]) -> Result<StqpInstance, StqpError> {
    if q_tilde.n() != alpha.len() {
        return Err(StqpError::LengthMismatch {
            alpha: alpha.len(),
            beta: q_tilde.n(),
        });
    }
    let q = SymMatrix::from_fn(alpha.len(), |i, j| q_tilde.get(i, j) + alpha[i] + alpha[j]);
    Ok(StqpInstance {
        q,
        provenance: Provenance::Affine {
            q_tilde: q_tilde.clone(),
            alpha: alpha.to_vec(),
        },
    })
}

/// Exact `z*` and a minimizer, by enumerating faces of the simplex.
pub fn z_star_oracle(inst: &StqpInstance, tol: &Tolerances) -> Result<(f64, Vec<f64>), StqpError> {
    let (v, x, _) = simplex_minimum(&inst.q, tol)?;
    Ok((v, x))
}

/// Outcome of the SPN bisection. `lo` always carries a certificate;
/// `hi` is either the initial bracket end or carries a witness.
#[derive(Debug, Clone, PartialEq)]
pub struct SpnBisection {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub certificate_at_lo: Option<SpnCertificate>,
    pub probes: usize,
}

fn seed_state(q: &SymMatrix, tol: &Tolerances, state: &mut OracleState) -> Result<dnn::DnnBounds, StqpError> {
    let stop = StopRule::to_gap(1e-3 * tol.eps_opt * (1.0 + q.max_abs()), tol.max_iter);
    let (b, st) = dnn::solve(q, state.admm.take(), stop).map_err(ConeError::from)?;
    state.absorb(&b, st);
    Ok(b)
}

enum Probe {
    Spn(SpnCertificate),
    NotSpn,
    Undecided,
}

fn probe(a: &SymMatrix, tol: &Tolerances, state: &mut OracleState) -> Result<Probe, StqpError> {
    match spn_oracle_with_state(a, tol, state) {
        Ok(SpnOutcome::Certificate(c)) => Ok(Probe::Spn(c)),
        Ok(SpnOutcome::Witness(_)) => Ok(Probe::NotSpn),
        Err(ConeError::Undecided { .. }) => Ok(Probe::Undecided),
        Err(e) => Err(e.into()),
    }
}

/// `max { lambda : Q - lambda D in SPN }` by bisection, for `D` either `E`
/// or `I`. An undecided probe is retried a quarter width to each side; if
/// that fails too the bracket is returned as an error.
fn bisect(
    q: &SymMatrix,
    shift: &SymMatrix,
    mut lo: f64,
    mut hi: f64,
    tol: &Tolerances,
    state: &mut OracleState,
) -> Result<SpnBisection, StqpError> {
    let at = |lam: f64| q.sub(&shift.scale(lam));
    let mut cert = match probe(&at(lo), tol, state)? {
        Probe::Spn(c) => Some(c),
        _ => None,
    };
    let mut probes = 1;
    while hi - lo > tol.eps_opt {
        let mid = 0.5 * (lo + hi);
        probes += 1;
        match probe(&at(mid), tol, state)? {
            Probe::Spn(c) => {
                lo = mid;
                cert = Some(c);
            }
            Probe::NotSpn => hi = mid,
            Probe::Undecided => {
                let step = 0.25 * tol.eps_opt;
                let (a, b) = ((mid - step).max(lo), (mid + step).min(hi));
                probes += 2;
                match (probe(&at(a), tol, state)?, probe(&at(b), tol, state)?) {
                    (Probe::Spn(c), Probe::NotSpn) => {
                        lo = a;
                        hi = b;
                        cert = Some(c);
                    }
                    (Probe::Spn(_), Probe::Spn(c)) if b >= hi => {
                        lo = b;
                        cert = Some(c);
                    }
                    (Probe::NotSpn, _) if a <= lo => hi = a,
                    _ => return Err(StqpError::Undecided { lo, hi }),
                }
            }
        }
    }
    Ok(SpnBisection {
        value: 0.5 * (lo + hi),
        lo,
        hi,
        certificate_at_lo: cert,
        probes,
    })
}

/// `z_SPN = max { lambda : Q - lambda E in SPN }`.
pub fn z_spn_bisection(inst: &StqpInstance, tol: &Tolerances) -> Result<SpnBisection, StqpError> {
    z_spn_with_state(&inst.q, tol, &mut OracleState::new())
}

fn z_spn_with_state(q: &SymMatrix, tol: &Tolerances, state: &mut OracleState) -> Result<SpnBisection, StqpError> {
    tol.validate()?;
    if state.psd.is_none() {
        seed_state(q, tol, state)?;
    }
    let lo = q.min_entry();
    let hi = q.min_diag();
    bisect(q, &SymMatrix::ones(q.n()), lo, hi, tol, state)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DnnValue {
    pub value: f64,
    pub x: SymMatrix,
    /// Certified lower bound from the dual PSD matrix.
    pub lower: f64,
    pub iterations: usize,
}

/// `z_DNN = min { Q . X : E . X = 1, X doubly nonnegative }`; the value
/// returned is attained by the feasible `x`.
pub fn z_dnn_primal(inst: &StqpInstance, tol: &Tolerances) -> Result<DnnValue, StqpError> {
    z_dnn_with_state(&inst.q, tol, &mut OracleState::new())
}

fn z_dnn_with_state(q: &SymMatrix, tol: &Tolerances, state: &mut OracleState) -> Result<DnnValue, StqpError> {
    tol.validate()?;
    let b = seed_state(q, tol, state)?;
    if b.gap() > tol.eps_opt {
        return Err(StqpError::NoConvergence {
            lower: b.lower,
            upper: b.upper,
        });
    }
    Ok(DnnValue {
        value: b.upper,
        x: b.primal,
        lower: b.lower,
        iterations: b.iterations,
    })
}

/// Reasons the relaxation is known to be exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TightnessCertificate {
    /// `P^T Q P` is ordered for this permutation.
    MnPermuted { perm: Vec<usize> },
    Separable,
    QMin,
    QPlus,
    QMinus,
    /// `Q - z_SPN E` has the block sign pattern with this leading block.
    BlockSignShifted { k: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StqpReport {
    pub z_star: Option<f64>,
    pub minimizer: Option<Vec<f64>>,
    pub z_spn: f64,
    pub z_spn_interval: [f64; 2],
    pub z_spn_decided: bool,
    pub z_dnn: Option<f64>,
    pub gap: Option<f64>,
    pub tight: bool,
    pub certificates: Vec<TightnessCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spn_certificate: Option<SpnCertificate>,
}

/// Structural reasons for exactness, found independently of the numbers.
pub fn tightness_certificates(
    inst: &StqpInstance,
    z_spn: f64,
    tol: &Tolerances,
) -> Result<Vec<TightnessCertificate>, StqpError> {
    let q = &inst.q;
    let mut out = Vec::new();
    let r = permute_into_mn(q, tol);
    if let Some(g) = r.witness.filter(|g| is_mn(&g.apply(q), tol)) {
        out.push(TightnessCertificate::MnPermuted { perm: g.perm().to_vec() });
    }
    if matches!(inst.provenance, Provenance::Separable { .. }) {
        out.push(TightnessCertificate::Separable);
    }
    if is_qmin(q, tol) {
        out.push(TightnessCertificate::QMin);
    }
    if is_qplus(q, tol)? {
        out.push(TightnessCertificate::QPlus);
    }
    if is_qminus(q, tol)? {
        out.push(TightnessCertificate::QMinus);
    }
    let shifted = q.shift_all(-z_spn);
    if let Some(k) = (1..q.n()).find(|&k| is_block_sign(&shifted, k, tol)) {
        out.push(TightnessCertificate::BlockSignShifted { k });
    }
    Ok(out)
}

/// Computes `z*`, `z_SPN` and `z_DNN` and collects every applicable
/// exactness certificate. `z*` is skipped above the enumeration limit.
pub fn certify_tightness(inst: &StqpInstance, tol: &Tolerances) -> Result<StqpReport, StqpError> {
    tol.validate()?;
    let (z_star, minimizer) = match z_star_oracle(inst, tol) {
        Ok((v, x)) => (Some(v), Some(x)),
        Err(StqpError::Cone(ConeError::DimensionTooLarge { .. })) => (None, None),
        Err(e) => return Err(e),
    };
    let mut state = OracleState::new();
    let z_dnn = match z_dnn_with_state(&inst.q, tol, &mut state) {
        Ok(d) => Some(d.value),
        Err(StqpError::NoConvergence { .. }) => None,
        Err(e) => return Err(e),
    };
    let (z_spn, interval, decided, spn_certificate) = match z_spn_with_state(&inst.q, tol, &mut state) {
        Ok(b) => (b.value, [b.lo, b.hi], true, b.certificate_at_lo),
        Err(StqpError::Undecided { lo, hi }) => (0.5 * (lo + hi), [lo, hi], false, None),
        Err(e) => return Err(e),
    };
    let gap = z_star.map(|z| z - z_spn);
    let tight = decided && gap.is_some_and(|g| g <= tol.eps_opt);
    let certificates = tightness_certificates(inst, z_spn, tol)?;
    Ok(StqpReport {
        z_star,
        minimizer,
        z_spn,
        z_spn_interval: interval,
        z_spn_decided: decided,
        z_dnn,
        gap,
        tight,
        certificates,
        spn_certificate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereValue {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    /// The input is ordered or relaxed-ordered, so the value equals the
    /// minimum of `x^T Q x` over the nonnegative part of the unit sphere.
    pub exact: bool,
}

/// `max { lambda : Q - lambda I in SPN }`, bracketed by the least
/// eigenvalue (where `Q - lambda I` is PSD) and the least diagonal entry.
pub fn sphere_relaxation(q: &SymMatrix, tol: &Tolerances) -> Result<SphereValue, StqpError> {
    tol.validate()?;
    let lo = min_eigenvalue(q)?.min(q.min_diag());
    let hi = q.min_diag();
    let mut state = OracleState::new();
    let b = bisect(q, &SymMatrix::identity(q.n()), lo, hi, tol, &mut state)?;
    Ok(SphereValue {
        value: b.value,
        lo: b.lo,
        hi: b.hi,
        exact: is_mn(q, tol) || is_rn(q, tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn separable_construction() {
        let inst = build_separable(&[0.0; 3], &[1.0; 3]).unwrap();
        assert_eq!(inst.q, SymMatrix::identity(3));
        let inst = build_separable(&[1.0, 2.0], &[0.0, 0.0]).unwrap();
        assert_eq!(inst.q, SymMatrix::from_rows(&[[2.0, 3.0], [3.0, 4.0]]).unwrap());
        let inst = build_separable(&[-1.0, 0.5, 2.0, 3.0], &[1.0, -2.0, 0.0, 4.0]).unwrap();
        let r = permute_into_mn(&inst.q, &t());
        assert!(r.found);
        assert!(is_mn(&inst.q, &t()));
        assert!(build_separable(&[1.0], &[]).is_err());
    }

    #[test]
    fn affine_homogenization() {
        // x^T Q~ x + 2 alpha^T x equals x^T Q x on the simplex.
        let qt = SymMatrix::from_rows(&[[1.0, -2.0], [-2.0, 3.0]]).unwrap();
        let inst = build_affine(&qt, &[0.5, -1.0]).unwrap();
        let x = [0.3, 0.7];
        let direct = qt.quad_form(&x) + 2.0 * (0.5 * 0.3 - 0.7);
        assert!((inst.q.quad_form(&x) - direct).abs() < 1e-14);
    }

    #[test]
    fn z_star_examples() {
        let (v, x) = z_star_oracle(&StqpInstance::raw(SymMatrix::identity(4)), &t()).unwrap();
        assert!((v - 0.25).abs() < 1e-14);
        assert!(x.iter().all(|&xi| (xi - 0.25).abs() < 1e-12));
        let (v, _) = z_star_oracle(&StqpInstance::raw(fixtures::extraneous_q()), &t()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let (v, _) = z_star_oracle(&StqpInstance::raw(fixtures::horn()), &t()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn z_spn_examples() {
        let b = z_spn_bisection(&StqpInstance::raw(SymMatrix::ones(3)), &t()).unwrap();
        assert!((b.value - 1.0).abs() <= 1e-6);
        let b = z_spn_bisection(&StqpInstance::raw(fixtures::extraneous_q()), &t()).unwrap();
        assert!((b.value - 1.0).abs() <= 1e-5, "{b:?}");
        assert!(b.hi - b.lo <= 1e-6);
        let b = z_spn_bisection(&StqpInstance::raw(fixtures::horn()), &t()).unwrap();
        assert!(b.value < -1e-6, "{}", b.value);
    }

    #[test]
    fn z_dnn_examples() {
        let d = z_dnn_primal(&StqpInstance::raw(SymMatrix::ones(3)), &t()).unwrap();
        assert!((d.value - 1.0).abs() < 1e-9);
        let d = z_dnn_primal(&StqpInstance::raw(SymMatrix::identity(2)), &t()).unwrap();
        assert!((d.value - 0.5).abs() < 1e-7);
    }

    #[test]
    fn horn_is_not_tight() {
        let r = certify_tightness(&StqpInstance::raw(fixtures::horn()), &t()).unwrap();
        assert!(!r.tight);
        assert!(r.gap.unwrap() > 1e-6);
        assert!(r.certificates.is_empty(), "{:?}", r.certificates);
    }

    #[test]
    fn extraneous_is_tight() {
        let r = certify_tightness(&StqpInstance::raw(fixtures::extraneous_q()), &t()).unwrap();
        assert!(r.tight, "{r:?}");
        assert!(r
            .certificates
            .iter()
            .any(|c| matches!(c, TightnessCertificate::MnPermuted { .. })));
    }

    #[test]
    fn separable_example_is_tight() {
        let inst = build_separable(&[3.0, 1.0, 2.0], &[1.0, 1.0, 1.0]).unwrap();
        let r = certify_tightness(&inst, &t()).unwrap();
        assert!(r.tight, "{r:?}");
        assert!(r.certificates.contains(&TightnessCertificate::Separable));
    }

    #[test]
    fn sphere_examples() {
        let s = sphere_relaxation(&SymMatrix::identity(3), &t()).unwrap();
        assert!((s.value - 1.0).abs() <= 1e-6);
        let s = sphere_relaxation(&SymMatrix::diagonal(&[1.0, 4.0]), &t()).unwrap();
        assert!((s.value - 1.0).abs() <= 1e-6);
        let q = SymMatrix::from_rows(&[[2.0, 1.0, 0.5], [1.0, 3.0, 2.0], [0.5, 2.0, 1.0]]).unwrap();
        let s = sphere_relaxation(&q, &t()).unwrap();
        assert!(s.value >= min_eigenvalue(&q).unwrap() - 1e-6);
    }
}
