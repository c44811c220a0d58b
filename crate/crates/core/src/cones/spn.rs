use super::dnn::{self, DnnState, StopRule};
use super::{ConeError, DnnWitness, SpnCertificate, TraceStep};
use crate::eigen::{project_psd, project_psd_with_min};
use crate::matrix::SymMatrix;
use crate::tol::Tolerances;

/// Dykstra gives up once the residual fails to shrink by this factor over
/// one window.
const STALL_FACTOR: f64 = 0.9;
const STALL_WINDOW: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub enum SpnOutcome {
    Certificate(SpnCertificate),
    Witness(DnnWitness),
}

/// Information carried between related oracle calls, typically the probes
/// of a bisection over `Q - lambda E`.
///
/// Any PSD matrix `P` and any DNN matrix `X` remain meaningful for a new
/// input: `min(A - P)` bounds the DNN value from below, `A . X` from above.
#[derive(Debug, Clone, Default)]
pub struct OracleState {
    pub(crate) psd: Option<SymMatrix>,
    pub(crate) dnn: Option<SymMatrix>,
    pub(crate) admm: Option<DnnState>,
    pub(crate) dykstra_n: Option<SymMatrix>,
}

impl OracleState {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn absorb(&mut self, b: &dnn::DnnBounds, st: DnnState) {
        self.psd = Some(b.dual_psd.clone());
        self.dnn = Some(b.primal.clone());
        self.admm = Some(st);
    }
}

pub(crate) fn residual_limit(a: &SymMatrix, tol: &Tolerances) -> f64 {
    tol.eps_feas * (1.0 + a.frobenius_norm())
}

fn certificate(a: &SymMatrix, p: SymMatrix, n_part: SymMatrix, trace: Vec<TraceStep>) -> SpnCertificate {
    let residual = a.sub(&p).sub(&n_part).frobenius_norm();
    SpnCertificate {
        psd_part: p,
        nonneg_part: n_part,
        residual,
        trace,
    }
}

/// `A = P + max(A - P, 0)` up to the negative part of `A - P`.
fn certificate_from_psd(a: &SymMatrix, p: &SymMatrix, tol: &Tolerances) -> Option<SpnCertificate> {
    if p.n() != a.n() {
        return None;
    }
    let n_part = a.sub(p).map(|v| v.max(0.0));
    let cert = certificate(a, p.clone(), n_part, vec![TraceStep::BaseCase(a.n())]);
    (cert.residual <= residual_limit(a, tol)).then_some(cert)
}

fn witness_from_dnn(a: &SymMatrix, x: &SymMatrix, tol: &Tolerances) -> Option<DnnWitness> {
    if x.n() != a.n() {
        return None;
    }
    let objective = a.dot(x);
    (objective < -tol.eps_feas).then(|| DnnWitness {
        x: x.clone(),
        objective,
    })
}

fn trivial(a: &SymMatrix, tol: &Tolerances) -> Result<Option<SpnCertificate>, ConeError> {
    let n = a.n();
    if a.min_entry() >= 0.0 {
        return Ok(Some(certificate(a, SymMatrix::zeros(n), a.clone(), vec![TraceStep::BaseCase(n)])));
    }
    let (p, min_eig) = project_psd_with_min(a)?;
    if min_eig >= -tol.eps_psd {
        let cert = certificate(a, p, SymMatrix::zeros(n), vec![TraceStep::BaseCase(n)]);
        if cert.residual <= residual_limit(a, tol) {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Dykstra's alternating projections between `{N >= 0}` and
/// `{N : A - N is PSD}`. Returns the certificate if the residual closes, and
/// the last iterate for warm starts either way.
fn dykstra(
    a: &SymMatrix,
    start: SymMatrix,
    tol: &Tolerances,
) -> Result<(Option<SpnCertificate>, SymMatrix), ConeError> {
    let n = a.n();
    let limit = residual_limit(a, tol);
    let mut nn = start;
    let mut p_inc = SymMatrix::zeros(n);
    let mut q_inc = SymMatrix::zeros(n);
    let mut window_start = f64::INFINITY;
    for it in 1..=tol.max_iter {
        let z = nn.add(&p_inc);
        let y = a.sub(&project_psd(&a.sub(&z))?);
        p_inc = z.sub(&y);
        let z = y.add(&q_inc);
        nn = z.map(|v| v.max(0.0));
        q_inc = z.sub(&nn);

        if it % 10 == 0 {
            let p = project_psd(&a.sub(&nn))?;
            let cert = certificate(a, p, nn.clone(), vec![TraceStep::BaseCase(n)]);
            if cert.residual <= limit {
                return Ok((Some(cert), nn));
            }
            if it % STALL_WINDOW == 0 {
                if cert.residual > STALL_FACTOR * window_start {
                    break;
                }
                window_start = cert.residual;
            }
        }
    }
    Ok((None, nn))
}

/// Decides `A in SPN` with a checkable answer either way.
pub fn spn_oracle(a: &SymMatrix, tol: &Tolerances) -> Result<SpnOutcome, ConeError> {
    spn_oracle_with_state(a, tol, &mut OracleState::new())
}

/// [`spn_oracle`] that reads and refreshes `state`.
pub fn spn_oracle_with_state(
    a: &SymMatrix,
    tol: &Tolerances,
    state: &mut OracleState,
) -> Result<SpnOutcome, ConeError> {
    tol.validate()?;
    if let Some(cert) = trivial(a, tol)? {
        return Ok(SpnOutcome::Certificate(cert));
    }
    if let Some(cert) = state.psd.as_ref().and_then(|p| certificate_from_psd(a, p, tol)) {
        return Ok(SpnOutcome::Certificate(cert));
    }
    if let Some(w) = state.dnn.as_ref().and_then(|x| witness_from_dnn(a, x, tol)) {
        return Ok(SpnOutcome::Witness(w));
    }

    let start = match state.dykstra_n.take() {
        Some(nn) if nn.n() == a.n() => nn,
        _ => a.map(|v| v.max(0.0)),
    };
    let (cert, last) = dykstra(a, start, tol)?;
    state.dykstra_n = Some(last);
    if let Some(cert) = cert {
        state.psd = Some(cert.psd_part.clone());
        return Ok(SpnOutcome::Certificate(cert));
    }

    // The PSD part's negative mass bounds how far below zero the lower
    // bound may sit while still closing the residual.
    let n = a.n() as f64;
    let stop = StopRule {
        gap: 1e-3 * tol.eps_feas,
        lower_at_least: -residual_limit(a, tol) / (2.0 * n),
        upper_below: -2.0 * tol.eps_feas,
        max_iter: tol.witness_iter(),
    };
    let (bounds, st) = dnn::solve(a, state.admm.take(), stop)?;
    state.absorb(&bounds, st);
    if let Some(w) = witness_from_dnn(a, &bounds.primal, tol) {
        return Ok(SpnOutcome::Witness(w));
    }
    if let Some(cert) = certificate_from_psd(a, &bounds.dual_psd, tol) {
        return Ok(SpnOutcome::Certificate(cert));
    }
    Err(ConeError::Undecided {
        lower: bounds.lower,
        upper: bounds.upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::validate_certificate;
    use crate::fixtures;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn nonnegative_input() {
        let a = fixtures::five_cycle();
        let SpnOutcome::Certificate(c) = spn_oracle(&a, &t()).unwrap() else {
            panic!("expected certificate");
        };
        assert_eq!(c.psd_part, SymMatrix::zeros(5));
        assert_eq!(c.nonneg_part, a);
    }

    #[test]
    fn psd_input_with_negative_entry() {
        let a = fixtures::two_negative_rank_one(5);
        let SpnOutcome::Certificate(c) = spn_oracle(&a, &t()).unwrap() else {
            panic!("expected certificate");
        };
        assert_eq!(c.nonneg_part, SymMatrix::zeros(5));
        assert!(validate_certificate(&a, &c, &t()));
    }

    #[test]
    fn horn_gives_witness() {
        let a = fixtures::horn();
        let SpnOutcome::Witness(w) = spn_oracle(&a, &t()).unwrap() else {
            panic!("expected witness");
        };
        assert!(w.objective < -1e-6);
        assert!(w.is_valid_for(&a, &t()));
    }

    #[test]
    fn boundary_four_by_four() {
        // Copositive with simplex minimum exactly zero.
        let a = SymMatrix::from_rows(&[
            [1.0, -1.0, 0.0, 1.0],
            [-1.0, 1.0, 1.0, 1.0],
            [0.0, 1.0, 1.0, 1.0],
            [1.0, 1.0, 1.0, 1.0],
        ])
        .unwrap();
        let SpnOutcome::Certificate(c) = spn_oracle(&a, &t()).unwrap() else {
            panic!("expected certificate");
        };
        assert!(validate_certificate(&a, &c, &t()));
    }
}
