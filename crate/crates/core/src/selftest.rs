//! Seeded property suites shared by the `selftest` command and the test
//! targets. Every suite reports its case count and failures instead of
//! panicking, so callers decide how to present them.

use rand::Rng;
use serde::Serialize;

use crate::classes::{is_mn, is_rn, positive_index};
use crate::cones::copositive_oracle;
use crate::linalg::inverse;
use crate::orbit::joint_orbit_search;
use crate::random::{self, TestRng};
use crate::signgraph::orbit_necessary_filter;
use crate::stqp::{build_separable, z_dnn_primal, z_spn_bisection, z_star_oracle, StqpInstance};
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Recorder {
    name: &'static str,
    cases: usize,
    failures: usize,
    first: Option<String>,
}

impl Recorder {
    fn new(name: &'static str) -> Self {
        Recorder {
            name,
            cases: 0,
            failures: 0,
            first: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(detail());
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first,
        }
    }
}

/// Ordered class membership ignores adding a multiple of `E`.
pub fn shift_invariance(rng: &mut TestRng, cases: usize, tol: &Tolerances) -> SuiteResult {
    let mut rec = Recorder::new("shift invariance of the ordered class");
    for c in 0..cases {
        let n = rng.gen_range(2..=8);
        let a = if c % 2 == 0 {
            random::mn_matrix(rng, n)
        } else {
            random::symmetric(rng, n, 3.0)
        };
        let lam = rng.gen_range(-10.0..10.0);
        let (x, y) = (is_mn(&a, tol), is_mn(&a.shift_all(lam), tol));
        rec.check(x == y, || format!("lambda = {lam}, before {x}, after {y}:\n{}", a.to_text()));
    }
    rec.finish()
}

/// Schur complements on a strictly negative first row stay ordered
/// (respectively relaxed-ordered), and the positive index drops by at most
/// one.
pub fn schur_closure(rng: &mut TestRng, cases: usize, tol: &Tolerances) -> SuiteResult {
    let mut rec = Recorder::new("Schur closure of ordered and relaxed-ordered classes");
    for c in 0..cases {
        let n = rng.gen_range(3..=8);
        if c % 2 == 0 {
            let a = random::mn_negative_first_row(rng, n);
            let ok = is_mn(&a, tol)
                && a.schur_complement(0, tol.eps_ord).is_ok_and(|s| is_mn(&s, tol));
            rec.check(ok, || format!("ordered:\n{}", a.to_text()));
        } else {
            let a = random::rn_negative_first_row(rng, n, tol);
            let ok = is_rn(&a, tol)
                && a.schur_complement(0, tol.eps_ord).is_ok_and(|s| {
                    is_rn(&s, tol) && positive_index(&s, tol) + 1 >= positive_index(&a, tol)
                });
            rec.check(ok, || format!("relaxed:\n{}", a.to_text()));
        }
    }
    rec.finish()
}

/// The copositivity verdict is invariant under the group action. Inputs
/// keep a margin from the boundary so rounding cannot flip the verdict.
pub fn group_equivariance(rng: &mut TestRng, cases: usize, tol: &Tolerances) -> SuiteResult {
    let mut rec = Recorder::new("group equivariance of copositivity");
    for _ in 0..cases {
        let n = rng.gen_range(2..=7);
        let base = random::symmetric(rng, n, 2.0);
        let z = copositive_oracle(&base, tol).expect("small").min_value;
        let margin = rng.gen_range(0.01..0.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let a = base.shift_all(margin - z);
        let g = random::group_element(rng, n);
        let x = copositive_oracle(&a, tol).expect("small").copositive;
        let y = copositive_oracle(&g.apply(&a), tol).expect("small").copositive;
        rec.check(x == y && x == (margin > 0.0), || {
            format!("verdicts {x} vs {y}, margin {margin}:\n{}", a.to_text())
        });
    }
    rec.finish()
}

/// `z_SPN <= z_DNN + 2e-6` and `z_DNN <= z* + 1e-6`.
pub fn weak_duality(rng: &mut TestRng, cases: usize, tol: &Tolerances) -> SuiteResult {
    let mut rec = Recorder::new("weak duality chain");
    for c in 0..cases {
        let n = rng.gen_range(2..=6);
        let inst = match c % 3 {
            0 => StqpInstance::raw(random::mn_matrix(rng, n)),
            1 => StqpInstance::raw(random::symmetric(rng, n, 2.0)),
            _ => {
                let (a, b) = random::separable_params(rng, n);
                build_separable(&a, &b).expect("lengths")
            }
        };
        let z_star = z_star_oracle(&inst, tol).map(|r| r.0);
        let z_dnn = z_dnn_primal(&inst, tol).map(|d| d.value);
        let z_spn = z_spn_bisection(&inst, tol).map(|b| b.value);
        let detail = format!("{z_spn:?} {z_dnn:?} {z_star:?}");
        let ok = match (z_spn, z_dnn, z_star) {
            (Ok(s), Ok(d), Ok(z)) => s <= d + 2e-6 && d <= z + 1e-6,
            _ => false,
        };
        rec.check(ok, || format!("{detail}\n{}", inst.q.to_text()));
    }
    rec.finish()
}

/// Orbit images of ordered matrices are found by the joint search, and their
/// sign graphs pass the threshold filter.
pub fn threshold_soundness(rng: &mut TestRng, cases: usize, tol: &Tolerances) -> SuiteResult {
    let mut rec = Recorder::new("threshold filter on orbit successes");
    for _ in 0..cases {
        let n = rng.gen_range(2..=6);
        let m = random::mn_matrix(rng, n);
        let a = random::group_element(rng, n).apply(&m);
        let ok = match joint_orbit_search(&a, tol) {
            Ok(r) => r.found && orbit_necessary_filter(&a, tol),
            Err(_) => false,
        };
        rec.check(ok, || a.to_text());
    }
    rec.finish()
}

/// Inverses of diagonally dominant Z-matrices are entrywise nonnegative.
pub fn m_matrix_inverse(rng: &mut TestRng, cases: usize, _tol: &Tolerances) -> SuiteResult {
    let mut rec = Recorder::new("M-matrix inverse nonnegativity");
    for _ in 0..cases {
        let n = rng.gen_range(1..=10);
        let a = random::dominant_z_matrix(rng, n);
        let ok = inverse(&a).is_some_and(|inv| inv.iter().all(|&v| v >= -1e-8));
        rec.check(ok, || a.to_text());
    }
    rec.finish()
}

pub type Suite = fn(&mut TestRng, usize, &Tolerances) -> SuiteResult;

pub const SUITES: [(&str, Suite); 6] = [
    ("shift", shift_invariance),
    ("schur", schur_closure),
    ("equivariance", group_equivariance),
    ("duality", weak_duality),
    ("threshold", threshold_soundness),
    ("mmatrix", m_matrix_inverse),
];

/// Runs every suite with `cases` cases, each from its own stream derived
/// from `seed`.
pub fn run_all(seed: u64, cases: usize, tol: &Tolerances) -> Vec<SuiteResult> {
    run_selected(seed, cases, tol, |_| true)
}

/// Like [`run_all`] but only for suites whose key passes `keep`. A suite's
/// stream does not depend on which others run.
pub fn run_selected(seed: u64, cases: usize, tol: &Tolerances, keep: impl Fn(&str) -> bool) -> Vec<SuiteResult> {
    SUITES
        .iter()
        .enumerate()
        .filter(|(_, (key, _))| keep(key))
        .map(|(k, (_, suite))| {
            let mut rng = random::rng(seed.wrapping_mul(1_000_003).wrapping_add(k as u64));
            suite(&mut rng, cases, tol)
        })
        .collect()
}
