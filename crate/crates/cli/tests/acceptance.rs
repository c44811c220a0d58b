//! End-to-end checks on the named fixtures and randomized families. Runs
//! without the test harness so every line is printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use copos_core::classes::is_mn;
use copos_core::cones::{copositive_oracle, spn_oracle, validate_certificate, SpnOutcome};
use copos_core::orbit::{joint_orbit_search, kn_generator, permute_into_mn, KnGenerator};
use copos_core::signgraph::orbit_necessary_filter;
use copos_core::stqp::{build_separable, z_dnn_primal, z_spn_bisection, z_star_oracle, StqpInstance};
use copos_core::{fixtures, random, Tolerances};
use rand::Rng;
use serde_json::Value;

type Check = Result<String, String>;

/// Criterion number, check, time limit in seconds.
type Criterion = (u32, fn() -> Check, u64);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.txt"))
        .to_string_lossy()
        .into_owned()
}

fn copos(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_copos")).args(args).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v)
}

fn extraneous() -> Check {
    let (code, v) = copos(&["stqp", &fixture("extraneous_q")]);
    ensure(code == 0, || format!("stqp exit {code}"))?;
    let z = v["z_spn"].as_f64().ok_or("no z_spn")?;
    ensure((z - 1.0).abs() <= 1e-5, || format!("z_spn = {z}"))?;
    ensure(v["tight"] == true, || "not tight".into())?;
    let q = fixtures::extraneous_q();
    let t = Tolerances::default();
    let g = permute_into_mn(&q, &t).witness.ok_or("no permutation")?;
    ensure(is_mn(&g.apply(&q), &t), || "permuted matrix not ordered".into())?;
    Ok(format!("z_spn = {z:.9}, perm {:?}", g.perm()))
}

fn horn() -> Check {
    let t = Tolerances::default();
    let h = fixtures::horn();
    let c = copositive_oracle(&h, &t).map_err(|e| e.to_string())?;
    ensure(c.copositive && c.min_value.abs() <= 1e-8, || format!("{c:?}"))?;
    let w = match spn_oracle(&h, &t) {
        Ok(SpnOutcome::Witness(w)) => w,
        other => return Err(format!("expected witness, got {other:?}")),
    };
    ensure(w.objective < -1e-6 && w.is_valid_for(&h, &t), || format!("objective {}", w.objective))?;
    let inst = StqpInstance::raw(h);
    let z_spn = z_spn_bisection(&inst, &t).map_err(|e| e.to_string())?.value;
    let z_star = z_star_oracle(&inst, &t).map_err(|e| e.to_string())?.0;
    ensure(z_spn < -1e-6 && z_star == 0.0, || format!("z_spn {z_spn}, z_star {z_star}"))?;
    // Closed form of the doubly nonnegative bound for this matrix.
    let exact = 2.0 / 5f64.sqrt() - 1.0;
    ensure((z_spn - exact).abs() <= 2.0 * t.eps_opt, || format!("z_spn {z_spn} vs {exact}"))?;
    Ok(format!("witness objective {:.3e}, z_spn = {z_spn:.9}", w.objective))
}

fn sign_patterns() -> Check {
    let t = Tolerances::default();
    let a = fixtures::sign_pattern_a();
    let s = a.schur_complement(0, t.eps_ord).map_err(|e| e.to_string())?;
    let diff = s.sub(&fixtures::horn()).max_abs();
    ensure(diff <= 1e-12, || format!("Schur complement differs by {diff:e}"))?;
    let (code, _) = copos(&["decompose", &fixture("sign_pattern_a")]);
    ensure(code == 1, || format!("decompose A exit {code}"))?;
    let (code, v) = copos(&["orbit", &fixture("sign_pattern_a")]);
    ensure(code == 1 && v["found"] == false, || format!("orbit A exit {code}"))?;
    ensure(orbit_necessary_filter(&a, &t), || "filter rejects A".into())?;
    ensure(is_mn(&fixtures::sign_pattern_b(), &t), || "B not ordered".into())?;
    let (code, _) = copos(&["decompose", &fixture("sign_pattern_b")]);
    ensure(code == 0, || format!("decompose B exit {code}"))?;
    Ok("A: witness, no orbit, filter passes; B: certificate".into())
}

fn separable() -> Check {
    let t = Tolerances::default();
    let mut rng = random::rng(0);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..200 {
        let n = rng.gen_range(3..=10);
        let (alpha, beta) = random::separable_params(&mut rng, n);
        let inst = build_separable(&alpha, &beta).map_err(|e| e.to_string())?;
        let z = z_star_oracle(&inst, &t).map_err(|e| e.to_string())?.0;
        let s = z_spn_bisection(&inst, &t).map_err(|e| format!("instance {k}: {e}"))?.value;
        worst = worst.max(z - s);
        ensure(z - s <= 1e-5, || format!("instance {k}: z* - z_spn = {:e}", z - s))?;
    }
    Ok(format!("worst z* - z_spn = {worst:.2e}"))
}

fn small_copositive() -> Check {
    let t = Tolerances::default();
    let mut rng = random::rng(0);
    for k in 0..500 {
        let a = random::copositive_4x4(&mut rng, &t);
        let c = copositive_oracle(&a, &t).map_err(|e| e.to_string())?;
        ensure(c.copositive, || format!("matrix {k} not copositive"))?;
        match spn_oracle(&a, &t) {
            Ok(SpnOutcome::Certificate(cert)) if validate_certificate(&a, &cert, &t) => {}
            other => return Err(format!("matrix {k}: {other:?}")),
        }
    }
    Ok("500 certificates validated".into())
}

fn five_cycle() -> Check {
    let t = Tolerances::default();
    let r = joint_orbit_search(&fixtures::five_cycle(), &t).map_err(|e| e.to_string())?;
    ensure(!r.found && r.permutations_covered == Some(120), || format!("{r:?}"))?;
    let mut rng = random::rng(0);
    for k in 0..20 {
        let n = rng.gen_range(2..=6);
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let kind = match k % 3 {
            0 => KnGenerator::UnitPair { i, j, n },
            1 => KnGenerator::RankOnePlusMinus { i, j, n },
            _ => {
                // Flip at most one sign, on either v or -v.
                let flip = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                KnGenerator::RankOneSignedVector(
                    (0..n)
                        .map(|r| flip * rng.gen_range(0.1..4.0) * if r == i { -1.0 } else { 1.0 })
                        .collect(),
                )
            }
        };
        let a = kn_generator(&kind).map_err(|e| e.to_string())?;
        let r = joint_orbit_search(&a, &t).map_err(|e| e.to_string())?;
        let sound = r.witness.as_ref().is_some_and(|g| is_mn(&g.apply(&a), &t));
        ensure(r.found && sound, || format!("generator {kind:?} not found"))?;
    }
    Ok("120 permutations covered, 20 generators found".into())
}

fn suites() -> Check {
    let (code, v) = copos(&["selftest", "--seed", "0", "--cases", "1000"]);
    let list = v["suites"].as_array().ok_or("no suites in output")?;
    let mut parts = Vec::new();
    for s in list {
        let (cases, fails) = (s["cases"].as_u64().unwrap_or(0), s["failures"].as_u64().unwrap_or(1));
        ensure(cases >= 1000 && fails == 0, || format!("{}: {fails}/{cases} failed: {}", s["name"], s["first_failure"]))?;
        parts.push(format!("{cases}"));
    }
    ensure(code == 0 && list.len() == 6, || format!("selftest exit {code}"))?;
    Ok(format!("6 suites, cases {}", parts.join("/")))
}

fn agreement() -> Check {
    let t = Tolerances::default();
    let mut rng = random::rng(0);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let n = rng.gen_range(2..=8);
        let inst = StqpInstance::raw(random::mn_matrix(&mut rng, n));
        let d = z_dnn_primal(&inst, &t).map_err(|e| format!("instance {k}: {e}"))?.value;
        let s = z_spn_bisection(&inst, &t).map_err(|e| format!("instance {k}: {e}"))?.value;
        worst = worst.max((d - s).abs());
        ensure((d - s).abs() <= 2e-6, || format!("instance {k}: z_dnn {d}, z_spn {s}"))?;
    }
    Ok(format!("worst |z_dnn - z_spn| = {worst:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, extraneous, 10),
        (2, horn, 30),
        (3, sign_patterns, 60),
        (4, separable, 600),
        (5, small_copositive, 300),
        (6, five_cycle, 120),
        (7, suites, u64::MAX),
        (8, agreement, 900),
    ];
    let mut failed = 0;
    for (k, check, limit) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = result.and_then(|m| {
            if took > Duration::from_secs(limit) {
                Err(format!("took {took:.1?}, limit {limit} s"))
            } else {
                Ok(m)
            }
        });
        match result {
            Ok(m) => println!("criterion {k}: PASS ({took:.2?}) {m}"),
            Err(m) => {
                failed += 1;
                println!("criterion {k}: FAIL ({took:.2?}) {m}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
