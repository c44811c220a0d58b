//! `copos`: classify symmetric matrices, decompose copositive ones, search
//! orbits of the ordered class and solve standard quadratic programs.
//!
//! Exit status: 0 affirmative, 1 sound negative, 2 undecided, 3 usage or
//! parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use copos_core::classes::{classify, positive_index, row_sign_summary};
use copos_core::cones::{spn_decompose_recursive, spn_oracle, ConeError, SpnOutcome};
use copos_core::matrix::vector_from_text;
use copos_core::orbit::{joint_orbit_search, permute_into_mn, rescale_into_mn, MAX_JOINT_DIM};
use copos_core::selftest::{run_selected, SUITES};
use copos_core::signgraph::{extract_sign_graphs, threshold_elimination};
use copos_core::stqp::{build_separable, certify_tightness, StqpError, StqpInstance};
use copos_core::{MatrixError, SymMatrix, Tolerances};

#[derive(Parser)]
#[command(name = "copos", version, about = "Copositive matrix toolkit", allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Slack for sign and ordering comparisons.
    #[arg(long, global = true)]
    eps_ord: Option<f64>,
    /// Eigenvalue slack for positive semidefiniteness.
    #[arg(long, global = true)]
    eps_psd: Option<f64>,
    /// Residual accepted for certificates and witnesses.
    #[arg(long, global = true)]
    eps_feas: Option<f64>,
    /// Bisection stopping width.
    #[arg(long, global = true)]
    eps_opt: Option<f64>,
    /// Iteration cap for the iterative solvers.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// List every class the matrix belongs to.
    Classify { path: PathBuf },
    /// SPN certificate, or a DNN witness that none exists.
    Decompose { path: PathBuf },
    /// Standard quadratic program over the simplex.
    #[command(group(ArgGroup::new("input").required(true).args(["path", "separable"])))]
    Stqp {
        path: Option<PathBuf>,
        /// Separable instance from two vector files.
        #[arg(long, num_args = 2, value_names = ["ALPHA", "BETA"])]
        separable: Option<Vec<PathBuf>>,
    },
    /// Search for a permutation and scaling into the ordered class.
    Orbit { path: PathBuf },
    /// Positive and negative sign graphs and the threshold test.
    Signgraph { path: PathBuf },
    /// Run the randomized property suites.
    Selftest {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        /// Restrict to these suites (repeatable).
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES.map(|s| s.0)))]
        suite: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Affirmative = 0,
    Negative = 1,
    Undecided = 2,
}

enum CliError {
    Usage(String),
    Undecided(String),
}

impl From<StqpError> for CliError {
    fn from(e: StqpError) -> Self {
        CliError::Undecided(e.to_string())
    }
}

struct Report {
    json: Value,
    verdict: Verdict,
    /// Replaces the generic table under `--format text`.
    text: Option<String>,
}

impl Report {
    fn new(json: Value, verdict: Verdict) -> Self {
        Report { json, verdict, text: None }
    }
}

type Outcome = Result<Report, CliError>;

fn tolerances(o: &GlobalOpts) -> Result<Tolerances, CliError> {
    let d = Tolerances::default();
    let tol = Tolerances {
        eps_ord: o.eps_ord.unwrap_or(d.eps_ord),
        eps_psd: o.eps_psd.unwrap_or(d.eps_psd),
        eps_feas: o.eps_feas.unwrap_or(d.eps_feas),
        eps_opt: o.eps_opt.unwrap_or(d.eps_opt),
        max_iter: o.max_iter.unwrap_or(d.max_iter),
    };
    tol.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(tol)
}

fn read_input<T>(path: &Path, parse: impl Fn(&str) -> Result<T, MatrixError>) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        MatrixError::Parse { line, column, message } => {
            CliError::Usage(format!("{}:{line}:{column}: {message}", path.display()))
        }
        other => CliError::Usage(format!("{}: {other}", path.display())),
    })
}

fn read_matrix(path: &Path) -> Result<SymMatrix, CliError> {
    read_input(path, SymMatrix::from_text)
}

fn cmd_classify(a: &SymMatrix, tol: &Tolerances) -> Outcome {
    let labels = classify(a, tol).map_err(|e| CliError::Undecided(e.to_string()))?;
    let v = json!({
        "n": a.n(),
        "labels": labels,
        "row_signs": row_sign_summary(a, tol),
        "idx": positive_index(a, tol),
    });
    Ok(Report::new(v, Verdict::Affirmative))
}

fn tagged(kind: &str, mut v: Value) -> Value {
    v["kind"] = kind.into();
    v
}

fn cmd_decompose(a: &SymMatrix, tol: &Tolerances) -> Outcome {
    let note = match spn_decompose_recursive(a, tol) {
        Ok(c) => return Ok(Report::new(tagged("certificate", json!(c)), Verdict::Affirmative)),
        Err(e @ ConeError::NotInSupportedClass { .. }) => Some(e.to_string()),
        Err(ConeError::NotCopositive { .. }) | Err(ConeError::DimensionTooLarge { .. }) => None,
        Err(e) => return Err(CliError::Undecided(e.to_string())),
    };
    match spn_oracle(a, tol) {
        Ok(SpnOutcome::Certificate(c)) => Ok(Report::new(tagged("certificate", json!(c)), Verdict::Affirmative)),
        Ok(SpnOutcome::Witness(w)) => Ok(Report::new(tagged("witness", json!(w)), Verdict::Negative)),
        Err(ConeError::Undecided { lower, upper }) => {
            let mut msg = format!("undecided: DNN bounds [{lower:e}, {upper:e}]");
            if let Some(n) = note {
                msg = format!("{n}; base oracle {msg}");
            }
            Err(CliError::Undecided(msg))
        }
        Err(e) => Err(CliError::Undecided(e.to_string())),
    }
}

fn cmd_stqp(inst: &StqpInstance, tol: &Tolerances) -> Outcome {
    let report = certify_tightness(inst, tol)?;
    let mut v = serde_json::to_value(&report).expect("serializable");
    if report.z_star.is_none() {
        v["z_star_error"] = ConeError::DimensionTooLarge {
            n: inst.n(),
            max: copos_core::cones::MAX_ENUMERATION_DIM,
        }
        .to_string()
        .into();
    }
    let verdict = if report.z_spn_decided {
        Verdict::Affirmative
    } else {
        Verdict::Undecided
    };
    Ok(Report::new(v, verdict))
}

fn cmd_orbit(a: &SymMatrix, tol: &Tolerances) -> Outcome {
    let permute = permute_into_mn(a, tol);
    let rescale = rescale_into_mn(a, tol);
    let joint = (a.n() <= MAX_JOINT_DIM).then(|| joint_orbit_search(a, tol));
    let found = permute.found
        || matches!(&rescale, Ok(r) if r.found)
        || matches!(&joint, Some(Ok(r)) if r.found);
    let complete = matches!(&joint, Some(Ok(_)));
    let report = |r: &Result<_, copos_core::orbit::OrbitError>| match r {
        Ok(r) => copos_core::orbit::OrbitResult::to_json(r),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let v = json!({
        "found": found,
        "permute": permute.to_json(),
        "rescale": report(&rescale),
        "joint": match &joint {
            Some(r) => report(r),
            None => json!({ "skipped": format!("n = {} exceeds {MAX_JOINT_DIM}", a.n()) }),
        },
    });
    let verdict = match (found, complete) {
        (true, _) => Verdict::Affirmative,
        (false, true) => Verdict::Negative,
        (false, false) => Verdict::Undecided,
    };
    Ok(Report::new(v, verdict))
}

fn cmd_signgraph(a: &SymMatrix, tol: &Tolerances) -> Outcome {
    let g = extract_sign_graphs(a, tol);
    let pos = threshold_elimination(&g.positive);
    let neg = threshold_elimination(&g.negative);
    let passes = pos.is_some() && neg.is_some();
    let v = json!({
        "n": g.n,
        "positive": g.positive.adjacency,
        "negative": g.negative.adjacency,
        "positive_threshold": pos.is_some(),
        "negative_threshold": neg.is_some(),
        "positive_elimination": pos,
        "negative_elimination": neg,
        "orbit_filter": passes,
    });
    let verdict = if passes { Verdict::Affirmative } else { Verdict::Negative };
    let dot = g.positive.to_dot("positive") + &g.negative.to_dot("negative");
    Ok(Report {
        json: v,
        verdict,
        text: Some(dot),
    })
}

fn cmd_selftest(seed: u64, cases: usize, only: &[String], tol: &Tolerances) -> Outcome {
    let results = run_selected(seed, cases, tol, |k| only.is_empty() || only.iter().any(|o| o == k));
    let passed = results.iter().all(|r| r.passed());
    let v = json!({ "seed": seed, "cases": cases, "passed": passed, "suites": results });
    let verdict = if passed { Verdict::Affirmative } else { Verdict::Negative };
    let text = selftest_table(&v);
    Ok(Report {
        json: v,
        verdict,
        text: Some(text),
    })
}

/// Top-level fields as an aligned two-column table. Multi-line strings
/// (matrices) are indented beneath their key.
fn text_table(v: &Value) -> String {
    let Some(obj) = v.as_object() else {
        return format!("{v}\n");
    };
    let width = obj.keys().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in obj {
        match val {
            Value::String(s) if s.contains('\n') => {
                out.push_str(&format!("{k}\n"));
                for line in s.lines() {
                    out.push_str(&format!("    {line}\n"));
                }
            }
            Value::String(s) => out.push_str(&format!("{k:<width$}  {s}\n")),
            other => out.push_str(&format!("{k:<width$}  {other}\n")),
        }
    }
    out
}

fn selftest_table(v: &Value) -> String {
    let mut out = format!("{:<55} {:>6} {:>8}\n", "suite", "cases", "failures");
    for s in v["suites"].as_array().into_iter().flatten() {
        out.push_str(&format!(
            "{:<55} {:>6} {:>8}\n",
            s["name"].as_str().unwrap_or(""),
            s["cases"].as_u64().unwrap_or(0),
            s["failures"].as_u64().unwrap_or(0)
        ));
        if let Some(f) = s["first_failure"].as_str() {
            out.push_str(&format!("  first failure: {}\n", f.replace('\n', "\n    ")));
        }
    }
    out
}

fn run(cli: &Cli) -> Outcome {
    let tol = tolerances(&cli.opts)?;
    match &cli.command {
        Command::Classify { path } => cmd_classify(&read_matrix(path)?, &tol),
        Command::Decompose { path } => cmd_decompose(&read_matrix(path)?, &tol),
        Command::Stqp { path, separable } => {
            let inst = match (path, separable) {
                (_, Some(files)) => {
                    let alpha = read_input(&files[0], vector_from_text)?;
                    let beta = read_input(&files[1], vector_from_text)?;
                    build_separable(&alpha, &beta).map_err(|e| CliError::Usage(e.to_string()))?
                }
                (Some(p), None) => StqpInstance::raw(read_matrix(p)?),
                (None, None) => unreachable!("clap requires one input"),
            };
            cmd_stqp(&inst, &tol)
        }
        Command::Orbit { path } => cmd_orbit(&read_matrix(path)?, &tol),
        Command::Signgraph { path } => cmd_signgraph(&read_matrix(path)?, &tol),
        Command::Selftest { cases, suite } => cmd_selftest(cli.opts.seed, *cases, suite, &tol),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(r) => {
            match (cli.opts.format, r.text) {
                (Format::Json, _) => println!("{}", serde_json::to_string_pretty(&r.json).expect("serializable")),
                (Format::Text, Some(t)) => print!("{t}"),
                (Format::Text, None) => print!("{}", text_table(&r.json)),
            }
            ExitCode::from(r.verdict as u8)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Undecided(msg)) => {
            eprintln!("undecided: {msg}");
            ExitCode::from(Verdict::Undecided as u8)
        }
    }
}
