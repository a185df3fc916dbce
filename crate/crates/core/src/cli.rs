//! Command-line front end. Every subcommand reads one JSON object (stdin or
//! `--input`) and writes one JSON object to stdout.
//!
//! Exit codes: 0 success, 2 no solution, 3 no real solution, 4 malformed
//! input, 1 anything else. Failures are reported as
//! `{"error": {"kind": ..., "detail": ...}}`.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::MomentError;
use crate::inversion::{family_member, invert_detailed, HigherMoments, Method, SideDiagnostics};
use crate::markov::markov_certificate;
use crate::structure::analyze;
use crate::tolerance::{ToleranceSet, DEFAULT_IMAG_TOL, DEFAULT_RANK_TOL};
use crate::transform::{exp_transform, forward_moments, power_sums, BranchSolution, MomentSequence};
use crate::trig::{trig_forward, trig_invert, TrigOptions, TrigSignal};

pub const SCHEMA: &str = "momentkit/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_NO_SOLUTION: i32 = 2;
pub const EXIT_NON_REAL: i32 = 3;
pub const EXIT_MALFORMED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "momentkit", version, about = "Invert finite Markov moment systems")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Relative singular-value cutoff for numeric ranks.
    #[arg(long, global = true, env = "MOMENTKIT_TOL_RANK", default_value_t = DEFAULT_RANK_TOL)]
    tol_rank: f64,

    /// Absolute cutoff for structural zero eigenvalues [default: 1e-8 * (1 + max |a_k|)].
    #[arg(long, global = true)]
    tol_zero: Option<f64>,

    /// Relative cutoff on imaginary parts of roots.
    #[arg(long, global = true, default_value_t = DEFAULT_IMAG_TOL)]
    tol_imag: f64,

    /// Attach diagnostics to the output.
    #[arg(long, global = true)]
    verbose: bool,

    /// Read the request from a file instead of standard input.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Branch values to moments.
    Forward,
    /// Moments to the exponential-transform coefficients a_0..a_K.
    Transform,
    /// Solvability, degree bounds and uniqueness.
    Analyze,
    /// Minimal-degree branch values.
    Invert {
        #[arg(long, default_value = "companion", value_parser = ["geneig", "companion"])]
        method: String,
    },
    /// The moment m_{K+1}.
    Next,
    /// Moments m_1..m_{K+count}.
    Extend {
        #[arg(long)]
        count: usize,
    },
    /// A non-minimal solution with the given common roots.
    Family {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        r_roots: Vec<f64>,
    },
    /// Positive-definiteness, interlacing and extended-matrix certificates.
    MarkovCheck,
    /// Frequencies and amplitudes from 2r trigonometric moments.
    TrigInvert {
        #[arg(long)]
        modes: usize,
    },
    /// Trigonometric moments m_0..m_{count-1} of a signal.
    TrigForward {
        #[arg(long)]
        count: usize,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MomentsRequest {
    schema: Option<String>,
    moments: Vec<f64>,
    n_x: usize,
    n_y: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchesRequest {
    schema: Option<String>,
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Accepted so that `invert` output can be fed back unchanged.
    #[allow(dead_code)]
    degree: Option<usize>,
    /// Number of moments; defaults to `n_x + n_y`.
    k: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrigMomentsRequest {
    schema: Option<String>,
    moments: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrigSignalRequest {
    schema: Option<String>,
    freqs: Vec<f64>,
    amps: Vec<[f64; 2]>,
}

trait Versioned {
    fn schema(&self) -> Option<&str>;
}

macro_rules! versioned {
    ($($t:ty),*) => {$(
        impl Versioned for $t {
            fn schema(&self) -> Option<&str> {
                self.schema.as_deref()
            }
        }
    )*};
}
versioned!(MomentsRequest, BranchesRequest, TrigMomentsRequest, TrigSignalRequest);

/// Failure carrying the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: String,
    detail: String,
}

impl Failure {
    fn malformed(detail: impl Into<String>) -> Self {
        Self {
            code: EXIT_MALFORMED,
            kind: "MalformedInput".into(),
            detail: detail.into(),
        }
    }
}

impl From<MomentError> for Failure {
    fn from(e: MomentError) -> Self {
        let code = match e {
            MomentError::NoSolution { .. } => EXIT_NO_SOLUTION,
            MomentError::NonRealSolution { .. } => EXIT_NON_REAL,
            MomentError::InvalidInput(_) | MomentError::DimensionMismatch(_) | MomentError::FamilyOverflow { .. } => {
                EXIT_MALFORMED
            }
            _ => EXIT_INTERNAL,
        };
        Self {
            code,
            kind: e.kind().into(),
            detail: e.to_string(),
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            return emit_failure(stdout, Failure::malformed(e.to_string().trim_end()));
        }
    };
    match execute(&cli, stdin) {
        Ok(value) => match writeln!(stdout, "{value}") {
            Ok(()) => EXIT_OK,
            Err(_) => EXIT_INTERNAL,
        },
        Err(f) => emit_failure(stdout, f),
    }
}

fn emit_failure(stdout: &mut dyn Write, f: Failure) -> i32 {
    let body = json!({"error": {"kind": f.kind, "detail": f.detail}});
    let _ = writeln!(stdout, "{body}");
    f.code
}

fn read_request<T: DeserializeOwned + Versioned>(global: &GlobalOpts, stdin: &mut dyn Read) -> Result<T, Failure> {
    let mut text = String::new();
    match &global.input {
        Some(path) => {
            text = std::fs::read_to_string(path)
                .map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))?;
        }
        None => {
            stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure::malformed(format!("cannot read standard input: {e}")))?;
        }
    }
    let request: T = serde_json::from_str(&text).map_err(|e| Failure::malformed(e.to_string()))?;
    match request.schema() {
        None | Some(SCHEMA) => Ok(request),
        Some(other) => Err(Failure::malformed(format!("unsupported schema '{other}', expected '{SCHEMA}'"))),
    }
}

fn tolerances(global: &GlobalOpts) -> Result<ToleranceSet, Failure> {
    let positive = |name: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(Failure::malformed(format!("{name} must be a positive number, got {v}")))
        }
    };
    positive("--tol-rank", global.tol_rank)?;
    positive("--tol-imag", global.tol_imag)?;
    if let Some(z) = global.tol_zero {
        positive("--tol-zero", z)?;
    }
    Ok(ToleranceSet {
        rank: global.tol_rank,
        zero: global.tol_zero,
        imag: global.tol_imag,
    })
}

fn moment_sequence(req: MomentsRequest) -> Result<MomentSequence, Failure> {
    Ok(MomentSequence::new(req.moments, req.n_x, req.n_y)?)
}

fn envelope(fields: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), Value::from(SCHEMA));
    if let Value::Object(map) = fields {
        out.extend(map);
    }
    Value::Object(out)
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn solution_json(sol: &BranchSolution) -> Value {
    json!({"xs": sol.xs, "ys": sol.ys, "degree": sol.degree})
}

fn side_json(d: &SideDiagnostics) -> Value {
    json!({
        "n_tilde": d.n_tilde,
        "d_min": d.d_min,
        "eigenvalues": d.eigenvalues.iter().copied().map(pair).collect::<Vec<_>>(),
        "zeros_filtered": d.zeros_filtered,
        "zero_tol": d.zero_tol,
    })
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Value, Failure> {
    let g = &cli.global;
    let tol = tolerances(g)?;
    let value = match &cli.command {
        Command::Forward => {
            let req: BranchesRequest = read_request(g, stdin)?;
            let count = req.k.unwrap_or(req.xs.len() + req.ys.len());
            if count == 0 {
                return Err(Failure::malformed("at least one moment must be requested"));
            }
            if req.xs.iter().chain(&req.ys).any(|v| !v.is_finite()) {
                return Err(Failure::malformed("branch values must be finite"));
            }
            let m = forward_moments(&req.xs, &req.ys, count);
            json!({"moments": m.values(), "n_x": m.n_x(), "n_y": m.n_y()})
        }
        Command::Transform => {
            let m = moment_sequence(read_request(g, stdin)?)?;
            json!({"a": exp_transform(&m).values()})
        }
        Command::Analyze => {
            let m = moment_sequence(read_request(g, stdin)?)?;
            let r = analyze(&m, &tol)?;
            let mut v = json!({
                "exists": r.exists,
                "rank_a1": r.rank_a1,
                "d_min": r.d_min,
                "d_max": r.d_max,
                "unique": r.unique,
                "minimal_solution": r.minimal_solution.as_ref().map(solution_json),
                "tol_rank": r.tol_rank,
            });
            if let Some(note) = r.note {
                v["note"] = Value::from(note);
            }
            v
        }
        Command::Invert { method } => {
            let m = moment_sequence(read_request(g, stdin)?)?;
            let method: Method = method.parse()?;
            let inv = invert_detailed(&m, method, &tol)?;
            let mut v = solution_json(&inv.solution);
            if g.verbose {
                v["diagnostics"] = json!({
                    "method": if method == Method::Geneig { "geneig" } else { "companion" },
                    "x_side": side_json(&inv.x_side),
                    "y_side": side_json(&inv.y_side),
                });
            }
            v
        }
        Command::Next => {
            let m = moment_sequence(read_request(g, stdin)?)?;
            let next = HigherMoments::new(&m, &tol)?.next();
            let mut v = json!({"next_moment": next});
            if g.verbose {
                // the same quantity through the explicit branch values
                let via_branches = invert_detailed(&m, Method::Companion, &tol)
                    .ok()
                    .map(|inv| power_sums(&inv.solution.xs, &inv.solution.ys, m.len() + 1)[m.len()]);
                v["diagnostics"] = json!({"power_sum_of_branches": via_branches});
            }
            v
        }
        Command::Extend { count } => {
            let m = moment_sequence(read_request(g, stdin)?)?;
            json!({"moments": HigherMoments::new(&m, &tol)?.extend(*count)})
        }
        Command::Family { r_roots } => {
            let m = moment_sequence(read_request(g, stdin)?)?;
            if r_roots.iter().any(|v| !v.is_finite()) {
                return Err(Failure::malformed("--r-roots must be finite"));
            }
            let report = analyze(&m, &tol)?;
            if !report.exists {
                return Err(MomentError::NoSolution {
                    rank_a1: report.rank_a1,
                    rank_a: report.rank_a1 + 1,
                }
                .into());
            }
            // re-run to surface the precise inversion error
            let minimal = match &report.minimal_solution {
                Some(sol) => sol.clone(),
                None => invert_detailed(&m, Method::Companion, &tol)?.solution,
            };
            solution_json(&family_member(&minimal, report.freedom(), r_roots)?)
        }
        Command::MarkovCheck => {
            let m = moment_sequence(read_request(g, stdin)?)?;
            let c = markov_certificate(&m, &tol)?;
            json!({
                "spd": c.spd,
                "interlaced": c.interlaced,
                "interlacing_applicable": c.interlacing_applicable,
                "extended_singular": c.extended_singular,
                "weights_positive": c.weights_positive,
                "weights": c.weights,
                "solution": solution_json(&c.solution),
            })
        }
        Command::TrigInvert { modes } => {
            let req: TrigMomentsRequest = read_request(g, stdin)?;
            let samples: Vec<Complex64> = req.moments.iter().map(|p| Complex64::new(p[0], p[1])).collect();
            let opts = TrigOptions {
                rank: tol.rank,
                ..TrigOptions::default()
            };
            let inv = trig_invert(&samples, *modes, &opts)?;
            let mut v = json!({
                "freqs": inv.signal.freqs,
                "amps": inv.signal.amps.iter().copied().map(pair).collect::<Vec<_>>(),
            });
            if g.verbose {
                v["diagnostics"] = json!({
                    "eigenvalues": inv.eigenvalues.iter().copied().map(pair).collect::<Vec<_>>(),
                    "unit_deviation": inv.unit_deviation,
                });
            }
            v
        }
        Command::TrigForward { count } => {
            let req: TrigSignalRequest = read_request(g, stdin)?;
            if req.freqs.len() != req.amps.len() {
                return Err(Failure::malformed(format!(
                    "{} frequencies but {} amplitudes",
                    req.freqs.len(),
                    req.amps.len()
                )));
            }
            if *count == 0 {
                return Err(Failure::malformed("--count must be at least 1"));
            }
            let sig = TrigSignal {
                freqs: req.freqs,
                amps: req.amps.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
            };
            json!({"moments": trig_forward(&sig, *count).into_iter().map(pair).collect::<Vec<_>>()})
        }
    };
    Ok(envelope(value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], input: &str) -> (i32, Value) {
        let mut argv = vec!["momentkit"];
        argv.extend_from_slice(args);
        let mut out = Vec::new();
        let code = run(argv, &mut input.as_bytes(), &mut out);
        (code, serde_json::from_slice(&out).unwrap())
    }

    #[test]
    fn invert_worked_instance() {
        let (code, v) = call(&["invert"], r#"{"moments":[3,5],"n_x":2,"n_y":0}"#);
        assert_eq!(code, 0);
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["degree"], 2);
        let xs: Vec<f64> = serde_json::from_value(v["xs"].clone()).unwrap();
        assert!((xs[0] - 1.0).abs() < 1e-10 && (xs[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["invert"], r#"{"moments":[0,1],"n_x":1,"n_y":1}"#).0, EXIT_NO_SOLUTION);
        assert_eq!(call(&["invert"], r#"{"moments":[0,-2],"n_x":2,"n_y":0}"#).0, EXIT_NON_REAL);
        assert_eq!(call(&["invert"], r#"{"moments":[0,-2],"n_x":1,"n_y":0}"#).0, EXIT_MALFORMED);
        assert_eq!(call(&["invert"], r#"{"moments":[1],"n_x":1,"n_y":0,"extra":1}"#).0, EXIT_MALFORMED);
        assert_eq!(call(&["invert"], "not json").0, EXIT_MALFORMED);
        assert_eq!(call(&["bogus"], "{}").0, EXIT_MALFORMED);
    }

    #[test]
    fn error_object_shape() {
        let (_, v) = call(&["invert"], r#"{"moments":[0,-2],"n_x":2,"n_y":0}"#);
        assert_eq!(v["error"]["kind"], "NonRealSolution");
        assert!(v["error"]["detail"].is_string());
    }

    #[test]
    fn schema_mismatch_rejected() {
        let (code, v) = call(&["transform"], r#"{"schema":"momentkit/2","moments":[1],"n_x":1,"n_y":0}"#);
        assert_eq!(code, EXIT_MALFORMED);
        assert_eq!(v["error"]["kind"], "MalformedInput");
    }

    #[test]
    fn analyze_never_fails_on_inconsistent_data() {
        let (code, v) = call(&["analyze"], r#"{"moments":[0,1],"n_x":1,"n_y":1}"#);
        assert_eq!(code, 0);
        assert_eq!(v["exists"], false);
        assert!(v["minimal_solution"].is_null());
    }

    #[test]
    fn family_overflow_is_malformed() {
        let (code, v) = call(&["family", "--r-roots", "2,3"], r#"{"moments":[1,1,1],"n_x":2,"n_y":1}"#);
        assert_eq!(code, EXIT_MALFORMED);
        assert_eq!(v["error"]["kind"], "FamilyOverflow");
    }

    #[test]
    fn non_positive_tolerance_rejected() {
        assert_eq!(call(&["--tol-rank", "0", "transform"], r#"{"moments":[1],"n_x":1,"n_y":0}"#).0, 4);
    }
}
