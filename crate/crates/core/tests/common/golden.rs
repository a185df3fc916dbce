//! Golden-file cases for the command-line tool.
//!
//! Each `tests/golden/*.json` holds the arguments, the request (a JSON value,
//! or `input_raw` text for deliberately malformed requests), the expected
//! exit code and the expected stdout document. Numbers compare with a
//! relative tolerance of 1e-9; everything else must match exactly.
//! `UPDATE_GOLDEN=1` rewrites the expectations from the current binary.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use serde_json::Value;

pub const NUMERIC_TOL: f64 = 1e-9;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn cases() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(golden_dir())
        .expect("golden directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    out
}

/// Runs the binary with `args`, feeding `stdin`; returns (exit code, stdout).
pub fn run_cli(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_momentkit"));
    cmd.args(args)
        .env_remove("MOMENTKIT_TOL_RANK")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn momentkit");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

/// Structural comparison; returns the path of the first mismatch.
pub fn json_close(got: &Value, want: &Value, path: &str) -> Result<(), String> {
    match (got, want) {
        (Value::Number(g), Value::Number(w)) => {
            let (g, w) = (g.as_f64().unwrap(), w.as_f64().unwrap());
            if (g - w).abs() <= NUMERIC_TOL * w.abs().max(1.0) {
                Ok(())
            } else {
                Err(format!("{path}: {g} vs {w}"))
            }
        }
        (Value::Array(g), Value::Array(w)) => {
            if g.len() != w.len() {
                return Err(format!("{path}: length {} vs {}", g.len(), w.len()));
            }
            g.iter()
                .zip(w)
                .enumerate()
                .try_for_each(|(i, (g, w))| json_close(g, w, &format!("{path}[{i}]")))
        }
        (Value::Object(g), Value::Object(w)) => {
            let gk: Vec<&String> = g.keys().collect();
            let wk: Vec<&String> = w.keys().collect();
            if gk != wk {
                return Err(format!("{path}: keys {gk:?} vs {wk:?}"));
            }
            w.iter().try_for_each(|(k, wv)| json_close(&g[k], wv, &format!("{path}.{k}")))
        }
        _ if got == want => Ok(()),
        _ => Err(format!("{path}: {got} vs {want}")),
    }
}

/// Runs one golden case; on success returns its exit code.
pub fn check_case(path: &Path) -> Result<i32, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let mut case: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let args: Vec<String> = case["args"]
        .as_array()
        .expect("args")
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let stdin = match case.get("input_raw") {
        Some(raw) => raw.as_str().unwrap().to_string(),
        None => case["input"].to_string(),
    };
    let (code, stdout) = run_cli(&args, &stdin, &[]);
    let got: Value =
        serde_json::from_str(&stdout).map_err(|e| format!("{}: stdout is not JSON ({e}): {stdout}", path.display()))?;

    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        case["exit"] = code.into();
        case["output"] = got;
        let mut pretty = serde_json::to_string_pretty(&case).unwrap();
        pretty.push('\n');
        std::fs::write(path, pretty).unwrap();
        return Ok(code);
    }

    let want_code = case["exit"].as_i64().expect("exit") as i32;
    if code != want_code {
        return Err(format!("{}: exit {code}, expected {want_code}; stdout {stdout}", path.display()));
    }
    json_close(&got, &case["output"], "$").map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(code)
}
