//! Runs the CLI golden cases listed in `tests/golden/cases.txt`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

pub struct GoldenCase {
    pub name: String,
    pub exit: i32,
    pub args: Vec<String>,
}

pub struct GoldenOutcome {
    pub name: String,
    /// `None` when the case reproduced; otherwise what differed.
    pub problem: Option<String>,
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn load_cases() -> Vec<GoldenCase> {
    let text = fs::read_to_string(golden_dir().join("cases.txt")).expect("cases.txt");
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let parts: Vec<&str> = l.splitn(3, '|').map(str::trim).collect();
            assert_eq!(parts.len(), 3, "bad case line: {l}");
            GoldenCase {
                name: parts[0].to_string(),
                exit: parts[1].parse().expect("exit code"),
                args: shlex::split(parts[2]).expect("balanced quotes"),
            }
        })
        .collect()
}

/// Structural equality with numbers compared within `tol`.
pub fn json_close(a: &Value, b: &Value, tol: f64) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => (x.as_f64().unwrap() - y.as_f64().unwrap()).abs() <= tol,
        (Value::Array(x), Value::Array(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(p, q)| json_close(p, q, tol))
        }
        (Value::Object(x), Value::Object(y)) => {
            x.len() == y.len()
                && x.iter()
                    .all(|(k, v)| y.get(k).is_some_and(|w| json_close(v, w, tol)))
        }
        _ => a == b,
    }
}

pub fn run_case(case: &GoldenCase) -> GoldenOutcome {
    let dir = golden_dir();
    let out = Command::new(env!("CARGO_BIN_EXE_tracecat"))
        .args(&case.args)
        .current_dir(&dir)
        .output()
        .expect("run tracecat");
    let stdout = String::from_utf8_lossy(&out.stdout);
    let stderr = String::from_utf8_lossy(&out.stderr);
    let expected = dir.join("expected");
    let mut problems = Vec::new();
    if out.status.code() != Some(case.exit) {
        problems.push(format!("exit {:?}, expected {}", out.status.code(), case.exit));
    }
    let text = expected.join(format!("{}.out", case.name));
    let json = expected.join(format!("{}.json", case.name));
    if let Ok(want) = fs::read_to_string(&text) {
        if stdout != want {
            problems.push(format!("stdout differs:\n--- got\n{stdout}--- expected\n{want}"));
        }
    } else if let Ok(want) = fs::read_to_string(&json) {
        let want: Value = serde_json::from_str(&want).expect("expected JSON parses");
        match serde_json::from_str::<Value>(&stdout) {
            Ok(got) if json_close(&got, &want, 1e-9) => {}
            _ => problems.push(format!("JSON differs:\n--- got\n{stdout}--- expected\n{want}")),
        }
    } else {
        problems.push("no expected output file".to_string());
    }
    if let Ok(want) = fs::read_to_string(expected.join(format!("{}.err", case.name))) {
        if !stderr.contains(want.trim_end()) {
            problems.push(format!("stderr lacks {want:?}: {stderr}"));
        }
    }
    GoldenOutcome {
        name: case.name.clone(),
        problem: (!problems.is_empty()).then(|| problems.join("\n")),
    }
}

fn run_in_process(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = tracecat::cli::run(
        std::iter::once("tracecat").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

/// Exit-code and diagnostic conventions that the golden cases do not pin
/// down: help exits 0, usage and IO errors exit 2 with an `error: ` line.
pub fn contract_problems() -> Vec<String> {
    let mut problems = Vec::new();
    let mut expect = |args: &[&str], code: i32, check: &dyn Fn(&str, &str) -> bool| {
        let (c, out, err) = run_in_process(args);
        if c != code || !check(&out, &err) {
            problems.push(format!("{args:?}: exit {c}, stdout {out:?}, stderr {err:?}"));
        }
    };
    expect(&["--help"], 0, &|out, _| out.contains("trace-log"));
    expect(&["eval", "--term", "f"], 2, &|_, err| err.contains("--workspace"));
    expect(
        &["bisim", "/nonexistent/a.json", "/nonexistent/b.json"],
        2,
        &|_, err| err.starts_with("error: "),
    );
    expect(&["interleaving", "2:-:a 1:+:b"], 0, &|out, _| out == "true\n");
    expect(&["interleaving", "4:-:a"], 2, &|_, err| err.contains("component"));
    problems
}
