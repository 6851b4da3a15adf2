use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use sixvertex::boundary::{build_boundary, BoundaryConfig};
use sixvertex::izergin::SUM_CEILING;
use sixvertex::lattice::site_ceiling;
use sixvertex::oracles::{boundary_json, params_json};
use sixvertex::partition::{applies_to, compute_z, ZMethod};
use sixvertex::{Error, Field, ParamSet, Scalar};

use crate::config::{JobConfig, MethodChoice, Mode};
use crate::render::Rendered;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_DISAGREE: u8 = 2;
pub const EXIT_DEGENERATE: u8 = 3;

/// Exit code for a library error: vanishing quantities get their own code.
pub fn error_code(err: &Error) -> u8 {
    if err.is_degenerate() {
        EXIT_DEGENERATE
    } else {
        EXIT_INPUT
    }
}

pub fn report_error(err: &Error) -> u8 {
    eprintln!("error: {err}");
    error_code(err)
}

/// Why a method cannot run at this lattice size, if it cannot.
pub fn size_limit<F: Field>(method: ZMethod, m: usize, n: usize) -> Option<String> {
    let mode = if F::EXACT { "exact" } else { "float" };
    if !applies_to(method, m, n) {
        return Some(format!("{method} needs a square lattice, got {m}x{n}"));
    }
    let ceiling = site_ceiling::<F>();
    match method {
        _ if method.is_contraction() && n > ceiling => {
            Some(format!("{method} refuses n = {n} in {mode} mode (ceiling {ceiling})"))
        }
        ZMethod::SumV if n > SUM_CEILING => Some(format!("sum-v refuses n = {n} (ceiling {SUM_CEILING})")),
        ZMethod::SumU if m > SUM_CEILING => Some(format!("sum-u refuses m = {m} (ceiling {SUM_CEILING})")),
        _ => None,
    }
}

pub struct Overrides {
    pub method: Option<MethodChoice>,
    pub mode: Option<Mode>,
    pub output: Option<PathBuf>,
}

pub fn run(job: JobConfig, overrides: Overrides) -> u8 {
    let choice = overrides.method.unwrap_or(job.method);
    let mode = overrides.mode.unwrap_or(job.mode);
    let output = overrides.output.or(job.output);
    let params = match ParamSet::new(job.u, job.v, job.c) {
        Ok(p) => p,
        Err(e) => return report_error(&e),
    };
    let b = job.boundary;
    let boundary = match build_boundary(b.w, b.e, b.n, b.s, b.a, b.d_tilde) {
        Ok(cfg) => cfg,
        Err(e) => return report_error(&e),
    };
    let input = json!({ "params": params_json(&params), "boundary": boundary_json(&boundary) });
    let outcome = match mode {
        Mode::Exact => evaluate(choice, &params, &boundary),
        Mode::Float => {
            let conv = |x: &Scalar| Complex64::from_scalar(x);
            evaluate(choice, &params.map(conv), &boundary.map(conv))
        }
    };
    let mut result = match outcome {
        Ok(r) => r,
        Err(code) => return code,
    };
    let agreement = result.get("agreement") == Some(&Value::Bool(true));
    result.insert("input".into(), input);
    result.insert("mode".into(), json!(mode.to_string()));
    let result = Value::Object(result);
    if !agreement {
        eprintln!("error: methods disagree; witness:\n{}", pretty(&json!({
            "input": result["input"],
            "values": result["values"],
            "witness": result["witness"],
        })));
    }
    if let Err(e) = write_result(&result, output) {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    if agreement {
        EXIT_OK
    } else {
        EXIT_DISAGREE
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn write_result(result: &Value, output: Option<PathBuf>) -> std::io::Result<()> {
    let text = pretty(result) + "\n";
    match output {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn evaluate<F: Rendered>(
    choice: MethodChoice,
    params: &ParamSet<F>,
    boundary: &BoundaryConfig<F>,
) -> Result<Map<String, Value>, u8> {
    let (m, n) = (params.m(), params.n());
    let mut skipped = BTreeMap::new();
    let methods: Vec<ZMethod> = match choice {
        MethodChoice::One(method) => {
            if let Some(reason) = size_limit::<F>(method, m, n) {
                eprintln!("error: {reason}");
                return Err(EXIT_INPUT);
            }
            vec![method]
        }
        MethodChoice::All => ZMethod::ALL
            .into_iter()
            .filter(|&method| match size_limit::<F>(method, m, n) {
                Some(reason) => {
                    skipped.insert(method.name().to_string(), reason);
                    false
                }
                None => true,
            })
            .collect(),
    };

    let mut values: Vec<(ZMethod, F)> = Vec::new();
    let mut timings = Map::new();
    for method in methods {
        let start = Instant::now();
        let value = compute_z(method, params, boundary);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        timings.insert(method.name().into(), json!((ms * 1e3).round() / 1e3));
        match value {
            Ok(v) => values.push((method, v)),
            Err(Error::Unavailable(reason)) if choice == MethodChoice::All => {
                skipped.insert(method.name().to_string(), format!("closed form unavailable: {reason}"));
            }
            Err(e) => {
                eprintln!("error: {method}: {e}");
                return Err(error_code(&e));
            }
        }
    }
    if values.is_empty() {
        eprintln!("error: no method could evaluate this input");
        return Err(EXIT_DEGENERATE);
    }

    let reference = &values[0];
    let mismatched: Vec<ZMethod> =
        values.iter().filter(|(_, v)| !v.agrees(&reference.1)).map(|(method, _)| *method).collect();
    let mut out = Map::new();
    out.insert("m".into(), json!(m));
    out.insert("n".into(), json!(n));
    out.insert(
        "values".into(),
        Value::Object(values.iter().map(|(method, v)| (method.name().to_string(), v.render())).collect()),
    );
    out.insert("agreement".into(), json!(mismatched.is_empty()));
    out.insert("skipped".into(), json!(skipped));
    out.insert("timings_ms".into(), Value::Object(timings));
    if !mismatched.is_empty() {
        out.insert(
            "witness".into(),
            json!({
                "reference": reference.0.name(),
                "reference_value": reference.1.render(),
                "disagreeing": mismatched.iter().map(|m| m.name()).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(out)
}
