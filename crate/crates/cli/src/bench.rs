use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use sixvertex::boundary::BoundaryConfig;
use sixvertex::oracles::Sampler;
use sixvertex::partition::{compute_z, ZMethod};
use sixvertex::{Field, ParamSet, Scalar};

use crate::compute::{report_error, size_limit, EXIT_INPUT, EXIT_OK};
use crate::config::Mode;
use crate::render::digest;

pub const HEADER: &str = "n,m,method,mode,wall_ms,value_digest";

/// `A..B` or `A..=B` (both inclusive), a single `N`, or `N1,N2,...`.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>, String> {
    let t = text.trim();
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("invalid size '{s}'"));
    let sizes = if let Some((lo, hi)) = t.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        (num(lo)?..=num(hi)?).collect()
    } else if t.is_empty() {
        Vec::new()
    } else {
        t.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if sizes.is_empty() {
        return Err(format!("size list '{text}' is empty"));
    }
    Ok(sizes)
}

pub fn parse_methods(text: &str) -> Result<Vec<ZMethod>, String> {
    let methods = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<ZMethod>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if methods.is_empty() {
        return Err("method list is empty".into());
    }
    Ok(methods)
}

/// Square lattices of every requested size, all cut from one sampled
/// parameter set so only the size changes from row to row.
pub fn run(sizes: &[usize], methods: &[ZMethod], mode: Mode, seed: u64) -> u8 {
    let exact = mode == Mode::Exact;
    for &n in sizes {
        for &method in methods {
            let refusal =
                if exact { size_limit::<Scalar>(method, n, n) } else { size_limit::<Complex64>(method, n, n) };
            if let Some(reason) = refusal {
                eprintln!("error: {reason}");
                return EXIT_INPUT;
            }
        }
    }
    let largest = *sizes.iter().max().expect("sizes are non-empty");
    let mut sampler = Sampler::new(seed, 0);
    let full = sampler.params(largest, largest);
    let boundary = sampler.boundary(false);
    match mode {
        Mode::Exact => series(sizes, methods, mode, &full, &boundary),
        Mode::Float => {
            let conv = |x: &Scalar| Complex64::from_scalar(x);
            series(sizes, methods, mode, &full.map(conv), &boundary.map(conv))
        }
    }
}

fn series<F: Field>(
    sizes: &[usize],
    methods: &[ZMethod],
    mode: Mode,
    full: &ParamSet<F>,
    boundary: &BoundaryConfig<F>,
) -> u8 {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{HEADER}");
    for &n in sizes {
        let params = full.with_u(full.u[..n].to_vec()).with_v(full.v[..n].to_vec());
        for &method in methods {
            let start = Instant::now();
            let value = match compute_z(method, &params, boundary) {
                Ok(v) => v,
                Err(e) => return report_error(&e),
            };
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let _ = writeln!(out, "{n},{n},{method},{mode},{ms:.3},{}", digest(&value));
            let _ = out.flush();
        }
    }
    EXIT_OK
}
