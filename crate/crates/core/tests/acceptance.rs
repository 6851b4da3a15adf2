//! Acceptance criteria, run sequentially so the timing criteria are not
//! disturbed by other tests. Prints one line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use sixvertex::boundary::derive_constants;
use sixvertex::izergin::{izergin_limit_check, mod_izergin, ordinary_izergin, IzerginInput, IzerginMethod, LimitParam};
use sixvertex::lattice::{operator_leading_coefficient, partition_expectation, LatticeSpec};
use sixvertex::linalg::Matrix;
use sixvertex::linsys::{build_systems, kernel_vector, recursion_check, w_identities_hold};
use sixvertex::oracles::{domain_wall, run_suite, Sampler, Status, SuiteName, SuiteOptions, Tally};
use sixvertex::partition::{applies_to, compute_all, compute_z, ZMethod};
use sixvertex::scalar::{lambda2_set, Field, ParamSet, Scalar};

const SEED: u64 = 1;

struct Verdict {
    ok: bool,
    detail: String,
}

impl Verdict {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Verdict { ok, detail: detail.into() }
    }
}

fn timed(budget: Duration, body: impl FnOnce() -> Verdict) -> (Verdict, Duration) {
    let start = Instant::now();
    let v = body();
    let elapsed = start.elapsed();
    if elapsed > budget {
        let detail = format!("{}; exceeded {budget:?}", v.detail);
        return (Verdict::new(false, detail), elapsed);
    }
    (v, elapsed)
}

fn suite_clean(name: SuiteName, opts: SuiteOptions) -> Result<Tally, String> {
    let reports = run_suite(name, SEED, &opts).map_err(|e| e.to_string())?;
    let tally = Tally::of(&reports);
    if let Some(f) = reports.iter().find(|r| r.status == Status::Fail) {
        return Err(format!("{name}: {}", serde_json::to_string(f).unwrap()));
    }
    if tally.pass == 0 {
        return Err(format!("{name}: no checks ran"));
    }
    Ok(tally)
}

fn five_way_equivalence() -> Verdict {
    let mut rectangular = 0;
    for index in 0..200u64 {
        let mut s = Sampler::new(SEED, index);
        let (m, n) = (s.size(0, 4), s.size(0, 4));
        rectangular += usize::from(m != n);
        let p = s.params(m, n);
        let cfg = s.boundary(false);
        let mut values: Vec<(ZMethod, Scalar)> = Vec::new();
        for (method, value) in compute_all(&p, &cfg) {
            if !applies_to(method, m, n) {
                continue;
            }
            match value {
                Ok(v) => values.push((method, v)),
                Err(e) => return Verdict::new(false, format!("instance {index}: {method} failed: {e}")),
            }
        }
        if values.iter().any(|(_, v)| *v != values[0].1) {
            return Verdict::new(false, format!("instance {index} ({m}x{n}): {values:?}"));
        }
    }
    Verdict::new(rectangular > 0, format!("200 instances, {rectangular} rectangular, all methods equal"))
}

fn domain_wall_reduction() -> Verdict {
    let cfg = domain_wall::<Scalar>();
    for n in 1..=4usize {
        for index in 0..5u64 {
            let p = Sampler::new(SEED, 100 * n as u64 + index).params(n, n);
            let brute = partition_expectation(&LatticeSpec::from_boundary(p.clone(), &cfg), &cfg).unwrap();
            let closed = lambda2_set(&p).unwrap() * &ordinary_izergin(&p).unwrap();
            if brute != closed || (n == 1 && !brute.is_one()) {
                return Verdict::new(false, format!("n={n}: contraction {brute}, closed form {closed}"));
            }
        }
    }
    Verdict::new(true, "n = 1..4, 5 instances each; n = 1 gives 1")
}

fn linear_system_characterization() -> Verdict {
    for index in 0..50u64 {
        let mut s = Sampler::new(SEED, index);
        let n = s.size(1, 3);
        let p = s.params(n + 1, n);
        let cfg = s.boundary(false);
        let k = derive_constants(&cfg).unwrap();
        let sys = build_systems(&p.u, &p, &k).unwrap();
        let x = kernel_vector(&p.u, &p, &cfg).unwrap();
        let dets_vanish = sys.l_a.det().unwrap().is_zero() && sys.l_d.det().unwrap().is_zero();
        let annihilated = [&sys.l_a, &sys.l_d].iter().all(|l| l.matvec(&x).unwrap().iter().all(Field::is_zero));
        if !dets_vanish || !annihilated || x.iter().all(Field::is_zero) {
            return Verdict::new(false, format!("instance {index} (n={n}): det zero {dets_vanish}, annihilated {annihilated}"));
        }
    }
    Verdict::new(true, "50 instances, n <= 3")
}

fn recursion() -> Verdict {
    for index in 0..50u64 {
        let mut s = Sampler::new(SEED, index);
        let n = s.size(1, 3);
        let p = s.params(n + 1, n);
        let cfg = s.boundary(false);
        let cmp = recursion_check(&p, &cfg).unwrap();
        if !cmp.holds() {
            return Verdict::new(false, format!("instance {index}: {} vs {}", cmp.lhs, cmp.rhs));
        }
    }
    Verdict::new(true, "50 instances, n <= 3")
}

fn algebra_suite() -> Verdict {
    let plan = [
        (SuiteName::Ybe, SuiteOptions { max_size: None, instances: Some(100) }),
        (SuiteName::Rtt, SuiteOptions { max_size: Some(2), instances: None }),
        (SuiteName::YangianActions, SuiteOptions { max_size: Some(3), instances: None }),
        (SuiteName::ModifiedActions, SuiteOptions { max_size: Some(3), instances: None }),
        (SuiteName::MultActions, SuiteOptions { max_size: Some(3), instances: None }),
    ];
    let mut passes = 0;
    for (name, opts) in plan {
        match suite_clean(name, opts) {
            Ok(t) => passes += t.pass,
            Err(e) => return Verdict::new(false, e),
        }
    }
    Verdict::new(true, format!("{passes} exact checks"))
}

fn izergin_properties() -> Verdict {
    let plan = [
        (SuiteName::IzerginEquiv, SuiteOptions { max_size: Some(5), instances: Some(100) }),
        (SuiteName::Binomial, SuiteOptions { max_size: Some(6), instances: Some(7) }),
        (SuiteName::Cauchy, SuiteOptions { max_size: Some(4), instances: None }),
    ];
    let mut passes = 0;
    for (name, opts) in plan {
        match suite_clean(name, opts) {
            Ok(t) => passes += t.pass,
            Err(e) => return Verdict::new(false, e),
        }
    }
    // vanishing at z = 1 for every m < n
    for n in 1..=5usize {
        for m in 0..n {
            let p = Sampler::new(SEED, (10 * m + n) as u64).params(m, n);
            let input = IzerginInput::new(p, Scalar::one());
            for method in IzerginMethod::ALL {
                if !mod_izergin(&input, method).unwrap().is_zero() {
                    return Verdict::new(false, format!("K at z = 1 nonzero for m={m}, n={n}, {method}"));
                }
            }
        }
    }
    for n in 1..=4usize {
        let mut s = Sampler::new(SEED, 500 + n as u64);
        let p = s.params(n, 0);
        let w = s.extra_points(&p, n);
        let probes = s.extra_points(&p, 4);
        if !w_identities_hold(&p.u, &w, &probes, &p.c).unwrap() {
            return Verdict::new(false, format!("W interpolation fails at n={n}"));
        }
    }
    Verdict::new(true, format!("{passes} suite checks, K10 for m < n <= 5, W interpolation n <= 4"))
}

fn asymptotics() -> Verdict {
    for n in 1..=3usize {
        let mut s = Sampler::new(SEED, n as u64);
        let p = s.params(0, n);
        let cfg = s.boundary(false);
        let top = operator_leading_coefficient(&LatticeSpec::from_boundary(p.clone(), &cfg)).unwrap();
        let k = (Scalar::one() / &p.c).powi(n as i64).unwrap() * &cfg.tr_b();
        if top != Matrix::identity(1 << n).scale(&k) {
            return Verdict::new(false, format!("leading coefficient of B wrong at n={n}"));
        }
    }
    let mut worst: f64 = 0.0;
    for index in 0..10u64 {
        let mut s = Sampler::new(SEED, index);
        let (m, n) = (s.size(1, 3), s.size(1, 3));
        let input = IzerginInput::new(s.params(m, n), s.rational());
        for (which, len) in [(LimitParam::V, n), (LimitParam::U, m)] {
            for j in 0..len {
                let r = izergin_limit_check(&input, which, j).unwrap();
                if !r.converged {
                    return Verdict::new(false, format!("Izergin limit {which:?} j={j}: {:?}", r.rel_errors));
                }
                worst = worst.max(*r.rel_errors.last().unwrap());
            }
        }
    }
    match suite_clean(SuiteName::Asymptotics, SuiteOptions { max_size: Some(3), instances: Some(20) }) {
        Ok(t) => Verdict::new(true, format!("{} asymptotic checks; worst Izergin limit error {worst:.1e}", t.pass)),
        Err(e) => Verdict::new(false, e),
    }
}

fn time_z<F: Field>(method: ZMethod, p: &ParamSet<F>, cfg: &sixvertex::boundary::BoundaryConfig<F>) -> Duration {
    let start = Instant::now();
    compute_z(method, p, cfg).expect("evaluates");
    start.elapsed()
}

fn performance() -> Verdict {
    let mut s = Sampler::new(SEED, 0);
    let big = s.params(200, 200);
    let cfg = s.boundary(false);
    let fp: ParamSet<Complex64> = big.map(|x| x.to_c64());
    let fcfg = cfg.map(|x| x.to_c64());
    let float_det = time_z(ZMethod::DetV, &fp, &fcfg);
    let mut notes = vec![format!("float det-v n=200: {float_det:.1?}")];
    let mut ok = float_det < Duration::from_secs(1);

    // prefixes of one sampled set, so only the lattice size changes between steps
    let full = s.params(10, 10);
    let mut contraction = Vec::new();
    let mut worst_det = Duration::ZERO;
    for n in 6..=10usize {
        let p = full.with_u(full.u[..n].to_vec()).with_v(full.v[..n].to_vec());
        contraction.push(time_z(ZMethod::ContractionExpectation, &p, &cfg));
        worst_det = worst_det.max(time_z(ZMethod::DetV, &p, &cfg));
    }
    let ratios: Vec<f64> = contraction.windows(2).map(|w| w[1].as_secs_f64() / w[0].as_secs_f64()).collect();
    ok &= ratios.iter().all(|r| *r >= 3.0) && worst_det < Duration::from_millis(100);
    notes.push(format!(
        "exact contraction n=6..10: {:?}, ratios {:?}",
        contraction.iter().map(|d| format!("{d:.1?}")).collect::<Vec<_>>(),
        ratios.iter().map(|r| format!("{r:.1}")).collect::<Vec<_>>()
    ));
    notes.push(format!("slowest exact det-v: {worst_det:.1?}"));
    Verdict::new(ok, notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Verdict); 8] = [
        ("five-way equivalence", 60, five_way_equivalence),
        ("domain-wall reduction", 10, domain_wall_reduction),
        ("linear-system characterization", 30, linear_system_characterization),
        ("recursion", 30, recursion),
        ("algebra suite", 60, algebra_suite),
        ("Izergin properties", 60, izergin_properties),
        ("asymptotics", 10, asymptotics),
        ("performance", 120, performance),
    ];
    let mut failures = 0;
    for (k, (name, budget, body)) in criteria.into_iter().enumerate() {
        let (v, elapsed) = timed(Duration::from_secs(budget), body);
        let tag = if v.ok { "PASS" } else { "FAIL" };
        println!("criterion {} {tag} {name} ({elapsed:.2?}): {}", k + 1, v.detail);
        failures += usize::from(!v.ok);
    }
    println!("acceptance: {} of 8 criteria pass", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
