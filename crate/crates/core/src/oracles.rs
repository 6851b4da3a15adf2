//! Named, seeded verification suites. Every check compares exact values for
//! literal equality; only the asymptotic samplers use floats.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::boundary::{
    action_check, build_boundary, derive_constants, generator_action_residuals, modified_exchange_residual, ActionSide,
    AuxOp, Branch, BoundaryConfig,
};
use crate::error::{Error, Result};
use crate::izergin::{
    assess_limit, binomial_partition_sum, closed_form_z, izergin_limit_check, mod_izergin, ordinary_izergin,
    IzerginInput, IzerginMethod, LimitParam, LIMIT_MAGNITUDES,
};
use crate::lattice::{
    aux_form_rtt_residual, col_exchange_residual, generator_exchange_residuals, operator_leading_coefficient,
    partition_expectation, partition_expectation_col, partition_full_trace, partition_trace, row_exchange_residual,
    rtt_hat_residual, rtt_residual, twist_invariance_residual, twisted_operator, weight_action_residuals,
    ybe_residual, LatticeSpec, OperatorKind,
};
use crate::linalg::{cauchy_det, cauchy_inverse, cauchy_matrix, Matrix};
use crate::linsys::{
    build_systems, cramer_z, default_free_w, kernel_vector, multiple_action_check, offshell_system_check,
    recursion_check, renormalized_rows, specialized_last_row, w_det_matches, w_identities_hold,
};
use crate::partition::{applies_to, compute_all};
use crate::scalar::{g, h, kernel_product, kernel_set_product, lambda2_set, Field, Kernel, ParamSet, Scalar, Side, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedDegenerate,
}

/// Outcome of one named check on one sampled instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: SuiteName,
    pub index: usize,
    pub check_name: String,
    pub instance: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    Ybe,
    Rtt,
    YangianActions,
    ModifiedActions,
    MultActions,
    LinearSystems,
    Recursion,
    Offshell,
    IzerginEquiv,
    IzerginLimits,
    Cauchy,
    Binomial,
    Asymptotics,
    FullEquivalence,
}

impl SuiteName {
    pub const ALL: [SuiteName; 14] = [
        Self::Ybe,
        Self::Rtt,
        Self::YangianActions,
        Self::ModifiedActions,
        Self::MultActions,
        Self::LinearSystems,
        Self::Recursion,
        Self::Offshell,
        Self::IzerginEquiv,
        Self::IzerginLimits,
        Self::Cauchy,
        Self::Binomial,
        Self::Asymptotics,
        Self::FullEquivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ybe => "ybe",
            Self::Rtt => "rtt",
            Self::YangianActions => "yangian_actions",
            Self::ModifiedActions => "modified_actions",
            Self::MultActions => "mult_actions",
            Self::LinearSystems => "linear_systems",
            Self::Recursion => "recursion",
            Self::Offshell => "offshell",
            Self::IzerginEquiv => "izergin_equiv",
            Self::IzerginLimits => "izergin_limits",
            Self::Cauchy => "cauchy",
            Self::Binomial => "binomial",
            Self::Asymptotics => "asymptotics",
            Self::FullEquivalence => "full_equivalence",
        }
    }

    pub fn default_instances(self) -> usize {
        match self {
            Self::Ybe | Self::Cauchy => 100,
            Self::ModifiedActions => 500,
            Self::LinearSystems | Self::Recursion | Self::IzerginEquiv => 50,
            Self::FullEquivalence => 100,
            Self::Binomial => 14,
            Self::Asymptotics => 10,
            Self::Rtt | Self::YangianActions | Self::MultActions | Self::Offshell | Self::IzerginLimits => 20,
        }
    }

    pub fn default_max_size(self) -> usize {
        match self {
            Self::Ybe => 1,
            Self::Rtt | Self::Offshell => 2,
            Self::IzerginEquiv => 5,
            Self::Cauchy | Self::Binomial => 6,
            _ => 3,
        }
    }

    /// Largest accepted `max_size`; beyond it exact evaluation is impractical.
    pub fn size_ceiling(self) -> usize {
        match self {
            Self::Rtt | Self::Offshell => 4,
            Self::MultActions | Self::LinearSystems | Self::Recursion => 5,
            Self::YangianActions | Self::ModifiedActions | Self::Asymptotics | Self::FullEquivalence => 6,
            Self::IzerginLimits => 8,
            Self::IzerginEquiv => 10,
            Self::Ybe | Self::Cauchy | Self::Binomial => 12,
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuiteOptions {
    pub max_size: Option<usize>,
    pub instances: Option<usize>,
}

/// Seeded source of generic random inputs. Each instance gets its own
/// ChaCha stream, so results do not depend on scheduling.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn size(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi.max(lo))
    }

    /// Small rational `p/q` with `|p| ≤ 12`, `1 ≤ q ≤ 6`.
    pub fn rational(&mut self) -> Scalar {
        self.rational_within(12)
    }

    fn rational_within(&mut self, bound: i64) -> Scalar {
        Scalar::from_ratio(self.rng.random_range(-bound..=bound), self.rng.random_range(1..=6))
    }

    pub fn nonzero(&mut self) -> Scalar {
        loop {
            let x = self.rational();
            if !x.is_zero() {
                return x;
            }
        }
    }

    fn clashes(x: &Scalar, taken: &[Scalar], c: &Scalar) -> bool {
        taken.iter().any(|y| {
            let d = x.clone() - y;
            d.is_zero() || d == *c || d == -c.clone()
        })
    }

    /// Rational with `|x| ≤ 2`.
    pub fn unit_rational(&mut self) -> Scalar {
        Scalar::from_ratio(self.rng.random_range(-6..=6), self.rng.random_range(3..=6))
    }

    /// Order-one spectral data, for checks whose convergence rate scales
    /// with `|c|` and `|v̄|`. At most 12 points in total.
    pub fn unit_params(&mut self, m: usize, n: usize) -> ParamSet<Scalar> {
        assert!(m + n <= 12, "unit_params supports at most 12 points");
        let c = loop {
            let x = self.unit_rational();
            if !x.is_zero() {
                break x;
            }
        };
        let mut taken: Vec<Scalar> = Vec::with_capacity(m + n);
        while taken.len() < m + n {
            let x = self.unit_rational();
            if !Self::clashes(&x, &taken, &c) {
                taken.push(x);
            }
        }
        let v = taken.split_off(m);
        ParamSet::new(taken, v, c).expect("sampled parameters are generic")
    }

    /// `m + n` rapidities whose pairwise differences avoid `0` and `±c`.
    pub fn params(&mut self, m: usize, n: usize) -> ParamSet<Scalar> {
        let c = self.nonzero();
        self.params_with_c(m, n, c)
    }

    pub fn params_with_c(&mut self, m: usize, n: usize, c: Scalar) -> ParamSet<Scalar> {
        // widen the numerator range for large sets so rejection terminates quickly
        let bound = 12.max(3 * (m + n) as i64);
        let mut taken: Vec<Scalar> = Vec::with_capacity(m + n);
        while taken.len() < m + n {
            let x = self.rational_within(bound);
            if !Self::clashes(&x, &taken, &c) {
                taken.push(x);
            }
        }
        let v = taken.split_off(m);
        ParamSet::new(taken, v, c).expect("sampled parameters are generic")
    }

    /// A point outside `ū ∪ v̄`, `v̄ ± c`, `ū ± c` and `avoid`.
    pub fn extra_point(&mut self, params: &ParamSet<Scalar>, avoid: &[Scalar]) -> Scalar {
        let mut taken: Vec<Scalar> = params.u.iter().chain(&params.v).chain(avoid).cloned().collect();
        taken.dedup();
        loop {
            let x = self.rational();
            if !Self::clashes(&x, &taken, &params.c) {
                return x;
            }
        }
    }

    /// `k` mutually generic extra points.
    pub fn extra_points(&mut self, params: &ParamSet<Scalar>, k: usize) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = Vec::with_capacity(k);
        while out.len() < k {
            let x = self.extra_point(params, &out);
            out.push(x);
        }
        out
    }

    /// Nonzero integer 2-vector with entries in `-3..=3`.
    pub fn vector(&mut self) -> Vec2<Scalar> {
        loop {
            let x = [self.rng.random_range(-3..=3i64), self.rng.random_range(-3..=3i64)];
            if x != [0, 0] {
                return [Scalar::from_i64(x[0]), Scalar::from_i64(x[1])];
            }
        }
    }

    pub fn vector_both_nonzero(&mut self) -> Vec2<Scalar> {
        loop {
            let x = self.vector();
            if !x[0].is_zero() && !x[1].is_zero() {
                return x;
            }
        }
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix<Scalar> {
        Matrix::from_fn(rows, cols, |_, _| self.rational())
    }

    /// Boundary with every genericity flag set and `tr B`, `tr B̂` nonzero
    /// (so `χ` is defined and nonzero); `a`, `d̃` random when `free` is set.
    pub fn boundary(&mut self, free: bool) -> BoundaryConfig<Scalar> {
        loop {
            let (w, e, n, s) = (self.vector(), self.vector(), self.vector(), self.vector());
            let (a, d) = if free { (Some(self.vector()), Some(self.vector())) } else { (None, None) };
            let cfg = build_boundary(w, e, n, s, a, d).expect("nonzero vectors");
            if cfg.genericity.all() && !cfg.tr_b().is_zero() && !cfg.tr_b_hat().is_zero() {
                return cfg;
            }
        }
    }

    /// Same compass vectors with freshly drawn `a`, `d̃`.
    pub fn refree(&mut self, cfg: &BoundaryConfig<Scalar>) -> BoundaryConfig<Scalar> {
        let (a, d) = (self.vector(), self.vector());
        build_boundary(cfg.w.clone(), cfg.e.clone(), cfg.n.clone(), cfg.s.clone(), Some(a), Some(d))
            .expect("nonzero vectors")
    }
}

/// Domain-wall boundary `w = (1,0)`, `e = (0,1)`, `s = (0,1)`, `n = (1,0)`.
pub fn domain_wall<F: Field>() -> BoundaryConfig<F> {
    let (o, z) = (F::one, F::zero);
    build_boundary([o(), z()], [z(), o()], [o(), z()], [z(), o()], None, None).expect("nonzero vectors")
}

fn strings<F: Field>(xs: &[F]) -> Value {
    Value::from(xs.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

pub fn params_json<F: Field>(p: &ParamSet<F>) -> Value {
    json!({ "u": strings(&p.u), "v": strings(&p.v), "c": p.c.to_string() })
}

pub fn boundary_json<F: Field>(cfg: &BoundaryConfig<F>) -> Value {
    json!({
        "w": strings(&cfg.w), "e": strings(&cfg.e), "n": strings(&cfg.n), "s": strings(&cfg.s),
        "a": strings(&cfg.a), "d_tilde": strings(&cfg.d_tilde),
    })
}

fn matrix_json<F: Field>(m: &Matrix<F>) -> Value {
    Value::from((0..m.rows()).map(|r| strings(m.row(r))).collect::<Vec<_>>())
}

const WITNESS_ENTRIES: usize = 8;

/// `None` when zero, otherwise the first few nonzero entries.
fn nonzero_entries<F: Field>(entries: &[F], cols: usize) -> Option<Value> {
    let hits: Vec<Value> = entries
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .take(WITNESS_ENTRIES)
        .map(|(k, x)| json!({ "row": k / cols.max(1), "col": k % cols.max(1), "value": x.to_string() }))
        .collect();
    if hits.is_empty() {
        None
    } else {
        Some(json!({ "nonzero_residual": hits }))
    }
}

fn zero_matrix<F: Field>(m: &Matrix<F>) -> Option<Value> {
    nonzero_entries(m.data(), m.cols())
}

fn zero_vector<F: Field>(v: &[F]) -> Option<Value> {
    nonzero_entries(v, 1)
}

fn zero_vectors<F: Field>(vs: &[Vec<F>]) -> Option<Value> {
    vs.iter().enumerate().find_map(|(k, v)| zero_vector(v).map(|w| json!({ "component": k, "residual": w })))
}

fn zero_matrices<F: Field>(ms: &[Matrix<F>]) -> Option<Value> {
    ms.iter().enumerate().find_map(|(k, m)| zero_matrix(m).map(|w| json!({ "component": k, "residual": w })))
}

fn equal<F: Field>(lhs: &F, rhs: &F) -> Option<Value> {
    (lhs != rhs).then(|| json!({ "lhs": lhs.to_string(), "rhs": rhs.to_string() }))
}

/// `None` when every named value coincides.
fn agree<F: Field>(values: &[(&str, F)]) -> Option<Value> {
    let first = &values.first()?.1;
    values.iter().any(|(_, v)| v != first).then(|| {
        Value::Object(values.iter().map(|(k, v)| (k.to_string(), Value::from(v.to_string()))).collect())
    })
}

struct Recorder {
    suite: SuiteName,
    index: usize,
    instance: Value,
    reports: Vec<CheckReport>,
}

impl Recorder {
    fn new(suite: SuiteName, index: usize) -> Self {
        Recorder { suite, index, instance: Value::Null, reports: Vec::new() }
    }

    fn record(&mut self, name: &str, outcome: Result<Option<Value>>) {
        let (status, witness) = match outcome {
            Ok(None) => (Status::Pass, None),
            Ok(Some(w)) => (Status::Fail, Some(w)),
            Err(e) if e.is_degenerate() => (Status::SkippedDegenerate, Some(json!({ "reason": e.to_string() }))),
            Err(e) => (Status::Fail, Some(json!({ "error": e.to_string() }))),
        };
        self.reports.push(CheckReport {
            suite: self.suite,
            index: self.index,
            check_name: name.to_string(),
            instance: self.instance.clone(),
            status,
            witness,
        });
    }
}

/// Runs `instances` seeded instances of a suite in parallel; reports come
/// back ordered by instance index, then by check order within it.
pub fn run_suite(name: SuiteName, seed: u64, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let max = opts.max_size.unwrap_or(name.default_max_size());
    if max > name.size_ceiling() {
        return Err(Error::SizeCeiling { size: max, ceiling: name.size_ceiling(), mode: "exact" });
    }
    let count = opts.instances.unwrap_or(name.default_instances());
    let per: Vec<Vec<CheckReport>> = (0..count)
        .into_par_iter()
        .map(|index| {
            let mut rec = Recorder::new(name, index);
            let mut s = Sampler::new(seed, index as u64);
            run_instance(name, &mut rec, &mut s, max, index);
            rec.reports
        })
        .collect();
    Ok(per.into_iter().flatten().collect())
}

fn run_instance(name: SuiteName, rec: &mut Recorder, s: &mut Sampler, max: usize, index: usize) {
    match name {
        SuiteName::Ybe => ybe(rec, s),
        SuiteName::Rtt => rtt(rec, s, max),
        SuiteName::YangianActions => yangian_actions(rec, s, max),
        SuiteName::ModifiedActions => modified_actions(rec, s, max),
        SuiteName::MultActions => mult_actions(rec, s, max),
        SuiteName::LinearSystems => linear_systems(rec, s, max),
        SuiteName::Recursion => recursion(rec, s, max),
        SuiteName::Offshell => offshell(rec, s, max),
        SuiteName::IzerginEquiv => izergin_equiv(rec, s, max),
        SuiteName::IzerginLimits => izergin_limits(rec, s, max),
        SuiteName::Cauchy => cauchy(rec, s, max),
        SuiteName::Binomial => binomial(rec, s, index % (max + 1)),
        SuiteName::Asymptotics => asymptotics(rec, s, max),
        SuiteName::FullEquivalence => full_equivalence(rec, s, max),
    }
}

/// One JSON object per line.
pub fn to_json_lines(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("reports serialize"));
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Tally {
    pub fn of(reports: &[CheckReport]) -> Self {
        let mut t = Tally::default();
        for r in reports {
            match r.status {
                Status::Pass => t.pass += 1,
                Status::Fail => t.fail += 1,
                Status::SkippedDegenerate => t.skipped += 1,
            }
        }
        t
    }

    pub fn all_pass(&self) -> bool {
        self.fail == 0
    }
}

fn ybe(rec: &mut Recorder, s: &mut Sampler) {
    let c = s.nonzero();
    let (u, v, w) = (s.rational(), s.rational(), s.rational());
    rec.instance = json!({ "u": u.to_string(), "v": v.to_string(), "w": w.to_string(), "c": c.to_string() });
    rec.record("yang_baxter", ybe_residual(&u, &v, &w, &c).map(|r| zero_matrix(&r)));
}

fn rtt(rec: &mut Recorder, s: &mut Sampler, max: usize) {
    let (m, n) = (s.size(0, max), s.size(0, max));
    let p = s.params(m, n);
    let xs = s.extra_points(&p, 2);
    let (x, y) = (&xs[0], &xs[1]);
    let twist = s.matrix(2, 2);
    let cfg = s.boundary(false);
    rec.instance = json!({
        "params": params_json(&p), "x": x.to_string(), "y": y.to_string(),
        "twist": matrix_json(&twist), "boundary": boundary_json(&cfg),
    });
    rec.record("twist_invariance", twist_invariance_residual(&twist, x, y, &p.c).map(|r| zero_matrix(&r)));
    rec.record("rtt", rtt_residual(x, y, &p).map(|r| zero_matrix(&r)));
    rec.record("rtt_column", rtt_hat_residual(x, y, &p).map(|r| zero_matrix(&r)));
    rec.record("aux_form_rtt", aux_form_rtt_residual(x, y, &p).map(|r| zero_matrix(&r)));
    for i in 0..m.saturating_sub(1) {
        rec.record("row_exchange", row_exchange_residual(&p, i).map(|r| zero_matrix(&r)));
    }
    for j in 0..n.saturating_sub(1) {
        rec.record("column_exchange", col_exchange_residual(&p, j, false).map(|r| zero_matrix(&r)));
    }
    let spec = LatticeSpec::from_boundary(p.clone(), &cfg);
    for (label, kind) in [("row_operators_commute", OperatorKind::B), ("column_operators_commute", OperatorKind::BHat)] {
        let outcome = (|| {
            let a = twisted_operator(kind, x, &spec, None)?;
            let b = twisted_operator(kind, y, &spec, None)?;
            Ok(zero_matrix(&a.commutator(&b)?))
        })();
        rec.record(label, outcome);
    }
}

fn yangian_actions(rec: &mut Recorder, s: &mut Sampler, max: usize) {
    let n = s.size(0, max);
    let p = s.params(0, n);
    let pts = s.extra_points(&p, 2);
    let (u, v) = (&pts[0], &pts[1]);
    let x = s.vector_both_nonzero();
    rec.instance = json!({ "params": params_json(&p), "u": u.to_string(), "v": v.to_string(), "x": strings(&x) });
    rec.record("generator_exchange", generator_exchange_residuals(u, v, &p).map(|r| zero_matrices(&r)));
    rec.record("highest_lowest_weight", weight_action_residuals(u, &p).map(|r| zero_vectors(&r)));
    for (side, side_name) in [(ActionSide::Right, "right"), (ActionSide::Left, "left")] {
        for (branch, branch_name) in [(Branch::First, "first"), (Branch::Second, "second")] {
            let outcome = generator_action_residuals(side, branch, &x, u, &p).map(|r| zero_vectors(&r));
            rec.record(&format!("generator_action_{side_name}_{branch_name}"), outcome);
        }
    }
}

fn checked_ratio(num: Scalar, den: &Scalar, what: &str) -> Result<Scalar> {
    if den.is_zero() {
        Err(Error::Degenerate(format!("{what} = 0")))
    } else {
        Ok(num / den)
    }
}

fn constant_checks(rec: &mut Recorder, s: &mut Sampler, cfg: &BoundaryConfig<Scalar>) {
    let k = match derive_constants(cfg) {
        Ok(k) => k,
        Err(e) => {
            rec.record("derived_constants", Err(e));
            return;
        }
    };
    let (tr_b, tr_bh, tr_bbh) = (cfg.tr_b(), cfg.tr_b_hat(), cfg.tr_b_bhat());
    let rela = |a: &Result<Scalar>, c: &Result<Scalar>, d: &Result<Scalar>, f: &Result<Scalar>| -> Result<Option<Value>> {
        let (a, c, d, f) = (a.clone()?, c.clone()?, d.clone()?, f.clone()?);
        let first = equal(&(a + &(tr_b.clone() * &c)), &cfg.tr_a());
        let second = equal(&(d + &(tr_b.clone() * &f)), &cfg.tr_d());
        Ok(first.or(second))
    };
    rec.record("constants_right_relations", rela(&k.a_n, &k.c_n, &k.d_n, &k.f_n));
    rec.record("constants_left_relations", rela(&k.a_s, &k.c_s, &k.d_s, &k.f_s));
    let ratios = (|| {
        let beta = k.beta.clone()?;
        let by_a = checked_ratio(k.a_s.clone()?, &k.a_n.clone()?, "a_n")?;
        let by_d = checked_ratio(k.d_n.clone()?, &k.d_s.clone()?, "d_s")?;
        let by_trace = -(cfg.tr_b_sy_bhat_t_sy() / &tr_bbh);
        Ok(agree(&[("beta", beta), ("a_s/a_n", by_a), ("d_n/d_s", by_d), ("trace_form", by_trace)]))
    })();
    rec.record("beta_forms", ratios);
    let chi = (|| {
        let chi = k.chi.clone()?;
        let one_minus = Scalar::one() - &k.beta.clone()?;
        let traces = tr_bh.clone() * &tr_b / &tr_bbh;
        Ok(agree(&[("chi", chi), ("1-beta", one_minus), ("trace_form", traces)]))
    })();
    rec.record("chi_forms", chi);
    rec.record(
        "trace_identity",
        Ok(equal(&(cfg.tr_b_sy_bhat_t_sy() + &tr_bbh), &(tr_b.clone() * &tr_bh))),
    );
    let all = [&k.a_n, &k.c_n, &k.d_n, &k.f_n, &k.a_s, &k.c_s, &k.d_s, &k.f_s, &k.beta, &k.chi];
    let complex: Vec<String> = all.iter().filter_map(|x| x.as_ref().ok()).filter(|x| !x.is_real()).map(|x| x.to_string()).collect();
    rec.record("constants_real", Ok((!complex.is_empty()).then(|| json!({ "complex_values": complex }))));
    let scaled = (|| {
        let mut l = || s.nonzero();
        let (lw, le, ln, ls) = (l(), l(), l(), l());
        let sc = |x: &Vec2<Scalar>, k: &Scalar| [x[0].clone() * k, x[1].clone() * k];
        let other = build_boundary(
            sc(&cfg.w, &lw),
            sc(&cfg.e, &le),
            sc(&cfg.n, &ln),
            sc(&cfg.s, &ls),
            Some(cfg.a.clone()),
            Some(cfg.d_tilde.clone()),
        )?;
        let k2 = derive_constants(&other)?;
        Ok(equal(&k.beta.clone()?, &k2.beta?).or(equal(&k.chi.clone()?, &k2.chi?)))
    })();
    rec.record("beta_scale_invariance", scaled);
}

fn modified_actions(rec: &mut Recorder, s: &mut Sampler, max: usize) {
    let n = s.size(0, max);
    let p = s.params(0, n);
    let pts = s.extra_points(&p, 2);
    let (u, v) = (&pts[0], &pts[1]);
    let cfg = s.boundary(true);
    rec.instance = json!({ "params": params_json(&p), "u": u.to_string(), "v": v.to_string(), "boundary": boundary_json(&cfg) });
    constant_checks(rec, s, &cfg);
    for (side, side_name) in [(ActionSide::Right, "right"), (ActionSide::Left, "left")] {
        for (op, op_name) in [(AuxOp::A, "a"), (AuxOp::D, "d")] {
            let outcome = action_check(side, op, u, &p, &cfg).map(|r| zero_vector(&r));
            rec.record(&format!("action_{side_name}_{op_name}"), outcome);
        }
    }
    for (op, op_name) in [(AuxOp::A, "a"), (AuxOp::D, "d")] {
        let outcome = modified_exchange_residual(op, u, v, &p, &cfg).map(|r| zero_matrix(&r));
        rec.record(&format!("modified_exchange_{op_name}"), outcome);
    }
}

fn mult_actions(rec: &mut Recorder, s: &mut Sampler, max: usize) {
    let m = s.size(0, max.min(2));
    let n = s.size(0, max);
    let p = s.params(m + 1, n);
    let cfg = s.boundary(true);
    rec.instance = json!({ "params": params_json(&p), "boundary": boundary_json(&cfg) });
    for i in 0..=m {
        for (op, op_name) in [(AuxOp::A, "a"), (AuxOp::D, "d")] {
            let outcome = multiple_action_check(op, i, &p.u, &p, &cfg).map(|r| zero_matrix(&r));
            rec.record(&format!("multiple_action_{op_name}"), outcome);
        }
    }
}

fn linear_systems(rec: &mut Recorder, s: &mut Sampler, max: usize) {
    let n = s.size(0, max);
    let p = s.params(n + 1, n);
    let cfg = s.boundary(false);
    let w_set = s.extra_points(&p, n + 1);
    let probes = s.extra_points(&p, 3);
    let frees = {
        let mut avoid: Vec<Scalar> = p.v.iter().map(|v| v.clone() - &p.c).collect();
        let default = default_free_w(&p);
        let first = if p.u.iter().chain(&p.v).chain(&avoid).any(|x| *x == default) {
            s.extra_point(&p, &avoid)
        } else {
            default
        };
        avoid.push(first.clone());
        let a = s.extra_point(&p, &avoid);
        avoid.push(a.clone());
        let b = s.extra_point(&p, &avoid);
        [first, a, b]
    };
    rec.instance = json!({
        "params": params_json(&p), "boundary": boundary_json(&cfg), "w": strings(&w_set),
        "probes": strings(&probes), "free_w": strings(&frees),
    });
    let system = derive_constants(&cfg).and_then(|k| build_systems(&p.u, &p, &k));
    let system = match system {
        Ok(sys) => sys,
        Err(e) => {
            rec.record("build_systems", Err(e));
            return;
        }
    };
    rec.record("determinant_a_vanishes", system.l_a.det().map(|d| zero_vector(&[d])));
    rec.record("determinant_d_vanishes", system.l_d.det().map(|d| zero_vector(&[d])));
    let ranks = (system.l_a.rank(), system.l_d.rank());
    rec.record("rank_is_n", Ok((ranks != (n, n)).then(|| json!({ "rank_a": ranks.0, "rank_d": ranks.1, "n": n }))));
    let annihilated = (|| {
        let x = kernel_vector(&p.u, &p, &cfg)?;
        let ra = system.l_a.matvec(&x)?;
        let rd = system.l_d.matvec(&x)?;
        Ok(zero_vectors(&[ra, rd]).map(|w| json!({ "kernel_vector": strings(&x), "residual": w })))
    })();
    rec.record("kernel_vector_annihilated", annihilated);
    rec.record(
        "w_interpolation",
        w_identities_hold(&p.u, &w_set, &probes, &p.c).map(|ok| (!ok).then(|| json!("identity violated"))),
    );
    rec.record("w_determinant", w_det_matches(&p.u, &w_set, &p.c).map(|ok| (!ok).then(|| json!("det W mismatch"))));
    for free in &frees {
        for (op, op_name) in [(AuxOp::A, "a"), (AuxOp::D, "d")] {
            let outcome = specialized_last_row(op, &system, &p, free)
                .map(|row| zero_vector(&row).map(|w| json!({ "free_w": free.to_string(), "residual": w })));
            rec.record(&format!("specialized_last_row_{op_name}"), outcome);
        }
    }
    let rows = renormalized_rows(&system, &p, &frees[0]).and_then(|(a, d, common)| {
        Ok(zero_matrix(&a.sub(&common)?).or(zero_matrix(&d.sub(&common)?)))
    });
    rec.record("renormalized_rows_coincide", rows);
    let square = p.with_u(p.u[..n].to_vec());
    let cramer = (|| {
        let expectation = partition_expectation(&LatticeSpec::from_boundary(square.clone(), &cfg), &cfg)?;
        let closed = closed_form_z(&square, &cfg, IzerginMethod::DetV)?;
        let cramer = cramer_z(&square, &cfg)?;
        Ok(agree(&[("cramer", cramer), ("closed_form", closed), ("expectation", expectation)]))
    })();
    rec.record("cramer_solution", cramer);
}

fn recursion(rec: &mut Recorder, s: &mut Sampler, max: usize) {
    let n = s.size(0, max);
    let p = s.params(n + 1, n);
    let cfg = s.boundary(false);
    rec.instance = json!({ "params": params_json(&p), "boundary": boundary_json(&cfg) });
    rec.record("recursion", recursion_check(&p, &cfg).map(|cmp| equal(&cmp.lhs, &cmp.rhs)));
}

fn offshell(rec: &mut Recorder, s: &mut Sampler, max: usize) {
    let (m, n) = (s.size(0, max), s.size(0, max));
    let p = s.params(m + 1, n);
    let cfg = s.boundary(false);
    rec.instance = json!({ "params": params_json(&p), "boundary": boundary_json(&cfg) });
    for i in 0..=m {
        match offshell_system_check(i, &p.u, &p, &cfg) {
            Ok(r) => {
                rec.record("offshell_a", Ok(equal(&r.a_lhs, &r.rhs)));
                rec.record("offshell_d", Ok(equal(&r.d_lhs_sum_index, &r.rhs)));
            }
            Err(e) => rec.record("offshell", Err(e)),
        }
    }
}

fn izergin_equiv(rec: &mut Recorder, s: &mut Sampler, max: usize) {
    let (m, n) = (s.size(0, max), s.size(0, max));
    let p = s.params(m, n);
    let z = s.rational();
    let mut pu = p.u.clone();
    let mut pv = p.v.clone();
    pu.shuffle(s.rng());
    pv.shuffle(s.rng());
    let permuted = ParamSet::new(pu, pv, p.c.clone()).expect("permutation keeps genericity");
    rec.instance = json!({ "params": params_json(&p), "z": z.to_string(), "permuted": params_json(&permuted) });
    let all_methods = |input: &IzerginInput<Scalar>| -> Result<Vec<(&'static str, Scalar)>> {
        IzerginMethod::ALL.iter().map(|&me| Ok((me.name(), mod_izergin(input, me)?))).collect()
    };
    let input = IzerginInput::new(p.clone(), z.clone());
    rec.record("four_representations_agree", all_methods(&input).map(|v| agree(&v)));
    if m < n {
        let at_one = IzerginInput::new(p.clone(), Scalar::one());
        let outcome = all_methods(&at_one).map(|vals| {
            let mut vals = vals;
            vals.push(("zero", Scalar::zero()));
            agree(&vals)
        });
        rec.record("vanishes_at_z_one", outcome);
    }
    let at_zero = (|| {
        let input = IzerginInput::new(p.clone(), Scalar::zero());
        let product = kernel_set_product(Kernel::F, &p.u, &p.v, &p.c)?;
        Ok(agree(&[
            ("sum_v", mod_izergin(&input, IzerginMethod::SumV)?),
            ("det_v", mod_izergin(&input, IzerginMethod::DetV)?),
            ("product", product),
        ]))
    })();
    rec.record("z_zero_product", at_zero);
    let sym = (|| {
        let other = IzerginInput::new(permuted.clone(), z.clone());
        Ok(agree(&[
            ("original", mod_izergin(&input, IzerginMethod::DetV)?),
            ("permuted_det_v", mod_izergin(&other, IzerginMethod::DetV)?),
            ("permuted_det_u", mod_izergin(&other, IzerginMethod::DetU)?),
        ]))
    })();
    rec.record("symmetric_in_each_set", sym);
}

fn izergin_limits(rec: &mut Recorder, s: &mut Sampler, max: usize) {
    let (m, n) = (s.size(0, max), s.size(0, max));
    let p = s.params(m, n);
    let z = s.rational();
    rec.instance = json!({ "params": params_json(&p), "z": z.to_string() });
    let input = IzerginInput::new(p, z);
    for (which, len, label) in [(LimitParam::V, n, "limit_v_to_infinity"), (LimitParam::U, m, "limit_u_to_infinity")] {
        for j in 0..len {
            let outcome = izergin_limit_check(&input, which, j).map(|r| {
                (!r.converged).then(|| json!({ "index": j, "report": serde_json::to_value(&r).expect("serializable") }))
            });
            rec.record(label, outcome);
        }
    }
}

fn cauchy(rec: &mut Recorder, s: &mut Sampler, max: usize) {
    let n = s.size(1, max);
    let p = s.params(n, n);
    let (a, b) = (s.matrix(4, 4), s.matrix(4, 4));
    rec.instance = json!({ "params": params_json(&p), "a": matrix_json(&a), "b": matrix_json(&b) });
    let c = &p.c;
    let det = (|| Ok(equal(&cauchy_matrix(&p)?.det()?, &cauchy_det(&p)?)))();
    rec.record("determinant_closed_form", det);
    let inverse = (|| {
        let prod = cauchy_matrix(&p)?.matmul(&cauchy_inverse(&p)?)?;
        Ok(zero_matrix(&prod.sub(&Matrix::identity(n))?))
    })();
    rec.record("inverse_closed_form", inverse);
    if n <= 5 {
        let rules = (|| {
            let inv = cauchy_inverse(&p)?;
            let mut first = Matrix::zeros(n, n);
            let mut second = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let mut s1 = Scalar::zero();
                    let mut s2 = Scalar::zero();
                    for l in 0..n {
                        s1 += &(inv[(i, l)].clone() * &g(&p.u[l], &p.v[j], c)?);
                        s2 += &(inv[(i, l)].clone() / &h(&p.u[l], &p.v[j], c)?);
                    }
                    if i == j {
                        s1 -= &Scalar::one();
                    }
                    let vi = crate::scalar::without(&p.v, i);
                    let vj = crate::scalar::without(&p.v, j);
                    let rhs = kernel_product(Kernel::G, &p.v[i], &vi, Side::Left, c)?
                        * &kernel_product(Kernel::HTilde, &p.v[j], &vj, Side::Left, c)?
                        / &(kernel_product(Kernel::G, &p.v[i], &p.u, Side::Right, c)?
                            * &kernel_product(Kernel::H, &p.v[j], &p.u, Side::Right, c)?
                            * &h(&p.v[i], &p.v[j], c)?);
                    first[(i, j)] = s1;
                    second[(i, j)] = s2 - &rhs;
                }
            }
            Ok((zero_matrix(&first), zero_matrix(&second)))
        })();
        match rules {
            Ok((r1, r2)) => {
                rec.record("summation_rule_g", Ok(r1));
                rec.record("summation_rule_inverse_h", Ok(r2));
            }
            Err(e) => rec.record("summation_rules", Err(e)),
        }
    }
    let mult = (|| Ok(equal(&a.matmul(&b)?.det()?, &(a.det()? * &b.det()?))))();
    rec.record("determinant_multiplicative", mult);
}

fn binomial(rec: &mut Recorder, s: &mut Sampler, n: usize) {
    let p = s.params(n, 0);
    rec.instance = json!({ "params": params_json(&p) });
    let outcome = (|| {
        let mut sums = Vec::with_capacity(n + 1);
        let mut expected = Vec::with_capacity(n + 1);
        let mut choose: i64 = 1;
        for part in 0..=n {
            sums.push(binomial_partition_sum(&p.u, part, &p.c)?);
            expected.push(Scalar::from_i64(choose));
            choose = choose * (n - part) as i64 / (part as i64 + 1);
        }
        Ok((sums != expected).then(|| json!({ "sums": strings(&sums), "expected": strings(&expected) })))
    })();
    rec.record("newton_binomial", outcome);
}

/// `Z_nn · ∏ (c/u_i)ⁿ` with `u_i = scale + ξ_i`, in float arithmetic.
fn scaled_z(xi: &[Scalar], params: &ParamSet<Scalar>, cfg: &BoundaryConfig<Scalar>, scale: f64) -> Result<Complex64> {
    let fp = params.map(|x| x.to_c64());
    let fcfg = cfg.map(|x| x.to_c64());
    let n = params.n() as i32;
    let u: Vec<Complex64> = xi.iter().map(|x| x.to_c64() + scale).collect();
    let norm: Complex64 = u.iter().map(|ui| (fp.c / ui).powi(n)).product();
    let z = partition_expectation(&LatticeSpec::from_boundary(fp.with_u(u), &fcfg), &fcfg)?;
    Ok(z * norm)
}

fn asymptotics(rec: &mut Recorder, s: &mut Sampler, max: usize) {
    let n = s.size(1, max);
    let p = s.unit_params(n, n);
    let cfg = s.boundary(false);
    rec.instance = json!({ "params": params_json(&p), "boundary": boundary_json(&cfg) });
    let lead = (|| {
        let spec = LatticeSpec::from_boundary(p.clone(), &cfg);
        let top = operator_leading_coefficient(&spec)?;
        let k = (Scalar::one() / &p.c).powi(n as i64).expect("c nonzero") * &cfg.tr_b();
        let expected = Matrix::identity(1 << n).scale(&k);
        Ok(zero_matrix(&top.sub(&expected)?))
    })();
    rec.record("leading_coefficient_of_b", lead);
    let limit = (|| {
        let values: Vec<Complex64> =
            LIMIT_MAGNITUDES.iter().map(|&m| scaled_z(&p.u, &p, &cfg, m)).collect::<Result<_>>()?;
        let target = (cfg.tr_b_hat() * &cfg.tr_b()).powi(n as i64).expect("positive power").to_c64();
        let report = assess_limit(&LIMIT_MAGNITUDES, &values, target);
        Ok((!report.converged).then(|| serde_json::to_value(&report).expect("serializable")))
    })();
    rec.record("partition_function_limit", limit);
}

fn full_equivalence(rec: &mut Recorder, s: &mut Sampler, max: usize) {
    let (m, n) = (s.size(0, max), s.size(0, max));
    let p = s.params(m, n);
    let cfg = s.boundary(false);
    let refreed = s.refree(&cfg);
    let (tr, tc) = (s.matrix(2, 2), s.matrix(2, 2));
    let mut pu = p.u.clone();
    let mut pv = p.v.clone();
    pu.shuffle(s.rng());
    pv.shuffle(s.rng());
    let permuted = ParamSet::new(pu, pv, p.c.clone()).expect("permutation keeps genericity");
    let k = s.size(1, max.clamp(1, 4));
    let dw = s.params(k, k);
    rec.instance = json!({
        "params": params_json(&p), "boundary": boundary_json(&cfg), "free_vectors": boundary_json(&refreed),
        "twist_row": matrix_json(&tr), "twist_col": matrix_json(&tc), "permuted": params_json(&permuted),
        "domain_wall_params": params_json(&dw),
    });
    let spec = LatticeSpec::from_boundary(p.clone(), &cfg);

    let agreement = (|| {
        let mut vals: Vec<(&str, Scalar)> = Vec::new();
        let mut skipped: Vec<String> = Vec::new();
        for (method, value) in compute_all(&p, &cfg) {
            if !applies_to(method, m, n) {
                continue;
            }
            match value {
                Ok(v) => vals.push((method.name(), v)),
                Err(e) if e.is_degenerate() && !method.is_contraction() => skipped.push(method.name().into()),
                Err(e) => return Err(e),
            }
        }
        Ok(agree(&vals).map(|w| json!({ "values": w, "unavailable": skipped })))
    })();
    rec.record("all_methods_agree", agreement);

    let forms = (|| {
        Ok(agree(&[
            ("trace", partition_trace(&spec)?),
            ("row_expectation", partition_expectation(&spec, &cfg)?),
            ("column_expectation", partition_expectation_col(&spec, &cfg)?),
        ]))
    })();
    rec.record("row_and_column_forms", forms);

    if m + n <= 6 {
        let full = (|| {
            let general = LatticeSpec::new(p.clone(), tr.clone(), tc.clone())?;
            Ok(equal(&partition_full_trace(&spec)?, &partition_trace(&spec)?)
                .or(equal(&partition_full_trace(&general)?, &partition_trace(&general)?)))
        })();
        rec.record("full_space_trace", full);
    }

    let symmetry = (|| {
        let other = LatticeSpec::from_boundary(permuted.clone(), &cfg);
        Ok(agree(&[
            ("original", partition_trace(&spec)?),
            ("permuted_contraction", partition_trace(&other)?),
            ("permuted_det_v", closed_form_z(&permuted, &cfg, IzerginMethod::DetV)?),
        ]))
    })();
    rec.record("permutation_symmetry", symmetry);

    let independence = (|| {
        let mut vals = Vec::new();
        for method in [IzerginMethod::DetV, IzerginMethod::SumU] {
            vals.push((method.name(), closed_form_z(&p, &cfg, method)?));
            vals.push(("with_other_free_vectors", closed_form_z(&p, &refreed, method)?));
        }
        Ok(agree(&vals))
    })();
    rec.record("free_vector_independence", independence);

    let wall = (|| {
        let dwc = domain_wall::<Scalar>();
        let brute = partition_expectation(&LatticeSpec::from_boundary(dw.clone(), &dwc), &dwc)?;
        let izergin = lambda2_set(&dw)? * &ordinary_izergin(&dw)?;
        let closed = closed_form_z(&dw, &dwc, IzerginMethod::DetV)?;
        let mut vals = vec![("contraction", brute), ("lambda2_times_izergin", izergin), ("det_v", closed)];
        if k == 1 {
            vals.push(("one", Scalar::one()));
        }
        Ok(agree(&vals))
    })();
    rec.record("domain_wall", wall);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in SuiteName::ALL {
            assert_eq!(s.name().parse::<SuiteName>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
        assert!("everything".parse::<SuiteName>().is_err());
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = Sampler::new(9, 3).params(3, 2);
        let b = Sampler::new(9, 3).params(3, 2);
        assert_eq!(a, b);
        assert_ne!(a, Sampler::new(9, 4).params(3, 2));
    }

    #[test]
    fn ceiling_is_enforced() {
        let opts = SuiteOptions { max_size: Some(50), instances: Some(1) };
        assert!(matches!(run_suite(SuiteName::Rtt, 1, &opts), Err(Error::SizeCeiling { .. })));
    }

    #[test]
    fn binomial_example() {
        let opts = SuiteOptions { max_size: Some(4), instances: Some(5) };
        let reports = run_suite(SuiteName::Binomial, 1, &opts).unwrap();
        assert_eq!(reports.len(), 5);
        assert!(Tally::of(&reports).all_pass());
    }
}
