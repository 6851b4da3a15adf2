//! The modified Izergin determinant `K^{(z)}_{mn}(ū|v̄)` in its determinant
//! and partition-sum representations, its limits, and the closed-form
//! partition function built on it.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{derive_constants, BoundaryConfig};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{h, kernel_product, kernel_set_product, lambda2_set, Field, Kernel, ParamSet, Scalar, Side};

/// Largest set size enumerated by the partition sums.
pub const SUM_CEILING: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IzerginMethod {
    DetV,
    DetU,
    SumV,
    SumU,
}

impl IzerginMethod {
    pub const ALL: [IzerginMethod; 4] = [Self::DetV, Self::DetU, Self::SumV, Self::SumU];

    pub fn name(self) -> &'static str {
        match self {
            Self::DetV => "det-v",
            Self::DetU => "det-u",
            Self::SumV => "sum-v",
            Self::SumU => "sum-u",
        }
    }

    fn over_u(self) -> bool {
        matches!(self, Self::DetU | Self::SumU)
    }
}

impl fmt::Display for IzerginMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IzerginMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown Izergin method '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IzerginInput<F> {
    pub params: ParamSet<F>,
    pub z: F,
}

impl<F: Field> IzerginInput<F> {
    pub fn new(params: ParamSet<F>, z: F) -> Self {
        IzerginInput { params, z }
    }
}

fn checked_div<F: Field>(num: F, den: &F, what: impl FnOnce() -> String) -> Result<F> {
    if den.is_zero() {
        Err(Error::Degenerate(what()))
    } else {
        Ok(num / den)
    }
}

fn check_sum_size(size: usize) -> Result<()> {
    if size > SUM_CEILING {
        Err(Error::SizeCeiling { size, ceiling: SUM_CEILING, mode: "partition-sum" })
    } else {
        Ok(())
    }
}

fn split<F: Clone>(set: &[F], mask: usize) -> (Vec<F>, Vec<F>) {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (i, x) in set.iter().enumerate() {
        if (mask >> i) & 1 == 1 {
            first.push(x.clone());
        } else {
            second.push(x.clone());
        }
    }
    (first, second)
}

/// `det_n(−z δ_jk + f(ū,v_j) f(v_j,v̄_j) / h(v_j,v_k))`.
fn det_v<F: Field>(input: &IzerginInput<F>) -> Result<F> {
    let p = &input.params;
    let c = &p.c;
    let n = p.n();
    let mut diag_factor = Vec::with_capacity(n);
    for (j, vj) in p.v.iter().enumerate() {
        let fu = kernel_product(Kernel::F, vj, &p.u, Side::Right, c)?;
        let others: Vec<F> = p.v.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect();
        let fv = kernel_product(Kernel::F, vj, &others, Side::Left, c)?;
        diag_factor.push(fu * &fv);
    }
    let m = Matrix::try_from_fn(n, n, |j, k| {
        let hk = h(&p.v[j], &p.v[k], c)?;
        let mut entry = checked_div(diag_factor[j].clone(), &hk, || format!("h(v_{}, v_{}) = 0", j + 1, k + 1))?;
        if j == k {
            entry -= &input.z;
        }
        Ok(entry)
    })?;
    m.det()
}

/// `det_m(δ_jk f(u_j,v̄) − z f(u_j,ū_j) / h(u_j,u_k))`, without the
/// `(1−z)^{n−m}` factor.
fn det_u_core<F: Field>(input: &IzerginInput<F>) -> Result<F> {
    let p = &input.params;
    let c = &p.c;
    let m = p.m();
    let mut fv = Vec::with_capacity(m);
    let mut fu = Vec::with_capacity(m);
    for (j, uj) in p.u.iter().enumerate() {
        fv.push(kernel_product(Kernel::F, uj, &p.v, Side::Left, c)?);
        let others: Vec<F> = p.u.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect();
        fu.push(kernel_product(Kernel::F, uj, &others, Side::Left, c)?);
    }
    let mat = Matrix::try_from_fn(m, m, |j, k| {
        let hk = h(&p.u[j], &p.u[k], c)?;
        let frac = checked_div(fu[j].clone(), &hk, || format!("h(u_{}, u_{}) = 0", j + 1, k + 1))?;
        let mut entry = -(input.z.clone() * &frac);
        if j == k {
            entry += &fv[j];
        }
        Ok(entry)
    })?;
    mat.det()
}

/// `Σ_{v̄ ⇒ {v̄_I, v̄_II}} (−z)^{#v̄_II} f(ū,v̄_I) f(v̄_I,v̄_II)`.
fn sum_v<F: Field>(input: &IzerginInput<F>) -> Result<F> {
    let p = &input.params;
    let n = p.n();
    check_sum_size(n)?;
    let minus_z = -input.z.clone();
    let mut acc = F::zero();
    for mask in 0..(1usize << n) {
        let (first, second) = split(&p.v, mask);
        let weight = minus_z.powi(second.len() as i64).expect("nonnegative power");
        if weight.is_zero() {
            continue;
        }
        let term = kernel_set_product(Kernel::F, &p.u, &first, &p.c)?
            * kernel_set_product(Kernel::F, &first, &second, &p.c)?;
        acc += &(weight * &term);
    }
    Ok(acc)
}

/// `Σ_{ū ⇒ {ū_I, ū_II}} (−z)^{#ū_I} f(ū_II,v̄) f(ū_I,ū_II)`, without the
/// `(1−z)^{n−m}` factor.
fn sum_u_core<F: Field>(input: &IzerginInput<F>) -> Result<F> {
    let p = &input.params;
    let m = p.m();
    check_sum_size(m)?;
    let minus_z = -input.z.clone();
    let mut acc = F::zero();
    for mask in 0..(1usize << m) {
        let (first, second) = split(&p.u, mask);
        let weight = minus_z.powi(first.len() as i64).expect("nonnegative power");
        if weight.is_zero() {
            continue;
        }
        let term = kernel_set_product(Kernel::F, &second, &p.v, &p.c)?
            * kernel_set_product(Kernel::F, &first, &second, &p.c)?;
        acc += &(weight * &term);
    }
    Ok(acc)
}

/// The representation-specific part: the full `K` for the `v̄` forms, the
/// `ū` forms without their `(1−z)^{n−m}` prefactor.
pub fn izergin_core<F: Field>(input: &IzerginInput<F>, method: IzerginMethod) -> Result<F> {
    match method {
        IzerginMethod::DetV => det_v(input),
        IzerginMethod::DetU => det_u_core(input),
        IzerginMethod::SumV => sum_v(input),
        IzerginMethod::SumU => sum_u_core(input),
    }
}

/// `K^{(z)}_{mn}(ū|v̄)` by the chosen representation.
pub fn mod_izergin<F: Field>(input: &IzerginInput<F>, method: IzerginMethod) -> Result<F> {
    let core = izergin_core(input, method)?;
    if !method.over_u() {
        return Ok(core);
    }
    let exponent = input.params.n() as i64 - input.params.m() as i64;
    let one_minus_z = F::one() - &input.z;
    let factor = one_minus_z
        .powi(exponent)
        .ok_or_else(|| Error::Degenerate("(1 - z)^(n - m) with z = 1 and m > n".into()))?;
    Ok(factor * &core)
}

/// The ordinary Izergin determinant `K_n(ū|v̄) = K^{(1)}_{nn}(ū|v̄)`.
pub fn ordinary_izergin<F: Field>(params: &ParamSet<F>) -> Result<F> {
    if params.m() != params.n() {
        return Err(Error::DimensionMismatch(format!(
            "ordinary Izergin determinant needs #u = #v, got {} and {}",
            params.m(),
            params.n()
        )));
    }
    mod_izergin(&IzerginInput::new(params.clone(), F::one()), IzerginMethod::DetV)
}

/// `Σ f(ū_I, ū_II)` over partitions with `#ū_I = p`; equals `C(#ū, p)`.
pub fn binomial_partition_sum<F: Field>(set: &[F], part: usize, c: &F) -> Result<F> {
    check_sum_size(set.len())?;
    let mut acc = F::zero();
    for mask in 0..(1usize << set.len()) {
        if mask.count_ones() as usize != part {
            continue;
        }
        let (first, second) = split(set, mask);
        acc += &kernel_set_product(Kernel::F, &first, &second, c)?;
    }
    Ok(acc)
}

/// Result of sampling a quantity along a sequence of growing magnitudes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    pub target: [f64; 2],
    pub magnitudes: Vec<f64>,
    pub values: Vec<[f64; 2]>,
    pub rel_errors: Vec<f64>,
    pub tolerance: f64,
    pub converged: bool,
}

pub const LIMIT_MAGNITUDES: [f64; 3] = [1e4, 1e6, 1e8];
pub const LIMIT_TOLERANCE: f64 = 1e-6;

/// Errors below this are double-precision rounding and are not ordered.
pub const LIMIT_NOISE_FLOOR: f64 = 1e-12;

/// Relative error to the target at each sample; converged when the last
/// error is within tolerance and the sequence of errors, clamped below at
/// the noise floor, never increases.
pub fn assess_limit(magnitudes: &[f64], values: &[Complex64], target: Complex64) -> LimitReport {
    let scale = if target.norm() > 0.0 { target.norm() } else { 1.0 };
    let rel_errors: Vec<f64> = values.iter().map(|v| (v - target).norm() / scale).collect();
    let monotone = rel_errors
        .windows(2)
        .all(|w| w[1].max(LIMIT_NOISE_FLOOR) <= w[0].max(LIMIT_NOISE_FLOOR));
    let last_ok = rel_errors.last().is_some_and(|e| *e <= LIMIT_TOLERANCE);
    LimitReport {
        target: [target.re, target.im],
        magnitudes: magnitudes.to_vec(),
        values: values.iter().map(|v| [v.re, v.im]).collect(),
        rel_errors,
        tolerance: LIMIT_TOLERANCE,
        converged: monotone && last_ok,
    }
}

/// Which parameter is sent to infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitParam {
    V,
    U,
}

/// Samples `K` with the `j`-th `v` (or `u`) set to growing magnitudes and
/// compares to `(1−z) K_{m,n−1}(ū|v̄_j)` (or `K_{m−1,n}(ū_j|v̄)`).
pub fn izergin_limit_check(input: &IzerginInput<Scalar>, which: LimitParam, j: usize) -> Result<LimitReport> {
    let p = &input.params;
    let len = match which {
        LimitParam::V => p.n(),
        LimitParam::U => p.m(),
    };
    if j >= len {
        return Err(Error::DimensionMismatch(format!("index {j} out of range for a set of size {len}")));
    }
    let reduced = match which {
        LimitParam::V => {
            let v = crate::scalar::without(&p.v, j);
            let k = mod_izergin(&IzerginInput::new(p.with_v(v), input.z.clone()), IzerginMethod::DetV)?;
            (Scalar::one() - &input.z) * &k
        }
        LimitParam::U => {
            let u = crate::scalar::without(&p.u, j);
            mod_izergin(&IzerginInput::new(p.with_u(u), input.z.clone()), IzerginMethod::DetV)?
        }
    };
    let float_params = p.map(|x| x.to_c64());
    let z = input.z.to_c64();
    let mut values = Vec::with_capacity(LIMIT_MAGNITUDES.len());
    for &mag in &LIMIT_MAGNITUDES {
        let mut fp = float_params.clone();
        match which {
            LimitParam::V => fp.v[j] = Complex64::new(mag, 0.0),
            LimitParam::U => fp.u[j] = Complex64::new(mag, 0.0),
        }
        values.push(mod_izergin(&IzerginInput::new(fp, z), IzerginMethod::DetV)?);
    }
    Ok(assess_limit(&LIMIT_MAGNITUDES, &values, reduced.to_c64()))
}

/// `tr(B)^m tr(B̂)^n / χ^n`, rewritten as `tr(B)^{m−n} tr(BB̂)^n` when
/// `χ = 0`; the factor multiplying `λ₂(ū)·K` in the `v̄` representations.
fn prefactor_v<F: Field>(m: usize, n: usize, cfg: &BoundaryConfig<F>, chi: &F) -> Result<F> {
    let (tb, tbh, tbbh) = (cfg.tr_b(), cfg.tr_b_hat(), cfg.tr_b_bhat());
    if !chi.is_zero() {
        let num = tb.powi(m as i64).expect("power") * &tbh.powi(n as i64).expect("power");
        return Ok(num / &chi.powi(n as i64).expect("power"));
    }
    check_rewrite(m, n, &tb, &tbbh)?;
    let pow_b = tb.powi(m as i64 - n as i64).expect("tr(B) nonzero when m != n");
    Ok(pow_b * &tbbh.powi(n as i64).expect("power"))
}

/// `tr(B)^m tr(B̂)^n / χ^m`, rewritten as `tr(B̂)^{n−m} tr(BB̂)^m` when
/// `χ = 0`; the factor multiplying `λ₂(ū)` times the `ū`-determinant.
fn prefactor_u<F: Field>(m: usize, n: usize, cfg: &BoundaryConfig<F>, chi: &F) -> Result<F> {
    let (tb, tbh, tbbh) = (cfg.tr_b(), cfg.tr_b_hat(), cfg.tr_b_bhat());
    if !chi.is_zero() {
        let num = tb.powi(m as i64).expect("power") * &tbh.powi(n as i64).expect("power");
        return Ok(num / &chi.powi(m as i64).expect("power"));
    }
    check_rewrite(m, n, &tb, &tbbh)?;
    let pow_bh = tbh.powi(n as i64 - m as i64).ok_or_else(|| {
        Error::Unavailable("tr(B^) = 0 with m > n makes the u-representation singular".into())
    })?;
    Ok(pow_bh * &tbbh.powi(m as i64).expect("power"))
}

fn check_rewrite<F: Field>(m: usize, n: usize, tr_b: &F, tr_b_bhat: &F) -> Result<()> {
    if tr_b_bhat.is_zero() {
        return Err(Error::Unavailable("chi = 0 and tr(B B^) = 0".into()));
    }
    if m != n && tr_b.is_zero() {
        return Err(Error::Unavailable("chi = 0 and tr(B) = 0 with m != n".into()));
    }
    Ok(())
}

/// Closed-form partition function
/// `Z = tr(B)^m tr(B̂)^n χ^{−n} λ₂(ū) K^{(β)}_{mn}(ū|v̄)` by the chosen
/// representation of `K`.
pub fn closed_form_z<F: Field>(params: &ParamSet<F>, cfg: &BoundaryConfig<F>, method: IzerginMethod) -> Result<F> {
    let k = derive_constants(cfg)?;
    let beta = k.beta.map_err(|e| Error::Unavailable(format!("beta undefined ({e})")))?;
    let chi = k.chi.expect("chi follows beta");
    let (m, n) = (params.m(), params.n());
    let pref = if method.over_u() { prefactor_u(m, n, cfg, &chi)? } else { prefactor_v(m, n, cfg, &chi)? };
    let lam = lambda2_set(params)?;
    let core = izergin_core(&IzerginInput::new(params.clone(), beta), method)?;
    Ok(pref * &lam * &core)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::build_boundary;
    use crate::scalar::{f, g, Vec2};

    fn z(n: i64) -> Scalar {
        Scalar::from_i64(n)
    }

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    fn vz(a: i64, b: i64) -> Vec2<Scalar> {
        [z(a), z(b)]
    }

    fn sample(m: usize, n: usize) -> ParamSet<Scalar> {
        let u = (0..m as i64).map(|i| q(7 * i + 3, 5)).collect();
        let v = (0..n as i64).map(|j| q(-4 * j - 1, 3)).collect();
        ParamSet::new(u, v, q(2, 7)).unwrap()
    }

    #[test]
    fn small_cases() {
        let zz = q(-3, 4);
        let p = ParamSet::new(vec![z(2)], vec![z(0)], z(1)).unwrap();
        for meth in IzerginMethod::ALL {
            let k = mod_izergin(&IzerginInput::new(p.clone(), zz.clone()), meth).unwrap();
            assert_eq!(k, f(&z(2), &z(0), &z(1)).unwrap() - &zz, "{meth}");
        }
        let p01 = ParamSet::new(vec![], vec![z(5)], z(1)).unwrap();
        let p10 = ParamSet::new(vec![z(5)], vec![], z(1)).unwrap();
        for meth in IzerginMethod::ALL {
            assert_eq!(mod_izergin(&IzerginInput::new(p01.clone(), zz.clone()), meth).unwrap(), z(1) - &zz);
            assert_eq!(mod_izergin(&IzerginInput::new(p10.clone(), zz.clone()), meth).unwrap(), z(1));
        }
    }

    #[test]
    fn four_representations_agree() {
        let zz = q(5, 3);
        for m in 0..=4 {
            for n in 0..=4 {
                let input = IzerginInput::new(sample(m, n), zz.clone());
                let vals: Vec<Scalar> = IzerginMethod::ALL.iter().map(|&me| mod_izergin(&input, me).unwrap()).collect();
                assert!(vals.windows(2).all(|w| w[0] == w[1]), "m={m} n={n}: {vals:?}");
            }
        }
    }

    #[test]
    fn vanishes_at_one_when_fewer_rows() {
        for (m, n) in [(0, 1), (1, 2), (2, 4)] {
            let input = IzerginInput::new(sample(m, n), z(1));
            assert!(mod_izergin(&input, IzerginMethod::DetV).unwrap().is_zero());
            assert!(mod_izergin(&input, IzerginMethod::SumV).unwrap().is_zero());
        }
        let err = mod_izergin(&IzerginInput::new(sample(2, 1), z(1)), IzerginMethod::DetU).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    #[test]
    fn ordinary_single() {
        let p = ParamSet::new(vec![q(1, 3)], vec![q(4, 5)], q(2, 9)).unwrap();
        assert_eq!(ordinary_izergin(&p).unwrap(), g(&p.u[0], &p.v[0], &p.c).unwrap());
        assert!(ordinary_izergin(&sample(1, 2)).is_err());
    }

    #[test]
    fn zero_modification_is_product() {
        let p = sample(3, 2);
        let k = mod_izergin(&IzerginInput::new(p.clone(), z(0)), IzerginMethod::DetV).unwrap();
        assert_eq!(k, kernel_set_product(Kernel::F, &p.u, &p.v, &p.c).unwrap());
    }

    #[test]
    fn binomial() {
        let u: Vec<Scalar> = (0..4).map(|i| q(3 * i + 1, 7)).collect();
        let got: Vec<Scalar> = (0..=4).map(|p| binomial_partition_sum(&u, p, &q(1, 2)).unwrap()).collect();
        assert_eq!(got, vec![z(1), z(4), z(6), z(4), z(1)]);
    }

    #[test]
    fn limits() {
        let input = IzerginInput::new(sample(2, 2), q(3, 5));
        for which in [LimitParam::U, LimitParam::V] {
            let rep = izergin_limit_check(&input, which, 0).unwrap();
            assert!(rep.converged, "{rep:?}");
        }
        let single = IzerginInput::new(sample(1, 1), q(3, 5));
        assert!(izergin_limit_check(&single, LimitParam::V, 0).unwrap().converged);
    }

    #[test]
    fn worked_closed_form() {
        let p = ParamSet::new(vec![z(2)], vec![z(0)], z(1)).unwrap();
        let cfg = build_boundary(vz(1, 1), vz(1, 0), vz(1, 3), vz(1, 2), None, None).unwrap();
        for meth in IzerginMethod::ALL {
            assert_eq!(closed_form_z(&p, &cfg, meth).unwrap(), z(18), "{meth}");
        }
    }

    #[test]
    fn domain_wall_rewrite() {
        let cfg = build_boundary(vz(1, 0), vz(0, 1), vz(1, 0), vz(0, 1), None, None).unwrap();
        let p = sample(2, 2);
        let expect = lambda2_set(&p).unwrap() * &ordinary_izergin(&p).unwrap();
        for meth in IzerginMethod::ALL {
            assert_eq!(closed_form_z(&p, &cfg, meth).unwrap(), expect);
        }
        let rect = sample(1, 2);
        assert!(matches!(closed_form_z(&rect, &cfg, IzerginMethod::DetV), Err(Error::Unavailable(_))));
    }
}
