//! Homogeneous linear systems satisfied by the vector of partition functions
//! `X_j = Z_nn(ū_j|v̄)`, the `W` transform proving their determinants vanish,
//! the Cramer-rule solution, and the off-shell recursions behind them.

use serde::Serialize;

use crate::boundary::{derive_constants, AuxOp, BoundaryConfig, DerivedConstants};
use crate::error::{Error, Result};
use crate::lattice::{partition_expectation, row_sandwich, LatticeSpec};
use crate::linalg::{cauchy_matrix, Matrix};
use crate::scalar::{
    g, h, htilde, kernel_product, lambda1, lambda2, vandermonde, without, Field, Kernel, ParamSet, Side,
};

/// `L_A`, `L_D` for an extended set of `n+1` rapidities.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem<F> {
    pub u_ext: Vec<F>,
    pub l_a: Matrix<F>,
    pub l_d: Matrix<F>,
    pub beta: F,
    pub chi: F,
}

impl<F: Field> LinearSystem<F> {
    pub fn size(&self) -> usize {
        self.u_ext.len()
    }
}

fn beta_chi<F: Field>(k: &DerivedConstants<F>) -> Result<(F, F)> {
    let beta = k.beta.clone()?;
    let chi = k.chi.clone()?;
    Ok((beta, chi))
}

/// Builds `L_A` and `L_D`; `params` supplies `v̄` and `c`, `u_ext` the
/// `n+1` row rapidities.
pub fn build_systems<F: Field>(u_ext: &[F], params: &ParamSet<F>, constants: &DerivedConstants<F>) -> Result<LinearSystem<F>> {
    let (beta, chi) = beta_chi(constants)?;
    let c = &params.c;
    let size = u_ext.len();
    let ext = params.with_u(u_ext.to_vec());
    ext.check_generic()?;
    let mut l1 = Vec::with_capacity(size);
    let mut l2 = Vec::with_capacity(size);
    let mut gself = Vec::with_capacity(size);
    for (j, uj) in u_ext.iter().enumerate() {
        l1.push(lambda1(uj, params)?);
        l2.push(lambda2(uj, params)?);
        gself.push(kernel_product(Kernel::G, uj, &without(u_ext, j), Side::Left, c)?);
    }
    let l_a = Matrix::try_from_fn(size, size, |i, j| {
        let uj = &u_ext[j];
        let others = without(u_ext, i);
        let ht = kernel_product(Kernel::HTilde, uj, &others, Side::Left, c)?;
        let ll = l1[j].clone() * &l2[j];
        let y = ht * &l1[j] - chi.clone() * &ll;
        let mut entry = gself[j].clone() * &y;
        if i == j {
            entry -= &(beta.clone() * &l2[j]);
        }
        Ok(entry)
    })?;
    let l_d = Matrix::try_from_fn(size, size, |i, j| {
        let uj = &u_ext[j];
        let others = without(u_ext, i);
        let hh = kernel_product(Kernel::H, uj, &others, Side::Left, c)?;
        let ll = l1[j].clone() * &l2[j];
        let y = beta.clone() * &hh * &l2[j] + chi.clone() * &ll;
        let mut entry = -(gself[j].clone() * &y);
        if i == j {
            entry += &l1[j];
        }
        Ok(entry)
    })?;
    Ok(LinearSystem { u_ext: u_ext.to_vec(), l_a, l_d, beta, chi })
}

/// `X_j = Z_nn(ū_j|v̄)` from the contraction oracle.
pub fn kernel_vector<F: Field>(u_ext: &[F], params: &ParamSet<F>, cfg: &BoundaryConfig<F>) -> Result<Vec<F>> {
    (0..u_ext.len())
        .map(|j| {
            let spec = LatticeSpec::from_boundary(params.with_u(without(u_ext, j)), cfg);
            partition_expectation(&spec, cfg)
        })
        .collect()
}

/// `W_ik = g(u_k, ū_k) / g(u_k, w̄_i)`.
pub fn w_matrix<F: Field>(u_ext: &[F], w_set: &[F], c: &F) -> Result<Matrix<F>> {
    if u_ext.len() != w_set.len() {
        return Err(Error::DimensionMismatch(format!("{} rapidities but {} w's", u_ext.len(), w_set.len())));
    }
    vandermonde(w_set, false, c)?;
    let size = u_ext.len();
    Matrix::try_from_fn(size, size, |i, k| {
        let num = kernel_product(Kernel::G, &u_ext[k], &without(u_ext, k), Side::Left, c)?;
        let den = kernel_product(Kernel::G, &u_ext[k], &without(w_set, i), Side::Left, c)?;
        Ok(num / &den)
    })
}

/// `L̃_A = W L_A` and `L̃_D = W L_D`.
#[derive(Clone, Debug, PartialEq)]
pub struct Transformed<F> {
    pub w: Matrix<F>,
    pub lt_a: Matrix<F>,
    pub lt_d: Matrix<F>,
}

pub fn w_transform<F: Field>(system: &LinearSystem<F>, w_set: &[F], c: &F) -> Result<Transformed<F>> {
    let w = w_matrix(&system.u_ext, w_set, c)?;
    let lt_a = w.matmul(&system.l_a)?;
    let lt_d = w.matmul(&system.l_d)?;
    Ok(Transformed { w, lt_a, lt_d })
}

/// Whether `Σ_k W_ik = 1`, `Σ_k W_ik h̃(x,ū_k) = h̃(x,w̄_i)` and
/// `Σ_k W_ik h(x,ū_k) = h(x,w̄_i)` hold at every `x` in `probes`.
pub fn w_identities_hold<F: Field>(u_ext: &[F], w_set: &[F], probes: &[F], c: &F) -> Result<bool> {
    let w = w_matrix(u_ext, w_set, c)?;
    let size = u_ext.len();
    for i in 0..size {
        let mut total = F::zero();
        for k in 0..size {
            total += &w[(i, k)];
        }
        if !total.is_one() {
            return Ok(false);
        }
        for x in probes {
            for kind in [Kernel::HTilde, Kernel::H] {
                let mut acc = F::zero();
                for k in 0..size {
                    let term = kernel_product(kind, x, &without(u_ext, k), Side::Left, c)?;
                    acc += &(w[(i, k)].clone() * &term);
                }
                if acc != kernel_product(kind, x, &without(w_set, i), Side::Left, c)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether `det W = Δ(w̄)/Δ(ū)`.
pub fn w_det_matches<F: Field>(u_ext: &[F], w_set: &[F], c: &F) -> Result<bool> {
    let det = w_matrix(u_ext, w_set, c)?.det()?;
    Ok(det == vandermonde(w_set, false, c)? / &vandermonde(u_ext, false, c)?)
}

/// `w_j = v_j − c` (A system) or `w_j = v_j` (D system), then `w_{n+1} = free`.
pub fn specialized_w<F: Field>(op: AuxOp, params: &ParamSet<F>, free: &F) -> Vec<F> {
    let mut w: Vec<F> = match op {
        AuxOp::A => params.v.iter().map(|v| v.clone() - &params.c).collect(),
        AuxOp::D => params.v.clone(),
    };
    w.push(free.clone());
    w
}

/// Default free parameter `w_{n+1} = v_n + 7c`.
pub fn default_free_w<F: Field>(params: &ParamSet<F>) -> F {
    let last = params.v.last().cloned().unwrap_or_else(F::zero);
    last + &(F::from_i64(7) * &params.c)
}

/// Last row of `L̃_A` (resp. `L̃_D`) at its specialization.
pub fn specialized_last_row<F: Field>(op: AuxOp, system: &LinearSystem<F>, params: &ParamSet<F>, free: &F) -> Result<Vec<F>> {
    let w_set = specialized_w(op, params, free);
    let t = w_transform(system, &w_set, &params.c)?;
    let m = match op {
        AuxOp::A => t.lt_a,
        AuxOp::D => t.lt_d,
    };
    Ok(m.row(m.rows() - 1).to_vec())
}

/// Rows `1..n` of `T̃_A L̃_A` and `T̃_D L̃_D` at their specializations, and
/// the common matrix `L̃_ij = g(u_j,ū_j) λ₁λ₂(u_j) (−β/h(u_j,v_i) + g(u_j,v_i))`.
pub fn renormalized_rows<F: Field>(
    system: &LinearSystem<F>,
    params: &ParamSet<F>,
    free: &F,
) -> Result<(Matrix<F>, Matrix<F>, Matrix<F>)> {
    let c = &params.c;
    let n = params.n();
    let size = system.size();
    let ta = w_transform(system, &specialized_w(AuxOp::A, params, free), c)?.lt_a;
    let td = w_transform(system, &specialized_w(AuxOp::D, params, free), c)?.lt_d;
    let a_rows = Matrix::try_from_fn(n, size, |i, j| Ok(ta[(i, j)].clone() / &htilde(&params.v[i], free, c)?))?;
    let d_rows = Matrix::try_from_fn(n, size, |i, j| Ok(td[(i, j)].clone() * &g(&params.v[i], free, c)?))?;
    let u = &system.u_ext;
    let common = Matrix::try_from_fn(n, size, |i, j| {
        let gs = kernel_product(Kernel::G, &u[j], &without(u, j), Side::Left, c)?;
        let ll = lambda1(&u[j], params)? * &lambda2(&u[j], params)?;
        let inner = g(&u[j], &params.v[i], c)? - &(system.beta.clone() / &h(&u[j], &params.v[i], c)?);
        Ok(gs * &ll * &inner)
    })?;
    Ok((a_rows, d_rows, common))
}

/// `M_ij = h(u_j,v̄)(−β/h(u_j,v_i) + g(u_j,v_i))`.
pub fn reduced_matrix<F: Field>(params: &ParamSet<F>, beta: &F) -> Result<Matrix<F>> {
    let c = &params.c;
    let n = params.n();
    Matrix::try_from_fn(n, n, |i, j| {
        let hv = kernel_product(Kernel::H, &params.u[j], &params.v, Side::Left, c)?;
        let inner = g(&params.u[j], &params.v[i], c)? - &(beta.clone() / &h(&params.u[j], &params.v[i], c)?);
        Ok(hv * &inner)
    })
}

/// `Z = φ(v̄) det M / det C` with `φ(v̄) = (tr(B̂)tr(B)/χ)^n`.
pub fn cramer_z<F: Field>(params: &ParamSet<F>, cfg: &BoundaryConfig<F>) -> Result<F> {
    if params.m() != params.n() {
        return Err(Error::DimensionMismatch(format!(
            "Cramer route needs a square lattice, got {}x{}",
            params.m(),
            params.n()
        )));
    }
    let k = derive_constants(cfg)?;
    let beta = k.beta.map_err(|e| Error::Unavailable(format!("beta undefined ({e})")))?;
    let chi = k.chi.expect("chi follows beta");
    if chi.is_zero() {
        return Err(Error::Unavailable("chi = 0, the Cramer normalization is singular".into()));
    }
    let n = params.n() as i64;
    let phi = (cfg.tr_b_hat() * &cfg.tr_b() / &chi).powi(n).expect("power");
    let det_m = reduced_matrix(params, &beta)?.det()?;
    let det_c = cauchy_matrix(params)?.det()?;
    if det_c.is_zero() {
        return Err(Error::Degenerate("Cauchy determinant vanishes".into()));
    }
    Ok(phi * &det_m / &det_c)
}

/// Two sides of an identity between partition functions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison<F> {
    pub lhs: F,
    pub rhs: F,
}

impl<F: Field> Comparison<F> {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `Z_{n+1,n}(ū|v̄)` against `tr(B) Σ_j g(u_j,ū_j) λ₁(u_j) λ₂(u_j) Z_nn(ū_j|v̄)`,
/// both from the contraction oracle.
pub fn recursion_check<F: Field>(params_ext: &ParamSet<F>, cfg: &BoundaryConfig<F>) -> Result<Comparison<F>> {
    if params_ext.m() != params_ext.n() + 1 {
        return Err(Error::DimensionMismatch("recursion needs #u = #v + 1".into()));
    }
    let c = &params_ext.c;
    let u = &params_ext.u;
    let lhs = partition_expectation(&LatticeSpec::from_boundary(params_ext.clone(), cfg), cfg)?;
    let x = kernel_vector(u, params_ext, cfg)?;
    let mut rhs = F::zero();
    for (j, uj) in u.iter().enumerate() {
        let w = kernel_product(Kernel::G, uj, &without(u, j), Side::Left, c)?
            * &lambda1(uj, params_ext)?
            * &lambda2(uj, params_ext)?;
        rhs += &(w * &x[j]);
    }
    Ok(Comparison { lhs, rhs: rhs * &cfg.tr_b() })
}

fn product_of<F: Field>(ops: &[Matrix<F>], skip: usize) -> Result<Matrix<F>> {
    let dim = ops[0].rows();
    let mut acc = Matrix::identity(dim);
    for (k, op) in ops.iter().enumerate() {
        if k != skip {
            acc = acc.matmul(op)?;
        }
    }
    Ok(acc)
}

/// `A(u_i)B(ū_i) − Σ_j f(ū_j,u_j)/h(u_i,u_j) B(ū_j)A(u_j)`, or for `D`
/// `D(u_i)B(ū_i) − Σ_j f(u_j,ū_j)/h(u_j,u_i) B(ū_j)D(u_j)`.
pub fn multiple_action_check<F: Field>(
    op: AuxOp,
    i: usize,
    u_ext: &[F],
    params: &ParamSet<F>,
    cfg: &BoundaryConfig<F>,
) -> Result<Matrix<F>> {
    if i >= u_ext.len() {
        return Err(Error::DimensionMismatch(format!("index {i} out of range")));
    }
    let c = &params.c;
    let aux = |x: &F| match op {
        AuxOp::A => row_sandwich(&cfg.w, x, params, &cfg.a),
        AuxOp::D => row_sandwich(&cfg.d_tilde, x, params, &cfg.e),
    };
    let bs: Vec<Matrix<F>> = u_ext.iter().map(|x| row_sandwich(&cfg.w, x, params, &cfg.e)).collect::<Result<_>>()?;
    let mut res = aux(&u_ext[i])?.matmul(&product_of(&bs, i)?)?;
    for (j, uj) in u_ext.iter().enumerate() {
        let rest = without(u_ext, j);
        let coeff = match op {
            AuxOp::A => kernel_product(Kernel::F, uj, &rest, Side::Right, c)? / &h(&u_ext[i], uj, c)?,
            AuxOp::D => kernel_product(Kernel::F, uj, &rest, Side::Left, c)? / &h(uj, &u_ext[i], c)?,
        };
        let term = product_of(&bs, j)?.matmul(&aux(uj)?)?;
        res.add_scaled(&-coeff, &term)?;
    }
    Ok(res)
}

/// Both readings of the `D` identity are reported: the weighted sum over `j`
/// with `Z_mn(ū_j|v̄)` in every term, and with `Z_mn(ū_i|v̄)` in every term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OffshellReport<F> {
    pub rhs: F,
    pub a_lhs: F,
    pub d_lhs_sum_index: F,
    pub d_lhs_fixed_index: F,
}

impl<F: Field> OffshellReport<F> {
    pub fn a_holds(&self) -> bool {
        self.a_lhs == self.rhs
    }

    pub fn d_holds(&self) -> bool {
        self.d_lhs_sum_index == self.rhs
    }

    pub fn d_fixed_index_holds(&self) -> bool {
        self.d_lhs_fixed_index == self.rhs
    }
}

/// Evaluates, with contraction-oracle partition functions,
/// `tr(B) Σ_j (−β λ₂(u_i) δ_ij + λ₁(u_j) f(ū_j,u_j)/h(u_i,u_j)) Z_mn(ū_j|v̄)` and
/// `tr(B) Σ_j (λ₁(u_i) δ_ij − β λ₂(u_j) f(u_j,ū_j)/h(u_j,u_i)) Z_mn(·|v̄)`
/// against `χ Z_{m+1,n}(ū|v̄)`.
pub fn offshell_system_check<F: Field>(
    i: usize,
    u_ext: &[F],
    params: &ParamSet<F>,
    cfg: &BoundaryConfig<F>,
) -> Result<OffshellReport<F>> {
    if i >= u_ext.len() {
        return Err(Error::DimensionMismatch(format!("index {i} out of range")));
    }
    let k = derive_constants(cfg)?;
    let (beta, chi) = beta_chi(&k)?;
    let c = &params.c;
    let ui = &u_ext[i];
    let full = params.with_u(u_ext.to_vec());
    let z_full = partition_expectation(&LatticeSpec::from_boundary(full, cfg), cfg)?;
    let x = kernel_vector(u_ext, params, cfg)?;
    let mut a_sum = F::zero();
    let mut d_sum = F::zero();
    let mut d_fixed = F::zero();
    for (j, uj) in u_ext.iter().enumerate() {
        let rest = without(u_ext, j);
        let mut a_coef = lambda1(uj, params)? * &kernel_product(Kernel::F, uj, &rest, Side::Right, c)?
            / &h(ui, uj, c)?;
        let mut d_coef = -(beta.clone()
            * &lambda2(uj, params)?
            * &kernel_product(Kernel::F, uj, &rest, Side::Left, c)?
            / &h(uj, ui, c)?);
        if i == j {
            a_coef -= &(beta.clone() * &lambda2(ui, params)?);
            d_coef += &lambda1(ui, params)?;
        }
        a_sum += &(a_coef * &x[j]);
        d_sum += &(d_coef.clone() * &x[j]);
        d_fixed += &(d_coef * &x[i]);
    }
    let tb = cfg.tr_b();
    Ok(OffshellReport {
        rhs: chi * &z_full,
        a_lhs: tb.clone() * &a_sum,
        d_lhs_sum_index: tb.clone() * &d_sum,
        d_lhs_fixed_index: tb * &d_fixed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::build_boundary;
    use crate::izergin::{closed_form_z, IzerginMethod};
    use crate::scalar::{Scalar, Vec2};

    fn z(n: i64) -> Scalar {
        Scalar::from_i64(n)
    }

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    fn vz(a: i64, b: i64) -> Vec2<Scalar> {
        [z(a), z(b)]
    }

    fn cfg() -> BoundaryConfig<Scalar> {
        build_boundary([q(2, 3), q(-1, 5)], [q(3, 7), z(2)], [q(-5, 4), q(1, 3)], [z(1), q(4, 9)], None, None).unwrap()
    }

    fn params(m: usize, n: usize) -> ParamSet<Scalar> {
        let u = (0..m as i64).map(|i| q(7 * i + 3, 5)).collect();
        let v = (0..n as i64).map(|j| q(-4 * j - 1, 3)).collect();
        ParamSet::new(u, v, q(2, 7)).unwrap()
    }

    #[test]
    fn systems_are_singular_and_annihilate_oracle() {
        let cfg = cfg();
        let k = derive_constants(&cfg).unwrap();
        for n in 1..=3 {
            let p = params(n + 1, n);
            let sys = build_systems(&p.u, &p, &k).unwrap();
            assert!(sys.l_a.det().unwrap().is_zero());
            assert!(sys.l_d.det().unwrap().is_zero());
            assert_eq!(sys.l_a.rank(), n);
            let x = kernel_vector(&p.u, &p, &cfg).unwrap();
            assert!(sys.l_a.matvec(&x).unwrap().iter().all(|e| e.is_zero()));
            assert!(sys.l_d.matvec(&x).unwrap().iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn w_transform_properties() {
        let cfg = cfg();
        let k = derive_constants(&cfg).unwrap();
        let p = params(3, 2);
        let w_set = vec![q(1, 11), q(-9, 4), q(5, 2)];
        assert!(w_identities_hold(&p.u, &w_set, &[p.u[0].clone(), q(13, 3)], &p.c).unwrap());
        assert!(w_det_matches(&p.u, &w_set, &p.c).unwrap());
        let sys = build_systems(&p.u, &p, &k).unwrap();
        for free in [default_free_w(&p), q(17, 2), q(-21, 5)] {
            for op in [AuxOp::A, AuxOp::D] {
                assert!(specialized_last_row(op, &sys, &p, &free).unwrap().iter().all(|e| e.is_zero()));
            }
            let (a, d, common) = renormalized_rows(&sys, &p, &free).unwrap();
            assert_eq!(a, common);
            assert_eq!(d, common);
        }
    }

    #[test]
    fn cramer_matches_worked_and_closed_form() {
        let p1 = ParamSet::new(vec![z(2)], vec![z(0)], z(1)).unwrap();
        let worked = build_boundary(vz(1, 1), vz(1, 0), vz(1, 3), vz(1, 2), None, None).unwrap();
        assert_eq!(cramer_z(&p1, &worked).unwrap(), z(18));
        let p = params(3, 3);
        let cfg = cfg();
        let expect = partition_expectation(&LatticeSpec::from_boundary(p.clone(), &cfg), &cfg).unwrap();
        assert_eq!(cramer_z(&p, &cfg).unwrap(), expect);
        assert_eq!(closed_form_z(&p, &cfg, IzerginMethod::DetV).unwrap(), expect);
    }

    #[test]
    fn recursion_holds() {
        let cfg = cfg();
        for n in 1..=2 {
            assert!(recursion_check(&params(n + 1, n), &cfg).unwrap().holds());
        }
    }

    #[test]
    fn multiple_actions_vanish() {
        let cfg = cfg();
        let p = params(0, 2);
        let u_ext = vec![q(1, 4), q(-7, 3), q(9, 5)];
        for op in [AuxOp::A, AuxOp::D] {
            for i in 0..3 {
                assert!(multiple_action_check(op, i, &u_ext, &p, &cfg).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn offshell_readings() {
        let cfg = cfg();
        let p = params(0, 2);
        let u_ext = vec![q(1, 4), q(-7, 3), q(9, 5)];
        for i in 0..3 {
            let rep = offshell_system_check(i, &u_ext, &p, &cfg).unwrap();
            assert!(rep.a_holds());
            assert!(rep.d_holds());
        }
        let rep = offshell_system_check(0, &u_ext, &p, &cfg).unwrap();
        assert!(!rep.d_fixed_index_holds());
    }
}
