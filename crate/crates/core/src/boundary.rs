//! Rank-1 boundary twists built from the compass vectors, the auxiliary
//! `A`/`D` twists, and the constants governing their actions on the
//! compass states.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{monodromy_row, product_state, row_sandwich, LatticeSpec};
use crate::linalg::Matrix;
use crate::scalar::{f, g, lambda1, lambda2, pairing, sigma_y_pairing, Field, ParamSet, Vec2};

/// `|x⟩⟨y|` as a 2×2 matrix.
pub fn outer<F: Field>(x: &Vec2<F>, y: &Vec2<F>) -> Matrix<F> {
    Matrix::from_fn(2, 2, |i, j| x[i].clone() * &y[j])
}

fn sigma_y<F: Field>() -> Matrix<F> {
    let i = F::imag_unit();
    let mut m = Matrix::zeros(2, 2);
    m[(0, 1)] = -i.clone();
    m[(1, 0)] = i;
    m
}

/// Which denominators of the derived constants are nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Genericity {
    pub w_n: bool,
    pub s_e: bool,
    pub e_sy_n: bool,
    pub s_sy_w: bool,
    pub tr_b_bhat: bool,
}

impl Genericity {
    pub fn all(&self) -> bool {
        self.w_n && self.s_e && self.e_sy_n && self.s_sy_w && self.tr_b_bhat
    }
}

/// Compass vectors, free vectors of the `A`, `D` twists, and derived twists.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryConfig<F> {
    pub w: Vec2<F>,
    pub e: Vec2<F>,
    pub n: Vec2<F>,
    pub s: Vec2<F>,
    pub a: Vec2<F>,
    pub d_tilde: Vec2<F>,
    /// `B = |e⟩⟨w|`
    pub b: Matrix<F>,
    /// `B̂ = |n⟩⟨s|`
    pub b_hat: Matrix<F>,
    /// `A = |a⟩⟨w|`
    pub a_twist: Matrix<F>,
    /// `D = |e⟩⟨d̃|`
    pub d_twist: Matrix<F>,
    pub genericity: Genericity,
}

fn nonzero<F: Field>(x: Vec2<F>, name: &'static str) -> Result<Vec2<F>> {
    if x[0].is_zero() && x[1].is_zero() {
        Err(Error::ZeroVector(name))
    } else {
        Ok(x)
    }
}

/// Builds the boundary data; `a` and `d̃` default to `(1, 1)`.
pub fn build_boundary<F: Field>(
    w: Vec2<F>,
    e: Vec2<F>,
    n: Vec2<F>,
    s: Vec2<F>,
    a: Option<Vec2<F>>,
    d_tilde: Option<Vec2<F>>,
) -> Result<BoundaryConfig<F>> {
    let ones = || [F::one(), F::one()];
    let w = nonzero(w, "w")?;
    let e = nonzero(e, "e")?;
    let n = nonzero(n, "n")?;
    let s = nonzero(s, "s")?;
    let a = nonzero(a.unwrap_or_else(ones), "a")?;
    let d_tilde = nonzero(d_tilde.unwrap_or_else(ones), "d_tilde")?;
    let genericity = Genericity {
        w_n: !pairing(&w, &n).is_zero(),
        s_e: !pairing(&s, &e).is_zero(),
        e_sy_n: !sigma_y_pairing(&e, &n).is_zero(),
        s_sy_w: !sigma_y_pairing(&s, &w).is_zero(),
        tr_b_bhat: !(pairing(&w, &n) * pairing(&s, &e)).is_zero(),
    };
    Ok(BoundaryConfig {
        b: outer(&e, &w),
        b_hat: outer(&n, &s),
        a_twist: outer(&a, &w),
        d_twist: outer(&e, &d_tilde),
        w,
        e,
        n,
        s,
        a,
        d_tilde,
        genericity,
    })
}

impl<F: Field> BoundaryConfig<F> {
    pub fn tr_b(&self) -> F {
        pairing(&self.w, &self.e)
    }

    pub fn tr_b_hat(&self) -> F {
        pairing(&self.s, &self.n)
    }

    pub fn tr_a(&self) -> F {
        pairing(&self.w, &self.a)
    }

    pub fn tr_d(&self) -> F {
        pairing(&self.d_tilde, &self.e)
    }

    /// `tr(B B̂) = ⟨w|n⟩⟨s|e⟩`
    pub fn tr_b_bhat(&self) -> F {
        pairing(&self.w, &self.n) * pairing(&self.s, &self.e)
    }

    /// `tr(B σ_y B̂ᵗ σ_y)`
    pub fn tr_b_sy_bhat_t_sy(&self) -> F {
        let sy = sigma_y::<F>();
        let prod = self
            .b
            .matmul(&sy)
            .and_then(|m| m.matmul(&self.b_hat.transpose()))
            .and_then(|m| m.matmul(&sy))
            .expect("2x2 products");
        prod.trace().expect("square")
    }

    /// Same data with every vector mapped into another field.
    pub fn map<G: Field>(&self, conv: impl Fn(&F) -> G) -> BoundaryConfig<G> {
        let m = |x: &Vec2<F>| [conv(&x[0]), conv(&x[1])];
        build_boundary(m(&self.w), m(&self.e), m(&self.n), m(&self.s), Some(m(&self.a)), Some(m(&self.d_tilde)))
            .expect("nonzero vectors stay nonzero")
    }
}

/// Right-action (`_N`) and left-action (`_S`) constants plus `β`, `χ`.
/// Each entry is an error when its denominator vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedConstants<F> {
    pub a_n: Result<F>,
    pub c_n: Result<F>,
    pub d_n: Result<F>,
    pub f_n: Result<F>,
    pub a_s: Result<F>,
    pub c_s: Result<F>,
    pub d_s: Result<F>,
    pub f_s: Result<F>,
    pub beta: Result<F>,
    pub chi: Result<F>,
}

fn ratio<F: Field>(num: F, den: F, bracket: &str) -> Result<F> {
    if den.is_zero() {
        Err(Error::Degenerate(format!("{bracket} = 0")))
    } else {
        Ok(num / &den)
    }
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Internal(what.to_string()))
    }
}

/// Computes every constant from its bracket formula and asserts the
/// consistency relations among those that exist.
pub fn derive_constants<F: Field>(cfg: &BoundaryConfig<F>) -> Result<DerivedConstants<F>> {
    let (w, e, n, s, a, dt) = (&cfg.w, &cfg.e, &cfg.n, &cfg.s, &cfg.a, &cfg.d_tilde);
    let sy = sigma_y_pairing::<F>;
    let w_n = pairing(w, n);
    let s_e = pairing(s, e);

    let a_n = ratio(sy(a, e) * &w_n, sy(n, e), "<n|sigma_y|e>");
    let c_n = ratio(sy(a, n), sy(e, n), "<e|sigma_y|n>");
    let d_n = ratio(sy(e, n) * &sy(w, dt), w_n.clone(), "<w|n>");
    let f_n = ratio(pairing(dt, n), w_n.clone(), "<w|n>");
    let a_s = ratio(sy(a, e) * &sy(s, w), s_e.clone(), "<s|e>");
    let c_s = ratio(pairing(s, a), s_e.clone(), "<s|e>");
    let d_s = ratio(s_e.clone() * &sy(dt, w), sy(s, w), "<s|sigma_y|w>");
    let f_s = ratio(sy(s, dt), sy(s, w), "<s|sigma_y|w>");
    let beta = ratio(sy(w, s) * &sy(e, n), pairing(e, s) * &w_n, "<e|s><w|n>");
    let chi = beta.clone().map(|b| F::one() - b);

    let consts = DerivedConstants { a_n, c_n, d_n, f_n, a_s, c_s, d_s, f_s, beta, chi };
    verify_constants(cfg, &consts)?;
    Ok(consts)
}

fn verify_constants<F: Field>(cfg: &BoundaryConfig<F>, k: &DerivedConstants<F>) -> Result<()> {
    if !F::EXACT {
        return Ok(());
    }
    let tr_b = cfg.tr_b();
    let tr_bh = cfg.tr_b_hat();
    let tr_bbh = cfg.tr_b_bhat();
    let tr_a = cfg.tr_a();
    let tr_d = cfg.tr_d();
    let relation = |x: &Result<F>, y: &Result<F>, tr: &F, what: &str| -> Result<()> {
        if let (Ok(x), Ok(y)) = (x, y) {
            check(x.clone() + &(tr_b.clone() * y) == *tr, what)?;
        }
        Ok(())
    };
    relation(&k.a_n, &k.c_n, &tr_a, "a_N + tr(B) c_N != tr(A)")?;
    relation(&k.d_n, &k.f_n, &tr_d, "d_N + tr(B) f_N != tr(D)")?;
    relation(&k.a_s, &k.c_s, &tr_a, "a_S + tr(B) c_S != tr(A)")?;
    relation(&k.d_s, &k.f_s, &tr_d, "d_S + tr(B) f_S != tr(D)")?;

    let twisted = cfg.tr_b_sy_bhat_t_sy();
    check(twisted.clone() + &tr_bbh == tr_b.clone() * &tr_bh, "tr(B sy B^t sy) + tr(B B^) != tr(B) tr(B^)")?;

    if let Ok(beta) = &k.beta {
        if let (Ok(a_s), Ok(a_n)) = (&k.a_s, &k.a_n) {
            check(a_s.clone() == beta.clone() * a_n, "beta != a_S / a_N")?;
        }
        if let (Ok(d_n), Ok(d_s)) = (&k.d_n, &k.d_s) {
            check(d_n.clone() == beta.clone() * d_s, "beta != d_N / d_S")?;
        }
        if !tr_bbh.is_zero() {
            check(*beta == -(twisted / &tr_bbh), "bracket beta != trace beta")?;
            let chi = k.chi.as_ref().expect("chi follows beta");
            check(*chi == tr_bh.clone() * &tr_b / &tr_bbh, "chi != tr(B^) tr(B) / tr(B B^)")?;
        }
    }

    if [&cfg.w, &cfg.e, &cfg.n, &cfg.s, &cfg.a, &cfg.d_tilde].iter().all(|v| is_real_vec(v)) {
        let all = [&k.a_n, &k.c_n, &k.d_n, &k.f_n, &k.a_s, &k.c_s, &k.d_s, &k.f_s, &k.beta, &k.chi];
        for x in all.into_iter().flatten() {
            check(x.is_real(), "constant with nonzero imaginary part from real input")?;
        }
    }
    Ok(())
}

fn is_real_vec<F: Field>(v: &Vec2<F>) -> bool {
    v.iter().all(Field::is_real)
}

/// Right action on `|N⟩` or left action on `⟨S|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionSide {
    Right,
    Left,
}

/// The auxiliary operators `A(u) = ⟨w|T|a⟩` and `D(u) = ⟨d̃|T|e⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxOp {
    A,
    D,
}

fn sub_scaled<F: Field>(acc: &mut [F], k: &F, x: &[F]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a -= &(k.clone() * b);
    }
}

/// Residual of the triangular action of `A` or `D` on a compass state,
/// e.g. `A(u)|N⟩ − a_N λ₁(u)|N⟩ − c_N B(u)|N⟩`; zero when the action holds.
pub fn action_check<F: Field>(
    side: ActionSide,
    op: AuxOp,
    u: &F,
    params: &ParamSet<F>,
    cfg: &BoundaryConfig<F>,
) -> Result<Vec<F>> {
    let k = derive_constants(cfg)?;
    let b = row_sandwich(&cfg.w, u, params, &cfg.e)?;
    let (operator, weight, coeff_state, coeff_b) = match (side, op) {
        (ActionSide::Right, AuxOp::A) => (row_sandwich(&cfg.w, u, params, &cfg.a)?, lambda1(u, params)?, k.a_n?, k.c_n?),
        (ActionSide::Right, AuxOp::D) => (row_sandwich(&cfg.d_tilde, u, params, &cfg.e)?, lambda2(u, params)?, k.d_n?, k.f_n?),
        (ActionSide::Left, AuxOp::A) => (row_sandwich(&cfg.w, u, params, &cfg.a)?, lambda2(u, params)?, k.a_s?, k.c_s?),
        (ActionSide::Left, AuxOp::D) => (row_sandwich(&cfg.d_tilde, u, params, &cfg.e)?, lambda1(u, params)?, k.d_s?, k.f_s?),
    };
    let apply = |m: &Matrix<F>, x: &[F]| match side {
        ActionSide::Right => m.matvec(x),
        ActionSide::Left => m.vecmat(x),
    };
    let state = match side {
        ActionSide::Right => product_state(&cfg.n, params.n()),
        ActionSide::Left => product_state(&cfg.s, params.n()),
    };
    let mut residual = apply(&operator, &state)?;
    sub_scaled(&mut residual, &(coeff_state * &weight), &state);
    sub_scaled(&mut residual, &coeff_b, &apply(&b, &state)?);
    Ok(residual)
}

/// Which component of `x` is assumed nonzero in the generator actions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    First,
    Second,
}

/// Residuals of the three generator actions on `|X⟩ = |x⟩^{⊗n}` (right) or
/// `⟨X|` (left), each of the form `t X − α X − κ t' X`.
pub fn generator_action_residuals<F: Field>(
    side: ActionSide,
    branch: Branch,
    x: &Vec2<F>,
    u: &F,
    params: &ParamSet<F>,
) -> Result<Vec<Vec<F>>> {
    let (num, den) = match branch {
        Branch::First => (&x[1], &x[0]),
        Branch::Second => (&x[0], &x[1]),
    };
    if den.is_zero() {
        return Err(Error::Degenerate("branch component of x is zero".into()));
    }
    let r = num.clone() / den;
    let r2 = r.clone() * &r;
    let l1 = lambda1(u, params)?;
    let l2 = lambda2(u, params)?;
    let diff = l1.clone() - &l2;
    let mono = monodromy_row(u, params)?;
    // (target, α, partner, κ) with one-based generator indices
    let partner = match (side, branch) {
        (ActionSide::Right, Branch::First) | (ActionSide::Left, Branch::Second) => (1, 2),
        (ActionSide::Right, Branch::Second) | (ActionSide::Left, Branch::First) => (2, 1),
    };
    let table: [((usize, usize), F, F); 3] = match branch {
        Branch::First => [
            ((1, 1), l1.clone(), -r.clone()),
            ((2, 2), l2.clone(), r.clone()),
            ((partner.1, partner.0), r.clone() * &diff, -r2),
        ],
        Branch::Second => [
            ((1, 1), l2.clone(), r.clone()),
            ((2, 2), l1.clone(), -r.clone()),
            ((partner.1, partner.0), r.clone() * &diff, -r2),
        ],
    };
    let state = product_state(x, params.n());
    let apply = |m: &Matrix<F>| match side {
        ActionSide::Right => m.matvec(&state),
        ActionSide::Left => m.vecmat(&state),
    };
    let partner_applied = apply(mono.t(partner.0, partner.1))?;
    table
        .iter()
        .map(|((i, j), alpha, kappa)| {
            let mut res = apply(mono.t(*i, *j))?;
            sub_scaled(&mut res, alpha, &state);
            sub_scaled(&mut res, kappa, &partner_applied);
            Ok(res)
        })
        .collect()
}

/// `A(u)B(v) − f(v,u)B(v)A(u) − g(u,v)B(u)A(v)`, or the `D` counterpart
/// `D(u)B(v) − f(u,v)B(v)D(u) − g(v,u)B(u)D(v)`.
pub fn modified_exchange_residual<F: Field>(
    op: AuxOp,
    u: &F,
    v: &F,
    params: &ParamSet<F>,
    cfg: &BoundaryConfig<F>,
) -> Result<Matrix<F>> {
    let c = &params.c;
    let aux = |x: &F| match op {
        AuxOp::A => row_sandwich(&cfg.w, x, params, &cfg.a),
        AuxOp::D => row_sandwich(&cfg.d_tilde, x, params, &cfg.e),
    };
    let bop = |x: &F| row_sandwich(&cfg.w, x, params, &cfg.e);
    let (xu, xv, bu, bv) = (aux(u)?, aux(v)?, bop(u)?, bop(v)?);
    let (k1, k2) = match op {
        AuxOp::A => (f(v, u, c)?, g(u, v, c)?),
        AuxOp::D => (f(u, v, c)?, g(v, u, c)?),
    };
    let mut res = xu.matmul(&bv)?;
    res.add_scaled(&-k1, &bv.matmul(&xu)?)?;
    res.add_scaled(&-k2, &bu.matmul(&xv)?)?;
    Ok(res)
}

/// Lattice description with `B`, `B̂` taken from this boundary.
pub fn lattice_for<F: Field>(params: ParamSet<F>, cfg: &BoundaryConfig<F>) -> LatticeSpec<F> {
    LatticeSpec::from_boundary(params, cfg)
}
