//! R-matrix, monodromy matrices, twisted transfer operators and the
//! brute-force partition functions.
//!
//! Site ordering: on the row quantum space `V_{b_1} ⊗ … ⊗ V_{b_n}` site `b_1`
//! is the slowest index; on the column quantum space `V_{a_1} ⊗ … ⊗ V_{a_m}`
//! site `a_1` is. A row monodromy is stored as its four auxiliary blocks
//! `t_ij(u)`; as a full matrix the auxiliary space comes first.

use crate::boundary::BoundaryConfig;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Field, ParamSet, Vec2};

/// Largest quantum-space site count accepted for dense operators in exact mode.
pub const EXACT_SITE_CEILING: usize = 12;
/// Same, for the float path.
pub const FLOAT_SITE_CEILING: usize = 14;

pub fn site_ceiling<F: Field>() -> usize {
    if F::EXACT {
        EXACT_SITE_CEILING
    } else {
        FLOAT_SITE_CEILING
    }
}

fn check_ceiling<F: Field>(sites: usize) -> Result<()> {
    let ceiling = site_ceiling::<F>();
    if sites > ceiling {
        return Err(Error::SizeCeiling {
            size: sites,
            ceiling,
            mode: if F::EXACT { "exact" } else { "float" },
        });
    }
    Ok(())
}

/// The 4×4 permutation `P` on `C² ⊗ C²`.
pub fn permutation<F: Field>() -> Matrix<F> {
    let mut p = Matrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            p[(2 * a + b, 2 * b + a)] = F::one();
        }
    }
    p
}

/// `R(u, v) = ((u−v)/c)·I + P`.
pub fn r_matrix<F: Field>(u: &F, v: &F, c: &F) -> Result<Matrix<F>> {
    if c.is_zero() {
        return Err(Error::ZeroCrossing);
    }
    let b = (u.clone() - v) / c;
    let mut r = permutation::<F>();
    for i in 0..4 {
        r[(i, i)] += &b;
    }
    Ok(r)
}

/// One site of the block recurrence: given the pair `(p_1, p_2)` of
/// operators on `k` sites, returns `(Σ_j p_j ⊗ r_j1, Σ_j p_j ⊗ r_j2)` on
/// `k + 1` sites, where `r_jk = b·δ_jk + E_kj` are the auxiliary blocks of
/// `R` with `b = (x − y)/c`.
fn extend_site<F: Field>(p1: &Matrix<F>, p2: &Matrix<F>, b: &F) -> (Matrix<F>, Matrix<F>) {
    let d = p1.rows();
    let bp1 = b.clone() + &F::one();
    let mut q1 = Matrix::zeros(2 * d, 2 * d);
    let mut q2 = Matrix::zeros(2 * d, 2 * d);
    for a in 0..d {
        for c in 0..d {
            let x = &p1[(a, c)];
            let y = &p2[(a, c)];
            if !x.is_zero() {
                q1[(2 * a, 2 * c)] = x.clone() * &bp1;
                q1[(2 * a + 1, 2 * c + 1)] = x.clone() * b;
                q2[(2 * a + 1, 2 * c)] = x.clone();
            }
            if !y.is_zero() {
                q1[(2 * a, 2 * c + 1)] = y.clone();
                q2[(2 * a, 2 * c)] = y.clone() * b;
                q2[(2 * a + 1, 2 * c + 1)] = y.clone() * &bp1;
            }
        }
    }
    (q1, q2)
}

fn scalar_matrix<F: Field>(x: &F) -> Matrix<F> {
    Matrix::diag(std::slice::from_ref(x))
}

/// `⟨l| ∏ R |r⟩` over the auxiliary space, as a dense operator on the sites.
fn sandwich_from_diffs<F: Field>(left: &Vec2<F>, right: &Vec2<F>, diffs: &[F]) -> Matrix<F> {
    let mut p1 = scalar_matrix(&left[0]);
    let mut p2 = scalar_matrix(&left[1]);
    for b in diffs {
        (p1, p2) = extend_site(&p1, &p2, b);
    }
    let mut out = p1.scale(&right[0]);
    out.add_scaled(&right[1], &p2).expect("blocks share a shape");
    out
}

/// Auxiliary 2×2 block decomposition `T = Σ E_ij ⊗ t_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monodromy<F> {
    pub blocks: [[Matrix<F>; 2]; 2],
}

impl<F: Field> Monodromy<F> {
    fn from_diffs(diffs: &[F]) -> Self {
        let one = F::one();
        let zero = F::zero();
        let mut rows = [
            (scalar_matrix(&one), scalar_matrix(&zero)),
            (scalar_matrix(&zero), scalar_matrix(&one)),
        ];
        for b in diffs {
            for row in rows.iter_mut() {
                *row = extend_site(&row.0, &row.1, b);
            }
        }
        let [(t11, t12), (t21, t22)] = rows;
        Monodromy { blocks: [[t11, t12], [t21, t22]] }
    }

    /// `t_ij` with one-based indices as in the literature.
    pub fn t(&self, i: usize, j: usize) -> &Matrix<F> {
        &self.blocks[i - 1][j - 1]
    }

    pub fn quantum_dim(&self) -> usize {
        self.blocks[0][0].rows()
    }

    /// Full matrix on `V_aux ⊗ H`.
    pub fn aux_first(&self) -> Matrix<F> {
        let d = self.quantum_dim();
        let mut out = Matrix::zeros(2 * d, 2 * d);
        for i in 0..2 {
            for j in 0..2 {
                let b = &self.blocks[i][j];
                for r in 0..d {
                    for c in 0..d {
                        out[(i * d + r, j * d + c)] = b[(r, c)].clone();
                    }
                }
            }
        }
        out
    }

    /// Full matrix on `H ⊗ V_aux`.
    pub fn aux_last(&self) -> Matrix<F> {
        let d = self.quantum_dim();
        let mut out = Matrix::zeros(2 * d, 2 * d);
        for i in 0..2 {
            for j in 0..2 {
                let b = &self.blocks[i][j];
                for r in 0..d {
                    for c in 0..d {
                        out[(2 * r + i, 2 * c + j)] = b[(r, c)].clone();
                    }
                }
            }
        }
        out
    }

    /// `⟨l|T|r⟩ = Σ l_i r_j t_ij`.
    pub fn sandwich(&self, left: &Vec2<F>, right: &Vec2<F>) -> Matrix<F> {
        let d = self.quantum_dim();
        let mut out = Matrix::zeros(d, d);
        for i in 0..2 {
            for j in 0..2 {
                let k = left[i].clone() * &right[j];
                out.add_scaled(&k, &self.blocks[i][j]).expect("blocks share a shape");
            }
        }
        out
    }
}

fn row_diffs<F: Field>(u: &F, params: &ParamSet<F>) -> Vec<F> {
    params.v.iter().map(|v| (u.clone() - v) / &params.c).collect()
}

fn col_diffs<F: Field>(v: &F, params: &ParamSet<F>) -> Vec<F> {
    params.u.iter().map(|u| (u.clone() - v) / &params.c).collect()
}

/// `T_a(u|v̄) = R_{ab_1}(u,v_1) ⋯ R_{ab_n}(u,v_n)`.
pub fn monodromy_row<F: Field>(u: &F, params: &ParamSet<F>) -> Result<Monodromy<F>> {
    check_ceiling::<F>(params.n())?;
    Ok(Monodromy::from_diffs(&row_diffs(u, params)))
}

/// `T̂_b(v|ū) = R_{a_1b}(u_1,v) ⋯ R_{a_mb}(u_m,v)`.
pub fn monodromy_col<F: Field>(v: &F, params: &ParamSet<F>) -> Result<Monodromy<F>> {
    check_ceiling::<F>(params.m())?;
    Ok(Monodromy::from_diffs(&col_diffs(v, params)))
}

/// `⟨l|T_a(u|v̄)|r⟩_a` built directly without the other two blocks.
pub fn row_sandwich<F: Field>(left: &Vec2<F>, u: &F, params: &ParamSet<F>, right: &Vec2<F>) -> Result<Matrix<F>> {
    check_ceiling::<F>(params.n())?;
    Ok(sandwich_from_diffs(left, right, &row_diffs(u, params)))
}

/// `⟨l|T̂_b(v|ū)|r⟩_b`.
pub fn col_sandwich<F: Field>(left: &Vec2<F>, v: &F, params: &ParamSet<F>, right: &Vec2<F>) -> Result<Matrix<F>> {
    check_ceiling::<F>(params.m())?;
    Ok(sandwich_from_diffs(left, right, &col_diffs(v, params)))
}

/// Rank ≤ 1 factorisation `X = |col⟩⟨row|`, if it exists.
pub fn rank_one_factors<F: Field>(x: &Matrix<F>) -> Option<(Vec2<F>, Vec2<F>)> {
    let det = x[(0, 0)].clone() * &x[(1, 1)] - x[(0, 1)].clone() * &x[(1, 0)];
    if !det.is_zero() {
        return None;
    }
    let pos = (0..4).map(|k| (k / 2, k % 2)).find(|&(i, j)| !x[(i, j)].is_zero());
    let Some((i0, j0)) = pos else {
        return Some(([F::zero(), F::zero()], [F::zero(), F::zero()]));
    };
    let col = [x[(0, j0)].clone(), x[(1, j0)].clone()];
    let row = [x[(i0, 0)].clone() / &x[(i0, j0)], x[(i0, 1)].clone() / &x[(i0, j0)]];
    Some((col, row))
}

/// `tr_aux(X · T)` for an arbitrary 2×2 twist, via `Σ_i ⟨e_i|T|X e_i⟩`.
fn twisted_trace_from_diffs<F: Field>(x: &Matrix<F>, diffs: &[F]) -> Matrix<F> {
    if let Some((col, row)) = rank_one_factors(x) {
        return sandwich_from_diffs(&row, &col, diffs);
    }
    let units = [[F::one(), F::zero()], [F::zero(), F::one()]];
    let mut out: Option<Matrix<F>> = None;
    for (i, e) in units.iter().enumerate() {
        let column = [x[(0, i)].clone(), x[(1, i)].clone()];
        let term = sandwich_from_diffs(e, &column, diffs);
        match out.as_mut() {
            None => out = Some(term),
            Some(acc) => acc.add_scaled(&F::one(), &term).expect("same shape"),
        }
    }
    out.expect("two terms")
}

/// Which twisted transfer operator to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    /// `tr_a(B_a T_a(u))`, row space.
    B,
    /// `tr_b(B̂_b T̂_b(v))`, column space.
    BHat,
    /// `⟨w|T(u)|a⟩`.
    A,
    /// `⟨d̃|T(u)|e⟩`.
    D,
}

/// Lattice data: spectral parameters plus the row and column twists.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSpec<F> {
    pub params: ParamSet<F>,
    pub twist_row: Matrix<F>,
    pub twist_col: Matrix<F>,
}

fn is_two_by_two<F: Field>(m: &Matrix<F>) -> bool {
    m.rows() == 2 && m.cols() == 2
}

impl<F: Field> LatticeSpec<F> {
    pub fn new(params: ParamSet<F>, twist_row: Matrix<F>, twist_col: Matrix<F>) -> Result<Self> {
        if !is_two_by_two(&twist_row) || !is_two_by_two(&twist_col) {
            return Err(Error::DimensionMismatch("twist matrices must be 2x2".into()));
        }
        Ok(LatticeSpec { params, twist_row, twist_col })
    }

    /// Twists `B = |e⟩⟨w|` and `B̂ = |n⟩⟨s|` taken from the boundary.
    pub fn from_boundary(params: ParamSet<F>, boundary: &BoundaryConfig<F>) -> Self {
        LatticeSpec { params, twist_row: boundary.b.clone(), twist_col: boundary.b_hat.clone() }
    }

    pub fn is_rank_one(&self) -> bool {
        rank_one_factors(&self.twist_row).is_some() && rank_one_factors(&self.twist_col).is_some()
    }
}

/// The twisted operators `B(u)`, `B̂(v)`, `A(u)`, `D(u)` as dense matrices.
pub fn twisted_operator<F: Field>(
    kind: OperatorKind,
    spectral: &F,
    spec: &LatticeSpec<F>,
    boundary: Option<&BoundaryConfig<F>>,
) -> Result<Matrix<F>> {
    let p = &spec.params;
    match kind {
        OperatorKind::B => {
            check_ceiling::<F>(p.n())?;
            Ok(twisted_trace_from_diffs(&spec.twist_row, &row_diffs(spectral, p)))
        }
        OperatorKind::BHat => {
            check_ceiling::<F>(p.m())?;
            Ok(twisted_trace_from_diffs(&spec.twist_col, &col_diffs(spectral, p)))
        }
        OperatorKind::A => {
            let bd = boundary.ok_or(Error::MissingBoundary("A(u) needs the vectors w and a"))?;
            row_sandwich(&bd.w, spectral, p, &bd.a)
        }
        OperatorKind::D => {
            let bd = boundary.ok_or(Error::MissingBoundary("D(u) needs the vectors d_tilde and e"))?;
            row_sandwich(&bd.d_tilde, spectral, p, &bd.e)
        }
    }
}

/// `x ⊗ x ⊗ … ⊗ x` (`k` factors).
pub fn product_state<F: Field>(x: &Vec2<F>, k: usize) -> Vec<F> {
    let mut out = vec![F::one()];
    for _ in 0..k {
        out = out.iter().flat_map(|a| [a.clone() * &x[0], a.clone() * &x[1]]).collect();
    }
    out
}

pub fn dot<F: Field>(x: &[F], y: &[F]) -> F {
    x.iter().zip(y).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b)
}

/// `Z = tr_{b̄}((⊗ B̂) B(u_1)⋯B(u_m))` for arbitrary twists.
pub fn partition_trace<F: Field>(spec: &LatticeSpec<F>) -> Result<F> {
    let p = &spec.params;
    check_ceiling::<F>(p.n())?;
    let dim = 1usize << p.n();
    let mut prod = Matrix::identity(dim);
    for u in &p.u {
        let b = twisted_operator(OperatorKind::B, u, spec, None)?;
        prod = prod.matmul(&b)?;
    }
    Ok(twisted_power_trace(&spec.twist_col, prod))
}

/// `tr((X ⊗ … ⊗ X) · Y)`, contracting one site at a time.
fn twisted_power_trace<F: Field>(x: &Matrix<F>, mut y: Matrix<F>) -> F {
    while y.rows() > 1 {
        let half = y.rows() / 2;
        let mut next = Matrix::zeros(half, half);
        for s in 0..2 {
            for t in 0..2 {
                let k = &x[(s, t)];
                if k.is_zero() {
                    continue;
                }
                for b in 0..half {
                    for a in 0..half {
                        let entry = &y[(t * half + b, s * half + a)];
                        if !entry.is_zero() {
                            next[(b, a)] += &(k.clone() * entry);
                        }
                    }
                }
            }
        }
        y = next;
    }
    y[(0, 0)].clone()
}

fn check_expectation_inputs<F: Field>(spec: &LatticeSpec<F>, boundary: &BoundaryConfig<F>) -> Result<()> {
    if !spec.is_rank_one() {
        return Err(Error::RankViolation("expectation form needs det(B) = det(B̂) = 0".into()));
    }
    if spec.twist_row != boundary.b || spec.twist_col != boundary.b_hat {
        return Err(Error::RankViolation("lattice twists differ from |e⟩⟨w| and |n⟩⟨s|".into()));
    }
    Ok(())
}

/// `⟨S|B(ū)|N⟩`, row-wise contraction.
pub fn partition_expectation<F: Field>(spec: &LatticeSpec<F>, boundary: &BoundaryConfig<F>) -> Result<F> {
    check_expectation_inputs(spec, boundary)?;
    let p = &spec.params;
    let mut psi = product_state(&boundary.n, p.n());
    for u in &p.u {
        let b = row_sandwich(&boundary.w, u, p, &boundary.e)?;
        psi = b.matvec(&psi)?;
    }
    Ok(dot(&product_state(&boundary.s, p.n()), &psi))
}

/// `⟨W|B̂(v̄)|E⟩`, column-wise contraction.
pub fn partition_expectation_col<F: Field>(spec: &LatticeSpec<F>, boundary: &BoundaryConfig<F>) -> Result<F> {
    check_expectation_inputs(spec, boundary)?;
    let p = &spec.params;
    let mut psi = product_state(&boundary.e, p.m());
    for v in &p.v {
        let b = col_sandwich(&boundary.s, v, p, &boundary.n)?;
        psi = b.matvec(&psi)?;
    }
    Ok(dot(&product_state(&boundary.w, p.m()), &psi))
}

/// Embeds a two-site operator acting on `(site_i, site_j)` into `n_sites` qubits.
pub fn embed_two_site<F: Field>(op: &Matrix<F>, i: usize, j: usize, n_sites: usize) -> Matrix<F> {
    assert!(i != j && i < n_sites && j < n_sites);
    let dim = 1usize << n_sites;
    let bit = |state: usize, site: usize| (state >> (n_sites - 1 - site)) & 1;
    let mut out = Matrix::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            let others = (0..n_sites).filter(|&k| k != i && k != j).all(|k| bit(a, k) == bit(b, k));
            if !others {
                continue;
            }
            let r = 2 * bit(a, i) + bit(a, j);
            let c = 2 * bit(b, i) + bit(b, j);
            out[(a, b)] = op[(r, c)].clone();
        }
    }
    out
}

/// `Z^{b̄}_{ā} = ∏_{i ∈ rows} ∏_{j ∈ cols} R_{a_i b_j}(u_i, v_j)` on
/// `V_{a_1} ⊗ … ⊗ V_{a_m} ⊗ V_{b_1} ⊗ … ⊗ V_{b_n}`, the products running over
/// the given orders.
pub fn z_matrix_ordered<F: Field>(params: &ParamSet<F>, row_order: &[usize], col_order: &[usize]) -> Result<Matrix<F>> {
    let (m, n) = (params.m(), params.n());
    check_ceiling::<F>(m + n)?;
    let sites = m + n;
    let mut z = Matrix::identity(1usize << sites);
    for &i in row_order {
        for &j in col_order {
            let r = r_matrix(&params.u[i], &params.v[j], &params.c)?;
            z = z.matmul(&embed_two_site(&r, i, m + j, sites))?;
        }
    }
    Ok(z)
}

pub fn z_matrix<F: Field>(params: &ParamSet<F>) -> Result<Matrix<F>> {
    let rows: Vec<usize> = (0..params.m()).collect();
    let cols: Vec<usize> = (0..params.n()).collect();
    z_matrix_ordered(params, &rows, &cols)
}

/// `tr_{ā,b̄}((∏ B̂_{b_i})(∏ B_{a_j}) Z^{b̄}_{ā})` evaluated on the full space.
pub fn partition_full_trace<F: Field>(spec: &LatticeSpec<F>) -> Result<F> {
    let p = &spec.params;
    let z = z_matrix(p)?;
    let mut twists = Matrix::identity(1);
    for _ in 0..p.m() {
        twists = twists.kron(&spec.twist_row);
    }
    for _ in 0..p.n() {
        twists = twists.kron(&spec.twist_col);
    }
    twists.matmul(&z)?.trace()
}

/// Top coefficient of the matrix polynomial `u ↦ B(u)` (degree `n`),
/// by exact Lagrange interpolation at `u = 0, 1, …, n`.
pub fn operator_leading_coefficient<F: Field>(spec: &LatticeSpec<F>) -> Result<Matrix<F>> {
    let n = spec.params.n();
    let nodes: Vec<F> = (0..=n as i64).map(F::from_i64).collect();
    let dim = 1usize << n;
    let mut acc = Matrix::zeros(dim, dim);
    for (k, x) in nodes.iter().enumerate() {
        let denom = nodes
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != k)
            .fold(F::one(), |d, (_, y)| d * (x.clone() - y));
        let b = twisted_operator(OperatorKind::B, x, spec, None)?;
        acc.add_scaled(&(F::one() / &denom), &b)?;
    }
    Ok(acc)
}

/// `[T_a(u), T_b(v)] − g(v,u) P_ab (T_a(u)T_b(v) − T_a(v)T_b(u))` on
/// `V_a ⊗ V_b ⊗ H`.
pub fn aux_form_rtt_residual<F: Field>(u: &F, v: &F, params: &ParamSet<F>) -> Result<Matrix<F>> {
    let tu = monodromy_row(u, params)?;
    let tv = monodromy_row(v, params)?;
    let (au, bv) = (embed_aux(&tu, 0), embed_aux(&tv, 1));
    let (av, bu) = (embed_aux(&tv, 0), embed_aux(&tu, 1));
    let quantum = Matrix::identity(tu.quantum_dim());
    let p = permutation::<F>().kron(&quantum);
    let lhs = au.matmul(&bv)?.sub(&bv.matmul(&au)?)?;
    let inner = au.matmul(&bv)?.sub(&av.matmul(&bu)?)?;
    let rhs = p.matmul(&inner)?.scale(&crate::scalar::g(v, u, &params.c)?);
    lhs.sub(&rhs)
}

/// Places a monodromy in auxiliary slot 0 or 1 of `V_a ⊗ V_b ⊗ H`.
pub fn embed_aux<F: Field>(mono: &Monodromy<F>, slot: usize) -> Matrix<F> {
    let mut out: Option<Matrix<F>> = None;
    for i in 0..2 {
        for j in 0..2 {
            let unit = Matrix::<F>::unit(i, j);
            let aux = if slot == 0 { unit.kron(&Matrix::identity(2)) } else { Matrix::identity(2).kron(&unit) };
            let term = aux.kron(&mono.blocks[i][j]);
            match out.as_mut() {
                None => out = Some(term),
                Some(acc) => acc.add_scaled(&F::one(), &term).expect("same shape"),
            }
        }
    }
    out.expect("four terms")
}

/// `R₁₂(u,v) R₁₃(u,w) R₂₃(v,w) − R₂₃(v,w) R₁₃(u,w) R₁₂(u,v)` on three sites.
pub fn ybe_residual<F: Field>(u: &F, v: &F, w: &F, c: &F) -> Result<Matrix<F>> {
    let r12 = embed_two_site(&r_matrix(u, v, c)?, 0, 1, 3);
    let r13 = embed_two_site(&r_matrix(u, w, c)?, 0, 2, 3);
    let r23 = embed_two_site(&r_matrix(v, w, c)?, 1, 2, 3);
    let lhs = r12.matmul(&r13)?.matmul(&r23)?;
    let rhs = r23.matmul(&r13)?.matmul(&r12)?;
    lhs.sub(&rhs)
}

/// `[R(u,v), X ⊗ X]` for a 2×2 twist `X`.
pub fn twist_invariance_residual<F: Field>(x: &Matrix<F>, u: &F, v: &F, c: &F) -> Result<Matrix<F>> {
    r_matrix(u, v, c)?.commutator(&x.kron(x))
}

/// `R_ab(u,v) T_a(u) T_b(v) − T_b(v) T_a(u) R_ab(u,v)` on `V_a ⊗ V_b ⊗ H`.
pub fn rtt_residual<F: Field>(u: &F, v: &F, params: &ParamSet<F>) -> Result<Matrix<F>> {
    let tu = monodromy_row(u, params)?;
    let tv = monodromy_row(v, params)?;
    let r = r_matrix(u, v, &params.c)?.kron(&Matrix::identity(tu.quantum_dim()));
    let (ta, tb) = (embed_aux(&tu, 0), embed_aux(&tv, 1));
    r.matmul(&ta)?.matmul(&tb)?.sub(&tb.matmul(&ta)?.matmul(&r)?)
}

/// `R_ba(v_b,v_a) T̂_a(v_a) T̂_b(v_b) − T̂_b(v_b) T̂_a(v_a) R_ba(v_b,v_a)` for
/// column monodromies on `V_a ⊗ V_b ⊗ H`.
pub fn rtt_hat_residual<F: Field>(va: &F, vb: &F, params: &ParamSet<F>) -> Result<Matrix<F>> {
    let ta_m = monodromy_col(va, params)?;
    let tb_m = monodromy_col(vb, params)?;
    // R_ba on V_a ⊗ V_b is P R_ab P = R_ab for this R-matrix
    let r = r_matrix(vb, va, &params.c)?.kron(&Matrix::identity(ta_m.quantum_dim()));
    let (ta, tb) = (embed_aux(&ta_m, 0), embed_aux(&tb_m, 1));
    r.matmul(&ta)?.matmul(&tb)?.sub(&tb.matmul(&ta)?.matmul(&r)?)
}

/// Residuals of `t₁₁(u)t₁₂(v) = f(v,u)t₁₂(v)t₁₁(u) + g(u,v)t₁₂(u)t₁₁(v)`,
/// `t₂₂(u)t₁₂(v) = f(u,v)t₁₂(v)t₂₂(u) + g(v,u)t₁₂(u)t₂₂(v)` and
/// `t₁₂(u)t₁₂(v) = t₁₂(v)t₁₂(u)`.
pub fn generator_exchange_residuals<F: Field>(u: &F, v: &F, params: &ParamSet<F>) -> Result<Vec<Matrix<F>>> {
    use crate::scalar::{f, g};
    let c = &params.c;
    let tu = monodromy_row(u, params)?;
    let tv = monodromy_row(v, params)?;
    let mut out = Vec::with_capacity(3);
    for (diag, k1, k2) in [(1, f(v, u, c)?, g(u, v, c)?), (2, f(u, v, c)?, g(v, u, c)?)] {
        let mut r = tu.t(diag, diag).matmul(tv.t(1, 2))?;
        r.add_scaled(&-k1, &tv.t(1, 2).matmul(tu.t(diag, diag))?)?;
        r.add_scaled(&-k2, &tu.t(1, 2).matmul(tv.t(diag, diag))?)?;
        out.push(r);
    }
    out.push(tu.t(1, 2).commutator(tv.t(1, 2))?);
    Ok(out)
}

/// Row exchange: `R_{a_i a_{i+1}}(u_i,u_{i+1}) Z − Z' R_{a_i a_{i+1}}(u_i,u_{i+1})`
/// with `Z'` the partition matrix whose row product has `a_i`, `a_{i+1}`
/// swapped.
pub fn row_exchange_residual<F: Field>(params: &ParamSet<F>, i: usize) -> Result<Matrix<F>> {
    let (m, n) = (params.m(), params.n());
    let sites = m + n;
    let rows: Vec<usize> = (0..m).collect();
    let cols: Vec<usize> = (0..n).collect();
    let mut swapped = rows.clone();
    swapped.swap(i, i + 1);
    let z = z_matrix_ordered(params, &rows, &cols)?;
    let zs = z_matrix_ordered(params, &swapped, &cols)?;
    let r = embed_two_site(&r_matrix(&params.u[i], &params.u[i + 1], &params.c)?, i, i + 1, sites);
    r.matmul(&z)?.sub(&zs.matmul(&r)?)
}

/// Column exchange: `R_{b_j b_{j+1}}(x,y) Z − Z' R_{b_j b_{j+1}}(x,y)` with
/// `Z'` the matrix whose column product has `b_j`, `b_{j+1}` swapped and
/// `(x, y) = (v_{j+1}, v_j)`; `reversed` uses `(v_j, v_{j+1})` instead.
pub fn col_exchange_residual<F: Field>(params: &ParamSet<F>, j: usize, reversed: bool) -> Result<Matrix<F>> {
    let (m, n) = (params.m(), params.n());
    let sites = m + n;
    let rows: Vec<usize> = (0..m).collect();
    let cols: Vec<usize> = (0..n).collect();
    let mut swapped = cols.clone();
    swapped.swap(j, j + 1);
    let z = z_matrix_ordered(params, &rows, &cols)?;
    let zs = z_matrix_ordered(params, &rows, &swapped)?;
    let (x, y) = if reversed { (&params.v[j], &params.v[j + 1]) } else { (&params.v[j + 1], &params.v[j]) };
    let r = embed_two_site(&r_matrix(x, y, &params.c)?, m + j, m + j + 1, sites);
    r.matmul(&z)?.sub(&zs.matmul(&r)?)
}

/// Residuals of the highest/lowest-weight actions: on `|0⟩`
/// (`t₁₁ → λ₁`, `t₂₁ → 0`, `t₂₂ → λ₂`), on `|0̂⟩` (`t₁₁ → λ₂`, `t₁₂ → 0`,
/// `t₂₂ → λ₁`), and the dual actions of `⟨0|` and `⟨0̂|`.
pub fn weight_action_residuals<F: Field>(u: &F, params: &ParamSet<F>) -> Result<Vec<Vec<F>>> {
    use crate::scalar::{lambda1, lambda2};
    let l1 = lambda1(u, params)?;
    let l2 = lambda2(u, params)?;
    let mono = monodromy_row(u, params)?;
    let n = params.n();
    let up = product_state(&[F::one(), F::zero()], n);
    let down = product_state(&[F::zero(), F::one()], n);
    let zero = F::zero();
    // (state, right action?, [(i, j, eigenvalue)])
    let cases: [(&Vec<F>, bool, [(usize, usize, &F); 3]); 4] = [
        (&up, true, [(1, 1, &l1), (2, 1, &zero), (2, 2, &l2)]),
        (&down, true, [(1, 1, &l2), (1, 2, &zero), (2, 2, &l1)]),
        (&up, false, [(1, 1, &l1), (1, 2, &zero), (2, 2, &l2)]),
        (&down, false, [(1, 1, &l2), (2, 1, &zero), (2, 2, &l1)]),
    ];
    let mut out = Vec::new();
    for (state, right, entries) in cases {
        for (i, j, ev) in entries {
            let t = mono.t(i, j);
            let mut res = if right { t.matvec(state)? } else { t.vecmat(state)? };
            for (r, s) in res.iter_mut().zip(state.iter()) {
                *r -= &(ev.clone() * s);
            }
            out.push(res);
        }
    }
    Ok(out)
}
