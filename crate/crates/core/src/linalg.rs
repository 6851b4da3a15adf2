//! Dense matrices over a [`Field`].
//!
//! Kronecker convention: `kron(A, B)` puts the index of `A` in the slow
//! (most significant) position. Every tensor-product space in the crate is
//! laid out against this single convention.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{g, kernel_product, without, Field, Kernel, ParamSet, Side};

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> =
                self.data[r * self.cols..(r + 1) * self.cols].iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn try_from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Result<F>,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j)?);
            }
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn diag(entries: &[F]) -> Self {
        let n = entries.len();
        Matrix::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { F::zero() })
    }

    /// The 2×2 unit matrix `E_ij` (zero-based indices).
    pub fn unit(i: usize, j: usize) -> Self {
        Matrix::from_fn(2, 2, |r, c| if r == i && c == j { F::one() } else { F::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn into_data(self) -> Vec<F> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn map<G>(&self, f: impl FnMut(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, k: &F) -> Self {
        self.map(|x| x.clone() * k)
    }

    /// `self += k·other`.
    pub fn add_scaled(&mut self, k: &F, other: &Self) -> Result<()> {
        self.same_shape(other, "add_scaled")?;
        if k.is_zero() {
            return Ok(());
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += &(b.clone() * k);
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    if !b.is_zero() {
                        *d += &(a.clone() * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[F]) -> Result<Vec<F>> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "matvec: {}x{} times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(x).fold(F::zero(), |mut acc, (a, b)| {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a.clone() * b);
                    }
                    acc
                })
            })
            .collect())
    }

    /// Row vector times matrix.
    pub fn vecmat(&self, x: &[F]) -> Result<Vec<F>> {
        if self.rows != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "vecmat: vector of length {} times {}x{}",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![F::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += &(xi.clone() * a);
                }
            }
        }
        Ok(out)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            out[(i * other.rows + k, j * other.cols + l)] = a.clone() * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Result<F> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok((0..self.rows).fold(F::zero(), |acc, i| acc + &self[(i, i)]))
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    fn pivot_row(&self, col: usize, from: usize) -> Option<usize> {
        if F::EXACT {
            (from..self.rows).find(|&r| !self[(r, col)].is_zero())
        } else {
            (from..self.rows)
                .filter(|&r| !self[(r, col)].is_zero())
                .max_by(|&a, &b| self[(a, col)].modulus().total_cmp(&self[(b, col)].modulus()))
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Determinant by Gaussian elimination; the 0×0 determinant is one.
    pub fn det(&self) -> Result<F> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = F::one();
        for k in 0..n {
            let Some(p) = a.pivot_row(k, k) else {
                return Ok(F::zero());
            };
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let pivot = a[(k, k)].clone();
            let pivot_row: Vec<F> = a.row(k)[k + 1..].to_vec();
            for r in k + 1..n {
                if a[(r, k)].is_zero() {
                    continue;
                }
                let factor = a[(r, k)].clone() / &pivot;
                for (off, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        let j = k + 1 + off;
                        let delta = factor.clone() * pv;
                        a[(r, j)] -= &delta;
                    }
                }
            }
            det *= &pivot;
        }
        Ok(det)
    }

    /// Number of linearly independent rows.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for k in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = a.pivot_row(k, rank) else { continue };
            a.swap_rows(p, rank);
            let pivot = a[(rank, k)].clone();
            let pivot_row: Vec<F> = a.row(rank).to_vec();
            for r in rank + 1..self.rows {
                if a[(r, k)].is_zero() {
                    continue;
                }
                let factor = a[(r, k)].clone() / &pivot;
                for (j, pv) in pivot_row.iter().enumerate().skip(k) {
                    let delta = factor.clone() * pv;
                    a[(r, j)] -= &delta;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for k in 0..n {
            let p = a.pivot_row(k, k).ok_or(Error::Singular)?;
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            let pinv = F::one() / &a[(k, k)];
            for j in 0..n {
                a[(k, j)] *= &pinv;
                inv[(k, j)] *= &pinv;
            }
            let arow = a.row(k).to_vec();
            let irow = inv.row(k).to_vec();
            for r in 0..n {
                if r == k || a[(r, k)].is_zero() {
                    continue;
                }
                let factor = a[(r, k)].clone();
                for j in 0..n {
                    let da = factor.clone() * &arow[j];
                    a[(r, j)] -= &da;
                    let di = factor.clone() * &irow[j];
                    inv[(r, j)] -= &di;
                }
            }
        }
        Ok(inv)
    }
}

fn square_params<F: Field>(params: &ParamSet<F>) -> Result<usize> {
    if params.m() != params.n() {
        return Err(Error::DimensionMismatch(format!(
            "Cauchy matrix needs #u = #v, got {} and {}",
            params.m(),
            params.n()
        )));
    }
    Ok(params.n())
}

/// `C_ij = g(u_i, v_j)`.
pub fn cauchy_matrix<F: Field>(params: &ParamSet<F>) -> Result<Matrix<F>> {
    let n = square_params(params)?;
    Matrix::try_from_fn(n, n, |i, j| g(&params.u[i], &params.v[j], &params.c))
}

/// `det C = g(ū, v̄) Δ(ū) Δ'(v̄)`.
pub fn cauchy_det<F: Field>(params: &ParamSet<F>) -> Result<F> {
    square_params(params)?;
    let c = &params.c;
    let gp = crate::scalar::kernel_set_product(Kernel::G, &params.u, &params.v, c)?;
    let du = crate::scalar::vandermonde(&params.u, false, c)?;
    let dv = crate::scalar::vandermonde(&params.v, true, c)?;
    Ok(gp * &du * &dv)
}

/// Closed-form inverse
/// `C⁻¹_kl = g(u_l,v_k) g(v̄_k,v_k) g(u_l,ū_l) / (g(ū,v_k) g(u_l,v̄))`.
pub fn cauchy_inverse<F: Field>(params: &ParamSet<F>) -> Result<Matrix<F>> {
    let n = square_params(params)?;
    let (u, v, c) = (&params.u, &params.v, &params.c);
    Matrix::try_from_fn(n, n, |k, l| {
        let num = g(&u[l], &v[k], c)?
            * kernel_product(Kernel::G, &v[k], &without(v, k), Side::Right, c)?
            * kernel_product(Kernel::G, &u[l], &without(u, l), Side::Left, c)?;
        let den = kernel_product(Kernel::G, &v[k], u, Side::Right, c)?
            * kernel_product(Kernel::G, &u[l], v, Side::Left, c)?;
        Ok(num / den)
    })
}
