//! Field arithmetic and the elementary rational kernels.
//!
//! Everything in the crate is generic over [`Field`]. The exact field is
//! [`Scalar`], a Gaussian rational (arbitrary-precision rational real and
//! imaginary parts). [`Complex64`] implements the same trait for the float
//! benchmark path.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A 2-vector of field elements (boundary and auxiliary vectors).
pub type Vec2<F> = [F; 2];

/// Common interface of the exact and the float scalar.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// Whether equality comparisons are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    fn imag_unit() -> Self;
    fn from_scalar(s: &Scalar) -> Self;
    fn to_c64(&self) -> Complex64;
    /// Modulus used for pivot selection in float mode.
    fn modulus(&self) -> f64;
    fn is_real(&self) -> bool;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self)
        }
    }

    /// Integer power; negative exponents need a nonzero base.
    fn powi(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * &sq;
            }
        }
        Some(acc)
    }
}

/// Exact Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|²`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Parses a rational literal `"p/q"` or `"p"` (optional sign).
    pub fn parse_rational(s: &str) -> Result<BigRational> {
        let t = s.trim();
        let t = t.strip_prefix('+').unwrap_or(t);
        BigRational::from_str(t).map_err(|e| Error::Parse(format!("invalid rational literal {s:?}: {e}")))
    }

    fn fmt_rational(r: &BigRational) -> String {
        r.to_string()
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Scalar::real(Scalar::parse_rational(s)?))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexLiteral {
    re: String,
    #[serde(default = "zero_literal")]
    im: String,
}

fn zero_literal() -> String {
    "0".to_string()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarLiteral {
    Plain(String),
    Int(i64),
    Complex(ComplexLiteral),
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexLiteral { re: Scalar::fmt_rational(&self.re), im: Scalar::fmt_rational(&self.im) }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match ScalarLiteral::deserialize(deserializer)? {
            ScalarLiteral::Plain(s) => Scalar::from_str(&s).map_err(D::Error::custom),
            ScalarLiteral::Int(n) => Ok(Scalar::from_i64(n)),
            ScalarLiteral::Complex(c) => {
                let re = Scalar::parse_rational(&c.re).map_err(D::Error::custom)?;
                let im = Scalar::parse_rational(&c.im).map_err(D::Error::custom)?;
                Ok(Scalar::new(re, im))
            }
        }
    }
}

impl Add<&Scalar> for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: &Scalar) -> Scalar {
        self += rhs;
        self
    }
}

impl Sub<&Scalar> for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: &Scalar) -> Scalar {
        self -= rhs;
        self
    }
}

impl Mul<&Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        &self * rhs
    }
}

impl Div<&Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        &self / rhs
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::real(&self.re * &rhs.re);
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Scalar { re, im }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        assert!(!rhs.is_zero_scalar(), "division by zero Scalar");
        if rhs.im.is_zero() {
            return Scalar { re: &self.re / &rhs.re, im: &self.im / &rhs.re };
        }
        let d = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Scalar { re: num.re / &d, im: num.im / d }
    }
}

impl Scalar {
    fn is_zero_scalar(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        if self.im.is_zero() && rhs.im.is_zero() {
            self.re *= &rhs.re;
        } else {
            *self = &*self * rhs;
        }
    }
}

impl Field for Scalar {
    const EXACT: bool = true;

    fn zero() -> Self {
        Scalar::real(BigRational::zero())
    }
    fn one() -> Self {
        Scalar::real(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.is_zero_scalar()
    }
    fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }
    fn from_i64(n: i64) -> Self {
        Scalar::real(BigRational::from_integer(BigInt::from(n)))
    }
    fn imag_unit() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.to_c64()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn is_real(&self) -> bool {
        self.im == 0.0
    }
}

/// The four elementary kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// `c/(u-v)`
    G,
    /// `(u-v+c)/(u-v)`
    F,
    /// `(u-v+c)/c`
    H,
    /// `(u-v-c)/c`
    HTilde,
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kernel::G => "g",
            Kernel::F => "f",
            Kernel::H => "h",
            Kernel::HTilde => "htilde",
        };
        f.write_str(s)
    }
}

/// Position of the single variable in a set product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `k(z, x)` for `x` in the set.
    Left,
    /// `k(x, z)` for `x` in the set.
    Right,
}

/// Evaluates one of the kernels `g, f, h, h̃` at `(u, v)`.
pub fn kernel<F: Field>(kind: Kernel, u: &F, v: &F, c: &F) -> Result<F> {
    if c.is_zero() {
        return Err(Error::ZeroCrossing);
    }
    let d = u.clone() - v;
    match kind {
        Kernel::G | Kernel::F if d.is_zero() => {
            Err(Error::SingularPair { kernel: kind, left: u.to_string(), right: v.to_string() })
        }
        Kernel::G => Ok(c.clone() / &d),
        Kernel::F => Ok((d.clone() + c) / &d),
        Kernel::H => Ok((d + c) / c),
        Kernel::HTilde => Ok((d - c) / c),
    }
}

pub fn g<F: Field>(u: &F, v: &F, c: &F) -> Result<F> {
    kernel(Kernel::G, u, v, c)
}

pub fn f<F: Field>(u: &F, v: &F, c: &F) -> Result<F> {
    kernel(Kernel::F, u, v, c)
}

pub fn h<F: Field>(u: &F, v: &F, c: &F) -> Result<F> {
    kernel(Kernel::H, u, v, c)
}

pub fn htilde<F: Field>(u: &F, v: &F, c: &F) -> Result<F> {
    kernel(Kernel::HTilde, u, v, c)
}

/// `k(z, set)` or `k(set, z)`; the empty product is one.
pub fn kernel_product<F: Field>(kind: Kernel, z: &F, set: &[F], side: Side, c: &F) -> Result<F> {
    set.iter().try_fold(F::one(), |acc, x| {
        let k = match side {
            Side::Left => kernel(kind, z, x, c)?,
            Side::Right => kernel(kind, x, z, c)?,
        };
        Ok(acc * &k)
    })
}

/// `k(left, right)` over every pair of the two sets.
pub fn kernel_set_product<F: Field>(kind: Kernel, left: &[F], right: &[F], c: &F) -> Result<F> {
    left.iter()
        .try_fold(F::one(), |acc, x| Ok(acc * &kernel_product(kind, x, right, Side::Left, c)?))
}

/// Copy of `set` with element `i` removed (`ū_i`).
pub fn without<F: Clone>(set: &[F], i: usize) -> Vec<F> {
    set.iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, x)| x.clone())
        .collect()
}

/// `⟨x|σ_y|y⟩ = i(x₂y₁ − x₁y₂)`.
pub fn sigma_y_pairing<F: Field>(x: &Vec2<F>, y: &Vec2<F>) -> F {
    F::imag_unit() * (x[1].clone() * &y[0] - x[0].clone() * &y[1])
}

/// Bilinear pairing `⟨x|y⟩ = x₁y₁ + x₂y₂` (no conjugation).
pub fn pairing<F: Field>(x: &Vec2<F>, y: &Vec2<F>) -> F {
    x[0].clone() * &y[0] + x[1].clone() * &y[1]
}

/// `Δ(ū) = (∏_{i<j} g(u_i,u_j))⁻¹`, or `Δ'` with `i > j` when `primed`.
pub fn vandermonde<F: Field>(set: &[F], primed: bool, c: &F) -> Result<F> {
    let mut p = F::one();
    for i in 0..set.len() {
        for j in (i + 1)..set.len() {
            if set[i] == set[j] {
                return Err(Error::RepeatedEntry(set[i].to_string()));
            }
            let k = if primed { g(&set[j], &set[i], c)? } else { g(&set[i], &set[j], c)? };
            p *= &k;
        }
    }
    Ok(F::one() / &p)
}

/// Spectral data `(ū, v̄, c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSet<F> {
    pub u: Vec<F>,
    pub v: Vec<F>,
    pub c: F,
}

impl<F: Field> ParamSet<F> {
    /// Generic-mode constructor: `c ≠ 0`, pairwise distinct `ū` and `v̄`, `u_i ≠ v_j`.
    pub fn new(u: Vec<F>, v: Vec<F>, c: F) -> Result<Self> {
        let p = ParamSet::relaxed(u, v, c)?;
        p.check_generic()?;
        Ok(p)
    }

    /// Only `c ≠ 0` is enforced.
    pub fn relaxed(u: Vec<F>, v: Vec<F>, c: F) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroCrossing);
        }
        Ok(ParamSet { u, v, c })
    }

    pub fn check_generic(&self) -> Result<()> {
        for (name, set) in [("u", &self.u), ("v", &self.v)] {
            for i in 0..set.len() {
                for j in (i + 1)..set.len() {
                    if set[i] == set[j] {
                        return Err(Error::Genericity(format!(
                            "{name}_{} = {name}_{} = {}",
                            i + 1,
                            j + 1,
                            set[i]
                        )));
                    }
                }
            }
        }
        for (i, x) in self.u.iter().enumerate() {
            for (j, y) in self.v.iter().enumerate() {
                if x == y {
                    return Err(Error::Degenerate(format!(
                        "lambda2 singular: u_{} = v_{} = {x}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.u.len()
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    /// Same `v̄` and `c` with a different row set.
    pub fn with_u(&self, u: Vec<F>) -> Self {
        ParamSet { u, v: self.v.clone(), c: self.c.clone() }
    }

    pub fn with_v(&self, v: Vec<F>) -> Self {
        ParamSet { u: self.u.clone(), v, c: self.c.clone() }
    }

    pub fn map<G: Field>(&self, conv: impl Fn(&F) -> G) -> ParamSet<G> {
        ParamSet {
            u: self.u.iter().map(&conv).collect(),
            v: self.v.iter().map(&conv).collect(),
            c: conv(&self.c),
        }
    }
}

/// `λ₁(u) = h(u, v̄)`.
pub fn lambda1<F: Field>(u: &F, params: &ParamSet<F>) -> Result<F> {
    kernel_product(Kernel::H, u, &params.v, Side::Left, &params.c)
}

/// `λ₂(u) = 1/g(u, v̄) = ∏_j (u − v_j)/c`.
pub fn lambda2<F: Field>(u: &F, params: &ParamSet<F>) -> Result<F> {
    params.v.iter().try_fold(F::one(), |acc, v| {
        let d = u.clone() - v;
        if d.is_zero() {
            return Err(Error::Degenerate(format!("lambda2 singular: u = v = {v}")));
        }
        Ok(acc * &(d / &params.c))
    })
}

/// `λ₂(ū) = ∏_i λ₂(u_i)`.
pub fn lambda2_set<F: Field>(params: &ParamSet<F>) -> Result<F> {
    params.u.iter().try_fold(F::one(), |acc, u| Ok(acc * &lambda2(u, params)?))
}
