//! Scalar types for the two arithmetic pipelines.
//!
//! `ExactScalar` is an arbitrary-precision rational; it backs every check
//! that is an algebraic identity (the invariant-space map, scalings, degree
//! and conservation checks) so those assertions carry zero tolerance.
//! `f64` backs the geometric pipeline, where lift normalization takes
//! (n+1)-th roots and exactness is unavailable.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational scalar. Serialized as a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "rational with zero denominator");
        ExactScalar(BigRational::new(numer, denom))
    }

    pub fn from_int(v: i64) -> Self {
        ExactScalar(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        ExactScalar(self.0.recip())
    }

    /// Integer power; negative exponents invert (base must be nonzero).
    pub fn powi(&self, exp: i64) -> Self {
        if exp == 0 {
            return Self::one();
        }
        let base = if exp < 0 { self.recip() } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn abs(&self) -> Self {
        ExactScalar(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for ExactScalar {
    type Err = String;

    /// Accepts `"p/q"` or a bare integer `"p"`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((p, q)) => (p, q),
            None => (s, "1"),
        };
        let p = BigInt::from_str(num_str.trim()).map_err(|e| format!("bad numerator {num_str:?}: {e}"))?;
        let q = BigInt::from_str(den_str.trim()).map_err(|e| format!("bad denominator {den_str:?}: {e}"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(ExactScalar(BigRational::new(p, q)))
    }
}

impl serde::Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for ExactScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &'a ExactScalar) -> ExactScalar {
                ExactScalar((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-&self.0)
    }
}

/// Common interface of the exact and floating-point pipelines.
///
/// Arithmetic is by-reference so that generic code works unchanged for both
/// `f64` and the heap-backed rationals.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// True when equality and zero tests are exact (no tolerances apply).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    /// Exactly representable conversion from a float (floats are dyadic
    /// rationals, so exact scalars lose nothing here).
    fn from_f64(v: f64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;

    /// Magnitude used only for pivot selection. Exact scalars report 1 for
    /// any nonzero value so that pivoting never discards an exact pivot.
    fn pivot_magnitude(&self) -> f64;

    /// Determinant of a `dim x dim` matrix given row-major. The default is
    /// fraction-free Bareiss elimination on the scalars themselves; exact
    /// scalars override it with an integerized equivalent because reducing
    /// big rationals on every intermediate product dominates the runtime.
    fn det_dim(dim: usize, data: Vec<Self>) -> Self {
        bareiss_det_generic(dim, data)
    }

    /// Characteristic polynomial coefficients `[c_0, ..., c_{dim-1}, 1]` of
    /// a `dim x dim` matrix given row-major.
    fn char_poly_dim(dim: usize, data: &[Self]) -> Vec<Self> {
        faddeev_leverrier_generic(dim, data)
    }
}

/// `base^exp` through the trait operations; negative exponents invert
/// (the base must be nonzero for those).
pub fn scalar_pow<S: Scalar>(base: &S, exp: i64) -> S {
    let mut acc = S::one();
    for _ in 0..exp.unsigned_abs() {
        acc = acc.mul(base);
    }
    if exp < 0 {
        assert!(!base.is_zero(), "negative power of zero");
        S::one().div(&acc)
    } else {
        acc
    }
}

/// Fraction-free (Bareiss) determinant with row pivoting, on raw storage.
pub(crate) fn bareiss_det_generic<S: Scalar>(dim: usize, mut data: Vec<S>) -> S {
    assert_eq!(data.len(), dim * dim);
    if dim == 0 {
        return S::one();
    }
    let at = |d: &[S], i: usize, j: usize| d[i * dim + j].clone();
    let mut prev = S::one();
    let mut flip = false;
    for r in 0..dim {
        let p = (r..dim)
            .max_by(|&a, &b| {
                data[a * dim + r]
                    .pivot_magnitude()
                    .total_cmp(&data[b * dim + r].pivot_magnitude())
            })
            .unwrap();
        if data[p * dim + r].is_zero() {
            return S::zero();
        }
        if p != r {
            for j in 0..dim {
                data.swap(p * dim + j, r * dim + j);
            }
            flip = !flip;
        }
        if r + 1 == dim {
            break;
        }
        for i in r + 1..dim {
            for j in r + 1..dim {
                let t = at(&data, r, r)
                    .mul(&at(&data, i, j))
                    .sub(&at(&data, i, r).mul(&at(&data, r, j)));
                data[i * dim + j] = t.div(&prev);
            }
            data[i * dim + r] = S::zero();
        }
        prev = at(&data, r, r);
    }
    let d = data[dim * dim - 1].clone();
    if flip {
        d.neg()
    } else {
        d
    }
}

/// Faddeev-LeVerrier on raw storage: returns `[c_0, ..., c_{dim-1}, 1]`.
pub(crate) fn faddeev_leverrier_generic<S: Scalar>(dim: usize, data: &[S]) -> Vec<S> {
    assert_eq!(data.len(), dim * dim);
    let mut coeffs = vec![S::zero(); dim + 1];
    coeffs[dim] = S::one();
    if dim == 0 {
        return coeffs;
    }
    let trace = |d: &[S]| {
        let mut acc = S::zero();
        for i in 0..dim {
            acc = acc.add(&d[i * dim + i]);
        }
        acc
    };
    let mat_mul = |a: &[S], b: &[S]| {
        let mut out = vec![S::zero(); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                if a[i * dim + k].is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let t = out[i * dim + j].add(&a[i * dim + k].mul(&b[k * dim + j]));
                    out[i * dim + j] = t;
                }
            }
        }
        out
    };
    let mut m = data.to_vec();
    coeffs[dim - 1] = trace(&m).neg();
    for k in 2..=dim {
        let mut shifted = m.clone();
        for i in 0..dim {
            shifted[i * dim + i] = shifted[i * dim + i].add(&coeffs[dim - k + 1]);
        }
        m = mat_mul(data, &shifted);
        coeffs[dim - k] = trace(&m).neg().div(&S::from_int(k as i64));
    }
    coeffs
}

impl Scalar for ExactScalar {
    const EXACT: bool = true;

    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn from_int(v: i64) -> Self {
        ExactScalar::from_int(v)
    }
    fn from_f64(v: f64) -> Self {
        ExactScalar(BigRational::from_float(v).expect("finite float"))
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "exact division by zero");
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ExactScalar::to_f64(self)
    }
    fn pivot_magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn det_dim(dim: usize, data: Vec<Self>) -> Self {
        assert_eq!(data.len(), dim * dim);
        if dim == 0 {
            return ExactScalar::one();
        }
        // Clear denominators row by row, then eliminate over the integers:
        // one rational reduction at the end instead of one per product.
        let mut denom = BigInt::one();
        let mut ints = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            let row = &data[i * dim..(i + 1) * dim];
            let mut scale = BigInt::one();
            for x in row {
                scale = scale.lcm(x.denom());
            }
            for x in row {
                ints.push(x.numer() * (&scale / x.denom()));
            }
            denom *= scale;
        }
        let det = bareiss_det_int(dim, ints);
        ExactScalar::new(det, denom)
    }

    fn char_poly_dim(dim: usize, data: &[Self]) -> Vec<Self> {
        assert_eq!(data.len(), dim * dim);
        if dim == 0 {
            return vec![ExactScalar::one()];
        }
        let mut scale = BigInt::one();
        for x in data {
            scale = scale.lcm(x.denom());
        }
        let ints: Vec<BigInt> = data.iter().map(|x| x.numer() * (&scale / x.denom())).collect();
        let int_coeffs = faddeev_leverrier_int(dim, &ints);
        // chi_{A/s}(x) = s^{-dim} chi_A(s x): coefficient i picks up s^{i-dim}
        (0..=dim)
            .map(|i| {
                let mut power = BigInt::one();
                for _ in 0..dim - i {
                    power *= &scale;
                }
                ExactScalar::new(int_coeffs[i].clone(), power)
            })
            .collect()
    }
}

fn bareiss_det_int(dim: usize, mut data: Vec<BigInt>) -> BigInt {
    let mut prev = BigInt::one();
    let mut flip = false;
    for r in 0..dim {
        let Some(p) = (r..dim).find(|&i| !data[i * dim + r].is_zero()) else {
            return BigInt::zero();
        };
        if p != r {
            for j in 0..dim {
                data.swap(p * dim + j, r * dim + j);
            }
            flip = !flip;
        }
        if r + 1 == dim {
            break;
        }
        for i in r + 1..dim {
            for j in r + 1..dim {
                let t = &data[r * dim + r] * &data[i * dim + j]
                    - &data[i * dim + r] * &data[r * dim + j];
                debug_assert!((&t % &prev).is_zero(), "Bareiss division must be exact");
                data[i * dim + j] = t / &prev;
            }
            data[i * dim + r] = BigInt::zero();
        }
        prev = data[r * dim + r].clone();
    }
    let d = data[dim * dim - 1].clone();
    if flip {
        -d
    } else {
        d
    }
}

/// Faddeev-LeVerrier over the integers; the divisions by the step index are
/// exact for integer input.
fn faddeev_leverrier_int(dim: usize, data: &[BigInt]) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); dim + 1];
    coeffs[dim] = BigInt::one();
    let trace = |d: &[BigInt]| -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..dim {
            acc += &d[i * dim + i];
        }
        acc
    };
    let mat_mul = |a: &[BigInt], b: &[BigInt]| {
        let mut out = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                if a[i * dim + k].is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let t = &a[i * dim + k] * &b[k * dim + j];
                    out[i * dim + j] += t;
                }
            }
        }
        out
    };
    let mut m = data.to_vec();
    coeffs[dim - 1] = -trace(&m);
    for k in 2..=dim {
        let mut shifted = m.clone();
        for i in 0..dim {
            shifted[i * dim + i] += &coeffs[dim - k + 1];
        }
        m = mat_mul(data, &shifted);
        let t = trace(&m);
        let k_big = BigInt::from(k);
        debug_assert!((&t % &k_big).is_zero(), "integer division must be exact");
        coeffs[dim - k] = -(t / k_big);
    }
    coeffs
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn pivot_magnitude(&self) -> f64 {
        self.abs()
    }
}
