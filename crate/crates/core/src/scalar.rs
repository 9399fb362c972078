//! Scalar abstraction: every algebraic routine in this crate is generic over
//! a [`Scalar`], instantiated either with IEEE floats (`f32`, `f64`) or with
//! arbitrary-precision rationals ([`num_rational::BigRational`]).
//!
//! The two families differ in how linear-algebra decisions are made: float
//! mode ranks by singular values against a relative tolerance, rational mode
//! is exact and ignores tolerances. Numerical-only paths (matrix exponential,
//! Cholesky, the flow) additionally require [`Real`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::kernel::{exact, svd};
use crate::mat::Mat;

/// Arbitrary-precision rational scalar used by the exact mode.
pub type Rational = BigRational;

/// Which arithmetic a scalar type carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithmeticMode {
    Float,
    Rational,
}

impl ArithmeticMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ArithmeticMode::Float => "float",
            ArithmeticMode::Rational => "rational",
        }
    }
}

/// Field scalar with mode-appropriate rank decisions.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ArithmeticMode;

    fn from_int(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Best-effort conversion for diagnostics, pivoting and residual norms.
    fn approx_f64(&self) -> f64;

    /// Treated as zero: within `tol` in float mode, exactly zero in rational
    /// mode.
    fn negligible(&self, tol: f64) -> bool;

    /// Basis of the nullspace of `a`. Float mode: orthonormal vectors from
    /// singular vectors with singular value below `tol * sigma_max`.
    /// Rational mode: primitive integer vectors from fraction-free
    /// elimination; `tol` is ignored.
    fn nullspace_vectors(a: &Mat<Self>, tol: f64) -> Vec<Vec<Self>>;

    /// Independent basis of the span of `rows` (orthonormal in float mode,
    /// reduced-echelon primitive vectors in rational mode).
    fn span_vectors(rows: &[Vec<Self>], tol: f64) -> Vec<Vec<Self>>;
}

/// Floating-point scalars; unlock SVD-free numerical paths (matrix
/// exponential, Cholesky, gaussian sampling, the minimal-vector flow).
pub trait Real: Scalar + Float + Signed + std::iter::Sum {
    fn from_f64(v: f64) -> Self;
}

impl Scalar for f64 {
    const MODE: ArithmeticMode = ArithmeticMode::Float;

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn approx_f64(&self) -> f64 {
        *self
    }

    fn negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn nullspace_vectors(a: &Mat<Self>, tol: f64) -> Vec<Vec<Self>> {
        svd::nullspace(a, tol)
    }

    fn span_vectors(rows: &[Vec<Self>], tol: f64) -> Vec<Vec<Self>> {
        svd::row_space(rows, tol)
    }
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
}

impl Scalar for f32 {
    const MODE: ArithmeticMode = ArithmeticMode::Float;

    fn from_int(n: i64) -> Self {
        n as f32
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn approx_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn negligible(&self, tol: f64) -> bool {
        f64::from(self.abs()) <= tol
    }

    fn nullspace_vectors(a: &Mat<Self>, tol: f64) -> Vec<Vec<Self>> {
        svd::nullspace(a, tol)
    }

    fn span_vectors(rows: &[Vec<Self>], tol: f64) -> Vec<Vec<Self>> {
        svd::row_space(rows, tol)
    }
}

impl Real for f32 {
    fn from_f64(v: f64) -> Self {
        v as f32
    }
}

impl Scalar for BigRational {
    const MODE: ArithmeticMode = ArithmeticMode::Rational;

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn approx_f64(&self) -> f64 {
        match ToPrimitive::to_f64(self) {
            Some(v) if v.is_finite() => v,
            // Magnitude overflow: keep the sign so pivot selection still works.
            _ => {
                if self.is_zero() {
                    0.0
                } else if self.numer().sign() == self.denom().sign() {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    fn negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn nullspace_vectors(a: &Mat<Self>, _tol: f64) -> Vec<Vec<Self>> {
        exact::nullspace(a)
    }

    fn span_vectors(rows: &[Vec<Self>], _tol: f64) -> Vec<Vec<Self>> {
        exact::row_basis(rows)
    }
}
