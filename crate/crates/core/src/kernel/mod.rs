//! Shared linear-algebra primitives: nullspaces, subspace bases, least-squares
//! projection. The arithmetic mode is carried by the scalar type: float
//! scalars rank by singular values against a relative tolerance, rational
//! scalars are exact (tolerances are ignored).

pub mod dense;
pub mod exact;
pub mod expm;
pub mod svd;

use crate::error::{Error, Result};
use crate::mat::{vecops, Mat};
use crate::scalar::Scalar;

/// Basis of a linear subspace of some ambient coordinate space.
///
/// Float mode keeps the vectors orthonormal (they come from singular
/// vectors); rational mode keeps primitive integer vectors. Projection works
/// for both through the normal equations.
#[derive(Debug, Clone)]
pub struct SubspaceBasis<T: Scalar> {
    ambient: usize,
    vectors: Vec<Vec<T>>,
}

impl<T: Scalar> SubspaceBasis<T> {
    pub fn empty(ambient: usize) -> Self {
        SubspaceBasis { ambient, vectors: Vec::new() }
    }

    /// Wrap vectors that are already known to be a basis.
    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<T>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient);
        }
        SubspaceBasis { ambient, vectors }
    }

    /// Basis of the span of arbitrary (possibly dependent) vectors.
    pub fn from_spanning(ambient: usize, rows: &[Vec<T>], tol: f64) -> Self {
        for v in rows {
            assert_eq!(v.len(), ambient);
        }
        SubspaceBasis { ambient, vectors: T::span_vectors(rows, tol) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<T>] {
        &self.vectors
    }

    /// Least-squares projection of `v` onto the span; returns the projection
    /// and the Euclidean residual norm. The residual is exactly `0.0` for
    /// rational inputs in the span.
    pub fn project(&self, v: &[T]) -> Result<(Vec<T>, f64)> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: v.len() });
        }
        if self.vectors.is_empty() {
            return Ok((vec![T::zero(); self.ambient], vecops::norm_f64(v)));
        }
        let k = self.vectors.len();
        let gram = Mat::from_fn(k, k, |r, c| vecops::dot(&self.vectors[r], &self.vectors[c]));
        let rhs: Vec<T> = (0..k).map(|r| vecops::dot(&self.vectors[r], v)).collect();
        let coeff = dense::solve(&gram, &rhs).ok_or(Error::Singular)?;
        let mut proj = vec![T::zero(); self.ambient];
        for (c, b) in coeff.iter().zip(&self.vectors) {
            vecops::add_scaled(&mut proj, c, b);
        }
        let residual = vecops::norm_f64(&vecops::sub(v, &proj));
        Ok((proj, residual))
    }

    /// Membership with a scale-invariant residual test:
    /// `residual <= tol * max(1, |v|)`. Exact in rational mode.
    pub fn contains(&self, v: &[T], tol: f64) -> Result<bool> {
        let (_, residual) = self.project(v)?;
        let scale = vecops::norm_f64(v).max(1.0);
        Ok(residual <= tol * scale)
    }

    /// True iff both bases have equal rank and each vector of either basis
    /// lies in the span of the other.
    pub fn equal(&self, other: &Self, tol: f64) -> Result<bool> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: other.ambient });
        }
        if self.rank() != other.rank() {
            return Ok(false);
        }
        for v in &self.vectors {
            if !other.contains(v, tol)? {
                return Ok(false);
            }
        }
        for v in &other.vectors {
            if !self.contains(v, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Nullspace of `a` as a [`SubspaceBasis`] in `a.cols()`-dimensional space.
pub fn nullspace<T: Scalar>(a: &Mat<T>, tol: f64) -> SubspaceBasis<T> {
    SubspaceBasis { ambient: a.cols(), vectors: T::nullspace_vectors(a, tol) }
}

/// Numerical (or exact) rank via rank-nullity.
pub fn rank<T: Scalar>(a: &Mat<T>, tol: f64) -> usize {
    a.cols() - nullspace(a, tol).rank()
}
