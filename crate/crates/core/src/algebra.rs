//! 2-step nilpotent Lie algebras with an adapted basis.
//!
//! The algebra `n = v + z` of type `(p,q)` carries the basis
//! `e_1..e_q` of `v` followed by `z_1..z_p` of `z`, and structure constants
//! `c[i][j][a] = (C_a)[i][j]`, i.e. `[e_i, e_j] = sum_a (C_a)[i][j] z_a`.
//! With this convention the defining identity `<j(z)v, w> = <[v,w], z>`
//! makes the matrix of `j(z_a)` equal to `C_a^T = -C_a`; everything
//! downstream uses even combinations, so only the identity test cares.

use crate::error::{Error, Result};
use crate::mat::{vecops, Mat};
use crate::scalar::Scalar;
use crate::tuple::SkewTuple;

#[derive(Debug, Clone)]
pub struct TwoStepAlgebra<T: Scalar> {
    p: usize,
    q: usize,
    mats: Vec<Mat<T>>,
}

/// Builds the algebra of an independent tuple; a dependent tuple has
/// commutator smaller than `z` and is rejected as not of type `(p,q)`.
pub fn build_algebra<T: Scalar>(c: &SkewTuple<T>) -> Result<TwoStepAlgebra<T>> {
    if !c.independent() {
        return Err(Error::DependentTuple { rank: c.flat_rank(), p: c.p() });
    }
    Ok(TwoStepAlgebra { p: c.p(), q: c.q(), mats: c.mats().to_vec() })
}

impl<T: Scalar> TwoStepAlgebra<T> {
    /// Direct construction from skew structure matrices without the
    /// independence requirement. Degenerate inputs (e.g. the abelian
    /// algebra, all matrices zero) are allowed here so curvature and
    /// derivation routines can be exercised on them; such an algebra is not
    /// of type `(p,q)` in the strict sense.
    pub fn from_structure(p: usize, q: usize, mats: Vec<Mat<T>>, _tol: f64) -> Result<Self> {
        if mats.len() != p || q < 1 {
            return Err(Error::DimensionMismatch { expected: p, got: mats.len() });
        }
        for (index, m) in mats.iter().enumerate() {
            if m.rows() != q || m.cols() != q {
                return Err(Error::DimensionMismatch { expected: q, got: m.rows().max(m.cols()) });
            }
            let sym = m.add(&m.transpose());
            let residual = sym.frob();
            if residual > crate::tuple::SKEW_TOL * (1.0 + m.frob()) || (T::MODE == crate::scalar::ArithmeticMode::Rational && !sym.frob_sq().is_zero()) {
                return Err(Error::NotSkew { index, residual });
            }
        }
        Ok(TwoStepAlgebra { p, q, mats })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Total dimension `n = q + p`.
    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// The structure matrices (one `q x q` skew matrix per `z` coordinate).
    pub fn structure_mats(&self) -> &[Mat<T>] {
        &self.mats
    }

    /// `c[i][j][a]` with `i, j < q`, `a < p`.
    pub fn structure(&self, i: usize, j: usize, a: usize) -> T {
        self.mats[a].at(i, j).clone()
    }

    pub fn structure_norm(&self) -> f64 {
        self.mats.iter().map(|m| m.frob_sq().approx_f64()).sum::<f64>().sqrt()
    }

    /// Lie bracket in adapted coordinates. Bilinear, antisymmetric;
    /// `z`-components of the inputs are ignored and the output lies in `z`.
    pub fn bracket(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        let n = self.n();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len().max(y.len()) });
        }
        let xv = &x[..self.q];
        let yv = &y[..self.q];
        let mut out = vec![T::zero(); n];
        for a in 0..self.p {
            let cy = self.mats[a].matvec(yv);
            out[self.q + a] = vecops::dot(xv, &cy);
        }
        Ok(out)
    }

    /// `[b_i, b_j]` for adapted basis vectors, as an `n`-vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<T> {
        let n = self.n();
        let mut out = vec![T::zero(); n];
        if i < self.q && j < self.q {
            for a in 0..self.p {
                out[self.q + a] = self.structure(i, j, a);
            }
        }
        out
    }

    /// The map `j(z)` on `v` determined by `<j(z)v, w> = <[v,w], z>`;
    /// linear in `z`, with `j(z_a) = -C_a` under the stored convention.
    pub fn j_map(&self, z: &[T]) -> Result<Mat<T>> {
        if z.len() != self.p {
            return Err(Error::DimensionMismatch { expected: self.p, got: z.len() });
        }
        let mut out = Mat::<T>::zeros(self.q, self.q);
        for (a, coeff) in z.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            out = out.add(&self.mats[a].scale(&-coeff.clone()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuple::{heisenberg, sample_gaussian};

    fn basis_vec(n: usize, k: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        v
    }

    #[test]
    fn heisenberg_brackets() {
        let a = build_algebra(&heisenberg::<f64>()).unwrap();
        assert_eq!(a.n(), 3);
        let e1 = basis_vec(3, 0);
        let e2 = basis_vec(3, 1);
        let z1 = basis_vec(3, 2);
        assert_eq!(a.bracket(&e1, &e2).unwrap(), vec![0.0, 0.0, 1.0]);
        assert_eq!(a.bracket(&e2, &e1).unwrap(), vec![0.0, 0.0, -1.0]);
        // z is central and [x,x] = 0
        assert_eq!(a.bracket(&e1, &z1).unwrap(), vec![0.0, 0.0, 0.0]);
        assert_eq!(a.bracket(&e1, &e1).unwrap(), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn dependent_tuple_is_rejected() {
        let c = sample_gaussian::<f64>(1, 3, 4, 1e-10).unwrap();
        let m = c.mats()[0].clone();
        let dep = crate::tuple::SkewTuple::new(vec![m.clone(), m.scale(&2.0)], 1e-10).unwrap();
        assert!(matches!(build_algebra(&dep), Err(Error::DependentTuple { rank: 1, p: 2 })));
    }

    #[test]
    fn random_4_5_tuple_has_full_commutator() {
        let c = sample_gaussian::<f64>(4, 5, 20, 1e-10).unwrap();
        assert_eq!(c.flat_rank(), 4);
        assert!(build_algebra(&c).is_ok());
    }

    #[test]
    fn j_map_matches_defining_identity() {
        let c = sample_gaussian::<f64>(3, 4, 8, 1e-10).unwrap();
        let a = build_algebra(&c).unwrap();
        let n = a.n();
        for alpha in 0..3 {
            let mut z = vec![0.0; 3];
            z[alpha] = 1.0;
            let j = a.j_map(&z).unwrap();
            for i in 0..4 {
                for k in 0..4 {
                    // <j(z_a) e_i, e_k> = (j)_ {k i}
                    let lhs = *j.at(k, i);
                    let w = a.bracket(&basis_vec(n, i), &basis_vec(n, k)).unwrap();
                    let rhs = w[4 + alpha];
                    assert!((lhs - rhs).abs() < 1e-12, "identity fails at ({i},{k},{alpha})");
                }
            }
        }
    }

    #[test]
    fn j_map_is_linear() {
        let c = sample_gaussian::<f64>(2, 4, 9, 1e-10).unwrap();
        let a = build_algebra(&c).unwrap();
        assert!(a.j_map(&[0.0, 0.0]).unwrap().frob() == 0.0);
        let j1 = a.j_map(&[1.0, 0.0]).unwrap();
        let j2 = a.j_map(&[0.0, 1.0]).unwrap();
        let j12 = a.j_map(&[1.0, 1.0]).unwrap();
        assert!(j12.sub(&j1.add(&j2)).frob() < 1e-14);
    }

    #[test]
    fn heisenberg_j_is_minus_c() {
        let a = build_algebra(&heisenberg::<f64>()).unwrap();
        let j = a.j_map(&[1.0]).unwrap();
        assert_eq!(*j.at(0, 1), -1.0);
        assert_eq!(*j.at(1, 0), 1.0);
    }

    #[test]
    fn bracket_rejects_wrong_length() {
        let a = build_algebra(&heisenberg::<f64>()).unwrap();
        assert!(a.bracket(&[1.0, 0.0], &[0.0, 1.0, 0.0]).is_err());
    }
}
