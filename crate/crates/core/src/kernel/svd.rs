//! One-sided Jacobi SVD for small dense float matrices.
//!
//! The sweep orthogonalizes the columns of a working copy `W = A * V` by
//! right rotations accumulated into `V`. At convergence the column norms of
//! `W` are the singular values and the columns of `V` are right singular
//! vectors, which is exactly what rank decisions, nullspaces and row-space
//! bases need. Jacobi is slow for big matrices but has excellent relative
//! accuracy, which is what makes tolerance-based rank verdicts trustworthy.

use crate::mat::Mat;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

pub struct JacobiSvd<T> {
    /// Right singular vectors (columns), `n x n`.
    pub v: Mat<T>,
    /// `A * V`, columns orthogonal with norms `sigma`.
    pub w: Mat<T>,
    /// Column norms of `w`, unsorted.
    pub sigma: Vec<T>,
}

pub fn jacobi<T: Real>(a: &Mat<T>) -> JacobiSvd<T> {
    let m = a.rows();
    let n = a.cols();
    let mut w = a.clone();
    let mut v = Mat::<T>::identity(n);
    let eps = T::epsilon() * T::from_f64(8.0);

    let col_dot = |mat: &Mat<T>, i: usize, j: usize, rows: usize| -> T {
        let mut acc = T::zero();
        for r in 0..rows {
            acc = acc + *mat.at(r, i) * *mat.at(r, j);
        }
        acc
    };

    // Columns whose squared norm falls below this are rounding noise; pairs
    // of them would never pass the relative test and must not keep the sweep
    // alive. The Frobenius norm is rotation-invariant, so the floor is fixed.
    let noise_floor = {
        let mut fro2 = T::zero();
        for i in 0..n {
            fro2 = fro2 + col_dot(&w, i, i, m);
        }
        eps * eps * fro2
    };

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in (i + 1)..n {
                let alpha = col_dot(&w, i, i, m);
                let beta = col_dot(&w, j, j, m);
                let gamma = col_dot(&w, i, j, m);
                if alpha.is_zero() || beta.is_zero() {
                    continue;
                }
                if alpha <= noise_floor && beta <= noise_floor {
                    continue;
                }
                if gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::from_f64(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let wi = *w.at(r, i);
                    let wj = *w.at(r, j);
                    w.set(r, i, c * wi - s * wj);
                    w.set(r, j, s * wi + c * wj);
                }
                for r in 0..n {
                    let vi = *v.at(r, i);
                    let vj = *v.at(r, j);
                    v.set(r, i, c * vi - s * vj);
                    v.set(r, j, s * vi + c * vj);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<T> = (0..n).map(|i| col_dot(&w, i, i, m).sqrt()).collect();
    JacobiSvd { v, w, sigma }
}

fn sigma_max<T: Real>(sigma: &[T]) -> T {
    sigma.iter().cloned().fold(T::zero(), T::max)
}

/// Numerical rank with threshold `tol * sigma_max`.
pub fn rank<T: Real>(a: &Mat<T>, tol: f64) -> usize {
    let svd = jacobi(a);
    let smax = sigma_max(&svd.sigma);
    if smax.is_zero() {
        return 0;
    }
    let thresh = T::from_f64(tol) * smax;
    svd.sigma.iter().filter(|s| **s > thresh).count()
}

/// Orthonormal nullspace basis: right singular vectors with singular value
/// at most `tol * sigma_max`.
pub fn nullspace<T: Real>(a: &Mat<T>, tol: f64) -> Vec<Vec<T>> {
    let n = a.cols();
    let svd = jacobi(a);
    let smax = sigma_max(&svd.sigma);
    let thresh = T::from_f64(tol) * smax;
    let mut basis = Vec::new();
    for (i, s) in svd.sigma.iter().enumerate() {
        if smax.is_zero() || *s <= thresh {
            basis.push((0..n).map(|r| *svd.v.at(r, i)).collect());
        }
    }
    basis
}

/// Orthonormal basis of `span(rows)` via the column space of the transpose.
pub fn row_space<T: Real>(rows: &[Vec<T>], tol: f64) -> Vec<Vec<T>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let n = rows[0].len();
    let k = rows.len();
    let at = Mat::from_fn(n, k, |r, c| rows[c][r]);
    let svd = jacobi(&at);
    let smax = sigma_max(&svd.sigma);
    if smax.is_zero() {
        return Vec::new();
    }
    let thresh = T::from_f64(tol) * smax;
    let mut basis = Vec::new();
    for (i, s) in svd.sigma.iter().enumerate() {
        if *s > thresh {
            let inv = T::one() / *s;
            basis.push((0..n).map(|r| *svd.w.at(r, i) * inv).collect());
        }
    }
    basis
}

/// Minimum-norm least-squares solution of `A x ~ b`, truncating singular
/// values below `tol * sigma_max`.
pub fn lstsq_min_norm<T: Real>(a: &Mat<T>, b: &[T], tol: f64) -> Vec<T> {
    assert_eq!(a.rows(), b.len());
    let n = a.cols();
    let svd = jacobi(a);
    let smax = sigma_max(&svd.sigma);
    let mut x = vec![T::zero(); n];
    if smax.is_zero() {
        return x;
    }
    let thresh = T::from_f64(tol) * smax;
    for (i, s) in svd.sigma.iter().enumerate() {
        if *s <= thresh {
            continue;
        }
        // coefficient = u_i . b / sigma_i with u_i = w_i / sigma_i
        let mut ub = T::zero();
        for r in 0..a.rows() {
            ub = ub + *svd.w.at(r, i) * b[r];
        }
        let coeff = ub / (*s * *s);
        for r in 0..n {
            x[r] = x[r] + *svd.v.at(r, i) * coeff;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_has_full_nullspace() {
        let a = Mat::<f64>::zeros(3, 3);
        let ns = nullspace(&a, 1e-10);
        assert_eq!(ns.len(), 3);
    }

    #[test]
    fn identity_has_empty_nullspace() {
        let a = Mat::<f64>::identity(4);
        assert!(nullspace(&a, 1e-10).is_empty());
        assert_eq!(rank(&a, 1e-10), 4);
    }

    #[test]
    fn rank_one_symmetric_example() {
        let a: Mat<f64> = Mat::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        let ns = nullspace(&a, 1e-10);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        // span{(1,-1)} up to sign and normalization
        assert!((v[0] + v[1]).abs() < 1e-12);
        assert!((v[0].hypot(v[1]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nullspace_vectors_are_orthonormal_and_annihilated() {
        let a: Mat<f64> = Mat::from_rows(vec![
            vec![1.0, 2.0, 3.0, 4.0],
            vec![2.0, 4.0, 6.0, 8.0],
            vec![0.0, 1.0, 0.0, 1.0],
        ]);
        let ns = nullspace(&a, 1e-10);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let av = a.matvec(v);
            assert!(crate::mat::vecops::norm_f64(&av) < 1e-12);
        }
        let d = crate::mat::vecops::dot(&ns[0], &ns[1]);
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn lstsq_recovers_exact_solution() {
        let a: Mat<f64> = Mat::from_rows(vec![vec![2.0, 0.0], vec![0.0, 3.0], vec![0.0, 0.0]]);
        let b = vec![4.0, 9.0, 0.0];
        let x = lstsq_min_norm(&a, &b, 1e-12);
        assert!((x[0] - 2.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }
}
