//! Direct dense solvers shared by both arithmetic modes, plus float-only
//! factorizations (determinant, inverse, Cholesky).

use crate::mat::Mat;
use crate::scalar::{Real, Scalar};

/// Gaussian elimination with partial pivoting (pivot chosen by `to_f64`
/// magnitude, which is exact-safe: any nonzero rational pivot is valid).
/// Returns `None` when no nonzero pivot exists in some column.
pub fn solve<T: Scalar>(a: &Mat<T>, b: &[T]) -> Option<Vec<T>> {
    assert!(a.is_square());
    let n = a.rows();
    assert_eq!(b.len(), n);
    let mut aug = Mat::from_fn(n, n + 1, |r, c| if c < n { a.at(r, c).clone() } else { b[r].clone() });

    for col in 0..n {
        let pivot_row = (col..n)
            .filter(|&r| !aug.at(r, col).is_zero())
            .max_by(|&r1, &r2| {
                aug.at(r1, col)
                    .approx_f64()
                    .abs()
                    .partial_cmp(&aug.at(r2, col).approx_f64().abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
        if pivot_row != col {
            for j in 0..=n {
                let tmp = aug.at(col, j).clone();
                aug.set(col, j, aug.at(pivot_row, j).clone());
                aug.set(pivot_row, j, tmp);
            }
        }
        let pivot = aug.at(col, col).clone();
        for r in (col + 1)..n {
            if aug.at(r, col).is_zero() {
                continue;
            }
            let f = aug.at(r, col).clone() / pivot.clone();
            for j in col..=n {
                let v = aug.at(r, j).clone() - f.clone() * aug.at(col, j).clone();
                aug.set(r, j, v);
            }
        }
    }

    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut acc = aug.at(r, n).clone();
        for j in (r + 1)..n {
            acc = acc - aug.at(r, j).clone() * x[j].clone();
        }
        if aug.at(r, r).is_zero() {
            return None;
        }
        x[r] = acc / aug.at(r, r).clone();
    }
    Some(x)
}

/// Gauss-Jordan inverse; `None` when a column has no nonzero pivot.
pub fn inverse<T: Scalar>(a: &Mat<T>) -> Option<Mat<T>> {
    assert!(a.is_square());
    let n = a.rows();
    let mut work = a.clone();
    let mut inv = Mat::<T>::identity(n);

    for col in 0..n {
        let pivot_row = (col..n)
            .filter(|&r| !work.at(r, col).is_zero())
            .max_by(|&r1, &r2| {
                work.at(r1, col)
                    .approx_f64()
                    .abs()
                    .partial_cmp(&work.at(r2, col).approx_f64().abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
        if pivot_row != col {
            for j in 0..n {
                let t = work.at(col, j).clone();
                work.set(col, j, work.at(pivot_row, j).clone());
                work.set(pivot_row, j, t);
                let t = inv.at(col, j).clone();
                inv.set(col, j, inv.at(pivot_row, j).clone());
                inv.set(pivot_row, j, t);
            }
        }
        let pivot = work.at(col, col).clone();
        for j in 0..n {
            let v = work.at(col, j).clone() / pivot.clone();
            work.set(col, j, v);
            let v = inv.at(col, j).clone() / pivot.clone();
            inv.set(col, j, v);
        }
        for r in 0..n {
            if r == col || work.at(r, col).is_zero() {
                continue;
            }
            let f = work.at(r, col).clone();
            for j in 0..n {
                let v = work.at(r, j).clone() - f.clone() * work.at(col, j).clone();
                work.set(r, j, v);
                let v = inv.at(r, j).clone() - f.clone() * inv.at(col, j).clone();
                inv.set(r, j, v);
            }
        }
    }
    Some(inv)
}

/// LU determinant with partial pivoting.
pub fn det<T: Real>(a: &Mat<T>) -> T {
    assert!(a.is_square());
    let n = a.rows();
    let mut lu = a.clone();
    let mut sign = T::one();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| {
                lu.at(r1, col)
                    .abs()
                    .partial_cmp(&lu.at(r2, col).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if lu.at(pivot_row, col).is_zero() {
            return T::zero();
        }
        if pivot_row != col {
            sign = -sign;
            for j in 0..n {
                let t = *lu.at(col, j);
                lu.set(col, j, *lu.at(pivot_row, j));
                lu.set(pivot_row, j, t);
            }
        }
        let pivot = *lu.at(col, col);
        for r in (col + 1)..n {
            let f = *lu.at(r, col) / pivot;
            for j in col..n {
                let v = *lu.at(r, j) - f * *lu.at(col, j);
                lu.set(r, j, v);
            }
        }
    }
    let mut d = sign;
    for i in 0..n {
        d = d * *lu.at(i, i);
    }
    d
}

/// Upper Cholesky factor `U` with `P = U^T U`; `None` when `P` is not
/// symmetric positive definite.
pub fn cholesky_upper<T: Real>(p: &Mat<T>) -> Option<Mat<T>> {
    assert!(p.is_square());
    let n = p.rows();
    let sym_tol = T::from_f64(1e-10) * (T::one() + T::from_f64(p.max_abs()));
    for r in 0..n {
        for c in (r + 1)..n {
            if (*p.at(r, c) - *p.at(c, r)).abs() > sym_tol {
                return None;
            }
        }
    }
    let mut u = Mat::<T>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = *p.at(i, j);
            for k in 0..i {
                acc = acc - *u.at(k, i) * *u.at(k, j);
            }
            if i == j {
                if acc <= T::zero() {
                    return None;
                }
                u.set(i, i, acc.sqrt());
            } else {
                u.set(i, j, acc / *u.at(i, i));
            }
        }
    }
    Some(u)
}

/// Inverse of an upper-triangular matrix by back substitution.
pub fn inv_upper<T: Real>(u: &Mat<T>) -> Mat<T> {
    assert!(u.is_square());
    let n = u.rows();
    let mut inv = Mat::<T>::zeros(n, n);
    for col in 0..n {
        let mut x = vec![T::zero(); n];
        x[col] = T::one();
        for r in (0..=col).rev() {
            let mut acc = x[r];
            for j in (r + 1)..n {
                acc = acc - *u.at(r, j) * x[j];
            }
            x[r] = acc / *u.at(r, r);
        }
        for r in 0..n {
            inv.set(r, col, x[r]);
        }
    }
    inv
}
