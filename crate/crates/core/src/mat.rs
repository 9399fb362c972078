//! Dense row-major matrices and small vector helpers.
//!
//! Sizes in this crate are tiny (ambient dimensions up to a few hundred), so
//! everything is a plain `Vec`-backed dense matrix with no blocking or views.

use std::fmt;
use std::ops::Index;

use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn diag(entries: &[T]) -> Self {
        let mut m = Mat::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Panics if the rows are ragged or empty.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        assert!(r > 0, "from_rows: no rows");
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "from_rows: ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
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

    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row_slice(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul: inner dimension mismatch");
        let mut out = Mat::<T>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.negligible(0.0) && T::MODE == crate::scalar::ArithmeticMode::Rational {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.at(i, j).clone() + a.clone() * rhs.at(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matvec: dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (j, x) in v.iter().enumerate() {
                    acc = acc + self.at(i, j).clone() * x.clone();
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c).clone() + rhs.at(r, c).clone())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c).clone() - rhs.at(r, c).clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c).clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        Mat::from_fn(self.rows, self.cols, |r, c| -self.at(r, c).clone())
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        let mut acc = T::zero();
        for i in 0..self.rows {
            acc = acc + self.at(i, i).clone();
        }
        acc
    }

    pub fn frob_sq(&self) -> T {
        let mut acc = T::zero();
        for v in &self.data {
            acc = acc + v.clone() * v.clone();
        }
        acc
    }

    pub fn frob(&self) -> f64 {
        self.frob_sq().approx_f64().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.approx_f64().abs()).fold(0.0, f64::max)
    }

    /// Row-major flattening.
    pub fn vectorize(&self) -> Vec<T> {
        self.data.clone()
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Mat::from_fn(nr, nc, |r, c| self.at(r0 + r, c0 + c).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat<T>) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.at(r, c).clone());
            }
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat::from_fn(self.rows, self.cols, |r, c| f(self.at(r, c)))
    }

    pub fn to_f64_mat(&self) -> Mat<f64> {
        self.map(|v| v.approx_f64())
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T: Scalar> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Small helpers on coordinate vectors.
pub mod vecops {
    use crate::scalar::Scalar;

    pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
        assert_eq!(a.len(), b.len());
        let mut acc = T::zero();
        for (x, y) in a.iter().zip(b) {
            acc = acc + x.clone() * y.clone();
        }
        acc
    }

    pub fn norm_sq<T: Scalar>(a: &[T]) -> T {
        dot(a, a)
    }

    pub fn norm_f64<T: Scalar>(a: &[T]) -> f64 {
        norm_sq(a).approx_f64().sqrt()
    }

    pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
        assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
    }

    pub fn scale<T: Scalar>(a: &[T], s: &T) -> Vec<T> {
        a.iter().map(|x| x.clone() * s.clone()).collect()
    }

    /// `a += s * b`
    pub fn add_scaled<T: Scalar>(a: &mut [T], s: &T, b: &[T]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter_mut().zip(b) {
            *x = x.clone() + s.clone() * y.clone();
        }
    }
}
