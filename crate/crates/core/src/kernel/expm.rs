//! Matrix exponential by scaling and squaring around a Taylor core.
//!
//! The argument is scaled by a power of two until its Frobenius norm is at
//! most 1/2, the series is summed until terms fall below machine precision,
//! and the result is squared back up. At norm 1/2 the truncation error after
//! the ~30 retained terms is far below 1e-14, which is all the flow and the
//! finite-difference tests need.

use crate::mat::Mat;
use crate::scalar::Real;

const MAX_TERMS: usize = 40;

pub fn expm<T: Real>(a: &Mat<T>) -> Mat<T> {
    assert!(a.is_square());
    let n = a.rows();
    let norm = a.frob();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = T::from_f64(0.5f64.powi(squarings as i32));
    let b = a.scale(&scale);

    let mut sum = Mat::<T>::identity(n);
    let mut term = Mat::<T>::identity(n);
    for k in 1..=MAX_TERMS {
        term = term.matmul(&b).scale(&(T::one() / T::from_f64(k as f64)));
        sum = sum.add(&term);
        if term.frob() <= 1e-18 * (1.0 + sum.frob()) {
            break;
        }
    }

    let mut result = sum;
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}
