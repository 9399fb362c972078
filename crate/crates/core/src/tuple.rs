//! Tuples of skew-symmetric matrices, the type classification, random
//! sampling, and the two-sided group and Lie-algebra actions.
//!
//! A point `C = (C_1, ..., C_p)` with each `C_a` a skew-symmetric `q x q`
//! matrix encodes a 2-step nilpotent algebra of type `(p,q)` whenever the
//! matrices are linearly independent; see [`crate::algebra`].

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel;
use crate::mat::Mat;
use crate::scalar::{ArithmeticMode, Rational, Real, Scalar};

/// Relative skewness tolerance accepted (and then exactly re-enforced) by
/// the float-mode constructor.
pub const SKEW_TOL: f64 = 1e-12;

/// An ordered tuple of `p` skew-symmetric `q x q` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewTuple<T: Scalar> {
    p: usize,
    q: usize,
    mats: Vec<Mat<T>>,
    flat_rank: usize,
}

pub fn valid_type(p: usize, q: usize) -> bool {
    q >= 2 && p >= 1 && p <= q * (q - 1) / 2
}

impl<T: Scalar> SkewTuple<T> {
    /// Validates the `(p,q)` range and skewness of every matrix, then stores
    /// the exactly skew part (float mode symmetrizes away rounding residue;
    /// rational mode requires exact skewness). The independence rank of the
    /// `p x q^2` flattening is computed with relative tolerance
    /// `tol * max(p, q^2)`.
    pub fn new(mats: Vec<Mat<T>>, tol: f64) -> Result<Self> {
        let p = mats.len();
        let q = if p > 0 { mats[0].rows() } else { 0 };
        if !valid_type(p, q) {
            return Err(Error::TypeOutOfRange { p, q });
        }
        let mut clean = Vec::with_capacity(p);
        for (index, m) in mats.into_iter().enumerate() {
            if m.rows() != q || m.cols() != q {
                return Err(Error::DimensionMismatch { expected: q, got: m.rows().max(m.cols()) });
            }
            let sym = m.add(&m.transpose());
            match T::MODE {
                ArithmeticMode::Rational => {
                    if !sym.frob_sq().is_zero() {
                        return Err(Error::NotSkew { index, residual: sym.frob() });
                    }
                    clean.push(m);
                }
                ArithmeticMode::Float => {
                    let residual = sym.frob();
                    if residual > SKEW_TOL * (1.0 + m.frob()) {
                        return Err(Error::NotSkew { index, residual });
                    }
                    let half = T::from_ratio(1, 2);
                    clean.push(m.sub(&m.transpose()).scale(&half));
                }
            }
        }
        let flat_rank = kernel::rank(&flatten(&clean, q), tol * (p.max(q * q) as f64));
        Ok(SkewTuple { p, q, mats: clean, flat_rank })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn mats(&self) -> &[Mat<T>] {
        &self.mats
    }

    /// True when the `p` matrices are linearly independent in `q^2`-space.
    pub fn independent(&self) -> bool {
        self.flat_rank == self.p
    }

    pub fn flat_rank(&self) -> usize {
        self.flat_rank
    }

    /// The `p x q^2` row-major flattening.
    pub fn flatten(&self) -> Mat<T> {
        flatten(&self.mats, self.q)
    }

    pub fn norm_sq(&self) -> T {
        let mut acc = T::zero();
        for m in &self.mats {
            acc = acc + m.frob_sq();
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().approx_f64().sqrt()
    }

    /// Scaling by a nonzero factor (preserves independence).
    pub fn scale(&self, s: &T) -> Self {
        assert!(!s.is_zero());
        SkewTuple {
            p: self.p,
            q: self.q,
            mats: self.mats.iter().map(|m| m.scale(s)).collect(),
            flat_rank: self.flat_rank,
        }
    }

    /// Entrywise difference norm against another tuple of the same type.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.p, self.q), (other.p, other.q));
        let mut acc = 0.0;
        for (a, b) in self.mats.iter().zip(&other.mats) {
            acc += a.sub(b).frob_sq().approx_f64();
        }
        acc.sqrt()
    }

    /// Largest Frobenius skewness residual across the matrices.
    pub fn skewness_residual(&self) -> f64 {
        self.mats
            .iter()
            .map(|m| m.add(&m.transpose()).frob())
            .fold(0.0, f64::max)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy, tol: f64) -> Result<SkewTuple<U>> {
        SkewTuple::new(self.mats.iter().map(|m| m.map(f)).collect(), tol)
    }
}

impl SkewTuple<Rational> {
    /// Float companion of an exact tuple (entries converted through `f64`).
    pub fn to_f64_tuple(&self, tol: f64) -> Result<SkewTuple<f64>> {
        self.map(|v| v.approx_f64(), tol)
    }
}

fn flatten<T: Scalar>(mats: &[Mat<T>], q: usize) -> Mat<T> {
    Mat::from_fn(mats.len(), q * q, |r, c| mats[r].at(c / q, c % q).clone())
}

/// Exceptional-type verdict for a pair `(p,q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeClass {
    pub p: usize,
    pub q: usize,
    pub exceptional: bool,
    pub reason: String,
}

fn exceptional_line(p: usize, q: usize) -> Option<&'static str> {
    if p == 1 && q >= 2 {
        Some("(1,q) for q >= 2")
    } else if q >= 2 && p == q * (q - 1) / 2 {
        Some("(q(q-1)/2, q) for q >= 2")
    } else if p == 2 && q >= 3 {
        Some("(2,k) for k >= 3")
    } else if p == 3 && (4..=6).contains(&q) {
        Some("(3,k) for 4 <= k <= 6")
    } else {
        None
    }
}

/// A pair is exceptional when it, or its complement
/// `(q(q-1)/2 - p, q)` inside `so(q)`, matches one of the listed lines.
pub fn classify_type(p: usize, q: usize) -> Result<TypeClass> {
    if !valid_type(p, q) {
        return Err(Error::TypeOutOfRange { p, q });
    }
    if let Some(line) = exceptional_line(p, q) {
        return Ok(TypeClass { p, q, exceptional: true, reason: line.to_string() });
    }
    let comp = q * (q - 1) / 2 - p;
    if comp >= 1 {
        if let Some(line) = exceptional_line(comp, q) {
            return Ok(TypeClass {
                p,
                q,
                exceptional: true,
                reason: format!("complement ({comp},{q}) matches {line}"),
            });
        }
    }
    Ok(TypeClass { p, q, exceptional: false, reason: "non-exceptional".to_string() })
}

/// Deterministic gaussian sample: strictly-lower entries of each matrix are
/// drawn i.i.d. standard normal in a fixed order (matrix index, then row,
/// then column), the upper parts mirrored with a sign flip.
pub fn sample_gaussian<T: Real>(p: usize, q: usize, seed: u64, tol: f64) -> Result<SkewTuple<T>> {
    if !valid_type(p, q) {
        return Err(Error::TypeOutOfRange { p, q });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mats = Vec::with_capacity(p);
    for _ in 0..p {
        let mut m = Mat::<T>::zeros(q, q);
        for i in 1..q {
            for j in 0..i {
                let x: f64 = rng.sample(StandardNormal);
                m.set(i, j, T::from_f64(x));
                m.set(j, i, T::from_f64(-x));
            }
        }
        mats.push(m);
    }
    SkewTuple::new(mats, tol)
}

/// Deterministic exact sample on the lattice `{-9..9}/4`, same entry order
/// as the gaussian sampler. Entries are exactly representable in `f64`, so
/// the float companion of a lattice sample carries identical values.
pub fn sample_rational_lattice(p: usize, q: usize, seed: u64) -> Result<SkewTuple<Rational>> {
    if !valid_type(p, q) {
        return Err(Error::TypeOutOfRange { p, q });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mats = Vec::with_capacity(p);
    for _ in 0..p {
        let mut m = Mat::<Rational>::zeros(q, q);
        for i in 1..q {
            for j in 0..i {
                let k: i64 = rng.random_range(-9..=9);
                m.set(i, j, Rational::from_ratio(k, 4));
                m.set(j, i, Rational::from_ratio(-k, 4));
            }
        }
        mats.push(m);
    }
    SkewTuple::new(mats, 0.0)
}

/// The change-of-basis action: `result_a = sum_b h[a][b] * g C_b g^T`.
/// Rejects singular `g` or `h`.
pub fn group_act<T: Scalar>(
    g: &Mat<T>,
    h: &Mat<T>,
    c: &SkewTuple<T>,
    tol: f64,
) -> Result<SkewTuple<T>> {
    let (p, q) = (c.p(), c.q());
    if g.rows() != q || g.cols() != q {
        return Err(Error::DimensionMismatch { expected: q, got: g.rows() });
    }
    if h.rows() != p || h.cols() != p {
        return Err(Error::DimensionMismatch { expected: p, got: h.rows() });
    }
    if kernel::rank(g, tol) < q || kernel::rank(h, tol) < p {
        return Err(Error::Singular);
    }
    let gt = g.transpose();
    let transformed: Vec<Mat<T>> = c.mats().iter().map(|m| g.matmul(m).matmul(&gt)).collect();
    let mut mats = Vec::with_capacity(p);
    for a in 0..p {
        let mut out = Mat::<T>::zeros(q, q);
        for (b, t) in transformed.iter().enumerate() {
            let coeff = h.at(a, b).clone();
            if coeff.is_zero() {
                continue;
            }
            out = out.add(&t.scale(&coeff));
        }
        mats.push(out);
    }
    SkewTuple::new(mats, tol)
}

/// Action without the invertibility checks and without recomputing the
/// independence rank; reserved for callers that transform by group elements
/// known to be invertible (the flow's exponential factors), where
/// independence is preserved structurally.
pub(crate) fn group_act_invertible<T: Scalar>(
    g: &Mat<T>,
    h: &Mat<T>,
    c: &SkewTuple<T>,
) -> SkewTuple<T> {
    let (p, q) = (c.p(), c.q());
    let gt = g.transpose();
    let transformed: Vec<Mat<T>> = c.mats().iter().map(|m| g.matmul(m).matmul(&gt)).collect();
    let half = T::from_ratio(1, 2);
    let mats: Vec<Mat<T>> = (0..p)
        .map(|a| {
            let mut out = Mat::<T>::zeros(q, q);
            for (b, t) in transformed.iter().enumerate() {
                let coeff = h.at(a, b).clone();
                if coeff.is_zero() {
                    continue;
                }
                out = out.add(&t.scale(&coeff));
            }
            // contain rounding drift away from exact skewness
            out.sub(&out.transpose()).scale(&half)
        })
        .collect();
    SkewTuple { p, q, mats, flat_rank: c.flat_rank }
}

/// Derivative of [`group_act`] at the identity:
/// `result_a = X C_a + C_a X^T + sum_b Y[a][b] C_b`. The result is a tangent
/// tuple (skew matrices, possibly dependent), not a [`SkewTuple`].
pub fn lie_act<T: Scalar>(x: &Mat<T>, y: &Mat<T>, c: &SkewTuple<T>) -> Result<Vec<Mat<T>>> {
    let (p, q) = (c.p(), c.q());
    if x.rows() != q || x.cols() != q {
        return Err(Error::DimensionMismatch { expected: q, got: x.rows() });
    }
    if y.rows() != p || y.cols() != p {
        return Err(Error::DimensionMismatch { expected: p, got: y.rows() });
    }
    let xt = x.transpose();
    let mut out = Vec::with_capacity(p);
    for a in 0..p {
        let ca = &c.mats()[a];
        let mut m = x.matmul(ca).add(&ca.matmul(&xt));
        for b in 0..p {
            let coeff = y.at(a, b).clone();
            if coeff.is_zero() {
                continue;
            }
            m = m.add(&c.mats()[b].scale(&coeff));
        }
        out.push(m);
    }
    Ok(out)
}

/// Frobenius norm of a tangent tuple.
pub fn tangent_norm<T: Scalar>(mats: &[Mat<T>]) -> f64 {
    mats.iter().map(|m| m.frob_sq().approx_f64()).sum::<f64>().sqrt()
}

/// The standard 2x2 symplectic generator; `heisenberg()` is the tuple whose
/// algebra is the 3-dimensional Heisenberg algebra.
pub fn heisenberg<T: Scalar>() -> SkewTuple<T> {
    let mut m = Mat::<T>::zeros(2, 2);
    m.set(0, 1, T::one());
    m.set(1, 0, -T::one());
    SkewTuple::new(vec![m], 1e-10).expect("heisenberg tuple is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn classify_spec_examples() {
        let t = classify_type(1, 2).unwrap();
        assert!(t.exceptional);
        assert_eq!(t.reason, "(1,q) for q >= 2");

        let t = classify_type(4, 5).unwrap();
        assert!(!t.exceptional);

        let t = classify_type(7, 5).unwrap();
        assert!(t.exceptional);
        assert!(t.reason.contains("complement (3,5)"));
        assert!(t.reason.contains("(3,k)"));

        let t = classify_type(10, 5).unwrap();
        assert!(t.exceptional);
        assert_eq!(t.reason, "(q(q-1)/2, q) for q >= 2");

        let t = classify_type(2, 7).unwrap();
        assert!(t.exceptional);
        assert_eq!(t.reason, "(2,k) for k >= 3");
    }

    #[test]
    fn classify_rejects_out_of_range() {
        assert!(classify_type(0, 5).is_err());
        assert!(classify_type(11, 5).is_err());
        assert!(classify_type(1, 1).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a: SkewTuple<f64> = sample_gaussian(4, 5, 12345, 1e-10).unwrap();
        let b: SkewTuple<f64> = sample_gaussian(4, 5, 12345, 1e-10).unwrap();
        assert_eq!(a, b);
        let c: SkewTuple<f64> = sample_gaussian(4, 5, 12346, 1e-10).unwrap();
        assert!(a.distance(&c) > 1e-6);
    }

    #[test]
    fn gaussian_sample_is_independent_and_skew() {
        let t: SkewTuple<f64> = sample_gaussian(4, 5, 1, 1e-10).unwrap();
        assert!(t.independent());
        assert!(t.skewness_residual() == 0.0);
    }

    #[test]
    fn so2_samples_are_multiples_of_the_symplectic_generator() {
        let t: SkewTuple<f64> = sample_gaussian(1, 2, 7, 1e-10).unwrap();
        let lambda = *t.mats()[0].at(0, 1);
        assert!(lambda != 0.0);
        assert_eq!(*t.mats()[0].at(1, 0), -lambda);
        assert_eq!(*t.mats()[0].at(0, 0), 0.0);
    }

    #[test]
    fn rational_lattice_sample_is_exact() {
        let t = sample_rational_lattice(4, 5, 99).unwrap();
        assert!(t.independent());
        for m in t.mats() {
            assert!(m.add(&m.transpose()).frob_sq().is_zero());
            for r in 0..5 {
                for c in 0..5 {
                    assert!(m.at(r, c).denom() <= &num_bigint::BigInt::from(4));
                }
            }
        }
        // float companion carries identical dyadic values
        let f = t.to_f64_tuple(1e-10).unwrap();
        for (mr, mf) in t.mats().iter().zip(f.mats()) {
            for r in 0..5 {
                for c in 0..5 {
                    assert_eq!(mr.at(r, c).approx_f64(), *mf.at(r, c));
                }
            }
        }
    }

    #[test]
    fn group_act_identity_and_scaling() {
        let c: SkewTuple<f64> = sample_gaussian(2, 4, 3, 1e-10).unwrap();
        let id = group_act(&Mat::identity(4), &Mat::identity(2), &c, 1e-10).unwrap();
        assert!(c.distance(&id) < 1e-14);

        let lam = 1.7;
        let g = Mat::<f64>::identity(4).scale(&lam);
        let scaled = group_act(&g, &Mat::identity(2), &c, 1e-10).unwrap();
        assert!(scaled.distance(&c.scale(&(lam * lam))) < 1e-12);
    }

    #[test]
    fn group_act_rejects_singular_factors() {
        let c: SkewTuple<f64> = sample_gaussian(2, 4, 3, 1e-10).unwrap();
        let z = Mat::<f64>::zeros(4, 4);
        assert!(matches!(group_act(&z, &Mat::identity(2), &c, 1e-10), Err(Error::Singular)));
    }

    #[test]
    fn heisenberg_tuple_is_rotation_invariant() {
        let c: SkewTuple<f64> = heisenberg();
        let theta = 0.83f64;
        let rot = Mat::from_rows(vec![
            vec![theta.cos(), -theta.sin()],
            vec![theta.sin(), theta.cos()],
        ]);
        let moved = group_act(&rot, &Mat::identity(1), &c, 1e-10).unwrap();
        assert!(c.distance(&moved) < 1e-14);
    }

    #[test]
    fn lie_act_trivial_directions() {
        let c: SkewTuple<f64> = sample_gaussian(3, 4, 5, 1e-10).unwrap();
        let zero4 = Mat::<f64>::zeros(4, 4);
        let zero3 = Mat::<f64>::zeros(3, 3);
        let out = lie_act(&zero4, &zero3, &c).unwrap();
        assert!(tangent_norm(&out) == 0.0);

        // (-I_q, 2 I_p) always stabilizes
        let x = Mat::<f64>::identity(4).neg();
        let y = Mat::<f64>::identity(3).scale(&2.0);
        let out = lie_act(&x, &y, &c).unwrap();
        assert!(tangent_norm(&out) < 1e-13);

        // (I_q, 0) doubles the tuple
        let out = lie_act(&Mat::identity(4), &zero3, &c).unwrap();
        for (m, orig) in out.iter().zip(c.mats()) {
            assert!(m.sub(&orig.scale(&2.0)).frob() < 1e-13);
        }
    }

    #[test]
    fn dependent_tuple_is_flagged() {
        let c: SkewTuple<f64> = sample_gaussian(1, 3, 11, 1e-10).unwrap();
        let m = c.mats()[0].clone();
        let t = SkewTuple::new(vec![m.clone(), m.scale(&2.0)], 1e-10).unwrap();
        assert!(!t.independent());
        assert_eq!(t.flat_rank(), 1);
    }

    #[test]
    fn non_skew_matrix_is_rejected() {
        let m = Mat::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(matches!(SkewTuple::new(vec![m], 1e-10), Err(Error::NotSkew { .. })));
    }
}
