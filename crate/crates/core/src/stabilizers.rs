//! Stabilizers of the `gl(q) + gl(p)` and `sl(q) + sl(p)` actions at a
//! tuple, the correspondence with block-diagonal derivations, and the
//! closed-orbit stabilizer identity.

use serde::{Deserialize, Serialize};

use crate::algebra::TwoStepAlgebra;
use crate::derivations;
use crate::error::Result;
use crate::kernel::{self, SubspaceBasis};
use crate::mat::Mat;
use crate::scalar::Scalar;
use crate::tuple::{lie_act, tangent_norm, SkewTuple};

/// Stabilizer bases at a tuple `C`. Vectors live in `(q^2 + p^2)`-space,
/// `X` entries first (row-major), then `Y`.
#[derive(Debug, Clone)]
pub struct StabilizerReport<T: Scalar> {
    p: usize,
    q: usize,
    pub gl_basis: SubspaceBasis<T>,
    pub sl_basis: SubspaceBasis<T>,
    /// `(-I_q, 2 I_p)` lies in the gl stabilizer of every tuple.
    pub contains_d_line: bool,
    pub max_action_residual: f64,
}

impl<T: Scalar> StabilizerReport<T> {
    pub fn gl_dim(&self) -> usize {
        self.gl_basis.rank()
    }

    pub fn sl_dim(&self) -> usize {
        self.sl_basis.rank()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }
}

/// The pair `(-I_q, 2 I_p)` flattened to `(q^2 + p^2)`-space.
pub fn d_line_vector<T: Scalar>(p: usize, q: usize) -> Vec<T> {
    let mut v = vec![T::zero(); q * q + p * p];
    for i in 0..q {
        v[i * q + i] = -T::one();
    }
    for i in 0..p {
        v[q * q + i * p + i] = T::from_int(2);
    }
    v
}

fn split_pair<T: Scalar>(v: &[T], p: usize, q: usize) -> (Mat<T>, Mat<T>) {
    let x = Mat::from_vec(q, q, v[..q * q].to_vec());
    let y = Mat::from_vec(p, p, v[q * q..].to_vec());
    (x, y)
}

/// Rows of the linear system `(X, Y) -> lie_act(X, Y, C)`, indexed by
/// `(alpha, i < j)`: `p * q(q-1)/2` equations over `q^2 + p^2` unknowns.
fn action_system<T: Scalar>(c: &SkewTuple<T>) -> Mat<T> {
    let (p, q) = (c.p(), c.q());
    let cols = q * q + p * p;
    let mut rows = Vec::with_capacity(p * q * (q - 1) / 2);
    for alpha in 0..p {
        let ca = &c.mats()[alpha];
        for i in 0..q {
            for j in (i + 1)..q {
                let mut row = vec![T::zero(); cols];
                // (X C_a)[i][j] = sum_k X[i][k] C_a[k][j]
                for k in 0..q {
                    row[i * q + k] = row[i * q + k].clone() + ca.at(k, j).clone();
                }
                // (C_a X^T)[i][j] = sum_k C_a[i][k] X[j][k]
                for k in 0..q {
                    row[j * q + k] = row[j * q + k].clone() + ca.at(i, k).clone();
                }
                // (sum_b Y[a][b] C_b)[i][j]
                for b in 0..p {
                    row[q * q + alpha * p + b] =
                        row[q * q + alpha * p + b].clone() + c.mats()[b].at(i, j).clone();
                }
                rows.push(row);
            }
        }
    }
    Mat::from_rows(rows)
}

/// Computes the gl and sl stabilizers of the Lie-algebra action at `C`.
/// The sl side appends the two trace constraints to the same system.
pub fn stabilizer<T: Scalar>(c: &SkewTuple<T>, tol: f64) -> Result<StabilizerReport<T>> {
    let (p, q) = (c.p(), c.q());
    let cols = q * q + p * p;
    let sys = action_system(c);
    let gl_basis = kernel::nullspace(&sys, tol);

    let mut traced = Vec::with_capacity(sys.rows() + 2);
    for r in 0..sys.rows() {
        traced.push(sys.row_slice(r).to_vec());
    }
    let mut tr_x = vec![T::zero(); cols];
    for i in 0..q {
        tr_x[i * q + i] = T::one();
    }
    let mut tr_y = vec![T::zero(); cols];
    for i in 0..p {
        tr_y[q * q + i * p + i] = T::one();
    }
    traced.push(tr_x);
    traced.push(tr_y);
    let sl_basis = kernel::nullspace(&Mat::from_rows(traced), tol);

    let mut max_action_residual: f64 = 0.0;
    for v in gl_basis.vectors().iter().chain(sl_basis.vectors()) {
        let (x, y) = split_pair(v, p, q);
        let tangent = lie_act(&x, &y, c)?;
        max_action_residual = max_action_residual.max(tangent_norm(&tangent));
    }

    let contains_d_line = gl_basis.contains(&d_line_vector(p, q), tol.max(1e-9))?;

    Ok(StabilizerReport { p, q, gl_basis, sl_basis, contains_d_line, max_action_residual })
}

/// Checks that `(X, Y) -> blockdiag(-X^T, Y)` identifies the gl stabilizer
/// with the block-diagonal part of `Der(n)`: equal dimensions plus two-sided
/// membership of the mapped bases.
pub fn correspondence_check<T: Scalar>(
    c: &SkewTuple<T>,
    a: &TwoStepAlgebra<T>,
    tol: f64,
) -> Result<bool> {
    let stab = stabilizer(c, tol)?;
    let der = derivations::derivation_algebra(a, tol)?;
    correspondence_from_parts(&stab, &der, tol)
}

/// [`correspondence_check`] on already-computed stabilizer and derivation
/// bases.
pub fn correspondence_from_parts<T: Scalar>(
    stab: &StabilizerReport<T>,
    der: &derivations::DerivationBasis<T>,
    tol: f64,
) -> Result<bool> {
    let (p, q) = (stab.p(), stab.q());
    let n = p + q;
    if stab.gl_dim() != der.blockdiag_part.rank() {
        return Ok(false);
    }
    let member_tol = tol.max(1e-9);

    for v in stab.gl_basis.vectors() {
        let (x, y) = split_pair(v, p, q);
        let mut e = Mat::<T>::zeros(n, n);
        e.set_block(0, 0, &x.transpose().neg());
        e.set_block(q, q, &y);
        if !der.blockdiag_part.contains(&e.vectorize(), member_tol)? {
            return Ok(false);
        }
    }

    for v in der.blockdiag_part.vectors() {
        let e = Mat::from_vec(n, n, v.clone());
        let x = e.block(0, 0, q, q).transpose().neg();
        let y = e.block(q, q, p, p);
        let mut pair = x.vectorize();
        pair.extend(y.vectorize());
        if !stab.gl_basis.contains(&pair, member_tol)? {
            return Ok(false);
        }
    }

    Ok(true)
}

/// Closed-orbit stabilizer identity: when the flow has certified the orbit
/// closed, the gl stabilizer must be the sl stabilizer extended by the line
/// through `(-I_q, 2 I_p)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaVerdict {
    /// True when called without a closedness certificate; the hypothesis
    /// fails and the verdict is vacuous.
    pub vacuous: bool,
    pub holds: bool,
    pub gl_dim: usize,
    pub sl_dim: usize,
}

pub fn lemma_check<T: Scalar>(
    c: &SkewTuple<T>,
    closed_certified: bool,
    tol: f64,
) -> Result<LemmaVerdict> {
    let stab = stabilizer(c, tol)?;
    lemma_from_stab(&stab, closed_certified, tol)
}

/// [`lemma_check`] on an already-computed stabilizer report.
pub fn lemma_from_stab<T: Scalar>(
    stab: &StabilizerReport<T>,
    closed_certified: bool,
    tol: f64,
) -> Result<LemmaVerdict> {
    let (gl_dim, sl_dim) = (stab.gl_dim(), stab.sl_dim());
    if !closed_certified {
        return Ok(LemmaVerdict { vacuous: true, holds: true, gl_dim, sl_dim });
    }
    if gl_dim != 1 + sl_dim {
        return Ok(LemmaVerdict { vacuous: false, holds: false, gl_dim, sl_dim });
    }
    let (p, q) = (stab.p(), stab.q());
    let mut spanning: Vec<Vec<T>> = stab.sl_basis.vectors().to_vec();
    spanning.push(d_line_vector(p, q));
    let extended = SubspaceBasis::from_spanning(q * q + p * p, &spanning, tol);
    let holds = stab.gl_basis.equal(&extended, tol.max(1e-9))?;
    Ok(LemmaVerdict { vacuous: false, holds, gl_dim, sl_dim })
}
