//! Norm-minimizing flow over the `SL(q) x SL(p)` orbit of a tuple.
//!
//! The moment map of the action vanishes exactly at minimal vectors, and a
//! minimal vector exists iff the orbit is closed; driving its norm to zero
//! is therefore a constructive closedness certificate, and a certified zero
//! yields a nilsoliton metric on the original algebra by pulling the
//! standard metric back through the accumulated group element.
//!
//! Steps act by group exponentials `(exp(-eta m_q), exp(-eta m_p))`, so
//! every iterate stays exactly on the orbit ray and the isomorphism class
//! never changes. The step is backtracked whenever the moment norm fails to
//! decrease; failure to converge is reported as `Inconclusive`, never as a
//! non-closedness claim.

use serde::{Deserialize, Serialize};

use crate::algebra::TwoStepAlgebra;
use crate::derivations::DerivationBasis;
use crate::error::{Error, Result};
use crate::geometry::{pullback_metric, soliton_defect, SolitonCertificate};
use crate::kernel::expm::expm;
use crate::mat::Mat;
use crate::scalar::Real;
use crate::tuple::SkewTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowStatus {
    ClosedCertified,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct FlowResult<T: Real> {
    /// Unit-norm end point of the flow.
    pub c_final: SkewTuple<T>,
    /// Accumulated unimodular factors: `c_final = scale * (g_acc, h_acc) . c_original`.
    pub g_acc: Mat<T>,
    pub h_acc: Mat<T>,
    pub scale: T,
    /// Accepted steps taken.
    pub iterations: usize,
    /// Moment norm at the start and after each accepted step.
    pub moment_norm_history: Vec<f64>,
    pub status: FlowStatus,
    pub final_moment_norm: f64,
}

impl<T: Real> FlowResult<T> {
    pub fn certified(&self) -> bool {
        self.status == FlowStatus::ClosedCertified
    }
}

/// Flow parameters. `step` is the numerator of the initial step size
/// `eta_0 = step / (1 + |m(C_0)|)`; the stop rule is
/// `|m_q|^2 + |m_p|^2 < tol^2` on the unit-normalized iterate.
#[derive(Debug, Clone, Copy)]
pub struct FlowParams {
    pub step: f64,
    pub max_iter: usize,
    pub tol: f64,
    /// Rank tolerance forwarded to tuple bookkeeping.
    pub rank_tol: f64,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams { step: 0.1, max_iter: 100_000, tol: 1e-10, rank_tol: 1e-10 }
    }
}

/// Moment map of the tuple: traceless symmetric parts of the two quadratic
/// moments, `m_q = sum_a C_a C_a^T - (|C|^2/q) I` and
/// `m_p = G - (|C|^2/p) I` with `G[a][b] = tr(C_a^T C_b)`.
pub fn moment_map<T: Real>(c: &SkewTuple<T>) -> Result<(Mat<T>, Mat<T>)> {
    let (p, q) = (c.p(), c.q());
    let norm_sq = c.norm_sq();
    if norm_sq.is_zero() {
        return Err(Error::ZeroTuple);
    }
    let mut m_q = Mat::<T>::zeros(q, q);
    for m in c.mats() {
        m_q = m_q.add(&m.matmul(&m.transpose()));
    }
    let shift_q = norm_sq / T::from_f64(q as f64);
    for i in 0..q {
        let v = *m_q.at(i, i) - shift_q;
        m_q.set(i, i, v);
    }

    let gram = Mat::from_fn(p, p, |a, b| c.mats()[a].transpose().matmul(&c.mats()[b]).trace());
    let shift_p = norm_sq / T::from_f64(p as f64);
    let mut m_p = gram;
    for i in 0..p {
        let v = *m_p.at(i, i) - shift_p;
        m_p.set(i, i, v);
    }
    Ok((m_q, m_p))
}

/// `sqrt(|m_q|^2 + |m_p|^2)`.
pub fn moment_norm<T: Real>(m_q: &Mat<T>, m_p: &Mat<T>) -> f64 {
    (m_q.frob_sq().approx_f64() + m_p.frob_sq().approx_f64()).sqrt()
}

/// Descends the moment norm over the orbit of the unit-normalized tuple.
pub fn minimal_vector_flow<T: Real>(c0: &SkewTuple<T>, params: FlowParams) -> Result<FlowResult<T>> {
    if !c0.independent() {
        return Err(Error::DependentTuple { rank: c0.flat_rank(), p: c0.p() });
    }
    let (p, q) = (c0.p(), c0.q());
    let norm0 = T::from_f64(c0.norm());
    let mut scale = T::one() / norm0;
    let mut cur = c0.scale(&scale);
    let mut g_acc = Mat::<T>::identity(q);
    let mut h_acc = Mat::<T>::identity(p);

    let (mut m_q, mut m_p) = moment_map(&cur)?;
    let mut phi = moment_norm(&m_q, &m_p);
    let mut history = vec![phi];

    let eta0 = params.step / (1.0 + phi);
    let mut eta = eta0;
    let mut iterations = 0usize;
    let mut accept_streak = 0usize;

    let status = loop {
        if phi < params.tol {
            break FlowStatus::ClosedCertified;
        }
        if iterations >= params.max_iter {
            break FlowStatus::Inconclusive;
        }
        if eta < 1e-17 {
            break FlowStatus::Inconclusive;
        }

        let neg_eta = T::from_f64(-eta);
        let e_g = expm(&m_q.scale(&neg_eta));
        let e_h = expm(&m_p.scale(&neg_eta));
        // exponential factors are invertible; skip the generic checks
        let moved = crate::tuple::group_act_invertible(&e_g, &e_h, &cur);
        let moved_norm = T::from_f64(moved.norm());
        let cand = moved.scale(&(T::one() / moved_norm));
        let (cand_q, cand_p) = moment_map(&cand)?;
        let cand_phi = moment_norm(&cand_q, &cand_p);

        if cand_phi < phi {
            cur = cand;
            g_acc = e_g.matmul(&g_acc);
            h_acc = e_h.matmul(&h_acc);
            scale = scale / moved_norm;
            m_q = cand_q;
            m_p = cand_p;
            phi = cand_phi;
            history.push(phi);
            iterations += 1;
            accept_streak += 1;
            if accept_streak >= 10 {
                eta = (eta * 2.0).min(eta0);
                accept_streak = 0;
            }
        } else {
            eta *= 0.5;
            accept_streak = 0;
        }
    };

    Ok(FlowResult {
        c_final: cur,
        g_acc,
        h_acc,
        scale,
        iterations,
        moment_norm_history: history,
        status,
        final_moment_norm: phi,
    })
}

/// Pulls the flow's minimal vector back to a soliton certificate for the
/// original algebra. Refuses inconclusive flows.
pub fn certify_and_extract<T: Real>(
    c_original: &SkewTuple<T>,
    flow: &FlowResult<T>,
    a: &TwoStepAlgebra<T>,
    der: &DerivationBasis<T>,
    tol: f64,
) -> Result<SolitonCertificate<T>> {
    if !flow.certified() {
        return Err(Error::InconclusiveFlow);
    }
    debug_assert_eq!((c_original.p(), c_original.q()), (flow.c_final.p(), flow.c_final.q()));
    // Fold the scalar normalization into the h factor so that
    // c_final = (g_acc, h_eff) . c_original exactly.
    let h_eff = flow.h_acc.scale(&flow.scale);
    let metric = pullback_metric(&flow.g_acc, &h_eff)?;
    soliton_defect(a, &metric, der, tol)
}
