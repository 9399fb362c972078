//! The per-sample pipeline shared by `survey` and `verify-counterexample`:
//! sample a gaussian tuple, compute derivations and stabilizers, run the
//! minimal-vector flow, and extract the soliton certificate with all the
//! cross-checks recorded.

use nilsoliton_core::algebra::build_algebra;
use nilsoliton_core::derivations::{check_ideal_structure, derivation_algebra};
use nilsoliton_core::flow::{certify_and_extract, minimal_vector_flow, FlowParams, FlowResult};
use nilsoliton_core::kernel::dense::det;
use nilsoliton_core::mat::Mat;
use nilsoliton_core::stabilizers::{correspondence_from_parts, lemma_from_stab, stabilizer};
use nilsoliton_core::tuple::{group_act, sample_gaussian};
use nilsoliton_core::{Result, TupleF64};

use crate::reports::SampleVerdict;
use crate::seeds::sample_seed;

#[derive(Debug, Clone, Copy)]
pub struct PipelineConfig {
    pub p: usize,
    pub q: usize,
    pub tol: f64,
    pub flow_step: f64,
    pub flow_tol: f64,
    pub max_iter: usize,
    pub ideal_trials: usize,
    /// Certified flows must end below this moment norm.
    pub moment_threshold: f64,
    /// Certificates must fit below this relative residual.
    pub residual_threshold: f64,
}

impl PipelineConfig {
    pub fn new(p: usize, q: usize) -> Self {
        PipelineConfig {
            p,
            q,
            tol: 1e-10,
            flow_step: 0.1,
            flow_tol: 1e-10,
            max_iter: 100_000,
            ideal_trials: 3,
            moment_threshold: 1e-8,
            residual_threshold: 1e-6,
        }
    }

    pub fn flow_params(&self) -> FlowParams {
        FlowParams {
            step: self.flow_step,
            max_iter: self.max_iter,
            tol: self.flow_tol,
            rank_tol: self.tol,
        }
    }
}

pub fn flow_status_str(f: &FlowResult<f64>) -> &'static str {
    if f.certified() {
        "closed_certified"
    } else {
        "inconclusive"
    }
}

/// History must decrease strictly at every accepted step.
pub fn history_monotone(history: &[f64]) -> bool {
    history.windows(2).all(|w| w[1] < w[0])
}

/// Frobenius defects of the two closed-form minimal-vector identities at a
/// flow end point.
pub fn minimal_vector_defects(c: &TupleF64) -> (f64, f64) {
    let (p, q) = (c.p(), c.q());
    let norm_sq = c.norm_sq();
    let mut ss = Mat::<f64>::zeros(q, q);
    for m in c.mats() {
        ss = ss.add(&m.matmul(&m.transpose()));
    }
    let dq = ss.sub(&Mat::identity(q).scale(&(norm_sq / q as f64))).frob();
    let gram = Mat::from_fn(p, p, |a, b| c.mats()[a].transpose().matmul(&c.mats()[b]).trace());
    let dp = gram.sub(&Mat::identity(p).scale(&(norm_sq / p as f64))).frob();
    (dq, dp)
}

/// The tuple a sample index denotes; exposed so failures can be serialized
/// for replay.
pub fn sample_for_index(cfg: &PipelineConfig, base_seed: u64, index: usize) -> Result<TupleF64> {
    sample_gaussian::<f64>(cfg.p, cfg.q, sample_seed(base_seed, index as u64), cfg.tol)
}

/// Runs the whole pipeline on one sample. The `pass` field is left `false`;
/// callers decide what passing means for their run.
pub fn run_sample(cfg: &PipelineConfig, base_seed: u64, index: usize) -> Result<SampleVerdict> {
    let seed = sample_seed(base_seed, index as u64);
    let c = sample_gaussian::<f64>(cfg.p, cfg.q, seed, cfg.tol)?;
    let a = build_algebra(&c)?;

    let der = derivation_algebra(&a, cfg.tol)?;
    let stab = stabilizer(&c, cfg.tol)?;
    let correspondence_ok = correspondence_from_parts(&stab, &der, cfg.tol)?;
    let ideal = check_ideal_structure(&a, &der, cfg.ideal_trials, seed ^ 0xA5A5_A5A5, 1e-9)?;

    let flow = minimal_vector_flow(&c, cfg.flow_params())?;
    let lemma = lemma_from_stab(&stab, flow.certified(), cfg.tol)?;

    let (defect_q, defect_p) = minimal_vector_defects(&flow.c_final);
    let det_g_defect = (det(&flow.g_acc) - 1.0).abs();
    let det_h_defect = (det(&flow.h_acc) - 1.0).abs();
    let reproduction_rel_err = {
        let moved = group_act(&flow.g_acc, &flow.h_acc, &c, cfg.tol)?;
        let rebuilt = moved.scale(&flow.scale);
        rebuilt.distance(&flow.c_final)
    };

    let (soliton_residual, soliton_c) = if flow.certified() {
        let cert = certify_and_extract(&c, &flow, &a, &der, cfg.tol)?;
        (Some(cert.residual), Some(cert.c))
    } else {
        (None, None)
    };

    Ok(SampleVerdict {
        index,
        seed,
        der_dim: der.dim(),
        minimal: der.minimal,
        split_graded: der.split_graded,
        gl_dim: stab.gl_dim(),
        sl_dim: stab.sl_dim(),
        contains_d_line: stab.contains_d_line,
        correspondence_ok,
        lemma_ok: lemma.holds,
        lemma_vacuous: lemma.vacuous,
        ideal_subalg_ok: ideal.subalg_ok,
        ideal_in_der_ok: ideal.ideal_in_der_ok,
        ideal_in_borel_ok: ideal.ideal_in_borel_ok,
        flow_status: flow_status_str(&flow).to_string(),
        flow_iterations: flow.iterations,
        final_moment_norm: flow.final_moment_norm,
        history_monotone: history_monotone(&flow.moment_norm_history),
        minimal_vector_defect_q: defect_q,
        minimal_vector_defect_p: defect_p,
        det_g_defect,
        det_h_defect,
        reproduction_rel_err,
        soliton_residual,
        soliton_c,
        pass: false,
    })
}
