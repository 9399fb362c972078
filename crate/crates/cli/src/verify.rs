//! Automated verification of the dimension-9 construction: on seeded
//! gaussian samples of the requested type (default `(4,5)`), every
//! mechanizable ingredient must hold on every sample — minimal derivation
//! algebra of dimension `1 + pq`, certified closed orbit with small moment
//! norm, small soliton residual, trivial sl-stabilizer with the gl
//! stabilizer reduced to the diagonal line, the derivation/stabilizer
//! correspondence, and the ideal-in-Borel property whose strict dimension
//! gap witnesses non-transitivity.

use rayon::prelude::*;

use nilsoliton_core::io;
use nilsoliton_core::Result;

use crate::pipeline::{run_sample, sample_for_index, PipelineConfig};
use crate::reports::{ExpectedSummary, FailureRecord, SampleVerdict, VerdictReport};

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub pipeline: PipelineConfig,
    pub samples: usize,
    pub seed: u64,
}

impl VerifyConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        VerifyConfig { pipeline: PipelineConfig::new(4, 5), samples, seed }
    }
}

fn judge(r: &SampleVerdict, expected: &ExpectedSummary) -> Vec<String> {
    let mut reasons = Vec::new();
    if r.der_dim != expected.der_dim {
        reasons.push(format!("der_dim = {} (expected {})", r.der_dim, expected.der_dim));
    }
    if !r.minimal {
        reasons.push("derivation algebra is not minimal".to_string());
    }
    if r.flow_status != "closed_certified" {
        reasons.push(format!("flow status = {}", r.flow_status));
    }
    if !(r.final_moment_norm < expected.max_final_moment_norm) {
        reasons.push(format!(
            "final moment norm {:.3e} >= {:.1e}",
            r.final_moment_norm, expected.max_final_moment_norm
        ));
    }
    match r.soliton_residual {
        Some(res) if res < expected.max_soliton_residual => {}
        Some(res) => reasons.push(format!(
            "soliton residual {:.3e} >= {:.1e}",
            res, expected.max_soliton_residual
        )),
        None => reasons.push("no soliton certificate".to_string()),
    }
    if r.gl_dim != expected.gl_dim || !r.contains_d_line {
        reasons.push(format!(
            "gl stabilizer is not the diagonal line (dim {}, contains_d_line {})",
            r.gl_dim, r.contains_d_line
        ));
    }
    if r.sl_dim != expected.sl_dim {
        reasons.push(format!("sl_dim = {} (expected {})", r.sl_dim, expected.sl_dim));
    }
    if !r.correspondence_ok {
        reasons.push("stabilizer/derivation correspondence failed".to_string());
    }
    if r.lemma_vacuous || !r.lemma_ok {
        reasons.push("closed-orbit stabilizer identity failed".to_string());
    }
    if !r.ideal_subalg_ok || !r.ideal_in_der_ok || r.ideal_in_borel_ok != Some(true) {
        reasons.push("ideal structure checks failed".to_string());
    }
    if !r.history_monotone {
        reasons.push("moment norm history not strictly decreasing".to_string());
    }
    reasons
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerdictReport> {
    let (p, q) = (cfg.pipeline.p, cfg.pipeline.q);
    let expected = ExpectedSummary {
        der_dim: 1 + p * q,
        minimal: true,
        gl_dim: 1,
        sl_dim: 0,
        max_final_moment_norm: cfg.pipeline.moment_threshold,
        max_soliton_residual: cfg.pipeline.residual_threshold,
    };

    let mut records: Vec<SampleVerdict> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| run_sample(&cfg.pipeline, cfg.seed, i))
        .collect::<Result<Vec<_>>>()?;

    let borel_dim = q * q + p * q + p * p;
    let mut failures = Vec::new();
    let mut non_transitivity_witness = true;
    for r in &mut records {
        let reasons = judge(r, &expected);
        r.pass = reasons.is_empty();
        if r.der_dim >= borel_dim {
            non_transitivity_witness = false;
        }
        if !reasons.is_empty() {
            let tuple = sample_for_index(&cfg.pipeline, cfg.seed, r.index)?;
            let tuple_json: serde_json::Value =
                serde_json::from_str(&io::float_tuple_to_json(&tuple)?)?;
            failures.push(FailureRecord { index: r.index, seed: r.seed, reasons, tuple: tuple_json });
        }
    }
    let overall_pass = failures.is_empty() && non_transitivity_witness;

    Ok(VerdictReport {
        p,
        q,
        samples: cfg.samples,
        seed: cfg.seed,
        tol: cfg.pipeline.tol,
        flow_tol: cfg.pipeline.flow_tol,
        max_iter: cfg.pipeline.max_iter,
        ideal_trials: cfg.pipeline.ideal_trials,
        expected,
        borel_dim,
        non_transitivity_witness,
        records,
        overall_pass,
        failures,
        generated_unix: None,
    })
}
