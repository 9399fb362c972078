//! Flow and soliton commands on a tuple file.

use nilsoliton_core::algebra::build_algebra;
use nilsoliton_core::derivations::derivation_algebra;
use nilsoliton_core::flow::{certify_and_extract, minimal_vector_flow, FlowResult};
use nilsoliton_core::io::TupleData;
use nilsoliton_core::kernel::dense::det;
use nilsoliton_core::tuple::group_act;
use nilsoliton_core::Result;

use crate::pipeline::{flow_status_str, PipelineConfig};
use crate::reports::{CertificateReport, FlowReport, FlowSummary};

fn truncated(history: &[f64], take: usize) -> (Vec<f64>, Vec<f64>) {
    let head: Vec<f64> = history.iter().take(take).copied().collect();
    let tail: Vec<f64> = if history.len() > take {
        history[history.len().saturating_sub(take)..].to_vec()
    } else {
        Vec::new()
    };
    (head, tail)
}

fn summarize(flow: &FlowResult<f64>, c: &nilsoliton_core::TupleF64, tol: f64) -> Result<FlowSummary> {
    let (head, tail) = truncated(&flow.moment_norm_history, 100);
    let history_min = flow.moment_norm_history.iter().copied().fold(f64::INFINITY, f64::min);
    let moved = group_act(&flow.g_acc, &flow.h_acc, c, tol)?;
    let reproduction_rel_err = moved.scale(&flow.scale).distance(&flow.c_final);
    Ok(FlowSummary {
        status: flow_status_str(flow).to_string(),
        iterations: flow.iterations,
        final_moment_norm: flow.final_moment_norm,
        history_len: flow.moment_norm_history.len(),
        history_min,
        history_head: head,
        history_tail: tail,
        det_g: det(&flow.g_acc),
        det_h: det(&flow.h_acc),
        reproduction_rel_err,
    })
}

fn mat_rows(m: &nilsoliton_core::MatF64) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|r| m.row_slice(r).to_vec()).collect()
}

/// `with_certificate = false` reports the flow alone; `true` additionally
/// extracts the soliton certificate on the original algebra.
pub fn run_flow(tuple: &TupleData, cfg: &PipelineConfig, with_certificate: bool) -> Result<FlowReport> {
    let c = tuple.as_float(cfg.tol)?;
    let flow = minimal_vector_flow(&c, cfg.flow_params())?;
    let summary = summarize(&flow, &c, cfg.tol)?;

    let certificate = if with_certificate && flow.certified() {
        let a = build_algebra(&c)?;
        let der = derivation_algebra(&a, cfg.tol)?;
        let cert = certify_and_extract(&c, &flow, &a, &der, cfg.tol)?;
        Some(CertificateReport {
            c: cert.c,
            residual: cert.residual,
            derivation: mat_rows(&cert.derivation),
            metric: mat_rows(cert.metric.matrix()),
        })
    } else {
        None
    };

    Ok(FlowReport {
        p: c.p(),
        q: c.q(),
        tol: cfg.tol,
        flow_tol: cfg.flow_tol,
        max_iter: cfg.max_iter,
        flow: summary,
        certificate,
        generated_unix: None,
    })
}
