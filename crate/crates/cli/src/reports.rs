//! Stable JSON report schemas.
//!
//! Field order is declaration order and all maps are ordered, so identical
//! runs serialize byte-identically; `generated_unix` is the one
//! non-deterministic field and is only populated by the binary (library
//! callers get `null`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealSummary {
    pub subalg_ok: bool,
    pub ideal_in_der_ok: bool,
    pub ideal_in_borel_ok: Option<bool>,
    pub max_residual: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactDims {
    pub der_dim: usize,
    pub gl_dim: usize,
    pub sl_dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub p: usize,
    pub q: usize,
    pub exceptional: bool,
    pub type_reason: String,
    pub tol: f64,
    pub der_dim: usize,
    pub minimal: bool,
    pub vz_dim: usize,
    pub blockdiag_dim: usize,
    pub split_graded: bool,
    pub max_leibniz_residual: f64,
    pub gl_dim: usize,
    pub sl_dim: usize,
    pub contains_d_line: bool,
    pub correspondence_ok: bool,
    pub ideal: IdealSummary,
    pub exact: Option<ExactDims>,
    pub generated_unix: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowSummary {
    pub status: String,
    pub iterations: usize,
    pub final_moment_norm: f64,
    pub history_len: usize,
    pub history_min: f64,
    /// First and last (up to) 100 entries of the accepted-step history.
    pub history_head: Vec<f64>,
    pub history_tail: Vec<f64>,
    pub det_g: f64,
    pub det_h: f64,
    /// Relative distance between the renormalized `(g,h) . C_original` and
    /// `C_final` (orbit-membership accumulation guard).
    pub reproduction_rel_err: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateReport {
    pub c: f64,
    pub residual: f64,
    pub derivation: Vec<Vec<f64>>,
    pub metric: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowReport {
    pub p: usize,
    pub q: usize,
    pub tol: f64,
    pub flow_tol: f64,
    pub max_iter: usize,
    pub flow: FlowSummary,
    pub certificate: Option<CertificateReport>,
    pub generated_unix: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurveyReport {
    pub p: usize,
    pub q: usize,
    pub exceptional: bool,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub flow_tol: f64,
    pub max_iter: usize,
    pub frac_minimal_der: f64,
    pub frac_closed_certified: f64,
    pub frac_soliton_certified: f64,
    pub der_dim_histogram: BTreeMap<usize, usize>,
    pub mean_flow_iterations: f64,
    pub generated_unix: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleVerdict {
    pub index: usize,
    pub seed: u64,
    pub der_dim: usize,
    pub minimal: bool,
    pub split_graded: bool,
    pub gl_dim: usize,
    pub sl_dim: usize,
    pub contains_d_line: bool,
    pub correspondence_ok: bool,
    pub lemma_ok: bool,
    pub lemma_vacuous: bool,
    pub ideal_subalg_ok: bool,
    pub ideal_in_der_ok: bool,
    pub ideal_in_borel_ok: Option<bool>,
    pub flow_status: String,
    pub flow_iterations: usize,
    pub final_moment_norm: f64,
    pub history_monotone: bool,
    /// `|sum_a C_a C_a^T - (|C|^2/q) I|` at the flow end point.
    pub minimal_vector_defect_q: f64,
    /// `|G - (|C|^2/p) I|` at the flow end point.
    pub minimal_vector_defect_p: f64,
    pub det_g_defect: f64,
    pub det_h_defect: f64,
    pub reproduction_rel_err: f64,
    pub soliton_residual: Option<f64>,
    pub soliton_c: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectedSummary {
    pub der_dim: usize,
    pub minimal: bool,
    pub gl_dim: usize,
    pub sl_dim: usize,
    pub max_final_moment_norm: f64,
    pub max_soliton_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureRecord {
    pub index: usize,
    pub seed: u64,
    pub reasons: Vec<String>,
    /// The offending tuple in the tuple file format, for replay.
    pub tuple: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictReport {
    pub p: usize,
    pub q: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub flow_tol: f64,
    pub max_iter: usize,
    pub ideal_trials: usize,
    pub expected: ExpectedSummary,
    /// Dimension of the ambient block-lower-triangular algebra; the strict
    /// gap `der_dim < borel_dim` on every sample witnesses that the
    /// automorphism-induced group cannot act transitively.
    pub borel_dim: usize,
    pub non_transitivity_witness: bool,
    pub records: Vec<SampleVerdict>,
    pub overall_pass: bool,
    pub failures: Vec<FailureRecord>,
    pub generated_unix: Option<u64>,
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization") + "\n"
}
