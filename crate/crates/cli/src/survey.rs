//! Genericity surveys: run the sample pipeline over many seeds of one type
//! and aggregate minimality, closedness and soliton fractions.

use std::collections::BTreeMap;

use rayon::prelude::*;

use nilsoliton_core::tuple::classify_type;
use nilsoliton_core::Result;

use crate::pipeline::{run_sample, PipelineConfig};
use crate::reports::{SampleVerdict, SurveyReport};

#[derive(Debug, Clone, Copy)]
pub struct SurveyConfig {
    pub pipeline: PipelineConfig,
    pub samples: usize,
    pub seed: u64,
}

/// Runs the samples (parallel over the ambient rayon pool) and folds the
/// aggregate in index order, so the report is independent of worker count.
pub fn run_survey(cfg: &SurveyConfig) -> Result<SurveyReport> {
    let type_class = classify_type(cfg.pipeline.p, cfg.pipeline.q)?;
    let records: Vec<SampleVerdict> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| run_sample(&cfg.pipeline, cfg.seed, i))
        .collect::<Result<Vec<_>>>()?;

    let n = cfg.samples.max(1) as f64;
    let mut histogram = BTreeMap::new();
    let mut minimal = 0usize;
    let mut certified = 0usize;
    let mut soliton = 0usize;
    let mut iter_sum = 0usize;
    for r in &records {
        *histogram.entry(r.der_dim).or_insert(0usize) += 1;
        if r.minimal {
            minimal += 1;
        }
        if r.flow_status == "closed_certified" {
            certified += 1;
        }
        if r.soliton_residual.is_some_and(|res| res < cfg.pipeline.residual_threshold) {
            soliton += 1;
        }
        iter_sum += r.flow_iterations;
    }

    Ok(SurveyReport {
        p: cfg.pipeline.p,
        q: cfg.pipeline.q,
        exceptional: type_class.exceptional,
        samples: cfg.samples,
        seed: cfg.seed,
        tol: cfg.pipeline.tol,
        flow_tol: cfg.pipeline.flow_tol,
        max_iter: cfg.pipeline.max_iter,
        frac_minimal_der: minimal as f64 / n,
        frac_closed_certified: certified as f64 / n,
        frac_soliton_certified: soliton as f64 / n,
        der_dim_histogram: histogram,
        mean_flow_iterations: iter_sum as f64 / n,
        generated_unix: None,
    })
}

pub const CSV_SCHEMA_VERSION: u32 = 1;

/// One CSV row per survey; the histogram is packed as `dim:count`
/// pairs joined with `;`.
pub fn survey_csv(report: &SurveyReport) -> String {
    let header = "schema_version,p,q,exceptional,samples,seed,frac_minimal_der,\
                  frac_closed_certified,frac_soliton_certified,mean_flow_iterations,\
                  der_dim_histogram";
    let histogram = report
        .der_dim_histogram
        .iter()
        .map(|(k, v)| format!("{k}:{v}"))
        .collect::<Vec<_>>()
        .join(";");
    format!(
        "{header}\n{},{},{},{},{},{},{},{},{},{},{}\n",
        CSV_SCHEMA_VERSION,
        report.p,
        report.q,
        report.exceptional,
        report.samples,
        report.seed,
        report.frac_minimal_der,
        report.frac_closed_certified,
        report.frac_soliton_certified,
        report.mean_flow_iterations,
        histogram
    )
}
