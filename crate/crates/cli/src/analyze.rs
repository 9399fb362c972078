//! Structural analysis of a tuple file: derivation dimensions and
//! minimality, stabilizers, the correspondence and ideal checks, optionally
//! cross-checked in exact arithmetic.

use nilsoliton_core::algebra::build_algebra;
use nilsoliton_core::derivations::{check_ideal_structure, derivation_algebra};
use nilsoliton_core::io::TupleData;
use nilsoliton_core::stabilizers::{correspondence_from_parts, stabilizer};
use nilsoliton_core::tuple::classify_type;
use nilsoliton_core::Result;

use crate::reports::{AnalyzeReport, ExactDims, IdealSummary};

pub struct AnalyzeConfig {
    pub tol: f64,
    pub exact: bool,
    pub ideal_trials: usize,
    pub ideal_seed: u64,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig { tol: 1e-10, exact: false, ideal_trials: 3, ideal_seed: 1 }
    }
}

pub fn run_analyze(tuple: &TupleData, cfg: &AnalyzeConfig) -> Result<AnalyzeReport> {
    let c = tuple.as_float(cfg.tol)?;
    let (p, q) = (c.p(), c.q());
    let type_class = classify_type(p, q)?;
    let a = build_algebra(&c)?;

    let der = derivation_algebra(&a, cfg.tol)?;
    let stab = stabilizer(&c, cfg.tol)?;
    let correspondence_ok = correspondence_from_parts(&stab, &der, cfg.tol)?;
    let ideal = check_ideal_structure(&a, &der, cfg.ideal_trials, cfg.ideal_seed, 1e-9)?;

    let exact = if cfg.exact {
        let ce = tuple.as_rational()?;
        let ae = build_algebra(&ce)?;
        let der_e = derivation_algebra(&ae, 0.0)?;
        let stab_e = stabilizer(&ce, 0.0)?;
        Some(ExactDims {
            der_dim: der_e.dim(),
            gl_dim: stab_e.gl_dim(),
            sl_dim: stab_e.sl_dim(),
        })
    } else {
        None
    };

    Ok(AnalyzeReport {
        p,
        q,
        exceptional: type_class.exceptional,
        type_reason: type_class.reason,
        tol: cfg.tol,
        der_dim: der.dim(),
        minimal: der.minimal,
        vz_dim: der.vz_part.rank(),
        blockdiag_dim: der.blockdiag_part.rank(),
        split_graded: der.split_graded,
        max_leibniz_residual: der.max_leibniz_residual,
        gl_dim: stab.gl_dim(),
        sl_dim: stab.sl_dim(),
        contains_d_line: stab.contains_d_line,
        correspondence_ok,
        ideal: IdealSummary {
            subalg_ok: ideal.subalg_ok,
            ideal_in_der_ok: ideal.ideal_in_der_ok,
            ideal_in_borel_ok: ideal.ideal_in_borel_ok,
            max_residual: ideal.max_residual,
            trials: cfg.ideal_trials,
        },
        exact,
        generated_unix: None,
    })
}
