use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use nilsoliton_cli::analyze::{run_analyze, AnalyzeConfig};
use nilsoliton_cli::flow_cmd::run_flow;
use nilsoliton_cli::pipeline::PipelineConfig;
use nilsoliton_cli::reports::to_pretty_json;
use nilsoliton_cli::survey::{run_survey, survey_csv, SurveyConfig};
use nilsoliton_cli::verify::{run_verify, VerifyConfig};
use nilsoliton_cli::{resolve_workers, with_workers};
use nilsoliton_core::tuple::{classify_type, sample_gaussian, sample_rational_lattice};
use nilsoliton_core::{io, Error};

/// Exit codes: 0 success/pass, 1 verification failure or inconclusive flow,
/// 2 input error.
const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "nilsoliton", version, about = "2-step nilpotent Lie algebra toolkit: derivations, stabilizers, moment-map flows and nilsoliton certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dist {
    Gaussian,
    RationalLattice,
}

#[derive(Args, Clone, Copy)]
struct FlowFlags {
    /// Rank tolerance for nullspace and independence decisions.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Moment-norm stopping tolerance of the flow.
    #[arg(long, default_value_t = 1e-10)]
    flow_tol: f64,
    /// Accepted-step cap of the flow.
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    /// Initial step numerator (eta_0 = step / (1 + |m|)).
    #[arg(long, default_value_t = 0.1)]
    step: f64,
}

impl FlowFlags {
    fn apply(&self, cfg: &mut PipelineConfig) {
        cfg.tol = self.tol;
        cfg.flow_tol = self.flow_tol;
        cfg.max_iter = self.max_iter;
        cfg.flow_step = self.step;
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether a type (p,q) is exceptional.
    Classify {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Draw a deterministic random tuple and write it as a tuple file.
    Sample {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Dist::Gaussian)]
        dist: Dist,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Derivations, stabilizers, correspondence and ideal checks of a tuple file.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Re-run the dimension counts in exact rational arithmetic.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 3)]
        ideal_trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the minimal-vector flow on a tuple file.
    Flow {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        flow: FlowFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flow plus soliton certificate on the original algebra.
    Soliton {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        flow: FlowFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded batch over one type: minimality, closedness and soliton fractions.
    Survey {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        flow: FlowFlags,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the one-row CSV summary here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Verify the dimension-9 construction on seeded samples; exits 0 iff every check passes.
    VerifyCounterexample {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Type override as `p,q` (default 4,5).
        #[arg(long = "type", value_parser = parse_type, default_value = "4,5")]
        type_pq: (usize, usize),
        #[command(flatten)]
        flow: FlowFlags,
        #[arg(long, default_value_t = 3)]
        ideal_trials: usize,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_type(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected `p,q`".to_string());
    }
    let p = parts[0].trim().parse::<usize>().map_err(|e| e.to_string())?;
    let q = parts[1].trim().parse::<usize>().map_err(|e| e.to_string())?;
    Ok((p, q))
}

fn now_unix() -> Option<u64> {
    SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
}

fn emit(text: &str, out: &Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::InconclusiveFlow => EXIT_FAIL,
        _ => EXIT_INPUT,
    }
}

fn run() -> Result<u8, (String, u8)> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Classify { p, q } => {
            let t = classify_type(p, q).map_err(|e| (e.to_string(), EXIT_INPUT))?;
            println!("{}", serde_json::to_string_pretty(&t).expect("serialize"));
            Ok(0)
        }
        Cmd::Sample { p, q, seed, dist, out, tol } => {
            let data = match dist {
                Dist::Gaussian => io::TupleData::Float(
                    sample_gaussian::<f64>(p, q, seed, tol).map_err(|e| (e.to_string(), EXIT_INPUT))?,
                ),
                Dist::RationalLattice => io::TupleData::Rational(
                    sample_rational_lattice(p, q, seed).map_err(|e| (e.to_string(), EXIT_INPUT))?,
                ),
            };
            let json = io::tuple_to_json(&data).map_err(|e| (e.to_string(), EXIT_INPUT))?;
            emit(&json, &out).map_err(|e| (e.to_string(), EXIT_INPUT))?;
            Ok(0)
        }
        Cmd::Analyze { input, exact, tol, ideal_trials, out } => {
            let tuple = io::read_tuple(&input, tol).map_err(|e| (e.to_string(), EXIT_INPUT))?;
            let cfg = AnalyzeConfig { tol, exact, ideal_trials, ideal_seed: 1 };
            let mut report = run_analyze(&tuple, &cfg).map_err(|e| (e.to_string(), exit_for(&e)))?;
            report.generated_unix = now_unix();
            emit(&to_pretty_json(&report), &out).map_err(|e| (e.to_string(), EXIT_INPUT))?;
            Ok(0)
        }
        Cmd::Flow { input, flow, out } => flow_command(&input, flow, &out, false),
        Cmd::Soliton { input, flow, out } => flow_command(&input, flow, &out, true),
        Cmd::Survey { p, q, samples, seed, flow, workers, out, csv } => {
            let mut pipeline = PipelineConfig::new(p, q);
            flow.apply(&mut pipeline);
            let cfg = SurveyConfig { pipeline, samples, seed };
            let workers = resolve_workers(workers);
            let mut report = with_workers(workers, || run_survey(&cfg))
                .map_err(|e| (e.to_string(), exit_for(&e)))?;
            report.generated_unix = now_unix();
            emit(&to_pretty_json(&report), &out).map_err(|e| (e.to_string(), EXIT_INPUT))?;
            if let Some(path) = csv {
                std::fs::write(path, survey_csv(&report)).map_err(|e| (e.to_string(), EXIT_INPUT))?;
            }
            Ok(0)
        }
        Cmd::VerifyCounterexample { samples, seed, type_pq, flow, ideal_trials, workers, out } => {
            let mut pipeline = PipelineConfig::new(type_pq.0, type_pq.1);
            flow.apply(&mut pipeline);
            pipeline.ideal_trials = ideal_trials;
            let cfg = VerifyConfig { pipeline, samples, seed };
            let workers = resolve_workers(workers);
            let mut report = with_workers(workers, || run_verify(&cfg))
                .map_err(|e| (e.to_string(), exit_for(&e)))?;
            report.generated_unix = now_unix();
            let pass = report.overall_pass;
            emit(&to_pretty_json(&report), &out).map_err(|e| (e.to_string(), EXIT_INPUT))?;
            Ok(if pass { 0 } else { EXIT_FAIL })
        }
    }
}

fn flow_command(
    input: &PathBuf,
    flow: FlowFlags,
    out: &Option<PathBuf>,
    with_cert: bool,
) -> Result<u8, (String, u8)> {
    let tuple = io::read_tuple(input, flow.tol).map_err(|e| (e.to_string(), EXIT_INPUT))?;
    let mut cfg = PipelineConfig::new(tuple.p(), tuple.q());
    flow.apply(&mut cfg);
    let mut report = run_flow(&tuple, &cfg, with_cert).map_err(|e| (e.to_string(), exit_for(&e)))?;
    report.generated_unix = now_unix();
    let ok = report.flow.status == "closed_certified";
    emit(&to_pretty_json(&report), out).map_err(|e| (e.to_string(), EXIT_INPUT))?;
    Ok(if ok { 0 } else { EXIT_FAIL })
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err((msg, code)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
