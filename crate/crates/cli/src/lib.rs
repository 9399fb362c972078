//! Library side of the `nilsoliton` CLI: report schemas and the survey /
//! verify / analyze / flow drivers, kept separate from argument parsing so
//! the acceptance suite can drive them programmatically.

pub mod analyze;
pub mod flow_cmd;
pub mod pipeline;
pub mod reports;
pub mod seeds;
pub mod survey;
pub mod verify;

/// Resolve worker-count preference: explicit flag, then the
/// `NILSOLITON_WORKERS` environment variable, then the rayon default.
pub fn resolve_workers(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| {
        std::env::var("NILSOLITON_WORKERS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&n| n > 0)
    })
}

/// Run `f` inside a rayon pool of the requested size (or the global pool).
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
            .install(f),
        None => f(),
    }
}
