//! Driver pieces behind the `mbnls` binary: configuration, run
//! orchestration and artifact writers. Kept in a library so integration
//! tests can drive runs in-process.

pub mod config;
pub mod runner;
pub mod snapshot;

use config::Cli;
use runner::RunFailure;

/// Validates and executes a parsed command line, returning the process
/// exit code: 0 on success, 1 on a runtime failure, 2 on an invalid
/// configuration. Invalid configurations are reported as one JSON document
/// on stderr listing every violation, and no files are touched.
pub fn run_cli(cli: &Cli) -> i32 {
    let cfg = match config::load(cli) {
        Ok(cfg) => cfg,
        Err(violations) => {
            let doc = serde_json::json!({
                "error": "invalid_config",
                "violations": violations,
            });
            eprintln!("{}", serde_json::to_string_pretty(&doc).expect("error document"));
            return 2;
        }
    };
    match runner::run(&cfg) {
        Ok(()) => 0,
        Err(failure) => {
            if let RunFailure::Divergence { .. } = failure {
                log::warn!("see error.json in the output directory");
            }
            eprintln!("{failure}");
            1
        }
    }
}
