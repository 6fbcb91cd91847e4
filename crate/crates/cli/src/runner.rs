//! Executes a validated run plan and writes its artifacts.
//!
//! Every mode writes `boundary.csv` (the k(t) curve) next to its own
//! outputs: sweeps produce `rates.csv`, `error_series.csv` and
//! `report.json`; simulations produce `snap_t*.csv` plus, when the forcing
//! is manufactured, the same per-step error series.

use std::fs;
use std::io;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;

use mbnls_core::assembly::l2_error;
use mbnls_core::discretization::{reference_basis, Space};
use mbnls_core::geometry::{BoundaryLaw, DomainSpec};
use mbnls_core::solver::{march, SchrodingerProblem};
use mbnls_core::verification::{
    builtin_case, convergence_sweep, temporal_order_check, ErrorSeries, ManufacturedCase,
    RunReport, SweepOutcome, TauRule,
};
use mbnls_core::Error;

use crate::config::{Mode, RunConfig, SourceKind};
use crate::snapshot::write_snapshot;

/// Why a validated run still failed; `main` maps this to the exit code.
#[derive(Debug)]
pub enum RunFailure {
    /// The march aborted. `error.json` is in the output directory and any
    /// artifacts written before the abort are retained.
    Divergence { step: usize, reason: String },
    Other(String),
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunFailure::Divergence { step, reason } => {
                write!(f, "solution diverged at step {step}: {reason}")
            }
            RunFailure::Other(msg) => write!(f, "{msg}"),
        }
    }
}

fn other(e: impl std::fmt::Display) -> RunFailure {
    RunFailure::Other(e.to_string())
}

pub fn run(cfg: &RunConfig) -> Result<(), RunFailure> {
    let started = Instant::now();
    let out = cfg.out.as_path();
    fs::create_dir_all(out)
        .map_err(|e| RunFailure::Other(format!("creating {}: {e}", out.display())))?;
    let case = builtin_case(cfg.dim, cfg.boundary, cfg.rho, cfg.t_final).map_err(other)?;
    write_text(
        &out.join("boundary.csv"),
        &boundary_curve_csv(case.law(), cfg.t_final),
    )?;
    match cfg.mode {
        Mode::MmsSweep => run_sweep(cfg, &case, out, started),
        Mode::TemporalCheck => run_temporal(cfg, &case, out, started),
        Mode::Simulate => run_simulate(cfg, &case, out, started),
    }
}

fn run_sweep(
    cfg: &RunConfig,
    case: &ManufacturedCase,
    out: &Path,
    started: Instant,
) -> Result<(), RunFailure> {
    let rule = match cfg.tau {
        Some(tau) => TauRule::Fixed { tau },
        None => TauRule::coupled_for_degree(reference_basis(cfg.basis).degree()),
    };
    let nx_list = cfg.nx_list.as_deref().expect("validated sweep config");
    let outcome = convergence_sweep(case, cfg.basis, nx_list, &rule).map_err(other)?;
    write_study(cfg, out, &outcome, started)
}

fn run_temporal(
    cfg: &RunConfig,
    case: &ManufacturedCase,
    out: &Path,
    started: Instant,
) -> Result<(), RunFailure> {
    let nx = cfg.nx.expect("validated temporal config");
    let tau_list = cfg.tau_list.as_deref().expect("validated temporal config");
    let outcome = temporal_order_check(case, cfg.basis, nx, tau_list).map_err(other)?;
    write_study(cfg, out, &outcome, started)
}

fn run_simulate(
    cfg: &RunConfig,
    case: &ManufacturedCase,
    out: &Path,
    started: Instant,
) -> Result<(), RunFailure> {
    let nx = cfg.nx.expect("validated simulate config");
    let tau = cfg.tau.expect("validated simulate config");
    let space = Space::build(cfg.dim, nx, cfg.basis).map_err(other)?;
    let problem = match cfg.source {
        SourceKind::Manufactured => case.problem().map_err(other)?,
        SourceKind::Zero => {
            let value = case.clone();
            let grad = case.clone();
            SchrodingerProblem::new(
                DomainSpec::new(cfg.dim).map_err(other)?,
                case.law().clone(),
                cfg.rho,
                cfg.t_final,
                Arc::new(move |y| value.v(y, 0.0)),
                Arc::new(move |y| grad.grad_v(y, 0.0)),
                Arc::new(|_, _| Complex64::new(0.0, 0.0)),
            )
            .map_err(other)?
        }
    };
    let n_steps = (cfg.t_final / tau).round() as usize;
    let stride = cfg.snap_stride.unwrap_or_else(|| (n_steps / 4).max(1));
    let manufactured = cfg.source == SourceKind::Manufactured;

    let mut snapshot_failure: Option<io::Error> = None;
    let mut series = ErrorSeries {
        nx,
        times: Vec::new(),
        errors: Vec::new(),
    };
    let marched = march(&problem, &space, tau, &mut |m, t, u| {
        if manufactured {
            series.times.push(t);
            series.errors.push(l2_error(u, &|y| case.v(y, t), space.quad_err()));
        }
        if (m % stride == 0 || m == n_steps) && snapshot_failure.is_none() {
            if let Err(e) = write_snapshot(u, t, out) {
                snapshot_failure = Some(e);
            }
        }
    });

    // The series collected so far is evidence worth keeping even when the
    // march aborted partway.
    if manufactured && !series.times.is_empty() {
        write_text(
            &out.join("error_series.csv"),
            &error_series_csv(std::slice::from_ref(&series)),
        )?;
    }
    match marched {
        Ok(_) => {}
        Err(Error::Divergence { step, reason }) => {
            let doc = serde_json::json!({
                "error": "divergence",
                "step": step,
                "reason": reason.clone(),
            });
            write_text(&out.join("error.json"), &pretty(&doc))?;
            return Err(RunFailure::Divergence { step, reason });
        }
        Err(e) => return Err(other(e)),
    }
    if let Some(e) = snapshot_failure {
        return Err(RunFailure::Other(format!("writing snapshot: {e}")));
    }

    let max_error = series.errors.iter().cloned().fold(f64::NAN, f64::max);
    let doc = serde_json::json!({
        "config": cfg.to_map(),
        "elapsed_seconds": started.elapsed().as_secs_f64(),
        "steps": n_steps,
        "snapshot_stride": stride,
        "max_l2_error": if manufactured { Some(max_error) } else { None },
    });
    write_text(&out.join("report.json"), &pretty(&doc))
}

fn write_study(
    cfg: &RunConfig,
    out: &Path,
    outcome: &SweepOutcome,
    started: Instant,
) -> Result<(), RunFailure> {
    write_text(&out.join("rates.csv"), &outcome.report.csv())?;
    write_text(
        &out.join("error_series.csv"),
        &error_series_csv(&outcome.series),
    )?;
    write_text(
        &out.join("report.json"),
        &report_json(cfg, &outcome.report, started.elapsed().as_secs_f64()),
    )
}

fn write_text(path: &Path, text: &str) -> Result<(), RunFailure> {
    fs::write(path, text)
        .map_err(|e| RunFailure::Other(format!("writing {}: {e}", path.display())))
}

fn pretty(doc: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON document serialization");
    s.push('\n');
    s
}

fn report_json(cfg: &RunConfig, report: &RunReport, elapsed_seconds: f64) -> String {
    pretty(&serde_json::json!({
        "config": cfg.to_map(),
        "elapsed_seconds": elapsed_seconds,
        "report": report,
    }))
}

fn error_series_csv(series: &[ErrorSeries]) -> String {
    let mut s = String::from("nx,m,t,l2_error\n");
    for sr in series {
        for (m, (&t, &e)) in sr.times.iter().zip(&sr.errors).enumerate() {
            s.push_str(&format!("{},{},{:e},{:e}\n", sr.nx, m, t, e));
        }
    }
    s
}

fn boundary_curve_csv(law: &BoundaryLaw, t_final: f64) -> String {
    let mut s = String::from("t,k\n");
    for j in 0..=400 {
        let t = t_final * j as f64 / 400.0;
        s.push_str(&format!("{:e},{:e}\n", t, law.k(t)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::resolve;
    use crate::config::RawConfig;

    fn base_raw() -> RawConfig {
        RawConfig {
            dim: Some(1),
            boundary: Some("b2".into()),
            basis: Some("p1".into()),
            ..RawConfig::default()
        }
    }

    #[test]
    fn sweep_writes_the_full_artifact_set() {
        let dir = tempfile::tempdir().unwrap();
        let raw = RawConfig {
            mode: Some("mms_sweep".into()),
            nx_list: Some(vec![4, 8, 16]),
            out: Some(dir.path().join("study")),
            ..base_raw()
        };
        let cfg = resolve(&raw).unwrap();
        run(&cfg).unwrap();
        let rates = fs::read_to_string(dir.path().join("study/rates.csv")).unwrap();
        assert!(rates.starts_with("nx,h,tau,E,pair_slope\n"));
        assert_eq!(rates.lines().count(), 4);
        let series = fs::read_to_string(dir.path().join("study/error_series.csv")).unwrap();
        assert!(series.starts_with("nx,m,t,l2_error\n"));
        // tau = h couples the step to the mesh: 4 + 8 + 16 steps plus one
        // initial level each.
        assert_eq!(series.lines().count(), 1 + 5 + 9 + 17);
        let report: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("study/report.json")).unwrap())
                .unwrap();
        assert_eq!(report["config"]["mode"], "mms_sweep");
        assert_eq!(report["report"]["records"].as_array().unwrap().len(), 3);
        let boundary = fs::read_to_string(dir.path().join("study/boundary.csv")).unwrap();
        assert_eq!(boundary.lines().count(), 402);
        assert!(boundary.starts_with("t,k\n"));
    }

    #[test]
    fn zero_source_simulation_writes_first_and_last_snapshots() {
        let dir = tempfile::tempdir().unwrap();
        let raw = RawConfig {
            mode: Some("simulate".into()),
            nx: Some(8),
            tau: Some(0.25),
            source: Some("zero".into()),
            snap_stride: Some(4),
            out: Some(dir.path().join("sim")),
            ..base_raw()
        };
        let cfg = resolve(&raw).unwrap();
        run(&cfg).unwrap();
        assert!(dir.path().join("sim/snap_t0.000000.csv").exists());
        assert!(dir.path().join("sim/snap_t1.000000.csv").exists());
        assert!(!dir.path().join("sim/snap_t0.250000.csv").exists());
        assert!(!dir.path().join("sim/error_series.csv").exists());
        let report: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("sim/report.json")).unwrap())
                .unwrap();
        assert_eq!(report["steps"], 4);
        assert!(report["max_l2_error"].is_null());
    }

    #[test]
    fn manufactured_simulation_records_the_error_series() {
        let dir = tempfile::tempdir().unwrap();
        let raw = RawConfig {
            mode: Some("simulate".into()),
            nx: Some(8),
            tau: Some(0.25),
            out: Some(dir.path().join("sim")),
            ..base_raw()
        };
        let cfg = resolve(&raw).unwrap();
        run(&cfg).unwrap();
        let series = fs::read_to_string(dir.path().join("sim/error_series.csv")).unwrap();
        assert_eq!(series.lines().count(), 6);
        let report: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("sim/report.json")).unwrap())
                .unwrap();
        assert!(report["max_l2_error"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn runaway_forcing_leaves_a_machine_readable_abort_record() {
        let dir = tempfile::tempdir().unwrap();
        let raw = RawConfig {
            mode: Some("simulate".into()),
            nx: Some(8),
            tau: Some(0.25),
            rho: Some(200.0),
            out: Some(dir.path().join("sim")),
            ..base_raw()
        };
        let cfg = resolve(&raw).unwrap();
        let failure = run(&cfg).unwrap_err();
        assert!(matches!(failure, RunFailure::Divergence { .. }));
        let doc: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("sim/error.json")).unwrap())
                .unwrap();
        assert_eq!(doc["error"], "divergence");
        assert!(doc["step"].as_u64().unwrap() >= 1);
        // Artifacts from before the abort stay put.
        assert!(dir.path().join("sim/snap_t0.000000.csv").exists());
        assert!(dir.path().join("sim/boundary.csv").exists());
    }

    #[test]
    fn temporal_mode_reports_against_tau() {
        let dir = tempfile::tempdir().unwrap();
        let raw = RawConfig {
            mode: Some("temporal_check".into()),
            nx: Some(8),
            tau_list: Some(vec![0.25, 0.125]),
            out: Some(dir.path().join("tc")),
            ..base_raw()
        };
        let cfg = resolve(&raw).unwrap();
        run(&cfg).unwrap();
        let rates = fs::read_to_string(dir.path().join("tc/rates.csv")).unwrap();
        assert_eq!(rates.lines().count(), 3);
        let report: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("tc/report.json")).unwrap())
                .unwrap();
        assert_eq!(report["report"]["expected_slope"], 2.0);
    }
}
