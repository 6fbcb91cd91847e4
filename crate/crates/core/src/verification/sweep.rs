//! Refinement sweeps over the manufactured cases.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::assembly::l2_error;
use crate::discretization::{BasisKind, Space};
use crate::solver::march;
use crate::verification::mms::ManufacturedCase;
use crate::verification::report::{attach_slopes, RunMeta, RunRecord, RunReport, ERROR_FLOOR};
use crate::{Error, Result};

/// How the time step follows the mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauRule {
    /// tau tracks h^power, rounded so that an integer number of steps
    /// covers [0, T]: N = ceil(T / h^power), tau = T/N.
    Coupled { power: f64 },
    /// One fixed tau for every mesh; it must divide T.
    Fixed { tau: f64 },
}

impl TauRule {
    /// The coupling tau = h^{(p+1)/2} that balances the scheme's spatial
    /// and temporal orders for polynomial degree p.
    pub fn coupled_for_degree(degree: usize) -> Self {
        TauRule::Coupled {
            power: (degree as f64 + 1.0) / 2.0,
        }
    }

    pub fn resolve(&self, h: f64, t_final: f64) -> f64 {
        match *self {
            TauRule::Coupled { power } => {
                let target = h.powf(power);
                // The 1e-9 guard keeps an exact divisor from rounding up.
                let n = (t_final / target - 1e-9).ceil().max(1.0);
                t_final / n
            }
            TauRule::Fixed { tau } => tau,
        }
    }
}

/// Per-level errors of one run, for the step-by-step output table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorSeries {
    pub nx: usize,
    pub times: Vec<f64>,
    pub errors: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub report: RunReport,
    pub series: Vec<ErrorSeries>,
}

/// max_m ||v(., t_m) - U^m||_{L2} over all levels of one march, plus the
/// full per-level series.
pub fn error_max_over_time(
    case: &ManufacturedCase,
    space: &Arc<Space>,
    tau: f64,
) -> Result<(f64, ErrorSeries)> {
    let problem = case.problem()?;
    let mut series = ErrorSeries {
        nx: space.mesh().nx(),
        times: Vec::new(),
        errors: Vec::new(),
    };
    let mut emax = 0.0f64;
    march(&problem, space, tau, &mut |_, t, u| {
        let e = l2_error(u, &|y| case.v(y, t), space.quad_err());
        series.times.push(t);
        series.errors.push(e);
        emax = emax.max(e);
    })?;
    Ok((emax, series))
}

fn meta_for(case: &ManufacturedCase, kind: BasisKind, mode: &str) -> RunMeta {
    RunMeta {
        mode: mode.to_string(),
        dim: case.dim(),
        boundary: case.law().id().to_string(),
        basis: kind.to_string(),
        rho: case.rho(),
        t_final: case.t_final(),
    }
}

/// Runs the case over a list of meshes with the given tau rule. A diverged
/// level is recorded (error NaN, flagged) and excluded from the fits; the
/// sweep stops early once the error falls below the fitting floor, since
/// finer levels only measure solver noise.
pub fn convergence_sweep(
    case: &ManufacturedCase,
    kind: BasisKind,
    nx_list: &[usize],
    rule: &TauRule,
) -> Result<SweepOutcome> {
    if nx_list.len() < 3 {
        return Err(Error::Config(format!(
            "a convergence sweep needs at least 3 mesh levels, got {}",
            nx_list.len()
        )));
    }
    if nx_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(
            "mesh list must be strictly increasing".into(),
        ));
    }

    let mut records = Vec::new();
    let mut series = Vec::new();
    for &nx in nx_list {
        let space = Space::build(case.dim(), nx, kind)?;
        let h = space.mesh().h();
        let tau = rule.resolve(h, case.t_final());
        match error_max_over_time(case, &space, tau) {
            Ok((e, s)) => {
                records.push(RunRecord {
                    nx,
                    h,
                    tau,
                    error: e,
                    pair_slope: None,
                    diverged: false,
                });
                series.push(s);
                if e < ERROR_FLOOR {
                    break;
                }
            }
            Err(Error::Divergence { step, reason }) => {
                log::warn!("nx = {nx} diverged at step {step}: {reason}");
                records.push(RunRecord {
                    nx,
                    h,
                    tau,
                    error: f64::NAN,
                    pair_slope: None,
                    diverged: true,
                });
            }
            Err(other) => return Err(other),
        }
    }
    let steps: Vec<f64> = records.iter().map(|r| r.h).collect();
    let global = attach_slopes(&mut records, &steps);
    Ok(SweepOutcome {
        report: RunReport {
            meta: meta_for(case, kind, "mms_sweep"),
            records,
            global_slope: global,
            expected_slope: reference_degree(kind) as f64 + 1.0,
        },
        series,
    })
}

/// Holds the mesh fixed and refines tau only; the slope should approach 2
/// once the spatial error is negligible.
pub fn temporal_order_check(
    case: &ManufacturedCase,
    kind: BasisKind,
    nx: usize,
    tau_list: &[f64],
) -> Result<SweepOutcome> {
    if tau_list.len() < 2 {
        return Err(Error::Config(format!(
            "a temporal order check needs at least 2 steps, got {}",
            tau_list.len()
        )));
    }
    if tau_list.iter().any(|&t| !(t.is_finite() && t > 0.0)) {
        return Err(Error::Config("time steps must be finite and positive".into()));
    }
    let mut taus = tau_list.to_vec();
    taus.sort_by(|a, b| b.total_cmp(a));
    taus.dedup();

    let space = Space::build(case.dim(), nx, kind)?;
    let h = space.mesh().h();
    let mut records = Vec::new();
    let mut series = Vec::new();
    for &tau in &taus {
        match error_max_over_time(case, &space, tau) {
            Ok((e, s)) => {
                records.push(RunRecord {
                    nx,
                    h,
                    tau,
                    error: e,
                    pair_slope: None,
                    diverged: false,
                });
                series.push(s);
            }
            Err(Error::Divergence { step, reason }) => {
                log::warn!("tau = {tau} diverged at step {step}: {reason}");
                records.push(RunRecord {
                    nx,
                    h,
                    tau,
                    error: f64::NAN,
                    pair_slope: None,
                    diverged: true,
                });
            }
            Err(other) => return Err(other),
        }
    }
    let steps: Vec<f64> = records.iter().map(|r| r.tau).collect();
    let global = attach_slopes(&mut records, &steps);
    Ok(SweepOutcome {
        report: RunReport {
            meta: meta_for(case, kind, "temporal_check"),
            records,
            global_slope: global,
            expected_slope: 2.0,
        },
        series,
    })
}

fn reference_degree(kind: BasisKind) -> usize {
    crate::discretization::reference_basis(kind).degree()
}
