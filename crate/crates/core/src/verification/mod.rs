//! Manufactured-solution cases, error functionals, and refinement studies.

mod mms;
mod report;
mod sweep;

pub use mms::{
    builtin_case, builtin_case_for_law, fd_residual, ManufacturedCase, SpaceTimeFn, SpaceTimeGrad,
};
pub use report::{
    attach_slopes, least_squares_slope, pair_slope, RunMeta, RunRecord, RunReport, ERROR_FLOOR,
};
pub use sweep::{
    convergence_sweep, error_max_over_time, temporal_order_check, ErrorSeries, SweepOutcome,
    TauRule,
};
