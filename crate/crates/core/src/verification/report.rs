//! Records of refinement studies and their slope fits.

use serde::{Deserialize, Serialize};

/// Errors below this are direct-solver noise; they are reported but kept
/// out of slope fits.
pub const ERROR_FLOOR: f64 = 1e-10;

/// One refinement level. `error` is NaN when the run diverged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub nx: usize,
    pub h: f64,
    pub tau: f64,
    pub error: f64,
    pub pair_slope: Option<f64>,
    pub diverged: bool,
}

impl RunRecord {
    /// Whether the record may participate in slope fits.
    pub fn fittable(&self) -> bool {
        !self.diverged && self.error.is_finite() && self.error >= ERROR_FLOOR
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub mode: String,
    pub dim: usize,
    pub boundary: String,
    pub basis: String,
    pub rho: f64,
    pub t_final: f64,
}

/// A finished study: records sorted by decreasing step (h or tau), with
/// per-pair slopes and one least-squares slope in log-log coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub meta: RunMeta,
    pub records: Vec<RunRecord>,
    pub global_slope: Option<f64>,
    pub expected_slope: f64,
}

impl RunReport {
    /// Comma-separated table, one row per record, exponent notation
    /// throughout. The pair-slope field is empty where no slope exists.
    pub fn csv(&self) -> String {
        let mut s = String::from("nx,h,tau,E,pair_slope\n");
        for r in &self.records {
            let slope = r.pair_slope.map(|v| format!("{v:e}")).unwrap_or_default();
            s.push_str(&format!(
                "{},{:e},{:e},{:e},{}\n",
                r.nx, r.h, r.tau, r.error, slope
            ));
        }
        s
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Slope of the segment between two (step, error) samples in log-log
/// coordinates; None when either error is out of fitting range or the
/// steps coincide.
pub fn pair_slope(x0: f64, e0: f64, x1: f64, e1: f64) -> Option<f64> {
    if !(e0.is_finite() && e1.is_finite() && e0 >= ERROR_FLOOR && e1 >= ERROR_FLOOR) {
        return None;
    }
    if x0 <= 0.0 || x1 <= 0.0 || x0 == x1 {
        return None;
    }
    Some((e0 / e1).ln() / (x0 / x1).ln())
}

/// Least-squares slope of ln(error) against ln(step); the caller supplies
/// already-filtered points.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, e) in points {
        let lx = x.ln();
        let le = e.ln();
        sx += lx;
        sy += le;
        sxx += lx * lx;
        sxy += lx * le;
    }
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

/// Fills the per-pair slopes from the given step variable (h or tau) and
/// returns the global fit over the fittable records.
pub fn attach_slopes(records: &mut [RunRecord], steps: &[f64]) -> Option<f64> {
    assert_eq!(records.len(), steps.len());
    for i in 1..records.len() {
        records[i].pair_slope = if records[i - 1].fittable() && records[i].fittable() {
            pair_slope(steps[i - 1], records[i - 1].error, steps[i], records[i].error)
        } else {
            None
        };
    }
    if let Some(first) = records.first_mut() {
        first.pair_slope = None;
    }
    let pts: Vec<(f64, f64)> = records
        .iter()
        .zip(steps)
        .filter(|(r, _)| r.fittable())
        .map(|(r, &x)| (x, r.error))
        .collect();
    least_squares_slope(&pts)
}
