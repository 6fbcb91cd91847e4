//! Flag and file configuration, validation, and the resolved run plan.
//!
//! A configuration comes from command line flags, optionally backed by a
//! flat key=value file named with `--config`; flags win on every conflict.
//! Validation collects all violations before reporting so a broken invocation
//! is fixed in one round trip.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Parser;
use mbnls_core::discretization::BasisKind;
use mbnls_core::geometry::BoundaryId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    MmsSweep,
    TemporalCheck,
    Simulate,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mms_sweep" => Ok(Self::MmsSweep),
            "temporal_check" => Ok(Self::TemporalCheck),
            "simulate" => Ok(Self::Simulate),
            other => Err(format!(
                "unknown mode '{other}' (expected mms_sweep, temporal_check or simulate)"
            )),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MmsSweep => write!(f, "mms_sweep"),
            Self::TemporalCheck => write!(f, "temporal_check"),
            Self::Simulate => write!(f, "simulate"),
        }
    }
}

/// Forcing used by a direct simulation. Sweep modes always manufacture the
/// forcing from the built-in exact solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Manufactured,
    Zero,
}

impl FromStr for SourceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "manufactured" => Ok(Self::Manufactured),
            "zero" => Ok(Self::Zero),
            other => Err(format!(
                "unknown source '{other}' (expected manufactured or zero)"
            )),
        }
    }
}

impl fmt::Display for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Manufactured => write!(f, "manufactured"),
            Self::Zero => write!(f, "zero"),
        }
    }
}

/// Raw command line. Every run flag is optional here so a config file can
/// supply it; `load` merges the two and validates the result.
#[derive(Debug, Default, Clone, Parser)]
#[command(
    name = "mbnls",
    about = "Moving-boundary nonlinear Schrodinger solver: convergence sweeps, temporal order checks and direct simulations"
)]
pub struct Cli {
    /// Run mode: mms_sweep, temporal_check or simulate
    #[arg(long)]
    pub mode: Option<String>,

    /// Spatial dimension (1 or 2)
    #[arg(long)]
    pub dim: Option<usize>,

    /// Boundary motion law: b1, b2 or b3
    #[arg(long)]
    pub boundary: Option<String>,

    /// Finite element family: p1, p2, p3 or hermite
    #[arg(long)]
    pub basis: Option<String>,

    /// Power of the |v|^rho v nonlinearity (default 3)
    #[arg(long)]
    pub rho: Option<f64>,

    /// Final time (default 1)
    #[arg(long = "T")]
    pub t_final: Option<f64>,

    /// Cells per direction (temporal_check and simulate)
    #[arg(long)]
    pub nx: Option<usize>,

    /// Mesh refinement list for mms_sweep, e.g. 8,16,32,64,128
    #[arg(long = "nx-list", value_delimiter = ',')]
    pub nx_list: Option<Vec<usize>>,

    /// Time step; fixes the sweep step instead of the tau = h^((p+1)/2) rule
    #[arg(long)]
    pub tau: Option<f64>,

    /// Time step list for temporal_check, e.g. 0.1,0.05,0.025,0.0125
    #[arg(long = "tau-list", value_delimiter = ',')]
    pub tau_list: Option<Vec<f64>>,

    /// Write a snapshot every this many steps (simulate; default N/4)
    #[arg(long = "snap-stride")]
    pub snap_stride: Option<usize>,

    /// Output directory (default "out")
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Forcing for simulate: manufactured or zero
    #[arg(long)]
    pub source: Option<String>,

    /// Flat key=value file supplying defaults for any absent flag
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Pre-validation view of a configuration: the union of flags and file
/// values, still allowed to be incomplete.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct RawConfig {
    pub mode: Option<String>,
    pub dim: Option<usize>,
    pub boundary: Option<String>,
    pub basis: Option<String>,
    pub rho: Option<f64>,
    pub t_final: Option<f64>,
    pub nx: Option<usize>,
    pub nx_list: Option<Vec<usize>>,
    pub tau: Option<f64>,
    pub tau_list: Option<Vec<f64>>,
    pub snap_stride: Option<usize>,
    pub out: Option<PathBuf>,
    pub source: Option<String>,
}

impl RawConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        RawConfig {
            mode: cli.mode.clone(),
            dim: cli.dim,
            boundary: cli.boundary.clone(),
            basis: cli.basis.clone(),
            rho: cli.rho,
            t_final: cli.t_final,
            nx: cli.nx,
            nx_list: cli.nx_list.clone(),
            tau: cli.tau,
            tau_list: cli.tau_list.clone(),
            snap_stride: cli.snap_stride,
            out: cli.out.clone(),
            source: cli.source.clone(),
        }
    }

    /// Parses a flat key=value document. Keys mirror the flag names; `#`
    /// starts a comment and blank lines are skipped. Unknown keys and
    /// unparseable values are reported as violations, not silently dropped.
    pub fn from_document(text: &str, violations: &mut Vec<String>) -> Self {
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = match line.find('#') {
                Some(pos) => &line[..pos],
                None => line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                violations.push(format!(
                    "config line {}: expected key=value, got '{line}'",
                    lineno + 1
                ));
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            let mut bad = |what: &str| {
                violations.push(format!(
                    "config line {}: {key} expects {what}, got '{value}'",
                    lineno + 1
                ))
            };
            match key {
                "mode" => raw.mode = Some(value.to_string()),
                "boundary" => raw.boundary = Some(value.to_string()),
                "basis" => raw.basis = Some(value.to_string()),
                "source" => raw.source = Some(value.to_string()),
                "out" => raw.out = Some(PathBuf::from(value)),
                "dim" => match value.parse() {
                    Ok(v) => raw.dim = Some(v),
                    Err(_) => bad("an integer"),
                },
                "nx" => match value.parse() {
                    Ok(v) => raw.nx = Some(v),
                    Err(_) => bad("an integer"),
                },
                "snap-stride" => match value.parse() {
                    Ok(v) => raw.snap_stride = Some(v),
                    Err(_) => bad("an integer"),
                },
                "rho" => match value.parse() {
                    Ok(v) => raw.rho = Some(v),
                    Err(_) => bad("a number"),
                },
                "T" => match value.parse() {
                    Ok(v) => raw.t_final = Some(v),
                    Err(_) => bad("a number"),
                },
                "tau" => match value.parse() {
                    Ok(v) => raw.tau = Some(v),
                    Err(_) => bad("a number"),
                },
                "nx-list" => match parse_list(value) {
                    Ok(v) => raw.nx_list = Some(v),
                    Err(_) => bad("a comma-separated integer list"),
                },
                "tau-list" => match parse_list(value) {
                    Ok(v) => raw.tau_list = Some(v),
                    Err(_) => bad("a comma-separated number list"),
                },
                other => violations.push(format!("config line {}: unknown key '{other}'", lineno + 1)),
            }
        }
        raw
    }

    /// Fills this configuration's holes from `fallback`; present fields win.
    pub fn or(self, fallback: RawConfig) -> RawConfig {
        RawConfig {
            mode: self.mode.or(fallback.mode),
            dim: self.dim.or(fallback.dim),
            boundary: self.boundary.or(fallback.boundary),
            basis: self.basis.or(fallback.basis),
            rho: self.rho.or(fallback.rho),
            t_final: self.t_final.or(fallback.t_final),
            nx: self.nx.or(fallback.nx),
            nx_list: self.nx_list.or(fallback.nx_list),
            tau: self.tau.or(fallback.tau),
            tau_list: self.tau_list.or(fallback.tau_list),
            snap_stride: self.snap_stride.or(fallback.snap_stride),
            out: self.out.or(fallback.out),
            source: self.source.or(fallback.source),
        }
    }
}

fn parse_list<T: FromStr>(value: &str) -> Result<Vec<T>, ()> {
    value
        .split(',')
        .map(|item| item.trim().parse().map_err(|_| ()))
        .collect()
}

/// A validated run plan. Mode-irrelevant fields are None.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub dim: usize,
    pub boundary: BoundaryId,
    pub basis: BasisKind,
    pub rho: f64,
    pub t_final: f64,
    pub nx: Option<usize>,
    pub nx_list: Option<Vec<usize>>,
    pub tau: Option<f64>,
    pub tau_list: Option<Vec<f64>>,
    pub source: SourceKind,
    pub snap_stride: Option<usize>,
    pub out: PathBuf,
}

impl RunConfig {
    /// The key=value document equivalent to this plan; `resolve` on the
    /// parsed document reproduces the plan exactly.
    pub fn emit(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.to_kv() {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }

    /// Key/value pairs in a fixed order, using flag spellings.
    pub fn to_kv(&self) -> Vec<(String, String)> {
        let mut kv = vec![
            ("mode".to_string(), self.mode.to_string()),
            ("dim".to_string(), self.dim.to_string()),
            ("boundary".to_string(), self.boundary.to_string()),
            ("basis".to_string(), self.basis.to_string()),
            ("rho".to_string(), self.rho.to_string()),
            ("T".to_string(), self.t_final.to_string()),
        ];
        if let Some(nx) = self.nx {
            kv.push(("nx".to_string(), nx.to_string()));
        }
        if let Some(list) = &self.nx_list {
            kv.push(("nx-list".to_string(), join_list(list)));
        }
        if let Some(tau) = self.tau {
            kv.push(("tau".to_string(), tau.to_string()));
        }
        if let Some(list) = &self.tau_list {
            kv.push(("tau-list".to_string(), join_list(list)));
        }
        kv.push(("source".to_string(), self.source.to_string()));
        if let Some(stride) = self.snap_stride {
            kv.push(("snap-stride".to_string(), stride.to_string()));
        }
        kv.push(("out".to_string(), self.out.display().to_string()));
        kv
    }

    /// The same pairs as a map, for the JSON report's config echo.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.to_kv().into_iter().collect()
    }
}

fn join_list<T: fmt::Display>(list: &[T]) -> String {
    list.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Whether `tau` steps [0, T] an integral number of times, to the tolerance
/// the march itself enforces.
fn divides_t(tau: f64, t_final: f64) -> bool {
    if !(tau.is_finite() && tau > 0.0 && tau <= t_final) {
        return false;
    }
    let ratio = t_final / tau;
    (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0)
}

/// Validates and completes a raw configuration. All violations are
/// collected; a plan is produced only when there are none.
pub fn resolve(raw: &RawConfig) -> Result<RunConfig, Vec<String>> {
    let mut violations = Vec::new();

    let mode = match &raw.mode {
        None => {
            violations.push(
                "--mode is required (mms_sweep, temporal_check or simulate)".to_string(),
            );
            None
        }
        Some(text) => match text.parse::<Mode>() {
            Ok(m) => Some(m),
            Err(e) => {
                violations.push(format!("--mode: {e}"));
                None
            }
        },
    };

    let dim = match raw.dim {
        None => {
            violations.push("--dim is required (1 or 2)".to_string());
            None
        }
        Some(d) if d == 1 || d == 2 => Some(d),
        Some(d) => {
            violations.push(format!("--dim must be 1 or 2, got {d}"));
            None
        }
    };

    let boundary = match &raw.boundary {
        None => {
            violations.push("--boundary is required (b1, b2 or b3)".to_string());
            None
        }
        Some(text) => match text.parse::<BoundaryId>() {
            Ok(b) => Some(b),
            Err(e) => {
                violations.push(format!("--boundary: {e}"));
                None
            }
        },
    };

    let basis = match &raw.basis {
        None => {
            violations.push("--basis is required (p1, p2, p3 or hermite)".to_string());
            None
        }
        Some(text) => match text.parse::<BasisKind>() {
            Ok(b) => Some(b),
            Err(e) => {
                violations.push(format!("--basis: {e}"));
                None
            }
        },
    };

    let rho = raw.rho.unwrap_or(3.0);
    if !(rho.is_finite() && rho >= 0.0) {
        violations.push(format!("--rho must be finite and >= 0, got {rho}"));
    }

    let t_final = raw.t_final.unwrap_or(1.0);
    if !(t_final.is_finite() && t_final > 0.0) {
        violations.push(format!("--T must be finite and positive, got {t_final}"));
    }

    let source = match &raw.source {
        None => SourceKind::Manufactured,
        Some(text) => match text.parse::<SourceKind>() {
            Ok(s) => s,
            Err(e) => {
                violations.push(format!("--source: {e}"));
                SourceKind::Manufactured
            }
        },
    };

    if let Some(nx) = raw.nx {
        if nx < 2 {
            violations.push(format!("--nx must be at least 2, got {nx}"));
        }
    }
    if let Some(list) = &raw.nx_list {
        for &nx in list {
            if nx < 2 {
                violations.push(format!("--nx-list entries must be at least 2, got {nx}"));
            }
        }
        if list.len() < 3 {
            violations.push(format!(
                "--nx-list needs at least 3 levels for a fit, got {}",
                list.len()
            ));
        }
        if list.windows(2).any(|w| w[0] >= w[1]) {
            violations.push("--nx-list must be strictly increasing".to_string());
        }
    }
    if let Some(tau) = raw.tau {
        if !divides_t(tau, t_final) && t_final > 0.0 {
            violations.push(format!(
                "--tau must be positive and divide T = {t_final} exactly, got {tau}"
            ));
        }
    }
    if let Some(list) = &raw.tau_list {
        if list.len() < 2 {
            violations.push(format!(
                "--tau-list needs at least 2 steps for a fit, got {}",
                list.len()
            ));
        }
        for &tau in list {
            if !divides_t(tau, t_final) && t_final > 0.0 {
                violations.push(format!(
                    "--tau-list entries must be positive and divide T = {t_final} exactly, got {tau}"
                ));
            }
        }
    }
    if raw.snap_stride == Some(0) {
        violations.push("--snap-stride must be at least 1".to_string());
    }

    // Mode/field pairing. Fields that another mode would consume are
    // rejected, not ignored, so a typo cannot silently change a study.
    let mut nx = None;
    let mut nx_list = None;
    let mut tau = None;
    let mut tau_list = None;
    let mut snap_stride = None;
    match mode {
        Some(Mode::MmsSweep) => {
            if raw.nx.is_some() {
                violations.push("--nx is not used by mms_sweep; pass --nx-list".to_string());
            }
            if raw.tau_list.is_some() {
                violations.push("--tau-list is only used by temporal_check".to_string());
            }
            if raw.snap_stride.is_some() {
                violations.push("--snap-stride is only used by simulate".to_string());
            }
            if source == SourceKind::Zero {
                violations.push(
                    "--source zero has no error reference; mms_sweep requires manufactured"
                        .to_string(),
                );
            }
            nx_list = Some(raw.nx_list.clone().unwrap_or_else(|| {
                if dim == Some(2) {
                    vec![4, 8, 16, 32]
                } else {
                    vec![8, 16, 32, 64, 128]
                }
            }));
            tau = raw.tau;
        }
        Some(Mode::TemporalCheck) => {
            if raw.nx_list.is_some() {
                violations.push("--nx-list is not used by temporal_check; pass --nx".to_string());
            }
            if raw.tau.is_some() {
                violations.push("--tau is not used by temporal_check; pass --tau-list".to_string());
            }
            if raw.snap_stride.is_some() {
                violations.push("--snap-stride is only used by simulate".to_string());
            }
            if source == SourceKind::Zero {
                violations.push(
                    "--source zero has no error reference; temporal_check requires manufactured"
                        .to_string(),
                );
            }
            if raw.nx.is_none() {
                violations.push("--nx is required by temporal_check".to_string());
            }
            nx = raw.nx;
            tau_list = Some(raw.tau_list.clone().unwrap_or_else(|| {
                [10.0, 20.0, 40.0, 80.0].iter().map(|n| t_final / n).collect()
            }));
        }
        Some(Mode::Simulate) => {
            if raw.nx_list.is_some() {
                violations.push("--nx-list is not used by simulate; pass --nx".to_string());
            }
            if raw.tau_list.is_some() {
                violations.push("--tau-list is not used by simulate; pass --tau".to_string());
            }
            if raw.nx.is_none() {
                violations.push("--nx is required by simulate".to_string());
            }
            if raw.tau.is_none() {
                violations.push("--tau is required by simulate".to_string());
            }
            nx = raw.nx;
            tau = raw.tau;
            snap_stride = raw.snap_stride;
        }
        None => {}
    }

    if !violations.is_empty() {
        return Err(violations);
    }
    Ok(RunConfig {
        mode: mode.unwrap(),
        dim: dim.unwrap(),
        boundary: boundary.unwrap(),
        basis: basis.unwrap(),
        rho,
        t_final,
        nx,
        nx_list,
        tau,
        tau_list,
        source,
        snap_stride,
        out: raw.out.clone().unwrap_or_else(|| PathBuf::from("out")),
    })
}

/// Full pipeline: read the config file if named, merge (flags win),
/// validate. File read and parse problems count as violations.
pub fn load(cli: &Cli) -> Result<RunConfig, Vec<String>> {
    let mut violations = Vec::new();
    let from_file = match &cli.config {
        None => RawConfig::default(),
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => RawConfig::from_document(&text, &mut violations),
            Err(e) => {
                violations.push(format!("--config {}: {e}", path.display()));
                RawConfig::default()
            }
        },
    };
    let raw = RawConfig::from_cli(cli).or(from_file);
    match resolve(&raw) {
        Ok(cfg) if violations.is_empty() => Ok(cfg),
        Ok(_) => Err(violations),
        Err(mut more) => {
            violations.append(&mut more);
            Err(violations)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw_sweep() -> RawConfig {
        RawConfig {
            mode: Some("mms_sweep".into()),
            dim: Some(1),
            boundary: Some("b2".into()),
            basis: Some("p1".into()),
            ..RawConfig::default()
        }
    }

    #[test]
    fn sweep_defaults_fill_in() {
        let cfg = resolve(&raw_sweep()).unwrap();
        assert_eq!(cfg.rho, 3.0);
        assert_eq!(cfg.t_final, 1.0);
        assert_eq!(cfg.nx_list.as_deref(), Some(&[8, 16, 32, 64, 128][..]));
        assert_eq!(cfg.source, SourceKind::Manufactured);
        assert_eq!(cfg.out, PathBuf::from("out"));
        assert!(cfg.nx.is_none() && cfg.tau.is_none() && cfg.tau_list.is_none());
    }

    #[test]
    fn two_dimensional_sweep_defaults_to_the_short_list() {
        let mut raw = raw_sweep();
        raw.dim = Some(2);
        let cfg = resolve(&raw).unwrap();
        assert_eq!(cfg.nx_list.as_deref(), Some(&[4, 8, 16, 32][..]));
    }

    #[test]
    fn missing_fields_are_each_named() {
        let errs = resolve(&RawConfig::default()).unwrap_err();
        let text = errs.join("\n");
        for flag in ["--mode", "--dim", "--boundary", "--basis"] {
            assert!(text.contains(flag), "missing {flag} in: {text}");
        }
    }

    #[test]
    fn violations_accumulate_instead_of_short_circuiting() {
        let raw = RawConfig {
            mode: Some("simulate".into()),
            dim: Some(3),
            boundary: Some("b9".into()),
            basis: Some("q1".into()),
            rho: Some(-1.0),
            tau: Some(0.3),
            nx: Some(1),
            ..RawConfig::default()
        };
        let errs = resolve(&raw).unwrap_err();
        assert!(errs.len() >= 6, "expected many violations, got {errs:?}");
    }

    #[test]
    fn mode_field_mismatches_are_rejected() {
        let mut raw = raw_sweep();
        raw.nx = Some(8);
        raw.snap_stride = Some(2);
        let errs = resolve(&raw).unwrap_err();
        assert_eq!(errs.len(), 2);
        assert!(errs[0].contains("--nx "));
        assert!(errs[1].contains("--snap-stride"));
    }

    #[test]
    fn zero_source_needs_simulate() {
        let mut raw = raw_sweep();
        raw.source = Some("zero".into());
        assert!(resolve(&raw).is_err());
        let sim = RawConfig {
            mode: Some("simulate".into()),
            nx: Some(8),
            tau: Some(0.25),
            source: Some("zero".into()),
            ..raw_sweep()
        };
        assert_eq!(resolve(&sim).unwrap().source, SourceKind::Zero);
    }

    #[test]
    fn tau_must_divide_the_horizon() {
        let mut raw = raw_sweep();
        raw.tau = Some(0.3);
        let errs = resolve(&raw).unwrap_err();
        assert!(errs[0].contains("--tau"), "{errs:?}");
        raw.tau = Some(0.2);
        assert!(resolve(&raw).is_ok());
    }

    #[test]
    fn temporal_defaults_scale_with_the_horizon() {
        let raw = RawConfig {
            mode: Some("temporal_check".into()),
            nx: Some(64),
            t_final: Some(2.0),
            basis: Some("hermite".into()),
            ..raw_sweep()
        };
        let cfg = resolve(&raw).unwrap();
        assert_eq!(cfg.tau_list.as_deref(), Some(&[0.2, 0.1, 0.05, 0.025][..]));
    }

    #[test]
    fn document_round_trips_through_emit() {
        for raw in [
            raw_sweep(),
            RawConfig {
                mode: Some("simulate".into()),
                dim: Some(1),
                boundary: Some("b1".into()),
                basis: Some("hermite".into()),
                nx: Some(32),
                tau: Some(0.0025),
                snap_stride: Some(50),
                source: Some("zero".into()),
                out: Some(PathBuf::from("runs/fig4")),
                ..RawConfig::default()
            },
            RawConfig {
                mode: Some("temporal_check".into()),
                dim: Some(1),
                boundary: Some("b2".into()),
                basis: Some("hermite".into()),
                nx: Some(64),
                tau_list: Some(vec![0.1, 0.05, 0.025]),
                rho: Some(2.0),
                ..RawConfig::default()
            },
        ] {
            let cfg = resolve(&raw).unwrap();
            let mut violations = Vec::new();
            let reparsed = RawConfig::from_document(&cfg.emit(), &mut violations);
            assert!(violations.is_empty(), "{violations:?}");
            assert_eq!(resolve(&reparsed).unwrap(), cfg);
        }
    }

    #[test]
    fn document_parser_reports_unknown_keys_and_bad_values() {
        let text = "mode = mms_sweep\nwidth = 7\ndim = one\n# comment\n\nnx-list = 8,x\n";
        let mut violations = Vec::new();
        let raw = RawConfig::from_document(text, &mut violations);
        assert_eq!(raw.mode.as_deref(), Some("mms_sweep"));
        assert_eq!(violations.len(), 3, "{violations:?}");
        assert!(violations[0].contains("unknown key 'width'"));
        assert!(violations[1].contains("dim"));
        assert!(violations[2].contains("nx-list"));
    }

    #[test]
    fn flags_win_over_file_values() {
        let cli = Cli {
            basis: Some("p2".into()),
            ..Cli::default()
        };
        let mut violations = Vec::new();
        let file = RawConfig::from_document(
            "mode = mms_sweep\ndim = 1\nboundary = b2\nbasis = p1\n",
            &mut violations,
        );
        let merged = RawConfig::from_cli(&cli).or(file);
        assert_eq!(resolve(&merged).unwrap().basis, BasisKind::LagrangeP2);
    }
}
