//! Data of one initial-boundary-value problem on the unit cell.

use std::sync::Arc;

use num_complex::Complex64;

use crate::geometry::{BoundaryLaw, Coefficients, DomainSpec};
use crate::{Error, Point, Result};

pub type ScalarField = Arc<dyn Fn(Point) -> Complex64 + Send + Sync>;
pub type VectorField = Arc<dyn Fn(Point) -> [Complex64; 2] + Send + Sync>;
pub type SourceFn = Arc<dyn Fn(Point, f64) -> Complex64 + Send + Sync>;

/// Everything the march needs besides the mesh: the pulled-back equation
/// dt v - (k'/k)(y . grad v) - (i/k^2) lap v + |v|^rho v = f with v = 0 on
/// the cell boundary and v(., 0) = v0. The initial gradient is carried
/// explicitly because the initializing projection integrates it.
#[derive(Clone)]
pub struct SchrodingerProblem {
    domain: DomainSpec,
    law: BoundaryLaw,
    rho: f64,
    t_final: f64,
    v0: ScalarField,
    grad_v0: VectorField,
    source: SourceFn,
    include_nonlinear: bool,
}

impl SchrodingerProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        domain: DomainSpec,
        law: BoundaryLaw,
        rho: f64,
        t_final: f64,
        v0: ScalarField,
        grad_v0: VectorField,
        source: SourceFn,
    ) -> Result<Self> {
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(Error::Config(format!(
                "nonlinearity exponent must be finite and >= 0, got {rho}"
            )));
        }
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::Config(format!(
                "final time must be finite and positive, got {t_final}"
            )));
        }
        Ok(SchrodingerProblem {
            domain,
            law,
            rho,
            t_final,
            v0,
            grad_v0,
            source,
            include_nonlinear: true,
        })
    }

    /// Drops the |v|^rho v term entirely, leaving plain Crank-Nicolson for
    /// the linear equation. Used by order checks against linear references.
    pub fn without_nonlinearity(mut self) -> Self {
        self.include_nonlinear = false;
        self
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn law(&self) -> &BoundaryLaw {
        &self.law
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn v0(&self) -> &ScalarField {
        &self.v0
    }

    pub fn grad_v0(&self) -> &VectorField {
        &self.grad_v0
    }

    pub fn source(&self) -> &SourceFn {
        &self.source
    }

    pub fn include_nonlinear(&self) -> bool {
        self.include_nonlinear
    }

    /// Time-dependent scalars (gamma, 1/k^2, lambda0) for this law over
    /// [0, T].
    pub fn coefficients(&self) -> Coefficients {
        Coefficients::new(&self.law, &self.domain, self.t_final)
    }
}

impl std::fmt::Debug for SchrodingerProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SchrodingerProblem")
            .field("domain", &self.domain)
            .field("law", &self.law)
            .field("rho", &self.rho)
            .field("t_final", &self.t_final)
            .field("include_nonlinear", &self.include_nonlinear)
            .finish_non_exhaustive()
    }
}
