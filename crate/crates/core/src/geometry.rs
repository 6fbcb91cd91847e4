//! Reference domain and boundary motion.
//!
//! The computational domain is always the unit cell Omega = (0,1)^n. The
//! physical domain at time t is k(t) Omega for a scalar dilation law k, and
//! the pullback leaves only two time-dependent scalars in the equation:
//! gamma(t) = k(t) k'(t) and 1/k(t)^2. The shift lambda0 that makes the
//! sesquilinear form coercive depends on the law through sup |gamma| and on
//! the cell through d_Omega = sup_{y in Omega} |y|.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::{Error, Result};

/// Number of sample points used when a quantity is pinned by a dense scan
/// of [0, T] (the lambda0 scan and validation sweeps).
const TIME_SCAN_SAMPLES: usize = 10_000;

/// The fixed reference cell (0,1)^dim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    dim: usize,
    d_omega: f64,
}

impl DomainSpec {
    /// Builds the spec for dim in {1, 2}.
    pub fn new(dim: usize) -> Result<Self> {
        let d_omega = match dim {
            1 => 1.0,
            2 => std::f64::consts::SQRT_2,
            _ => {
                return Err(Error::Config(format!(
                    "spatial dimension must be 1 or 2, got {dim}"
                )))
            }
        };
        Ok(Self { dim, d_omega })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// sup_{y in Omega} |y|: 1 on the interval, sqrt(2) on the square.
    pub fn d_omega(&self) -> f64 {
        self.d_omega
    }
}

/// Identifier of a dilation law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryId {
    /// k = 3/4 + cos(4 pi t)/4, oscillating between 1/2 and 1.
    B1,
    /// k = (t+2)/(4t+2), monotonically shrinking toward 1/4.
    B2,
    /// k = (16t+1)/(16t+2), monotonically growing toward 1.
    B3,
    /// User-supplied closures.
    Custom,
}

impl FromStr for BoundaryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "b1" => Ok(Self::B1),
            "b2" => Ok(Self::B2),
            "b3" => Ok(Self::B3),
            other => Err(Error::Config(format!(
                "unknown boundary law '{other}' (expected b1, b2 or b3)"
            ))),
        }
    }
}

impl fmt::Display for BoundaryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::B1 => write!(f, "b1"),
            Self::B2 => write!(f, "b2"),
            Self::B3 => write!(f, "b3"),
            Self::Custom => write!(f, "custom"),
        }
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum LawDef {
    B1,
    B2,
    B3,
    Custom { k: ScalarFn, k_prime: ScalarFn },
}

/// Dilation law k(t) together with its analytic derivative. k must stay
/// bounded away from zero; k0 is a positive lower bound on the horizon the
/// law was built for.
#[derive(Clone)]
pub struct BoundaryLaw {
    id: BoundaryId,
    def: LawDef,
    k0: f64,
}

impl fmt::Debug for BoundaryLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryLaw")
            .field("id", &self.id)
            .field("k0", &self.k0)
            .finish()
    }
}

impl BoundaryLaw {
    /// Wraps user closures. The caller asserts k(t) >= k0 > 0 on the
    /// horizon of use; derivatives are never approximated numerically.
    pub fn custom(
        k: impl Fn(f64) -> f64 + Send + Sync + 'static,
        k_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
        k0: f64,
    ) -> Result<Self> {
        if !(k0 > 0.0) || !k0.is_finite() {
            return Err(Error::Config(format!(
                "custom law needs a positive lower bound k0, got {k0}"
            )));
        }
        Ok(Self {
            id: BoundaryId::Custom,
            def: LawDef::Custom {
                k: Arc::new(k),
                k_prime: Arc::new(k_prime),
            },
            k0,
        })
    }

    pub fn id(&self) -> BoundaryId {
        self.id
    }

    /// Positive lower bound of k on the horizon the law was built for.
    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn k(&self, t: f64) -> f64 {
        match &self.def {
            LawDef::B1 => 0.75 + 0.25 * (4.0 * std::f64::consts::PI * t).cos(),
            LawDef::B2 => (t + 2.0) / (4.0 * t + 2.0),
            LawDef::B3 => (16.0 * t + 1.0) / (16.0 * t + 2.0),
            LawDef::Custom { k, .. } => k(t),
        }
    }

    pub fn k_prime(&self, t: f64) -> f64 {
        match &self.def {
            LawDef::B1 => -std::f64::consts::PI * (4.0 * std::f64::consts::PI * t).sin(),
            LawDef::B2 => {
                let d = 4.0 * t + 2.0;
                -6.0 / (d * d)
            }
            LawDef::B3 => {
                let d = 16.0 * t + 2.0;
                16.0 / (d * d)
            }
            LawDef::Custom { k_prime, .. } => k_prime(t),
        }
    }

    /// gamma(t) = k(t) k'(t), evaluated through the same paths as `k` and
    /// `k_prime` so the identity gamma = k * k' holds bit for bit.
    pub fn gamma(&self, t: f64) -> f64 {
        self.k(t) * self.k_prime(t)
    }
}

/// Builds one of the named laws for a run on [0, t_final]. k0 is the exact
/// minimum of k over that interval (each named law is monotone between the
/// critical points, so the minimum is available in closed form).
pub fn make_boundary(id: BoundaryId, t_final: f64) -> Result<BoundaryLaw> {
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(Error::Config(format!(
            "final time must be positive and finite, got {t_final}"
        )));
    }
    let (def, k0) = match id {
        BoundaryId::B1 => {
            // Decreasing on [0, 1/4]; reaches the global minimum 1/2 there.
            let k0 = if t_final >= 0.25 {
                0.5
            } else {
                0.75 + 0.25 * (4.0 * std::f64::consts::PI * t_final).cos()
            };
            (LawDef::B1, k0)
        }
        BoundaryId::B2 => (LawDef::B2, (t_final + 2.0) / (4.0 * t_final + 2.0)),
        BoundaryId::B3 => (LawDef::B3, 0.5),
        BoundaryId::Custom => {
            return Err(Error::Config(
                "custom laws are built with BoundaryLaw::custom, not make_boundary".into(),
            ))
        }
    };
    Ok(BoundaryLaw { id, def, k0 })
}

/// Coercivity shift lambda0 = (d_Omega * sup_{[0,T]} |gamma|)^2 / 2, with
/// the supremum taken over a dense uniform scan of [0, T].
pub fn lambda0(law: &BoundaryLaw, dom: &DomainSpec, t_final: f64) -> f64 {
    let mut gamma_max = 0.0f64;
    for i in 0..=TIME_SCAN_SAMPLES {
        let t = t_final * (i as f64) / (TIME_SCAN_SAMPLES as f64);
        gamma_max = gamma_max.max(law.gamma(t).abs());
    }
    let g = dom.d_omega() * gamma_max;
    0.5 * g * g
}

/// Time-dependent scalar coefficients of the pulled-back equation, frozen
/// for one run on [0, t_final].
#[derive(Clone)]
pub struct Coefficients {
    law: BoundaryLaw,
    lambda0: f64,
    t_final: f64,
}

impl Coefficients {
    pub fn new(law: &BoundaryLaw, dom: &DomainSpec, t_final: f64) -> Self {
        Self {
            law: law.clone(),
            lambda0: lambda0(law, dom, t_final),
            t_final,
        }
    }

    pub fn law(&self) -> &BoundaryLaw {
        &self.law
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    /// gamma(t) with a domain check on t.
    pub fn gamma_at(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.law.gamma(t))
    }

    /// Unchecked gamma(t), same evaluation path as `gamma_at`.
    pub fn gamma(&self, t: f64) -> f64 {
        self.law.gamma(t)
    }

    /// 1 / k(t)^2.
    pub fn inv_k2(&self, t: f64) -> f64 {
        let k = self.law.k(t);
        1.0 / (k * k)
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !t.is_finite() || t < 0.0 || t > self.t_final {
            return Err(Error::Domain(format!(
                "time {t} outside the run horizon [0, {}]",
                self.t_final
            )));
        }
        Ok(())
    }
}
