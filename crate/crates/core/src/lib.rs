//! Finite element solver for the nonlinear Schrödinger equation
//!
//!   dv/dt - (k'/k) (y . grad v) - (i/k^2) Lap v + |v|^rho v = f
//!
//! posed on the unit cell Omega = (0,1)^n (n = 1, 2) with homogeneous
//! Dirichlet data. The equation is the pullback of a Schrödinger problem on
//! a domain that dilates in time as k(t) Omega; the motion enters only
//! through the scalar coefficients gamma(t) = k(t) k'(t) and 1/k(t)^2.
//!
//! Space is discretized with tensor-product Lagrange (degrees 1 to 3) or
//! cubic Hermite elements on uniform meshes; time with a linearized
//! Crank-Nicolson scheme whose nonlinear term is extrapolated from earlier
//! levels, so each step costs one complex linear solve. The `verification`
//! module drives manufactured-solution convergence studies around the
//! solver.

pub mod assembly;
pub mod discretization;
mod error;
pub mod geometry;
pub mod solver;
pub mod verification;

pub use error::{Error, Result};

/// Spatial point. One-dimensional problems use `y[0]` and keep `y[1] = 0`.
pub type Point = [f64; 2];
