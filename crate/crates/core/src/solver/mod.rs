//! Time integration: projection initializer, banded direct solves, and the
//! linearized Crank-Nicolson march.

mod linear;
mod march;
mod problem;
mod ritz;
mod stepper;

pub use linear::{BandedLu, BandedMatrix, LinearSolve};
pub use march::march;
pub use problem::{ScalarField, SchrodingerProblem, SourceFn, VectorField};
pub use ritz::{initial_field, ritz_project, ritz_rhs};
pub use stepper::{Stepper, StepperState};
