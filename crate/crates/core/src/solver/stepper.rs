//! One linearized Crank-Nicolson level.
//!
//! Each level solves
//!
//!   [M/tau + (i/(2k^2)) (K + i gamma A)] U = [M/tau - ...] U_prev
//!                                            - G(g_arg) + F(t_mid)
//!
//! with the scalars frozen at the half-time t_mid. The predictor, the
//! corrector and the two-level extrapolated step all share this solve and
//! differ only in where the nonlinearity is evaluated, so they are thin
//! wrappers over `advance`.

use std::sync::Arc;

use crate::assembly::{assemble_matrices, load_vector, nonlinear_vector, SystemMatrices};
use crate::discretization::{DiscreteField, Space};
use crate::geometry::Coefficients;
use crate::solver::linear::LinearSolve;
use crate::solver::problem::SchrodingerProblem;
use crate::{Error, Result};

/// Levels already computed: `u_prev` is U^{m-1} and `u_prev2` is U^{m-2}
/// of the level `m` about to be computed.
#[derive(Debug, Clone)]
pub struct StepperState {
    pub m: usize,
    pub u_prev: DiscreteField,
    pub u_prev2: DiscreteField,
    pub tau: f64,
}

pub struct Stepper {
    space: Arc<Space>,
    matrices: SystemMatrices,
    coeffs: Coefficients,
    problem: SchrodingerProblem,
    tau: f64,
}

impl Stepper {
    pub fn new(space: &Arc<Space>, problem: &SchrodingerProblem, tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::Config(format!(
                "time step must be finite and positive, got {tau}"
            )));
        }
        if space.dim() != problem.domain().dim() {
            return Err(Error::Config(format!(
                "space dimension {} does not match problem dimension {}",
                space.dim(),
                problem.domain().dim()
            )));
        }
        Ok(Stepper {
            space: space.clone(),
            matrices: assemble_matrices(space),
            coeffs: problem.coefficients(),
            problem: problem.clone(),
            tau,
        })
    }

    pub fn matrices(&self) -> &SystemMatrices {
        &self.matrices
    }

    pub fn coeffs(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Core solve shared by all three level kinds; `g_arg` is the field the
    /// nonlinearity is evaluated at.
    pub fn advance(
        &self,
        t_mid: f64,
        u_prev: &DiscreteField,
        g_arg: &DiscreteField,
    ) -> Result<DiscreteField> {
        let lhs = self.matrices.system_matrix(t_mid, self.tau, &self.coeffs);
        let rhs_op = self
            .matrices
            .system_matrix_rhs(t_mid, self.tau, &self.coeffs);
        let mut rhs = rhs_op.matvec(u_prev.coeffs());
        if self.problem.include_nonlinear() {
            let gv = nonlinear_vector(g_arg, self.problem.rho(), self.space.quad());
            for (r, g) in rhs.iter_mut().zip(&gv) {
                *r -= g;
            }
        }
        let fv = load_vector(
            &self.space,
            self.problem.source().as_ref(),
            t_mid,
            self.space.quad(),
        );
        for (r, f) in rhs.iter_mut().zip(&fv) {
            *r += f;
        }
        let x = LinearSolve::new(lhs)?.solve(&rhs)?;
        DiscreteField::from_coeffs(&self.space, x)
    }

    /// First guess for the level at t_1, nonlinearity frozen at U^0.
    pub fn predictor_step(&self, u0: &DiscreteField) -> Result<DiscreteField> {
        self.advance(0.5 * self.tau, u0, u0)
    }

    /// Recomputes the first level with the nonlinearity at the average of
    /// the predictor and U^0.
    pub fn corrector_step(
        &self,
        u0: &DiscreteField,
        u1_pred: &DiscreteField,
    ) -> Result<DiscreteField> {
        let mid = DiscreteField::lin_comb(0.5, u0, 0.5, u1_pred);
        self.advance(0.5 * self.tau, u0, &mid)
    }

    /// Level m >= 2, nonlinearity at the extrapolation
    /// (3 U^{m-1} - U^{m-2}) / 2.
    pub fn cn_step(&self, state: &StepperState) -> Result<DiscreteField> {
        debug_assert!(state.m >= 2);
        let t_mid = (state.m as f64 - 0.5) * self.tau;
        let g_arg = DiscreteField::lin_comb(1.5, &state.u_prev, -0.5, &state.u_prev2);
        self.advance(t_mid, &state.u_prev, &g_arg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::BasisKind;
    use crate::geometry::{make_boundary, BoundaryId, DomainSpec};
    use crate::solver::problem::{ScalarField, SourceFn, VectorField};
    use crate::solver::ritz::initial_field;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sine_problem(rho: f64) -> SchrodingerProblem {
        let dom = DomainSpec::new(1).unwrap();
        let law = make_boundary(BoundaryId::B2, 1.0).unwrap();
        let pi = std::f64::consts::PI;
        let v0: ScalarField = Arc::new(move |y| c(1.0, 1.0) * (pi * y[0]).sin());
        let g0: VectorField =
            Arc::new(move |y| [c(1.0, 1.0) * pi * (pi * y[0]).cos(), c(0.0, 0.0)]);
        let f: SourceFn = Arc::new(|_, _| c(0.0, 0.0));
        SchrodingerProblem::new(dom, law, rho, 1.0, v0, g0, f).unwrap()
    }

    #[test]
    fn step_operators_share_one_pattern() {
        let space = Space::build(1, 8, BasisKind::LagrangeP2).unwrap();
        let problem = sine_problem(3.0);
        let st = Stepper::new(&space, &problem, 0.125).unwrap();
        let a = st.matrices().system_matrix(0.1, 0.125, st.coeffs());
        let b = st.matrices().system_matrix(0.9, 0.125, st.coeffs());
        assert!(Arc::ptr_eq(a.pattern(), b.pattern()));
        assert!(Arc::ptr_eq(a.pattern(), st.matrices().pattern()));
    }

    #[test]
    fn zero_data_stays_zero() {
        let dom = DomainSpec::new(1).unwrap();
        let law = make_boundary(BoundaryId::B1, 1.0).unwrap();
        let v0: ScalarField = Arc::new(|_| c(0.0, 0.0));
        let g0: VectorField = Arc::new(|_| [c(0.0, 0.0); 2]);
        let f: SourceFn = Arc::new(|_, _| c(0.0, 0.0));
        let problem = SchrodingerProblem::new(dom, law, 3.0, 1.0, v0, g0, f).unwrap();
        let space = Space::build(1, 8, BasisKind::HermiteCubic).unwrap();
        let st = Stepper::new(&space, &problem, 0.25).unwrap();
        let u0 = DiscreteField::zeros(&space);
        let pred = st.predictor_step(&u0).unwrap();
        assert!(pred.coeffs().iter().all(|v| v.norm() < 1e-14));
        let u1 = st.corrector_step(&u0, &pred).unwrap();
        assert!(u1.coeffs().iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn corrector_with_predictor_equal_to_u0_matches_predictor() {
        let space = Space::build(1, 8, BasisKind::LagrangeP1).unwrap();
        let problem = sine_problem(3.0);
        let st = Stepper::new(&space, &problem, 0.125).unwrap();
        let u0 = initial_field(&space, st.matrices(), &problem).unwrap();
        let a = st.predictor_step(&u0).unwrap();
        let b = st.corrector_step(&u0, &u0).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn predictor_matches_dense_reference_when_rho_is_zero() {
        // With rho = 0 the nonlinear vector is exactly M U^0, so the whole
        // step can be reproduced with a dense solve on the assembled
        // matrices.
        let space = Space::build(1, 8, BasisKind::LagrangeP2).unwrap();
        let problem = sine_problem(0.0);
        let tau = 0.2;
        let st = Stepper::new(&space, &problem, tau).unwrap();
        let u0 = initial_field(&space, st.matrices(), &problem).unwrap();
        let pred = st.predictor_step(&u0).unwrap();

        let m = st.matrices();
        let t_mid = 0.5 * tau;
        let rhs_op = m.system_matrix_rhs(t_mid, tau, st.coeffs());
        let mass = m.combine(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let mu0 = mass.matvec(u0.coeffs());
        let rhs: Vec<Complex64> = rhs_op
            .matvec(u0.coeffs())
            .iter()
            .zip(&mu0)
            .map(|(a, b)| a - b)
            .collect();

        let lhs = m.system_matrix(t_mid, tau, st.coeffs());
        let n = lhs.n();
        let mut dense = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            for (p, &j) in lhs.pattern().row_range(i).zip(lhs.pattern().row(i)) {
                dense[i * n + j] = lhs.values()[p];
            }
        }
        let mut x = rhs.clone();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&p, &q| dense[p * n + col].norm().total_cmp(&dense[q * n + col].norm()))
                .unwrap();
            for j in 0..n {
                dense.swap(col * n + j, piv * n + j);
            }
            x.swap(col, piv);
            for row in (col + 1)..n {
                let f = dense[row * n + col] / dense[col * n + col];
                for j in col..n {
                    let v = dense[col * n + j];
                    dense[row * n + j] -= f * v;
                }
                let xc = x[col];
                x[row] -= f * xc;
            }
        }
        for row in (0..n).rev() {
            let mut s = x[row];
            for j in (row + 1)..n {
                s -= dense[row * n + j] * x[j];
            }
            x[row] = s / dense[row * n + row];
        }

        let worst = pred
            .coeffs()
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-9, "banded vs dense step mismatch {worst:e}");
    }
}
