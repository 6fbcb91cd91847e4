//! Full time march: projection of the initial datum, predictor-corrector
//! first level, then the extrapolated Crank-Nicolson levels.

use crate::discretization::{DiscreteField, Space};
use crate::solver::ritz::initial_field;
use crate::solver::stepper::{Stepper, StepperState};
use crate::solver::SchrodingerProblem;
use crate::{Error, Result};
use std::sync::Arc;

/// Growth guard: a level whose mass norm exceeds this multiple of
/// (1 + the initial norm) aborts the march.
const GROWTH_LIMIT: f64 = 1e6;

/// Runs the scheme from t = 0 to t = T = N tau. The observer sees every
/// accepted level, including the initial one: (m, t_m, U^m) for
/// m = 0, ..., N, so it is called N + 1 times. The returned state holds
/// the last two levels.
///
/// tau must divide T to within 1e-9 in the step count.
pub fn march(
    problem: &SchrodingerProblem,
    space: &Arc<Space>,
    tau: f64,
    observer: &mut dyn FnMut(usize, f64, &DiscreteField),
) -> Result<StepperState> {
    let t_final = problem.t_final();
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::Config(format!(
            "time step must be finite and positive, got {tau}"
        )));
    }
    let ratio = t_final / tau;
    let n_steps = ratio.round();
    if n_steps < 1.0 || (ratio - n_steps).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::Config(format!(
            "time step {tau} does not divide the final time {t_final} (T/tau = {ratio})"
        )));
    }
    let n_steps = n_steps as usize;

    let dim = problem.domain().dim();
    let h = space.mesh().h();
    if tau > h.powf(dim as f64 / 4.0) {
        log::warn!(
            "time step {tau:e} exceeds h^(n/4) = {:e}; the scheme's step \
             restriction is not satisfied",
            h.powf(dim as f64 / 4.0)
        );
    }

    let stepper = Stepper::new(space, problem, tau)?;
    let u0 = initial_field(space, stepper.matrices(), problem)?;
    let guard = GROWTH_LIMIT * (1.0 + stepper.matrices().norm_m(u0.coeffs()));
    let check = |m: usize, u: &DiscreteField, stepper: &Stepper| -> Result<()> {
        if u.coeffs().iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Divergence {
                step: m,
                reason: "non-finite coefficient".into(),
            });
        }
        let norm = stepper.matrices().norm_m(u.coeffs());
        if norm > guard {
            return Err(Error::Divergence {
                step: m,
                reason: format!("mass norm {norm:e} exceeds growth guard {guard:e}"),
            });
        }
        Ok(())
    };

    check(0, &u0, &stepper)?;
    observer(0, 0.0, &u0);

    let u1_pred = stepper.predictor_step(&u0)?;
    let u1 = stepper.corrector_step(&u0, &u1_pred)?;
    check(1, &u1, &stepper)?;
    observer(1, tau, &u1);

    let mut state = StepperState {
        m: 2,
        u_prev: u1,
        u_prev2: u0,
        tau,
    };
    while state.m <= n_steps {
        let u = stepper.cn_step(&state)?;
        check(state.m, &u, &stepper)?;
        observer(state.m, state.m as f64 * tau, &u);
        state.u_prev2 = std::mem::replace(&mut state.u_prev, u);
        state.m += 1;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::BasisKind;
    use crate::geometry::{make_boundary, BoundaryId, DomainSpec};
    use crate::solver::problem::{ScalarField, SourceFn, VectorField};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sine_problem(source_scale: f64) -> SchrodingerProblem {
        let dom = DomainSpec::new(1).unwrap();
        let law = make_boundary(BoundaryId::B2, 1.0).unwrap();
        let pi = std::f64::consts::PI;
        let v0: ScalarField = Arc::new(move |y| c(1.0, 1.0) * (pi * y[0]).sin());
        let g0: VectorField =
            Arc::new(move |y| [c(1.0, 1.0) * pi * (pi * y[0]).cos(), c(0.0, 0.0)]);
        let f: SourceFn = Arc::new(move |y, _| c(source_scale, 0.0) * (pi * y[0]).sin());
        SchrodingerProblem::new(dom, law, 3.0, 1.0, v0, g0, f).unwrap()
    }

    #[test]
    fn observer_sees_every_level_once() {
        let space = Space::build(1, 8, BasisKind::LagrangeP1).unwrap();
        let problem = sine_problem(0.0);
        let mut seen = Vec::new();
        let state = march(&problem, &space, 0.125, &mut |m, t, _| seen.push((m, t))).unwrap();
        assert_eq!(seen.len(), 9);
        for (m, (sm, st)) in seen.iter().enumerate() {
            assert_eq!(*sm, m);
            assert!((st - m as f64 * 0.125).abs() < 1e-14);
        }
        assert_eq!(state.m, 9);
        assert!((state.tau - 0.125).abs() == 0.0);
    }

    #[test]
    fn single_step_run_executes_predictor_and_corrector_only() {
        let space = Space::build(1, 8, BasisKind::LagrangeP1).unwrap();
        let problem = sine_problem(0.0);
        let mut count = 0usize;
        let state = march(&problem, &space, 1.0, &mut |_, _, _| count += 1).unwrap();
        assert_eq!(count, 2);
        assert_eq!(state.m, 2);
    }

    #[test]
    fn non_divisor_step_is_rejected() {
        let space = Space::build(1, 8, BasisKind::LagrangeP1).unwrap();
        let problem = sine_problem(0.0);
        let err = march(&problem, &space, 0.3, &mut |_, _, _| {}).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
    }

    #[test]
    fn runaway_source_reports_divergence_step() {
        let space = Space::build(1, 8, BasisKind::LagrangeP1).unwrap();
        let problem = sine_problem(1e12);
        let err = march(&problem, &space, 0.25, &mut |_, _, _| {}).unwrap_err();
        match err {
            Error::Divergence { step, .. } => assert_eq!(step, 1),
            other => panic!("expected divergence, got {other}"),
        }
    }

    #[test]
    fn zero_problem_marches_to_zero() {
        let dom = DomainSpec::new(2).unwrap();
        let law = make_boundary(BoundaryId::B3, 1.0).unwrap();
        let v0: ScalarField = Arc::new(|_| c(0.0, 0.0));
        let g0: VectorField = Arc::new(|_| [c(0.0, 0.0); 2]);
        let f: SourceFn = Arc::new(|_, _| c(0.0, 0.0));
        let problem = SchrodingerProblem::new(dom, law, 3.0, 1.0, v0, g0, f).unwrap();
        let space = Space::build(2, 3, BasisKind::LagrangeP1).unwrap();
        let state = march(&problem, &space, 0.25, &mut |_, _, u| {
            assert!(u.coeffs().iter().all(|v| v.norm() < 1e-12));
        })
        .unwrap();
        assert!(state.u_prev.coeffs().iter().all(|v| v.norm() < 1e-12));
    }
}
