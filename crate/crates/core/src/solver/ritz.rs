//! Projection onto the discrete space through the shifted stationary form.
//!
//! P solves (K + i gamma(t) A + lambda0 M) P = b with
//! b_i = (grad u, grad phi_i) + i gamma(t) (y . grad u, phi_i)
//!     + lambda0 (u, phi_i),
//! which characterizes the projection of u with respect to the shifted
//! form at time t. The shift makes the form coercive for every admissible
//! law, so the matrix is nonsingular. With gamma = 0 and lambda0 = 0 this
//! reduces to the classical projection K P = (grad u, grad phi).

use num_complex::Complex64;

use crate::assembly::SystemMatrices;
use crate::discretization::{BasisTable, DiscreteField, Space};
use crate::geometry::Coefficients;
use crate::solver::linear::LinearSolve;
use crate::solver::problem::SchrodingerProblem;
use crate::{Point, Result};

/// Right side of the projection system, integrated with the error rule so
/// data accuracy does not limit the observable orders.
pub fn ritz_rhs(
    space: &Space,
    coeffs: &Coefficients,
    t: f64,
    u: &dyn Fn(Point) -> Complex64,
    grad_u: &dyn Fn(Point) -> [Complex64; 2],
) -> Vec<Complex64> {
    let mesh = space.mesh();
    let dofs = space.dofs();
    let dim = space.dim();
    let quad = space.quad_err();
    let table = BasisTable::new(space.basis(), quad);
    let s = mesh.element_size();
    let jac = s.powi(dim as i32);
    let inv_s = 1.0 / s;
    let gamma = coeffs.gamma(t);
    let lambda0 = coeffs.lambda0();
    let ig = Complex64::new(0.0, gamma);

    let mut out = vec![Complex64::new(0.0, 0.0); dofs.n_free()];
    for e in 0..dofs.n_elements() {
        let origin = mesh.element_origin(e);
        let ed = dofs.element_dofs(e);
        for q in 0..quad.len() {
            let xi = quad.point(q);
            let y: Point = [origin[0] + s * xi[0], origin[1] + s * xi[1]];
            let w = quad.weight(q) * jac;
            let uq = u(y);
            let gq = grad_u(y);
            let ydg = if dim == 2 {
                y[0] * gq[0] + y[1] * gq[1]
            } else {
                y[0] * gq[0]
            };
            for (l, &gd) in ed.iter().enumerate() {
                let Some(i) = dofs.free_index(gd) else {
                    continue;
                };
                let gphi = table.grad(q, l);
                let mut dot = gq[0] * (gphi[0] * inv_s);
                if dim == 2 {
                    dot += gq[1] * (gphi[1] * inv_s);
                }
                let phi = table.shape(q, l);
                out[i] += w * (dot + ig * ydg * phi + lambda0 * uq * phi);
            }
        }
    }
    out
}

pub fn ritz_project(
    space: &std::sync::Arc<Space>,
    matrices: &SystemMatrices,
    coeffs: &Coefficients,
    t: f64,
    u: &dyn Fn(Point) -> Complex64,
    grad_u: &dyn Fn(Point) -> [Complex64; 2],
) -> Result<DiscreteField> {
    let b = ritz_rhs(space, coeffs, t, u, grad_u);
    let solver = LinearSolve::new(matrices.ritz_matrix(t, coeffs))?;
    let x = solver.solve(&b)?;
    DiscreteField::from_coeffs(space, x)
}

/// The march starts from the projection of the initial datum at t = 0,
/// not from its interpolant.
pub fn initial_field(
    space: &std::sync::Arc<Space>,
    matrices: &SystemMatrices,
    problem: &SchrodingerProblem,
) -> Result<DiscreteField> {
    let coeffs = problem.coefficients();
    let v0 = problem.v0().clone();
    let g0 = problem.grad_v0().clone();
    ritz_project(space, matrices, &coeffs, 0.0, &move |y| v0(y), &move |y| {
        g0(y)
    })
}
