//! Finite element spaces and coefficient fields on them.

use std::sync::Arc;

use num_complex::Complex64;

use crate::{Error, Point, Result};

use super::{build_mesh, gauss_rule, reference_basis, BasisFamily, BasisKind, DofKind, DofMap, Mesh, QuadratureRule};

/// Mesh, reference family and dof numbering bundled with the two quadrature
/// rules used throughout: p+2 points per direction for assembly, p+3 for
/// error norms, both exact for every bilinear form integrand that appears.
#[derive(Debug, Clone)]
pub struct Space {
    mesh: Mesh,
    basis: BasisFamily,
    dofs: DofMap,
    quad: QuadratureRule,
    quad_err: QuadratureRule,
}

impl Space {
    /// Builds the space with homogeneous Dirichlet constraints.
    pub fn build(dim: usize, nx: usize, kind: BasisKind) -> Result<Arc<Self>> {
        let mesh = build_mesh(dim, nx)?;
        let basis = reference_basis(kind);
        let dofs = DofMap::new(&mesh, &basis);
        let quad = gauss_rule(dim, basis.degree() + 2)?;
        let quad_err = gauss_rule(dim, basis.degree() + 3)?;
        Ok(Arc::new(Self {
            mesh,
            basis,
            dofs,
            quad,
            quad_err,
        }))
    }

    /// Same layout with every dof free; for interpolating functions with
    /// nonzero boundary values and for tests on the full matrices.
    pub fn build_unconstrained(dim: usize, nx: usize, kind: BasisKind) -> Result<Arc<Self>> {
        let mesh = build_mesh(dim, nx)?;
        let basis = reference_basis(kind);
        let dofs = DofMap::unconstrained(&mesh, &basis);
        let quad = gauss_rule(dim, basis.degree() + 2)?;
        let quad_err = gauss_rule(dim, basis.degree() + 3)?;
        Ok(Arc::new(Self {
            mesh,
            basis,
            dofs,
            quad,
            quad_err,
        }))
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn basis(&self) -> &BasisFamily {
        &self.basis
    }

    pub fn dofs(&self) -> &DofMap {
        &self.dofs
    }

    pub fn quad(&self) -> &QuadratureRule {
        &self.quad
    }

    pub fn quad_err(&self) -> &QuadratureRule {
        &self.quad_err
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }
}

/// Complex coefficient vector over the unconstrained dofs of a space.
/// Constrained dofs carry the boundary value zero.
#[derive(Debug, Clone)]
pub struct DiscreteField {
    space: Arc<Space>,
    coeffs: Vec<Complex64>,
}

impl DiscreteField {
    pub fn zeros(space: &Arc<Space>) -> Self {
        Self {
            space: space.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); space.dofs().n_free()],
        }
    }

    pub fn from_coeffs(space: &Arc<Space>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != space.dofs().n_free() {
            return Err(Error::Config(format!(
                "coefficient vector has length {}, space has {} free dofs",
                coeffs.len(),
                space.dofs().n_free()
            )));
        }
        Ok(Self {
            space: space.clone(),
            coeffs,
        })
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient by full dof index, zero on constrained dofs.
    pub fn full_coeff(&self, full: usize) -> Complex64 {
        match self.space.dofs().free_index(full) {
            Some(i) => self.coeffs[i],
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Point value by exact evaluation of the basis expansion.
    pub fn eval(&self, y: Point) -> Result<Complex64> {
        let space = &self.space;
        let (e, xi) = space.mesh().containing_element(y)?;
        let dim = space.dim();
        let mut v = Complex64::new(0.0, 0.0);
        for (l, &g) in space.dofs().element_dofs(e).iter().enumerate() {
            let c = self.full_coeff(g);
            if c != Complex64::new(0.0, 0.0) {
                v += c * space.basis().shape(dim, l, xi);
            }
        }
        Ok(v)
    }

    /// Physical gradient of the basis expansion.
    pub fn eval_grad(&self, y: Point) -> Result<[Complex64; 2]> {
        let space = &self.space;
        let (e, xi) = space.mesh().containing_element(y)?;
        let dim = space.dim();
        let scale = 1.0 / space.mesh().element_size();
        let mut g = [Complex64::new(0.0, 0.0); 2];
        for (l, &gl) in space.dofs().element_dofs(e).iter().enumerate() {
            let c = self.full_coeff(gl);
            if c != Complex64::new(0.0, 0.0) {
                let dr = space.basis().grad(dim, l, xi);
                g[0] += c * (dr[0] * scale);
                g[1] += c * (dr[1] * scale);
            }
        }
        Ok(g)
    }

    /// ca * a + cb * b over the shared space.
    pub fn lin_comb(ca: f64, a: &Self, cb: f64, b: &Self) -> Self {
        debug_assert!(Arc::ptr_eq(&a.space, &b.space));
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| ca * x + cb * y)
            .collect();
        Self {
            space: a.space.clone(),
            coeffs,
        }
    }
}

/// Point evaluation of a field; exact for every family including Hermite.
pub fn evaluate_field(field: &DiscreteField, y: Point) -> Result<Complex64> {
    field.eval(y)
}

/// Interpolant of a smooth function: value dofs take point values,
/// derivative dofs take scaled derivatives. The `grad` and `mixed` closures
/// are consulted only by Hermite dofs.
pub fn interpolate(
    space: &Arc<Space>,
    value: &dyn Fn(Point) -> Complex64,
    grad: &dyn Fn(Point) -> [Complex64; 2],
    mixed: &dyn Fn(Point) -> Complex64,
) -> DiscreteField {
    let dofs = space.dofs();
    let s = space.mesh().element_size();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); dofs.n_free()];
    for (free, c) in coeffs.iter_mut().enumerate() {
        let info = dofs
            .dof_info(dofs.full_index(free))
            .expect("free dof indices are valid");
        *c = match info.kind {
            DofKind::Value => value(info.node),
            DofKind::DX => s * grad(info.node)[0],
            DofKind::DY => s * grad(info.node)[1],
            DofKind::DXY => s * s * mixed(info.node),
        };
    }
    DiscreteField {
        space: space.clone(),
        coeffs,
    }
}
