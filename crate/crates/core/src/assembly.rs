//! Assembly of the time-independent matrices and of the per-step vectors.
//!
//! The weak form of the pulled-back equation only ever needs three real
//! matrices over the unconstrained dofs,
//!
//!   M_ij = (phi_j, phi_i),   K_ij = (grad phi_j, grad phi_i),
//!   A_ij = (y . grad phi_j, phi_i),
//!
//! assembled once per mesh; every time level enters through scalar
//! multiples of them. The advection block satisfies A + A^T = -n M because
//! the basis functions vanish on the cell boundary, which the quadrature
//! reproduces exactly (it integrates every product of shape functions
//! without error). Assembly visits elements in a fixed order and sums in a
//! fixed order, so repeated runs are bit-identical.

use std::sync::Arc;

use num_complex::Complex64;

use crate::discretization::{BasisTable, DiscreteField, QuadratureRule, Space};
use crate::geometry::Coefficients;
use crate::{Error, Point, Result};

/// Shared CSR sparsity over the unconstrained dofs, column indices sorted
/// within each row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePattern {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
}

impl SparsePattern {
    /// Builds a pattern from raw CSR arrays. Each row's column indices must
    /// be strictly increasing and in range.
    pub fn new(n: usize, indptr: Vec<usize>, indices: Vec<usize>) -> Result<Self> {
        if indptr.len() != n + 1 || indptr[0] != 0 || *indptr.last().unwrap() != indices.len() {
            return Err(Error::Config("malformed CSR index pointers".into()));
        }
        for i in 0..n {
            if indptr[i] > indptr[i + 1] {
                return Err(Error::Config("CSR index pointers must be monotone".into()));
            }
            let row = &indices[indptr[i]..indptr[i + 1]];
            if row.iter().any(|&j| j >= n) || row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config(format!(
                    "CSR row {i} has out-of-range or unsorted columns"
                )));
            }
        }
        Ok(SparsePattern { n, indptr, indices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.indices[self.indptr[i]..self.indptr[i + 1]]
    }

    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.indptr[i]..self.indptr[i + 1]
    }

    /// Storage position of entry (i, j), if present.
    pub fn find(&self, i: usize, j: usize) -> Option<usize> {
        let base = self.indptr[i];
        self.row(i).binary_search(&j).ok().map(|k| base + k)
    }
}

/// The three assembled matrices on one space.
#[derive(Debug, Clone)]
pub struct SystemMatrices {
    pattern: Arc<SparsePattern>,
    mass: Vec<f64>,
    stiffness: Vec<f64>,
    advection: Vec<f64>,
}

/// Assembles M, K and A over the unconstrained dofs of the space with its
/// assembly quadrature rule.
pub fn assemble_matrices(space: &Space) -> SystemMatrices {
    let mesh = space.mesh();
    let basis = space.basis();
    let dofs = space.dofs();
    let quad = space.quad();
    let dim = space.dim();
    let nd = basis.dofs_per_element(dim);
    let n = dofs.n_free();

    // Pattern: union of element couplings per row.
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in 0..dofs.n_elements() {
        let ed = dofs.element_dofs(e);
        for &ga in ed {
            if let Some(i) = dofs.free_index(ga) {
                for &gb in ed {
                    if let Some(j) = dofs.free_index(gb) {
                        cols[i].push(j);
                    }
                }
            }
        }
    }
    let mut indptr = Vec::with_capacity(n + 1);
    let mut indices = Vec::new();
    indptr.push(0);
    for row in &mut cols {
        row.sort_unstable();
        row.dedup();
        indices.extend_from_slice(row);
        indptr.push(indices.len());
    }
    let pattern = Arc::new(SparsePattern { n, indptr, indices });

    let nnz = pattern.nnz();
    let mut mass = vec![0.0; nnz];
    let mut stiffness = vec![0.0; nnz];
    let mut advection = vec![0.0; nnz];

    let table = BasisTable::new(basis, quad);
    let s = mesh.element_size();
    let jac = s.powi(dim as i32);
    let inv_s = 1.0 / s;

    let mut m_loc = vec![0.0; nd * nd];
    let mut k_loc = vec![0.0; nd * nd];
    let mut a_loc = vec![0.0; nd * nd];
    for e in 0..dofs.n_elements() {
        m_loc.iter_mut().for_each(|v| *v = 0.0);
        k_loc.iter_mut().for_each(|v| *v = 0.0);
        a_loc.iter_mut().for_each(|v| *v = 0.0);
        let origin = mesh.element_origin(e);
        for q in 0..quad.len() {
            let w = quad.weight(q) * jac;
            let xi = quad.point(q);
            let y: Point = [origin[0] + s * xi[0], origin[1] + s * xi[1]];
            for a in 0..nd {
                let na = table.shape(q, a);
                let ga = table.grad(q, a);
                for b in 0..nd {
                    let nb = table.shape(q, b);
                    let gb = table.grad(q, b);
                    m_loc[a * nd + b] += w * na * nb;
                    let mut kk = ga[0] * gb[0];
                    let mut adv = y[0] * gb[0];
                    if dim == 2 {
                        kk += ga[1] * gb[1];
                        adv += y[1] * gb[1];
                    }
                    k_loc[a * nd + b] += w * kk * inv_s * inv_s;
                    a_loc[a * nd + b] += w * na * adv * inv_s;
                }
            }
        }
        let ed = dofs.element_dofs(e);
        for (la, &ga) in ed.iter().enumerate() {
            let Some(i) = dofs.free_index(ga) else {
                continue;
            };
            for (lb, &gb) in ed.iter().enumerate() {
                let Some(j) = dofs.free_index(gb) else {
                    continue;
                };
                let pos = pattern
                    .find(i, j)
                    .expect("element couplings are in the pattern");
                mass[pos] += m_loc[la * nd + lb];
                stiffness[pos] += k_loc[la * nd + lb];
                advection[pos] += a_loc[la * nd + lb];
            }
        }
    }

    SystemMatrices {
        pattern,
        mass,
        stiffness,
        advection,
    }
}

impl SystemMatrices {
    pub fn n(&self) -> usize {
        self.pattern.n()
    }

    pub fn pattern(&self) -> &Arc<SparsePattern> {
        &self.pattern
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn stiffness(&self) -> &[f64] {
        &self.stiffness
    }

    pub fn advection(&self) -> &[f64] {
        &self.advection
    }

    /// cm * M + ck * K + ca * A with complex scalars, on the shared pattern.
    pub fn combine(&self, cm: Complex64, ck: Complex64, ca: Complex64) -> ComplexCsr {
        let values = self
            .mass
            .iter()
            .zip(&self.stiffness)
            .zip(&self.advection)
            .map(|((&m, &k), &a)| cm * m + ck * k + ca * a)
            .collect();
        ComplexCsr {
            pattern: self.pattern.clone(),
            values,
        }
    }

    /// Left-hand operator of one Crank-Nicolson step at time t:
    /// M/tau + (i / (2 k(t)^2)) (K + i gamma(t) A).
    pub fn system_matrix(&self, t: f64, tau: f64, coeffs: &Coefficients) -> ComplexCsr {
        let inv2 = 0.5 * coeffs.inv_k2(t);
        self.combine(
            Complex64::new(1.0 / tau, 0.0),
            Complex64::new(0.0, inv2),
            Complex64::new(-coeffs.gamma(t) * inv2, 0.0),
        )
    }

    /// Companion operator applied to the previous level:
    /// M/tau - (i / (2 k(t)^2)) (K + i gamma(t) A).
    pub fn system_matrix_rhs(&self, t: f64, tau: f64, coeffs: &Coefficients) -> ComplexCsr {
        let inv2 = 0.5 * coeffs.inv_k2(t);
        self.combine(
            Complex64::new(1.0 / tau, 0.0),
            Complex64::new(0.0, -inv2),
            Complex64::new(coeffs.gamma(t) * inv2, 0.0),
        )
    }

    /// Shifted stationary operator K + i gamma(t) A + lambda0 M used by the
    /// projection that seeds the march.
    pub fn ritz_matrix(&self, t: f64, coeffs: &Coefficients) -> ComplexCsr {
        self.combine(
            Complex64::new(coeffs.lambda0(), 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, coeffs.gamma(t)),
        )
    }

    /// u^H V u for one of the real value sets.
    fn quadratic(&self, values: &[f64], u: &[Complex64]) -> Complex64 {
        debug_assert_eq!(u.len(), self.n());
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.n() {
            let mut row = Complex64::new(0.0, 0.0);
            for (p, &j) in self.pattern.row_range(i).zip(self.pattern.row(i)) {
                row += values[p] * u[j];
            }
            acc += u[i].conj() * row;
        }
        acc
    }

    pub fn mass_quadratic(&self, u: &[Complex64]) -> f64 {
        self.quadratic(&self.mass, u).re
    }

    pub fn stiffness_quadratic(&self, u: &[Complex64]) -> f64 {
        self.quadratic(&self.stiffness, u).re
    }

    pub fn advection_quadratic(&self, u: &[Complex64]) -> Complex64 {
        self.quadratic(&self.advection, u)
    }

    /// Mass norm sqrt(u^H M u); this is the L2 norm of the expanded field.
    pub fn norm_m(&self, u: &[Complex64]) -> f64 {
        self.mass_quadratic(u).max(0.0).sqrt()
    }
}

/// Complex matrix on a shared CSR pattern.
#[derive(Debug, Clone)]
pub struct ComplexCsr {
    pattern: Arc<SparsePattern>,
    values: Vec<Complex64>,
}

impl ComplexCsr {
    pub fn from_parts(pattern: Arc<SparsePattern>, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), pattern.nnz());
        ComplexCsr { pattern, values }
    }

    pub fn n(&self) -> usize {
        self.pattern.n()
    }

    pub fn pattern(&self) -> &Arc<SparsePattern> {
        &self.pattern
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.n());
        let mut y = vec![Complex64::new(0.0, 0.0); self.n()];
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, &j) in self.pattern.row_range(i).zip(self.pattern.row(i)) {
                acc += self.values[p] * x[j];
            }
            *yi = acc;
        }
        y
    }

    pub fn frobenius(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Pointwise nonlinearity g(z) = |z|^rho z.
pub fn g(z: Complex64, rho: f64) -> Complex64 {
    if rho == 0.0 {
        // |z|^0 z = z, also at the origin.
        return z;
    }
    z.norm().powf(rho) * z
}

/// Carries the per-element evaluation shared by the vector assemblies:
/// local coefficient gather and quadrature-point field values.
fn gather_local(
    w: &DiscreteField,
    e: usize,
    local: &mut Vec<Complex64>,
) {
    let dofs = w.space().dofs();
    local.clear();
    local.extend(dofs.element_dofs(e).iter().map(|&gd| w.full_coeff(gd)));
}

/// (g(w), phi_i) over the unconstrained dofs of w's space.
pub fn nonlinear_vector(w: &DiscreteField, rho: f64, quad: &QuadratureRule) -> Vec<Complex64> {
    let space = w.space();
    let mesh = space.mesh();
    let dofs = space.dofs();
    let dim = space.dim();
    let nd = space.basis().dofs_per_element(dim);
    let table = BasisTable::new(space.basis(), quad);
    let jac = mesh.element_size().powi(dim as i32);

    let mut out = vec![Complex64::new(0.0, 0.0); dofs.n_free()];
    let mut local = Vec::with_capacity(nd);
    for e in 0..dofs.n_elements() {
        gather_local(w, e, &mut local);
        let ed = dofs.element_dofs(e);
        for q in 0..quad.len() {
            let mut wq = Complex64::new(0.0, 0.0);
            for l in 0..nd {
                wq += local[l] * table.shape(q, l);
            }
            let gq = g(wq, rho) * (quad.weight(q) * jac);
            for (l, &gd) in ed.iter().enumerate() {
                if let Some(i) = dofs.free_index(gd) {
                    out[i] += gq * table.shape(q, l);
                }
            }
        }
    }
    out
}

/// (f(., t), phi_i) over the unconstrained dofs.
pub fn load_vector(
    space: &Space,
    f: &dyn Fn(Point, f64) -> Complex64,
    t: f64,
    quad: &QuadratureRule,
) -> Vec<Complex64> {
    let mesh = space.mesh();
    let dofs = space.dofs();
    let dim = space.dim();
    let table = BasisTable::new(space.basis(), quad);
    let s = mesh.element_size();
    let jac = s.powi(dim as i32);

    let mut out = vec![Complex64::new(0.0, 0.0); dofs.n_free()];
    for e in 0..dofs.n_elements() {
        let origin = mesh.element_origin(e);
        let ed = dofs.element_dofs(e);
        for q in 0..quad.len() {
            let xi = quad.point(q);
            let y: Point = [origin[0] + s * xi[0], origin[1] + s * xi[1]];
            let fq = f(y, t) * (quad.weight(q) * jac);
            for (l, &gd) in ed.iter().enumerate() {
                if let Some(i) = dofs.free_index(gd) {
                    out[i] += fq * table.shape(q, l);
                }
            }
        }
    }
    out
}

/// L2 distance between a field and a pointwise function, by quadrature.
pub fn l2_error(
    field: &DiscreteField,
    exact: &dyn Fn(Point) -> Complex64,
    quad: &QuadratureRule,
) -> f64 {
    let space = field.space();
    let mesh = space.mesh();
    let dofs = space.dofs();
    let dim = space.dim();
    let nd = space.basis().dofs_per_element(dim);
    let table = BasisTable::new(space.basis(), quad);
    let s = mesh.element_size();
    let jac = s.powi(dim as i32);

    let mut acc = 0.0;
    let mut local = Vec::with_capacity(nd);
    for e in 0..dofs.n_elements() {
        gather_local(field, e, &mut local);
        let origin = mesh.element_origin(e);
        for q in 0..quad.len() {
            let xi = quad.point(q);
            let y: Point = [origin[0] + s * xi[0], origin[1] + s * xi[1]];
            let mut wq = Complex64::new(0.0, 0.0);
            for l in 0..nd {
                wq += local[l] * table.shape(q, l);
            }
            acc += quad.weight(q) * jac * (exact(y) - wq).norm_sqr();
        }
    }
    acc.sqrt()
}

/// H1 seminorm distance between a field and a pointwise gradient.
pub fn h1_seminorm_error(
    field: &DiscreteField,
    grad_exact: &dyn Fn(Point) -> [Complex64; 2],
    quad: &QuadratureRule,
) -> f64 {
    let space = field.space();
    let mesh = space.mesh();
    let dofs = space.dofs();
    let dim = space.dim();
    let nd = space.basis().dofs_per_element(dim);
    let table = BasisTable::new(space.basis(), quad);
    let s = mesh.element_size();
    let jac = s.powi(dim as i32);
    let inv_s = 1.0 / s;

    let mut acc = 0.0;
    let mut local = Vec::with_capacity(nd);
    for e in 0..dofs.n_elements() {
        gather_local(field, e, &mut local);
        let origin = mesh.element_origin(e);
        for q in 0..quad.len() {
            let xi = quad.point(q);
            let y: Point = [origin[0] + s * xi[0], origin[1] + s * xi[1]];
            let mut gq = [Complex64::new(0.0, 0.0); 2];
            for l in 0..nd {
                let gr = table.grad(q, l);
                gq[0] += local[l] * (gr[0] * inv_s);
                gq[1] += local[l] * (gr[1] * inv_s);
            }
            let ge = grad_exact(y);
            let mut d = (ge[0] - gq[0]).norm_sqr();
            if dim == 2 {
                d += (ge[1] - gq[1]).norm_sqr();
            }
            acc += quad.weight(q) * jac * d;
        }
    }
    acc.sqrt()
}
