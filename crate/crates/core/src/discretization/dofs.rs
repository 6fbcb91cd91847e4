//! Global dof numbering and Dirichlet elimination.
//!
//! Dofs are numbered as tensor products of a one-dimensional numbering
//! (Lagrange: nodes left to right; Hermite: value then slope per node), with
//! the second direction as the slow index. The solved system contains only
//! unconstrained dofs; constrained dofs carry the homogeneous boundary
//! value zero and never appear in matrices or right-hand sides.
//!
//! Conformity with zero boundary traces requires constraining exactly the
//! dofs with a value factor at an endpoint: those basis functions are the
//! only ones with a nonzero boundary trace. Normal-derivative dofs stay
//! free, and so do the mixed corner dofs of the two-dimensional Hermite
//! family, whose slope-times-slope tensor factors vanish on every face.

use crate::{Point, Result};

use super::{BasisFamily, BasisKind, Mesh};

/// Functional attached to a dof: point value or derivative(s) at a node.
/// Derivative dofs are scaled by the element edge length per differentiation
/// order, so a coefficient c on a DX dof represents h * dv/dy1 at the node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DofKind {
    Value,
    DX,
    DY,
    DXY,
}

#[derive(Debug, Clone, Copy)]
pub struct DofInfo {
    pub kind: DofKind,
    pub node: Point,
}

#[derive(Debug, Clone)]
pub struct DofMap {
    dim: usize,
    nx: usize,
    kind: BasisKind,
    degree: usize,
    n1: usize,
    n_full: usize,
    element_dofs: Vec<Vec<usize>>,
    free_of_full: Vec<Option<usize>>,
    full_of_free: Vec<usize>,
}

impl DofMap {
    /// Numbering with homogeneous Dirichlet constraints on the cell
    /// boundary.
    pub fn new(mesh: &Mesh, basis: &BasisFamily) -> Self {
        Self::build(mesh, basis, true)
    }

    /// Numbering with every dof free; used for interpolation of functions
    /// that do not vanish on the boundary and in tests that need the full
    /// matrices.
    pub fn unconstrained(mesh: &Mesh, basis: &BasisFamily) -> Self {
        Self::build(mesh, basis, false)
    }

    fn build(mesh: &Mesh, basis: &BasisFamily, constrain: bool) -> Self {
        let dim = mesh.dim();
        let nx = mesh.nx();
        let kind = basis.kind();
        let n1 = match kind {
            BasisKind::HermiteCubic => 2 * (nx + 1),
            _ => basis.degree() * nx + 1,
        };
        let n_full = n1.pow(dim as u32);

        let mut constrained = vec![false; n_full];
        if constrain {
            for g in 0..n_full {
                constrained[g] = Self::is_dirichlet(kind, basis.degree(), nx, n1, dim, g);
            }
        }

        let mut free_of_full = vec![None; n_full];
        let mut full_of_free = Vec::new();
        for g in 0..n_full {
            if !constrained[g] {
                free_of_full[g] = Some(full_of_free.len());
                full_of_free.push(g);
            }
        }

        let n1d = basis.n1d();
        let mut element_dofs = Vec::with_capacity(mesh.n_elements());
        for e in 0..mesh.n_elements() {
            let (ex, ey) = mesh.element_index(e);
            let mut dofs = Vec::with_capacity(basis.dofs_per_element(dim));
            for l in 0..basis.dofs_per_element(dim) {
                let (a1, a2) = (l % n1d, l / n1d);
                let g1 = Self::dof_1d(kind, basis.degree(), ex, a1);
                let g = if dim == 1 {
                    g1
                } else {
                    Self::dof_1d(kind, basis.degree(), ey, a2) * n1 + g1
                };
                dofs.push(g);
            }
            element_dofs.push(dofs);
        }

        Self {
            dim,
            nx,
            kind,
            degree: basis.degree(),
            n1,
            n_full,
            element_dofs,
            free_of_full,
            full_of_free,
        }
    }

    /// Global 1D dof of local dof a in element e.
    fn dof_1d(kind: BasisKind, degree: usize, e: usize, a: usize) -> usize {
        match kind {
            BasisKind::HermiteCubic => 2 * e + a,
            _ => degree * e + a,
        }
    }

    /// Decomposes a 1D dof into (node index, is_derivative).
    fn split_1d(kind: BasisKind, g: usize) -> (usize, bool) {
        match kind {
            BasisKind::HermiteCubic => (g / 2, g % 2 == 1),
            _ => (g, false),
        }
    }

    fn is_dirichlet(
        kind: BasisKind,
        degree: usize,
        nx: usize,
        n1: usize,
        dim: usize,
        g: usize,
    ) -> bool {
        let last_node = match kind {
            BasisKind::HermiteCubic => nx,
            _ => degree * nx,
        };
        // A tensor basis function has nonzero boundary trace exactly when
        // one of its 1D factors is a value dof at an endpoint; constraining
        // those covers boundary values and tangential slopes while leaving
        // normal slopes and mixed derivatives free.
        let value_trace = |g1: usize| {
            let (node, deriv) = Self::split_1d(kind, g1);
            !deriv && (node == 0 || node == last_node)
        };
        if dim == 1 {
            value_trace(g)
        } else {
            let (g1, g2) = (g % n1, g / n1);
            value_trace(g1) || value_trace(g2)
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_full(&self) -> usize {
        self.n_full
    }

    pub fn n_free(&self) -> usize {
        self.full_of_free.len()
    }

    pub fn element_dofs(&self, e: usize) -> &[usize] {
        &self.element_dofs[e]
    }

    pub fn n_elements(&self) -> usize {
        self.element_dofs.len()
    }

    pub fn is_constrained(&self, full: usize) -> bool {
        self.free_of_full[full].is_none()
    }

    pub fn free_index(&self, full: usize) -> Option<usize> {
        self.free_of_full[full]
    }

    pub fn full_index(&self, free: usize) -> usize {
        self.full_of_free[free]
    }

    /// Node position and functional of a full dof index.
    pub fn dof_info(&self, full: usize) -> Result<DofInfo> {
        if full >= self.n_full {
            return Err(crate::Error::Domain(format!(
                "dof index {full} out of range (n_full = {})",
                self.n_full
            )));
        }
        let coord = |node: usize| match self.kind {
            BasisKind::HermiteCubic => node as f64 / self.nx as f64,
            _ => node as f64 / (self.degree * self.nx) as f64,
        };
        if self.dim == 1 {
            let (node, deriv) = Self::split_1d(self.kind, full);
            Ok(DofInfo {
                kind: if deriv { DofKind::DX } else { DofKind::Value },
                node: [coord(node), 0.0],
            })
        } else {
            let (g1, g2) = (full % self.n1, full / self.n1);
            let (node1, d1) = Self::split_1d(self.kind, g1);
            let (node2, d2) = Self::split_1d(self.kind, g2);
            let kind = match (d1, d2) {
                (false, false) => DofKind::Value,
                (true, false) => DofKind::DX,
                (false, true) => DofKind::DY,
                (true, true) => DofKind::DXY,
            };
            Ok(DofInfo {
                kind,
                node: [coord(node1), coord(node2)],
            })
        }
    }
}
