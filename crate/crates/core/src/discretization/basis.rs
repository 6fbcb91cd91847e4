//! Reference shape functions on [0,1] and their tensor products.
//!
//! Lagrange families use equispaced nodes a/p; the Hermite family carries
//! value and first-derivative dofs at both endpoints. Hermite derivative
//! dofs are understood as h * v' where h is the element edge length, which
//! makes the reference functions mesh independent and keeps coefficients of
//! neighboring elements shared on uniform meshes.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Point, Result};

use super::QuadratureRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    LagrangeP1,
    LagrangeP2,
    LagrangeP3,
    HermiteCubic,
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p1" => Ok(Self::LagrangeP1),
            "p2" => Ok(Self::LagrangeP2),
            "p3" => Ok(Self::LagrangeP3),
            "hermite" => Ok(Self::HermiteCubic),
            other => Err(Error::Config(format!(
                "unknown basis '{other}' (expected p1, p2, p3 or hermite)"
            ))),
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LagrangeP1 => write!(f, "p1"),
            Self::LagrangeP2 => write!(f, "p2"),
            Self::LagrangeP3 => write!(f, "p3"),
            Self::HermiteCubic => write!(f, "hermite"),
        }
    }
}

/// One reference family: polynomial degree, dofs per direction and the
/// shape function evaluators.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFamily {
    kind: BasisKind,
    degree: usize,
    n1d: usize,
    nodes: Vec<f64>,
}

/// Builds the requested family.
pub fn reference_basis(kind: BasisKind) -> BasisFamily {
    let (degree, n1d) = match kind {
        BasisKind::LagrangeP1 => (1, 2),
        BasisKind::LagrangeP2 => (2, 3),
        BasisKind::LagrangeP3 => (3, 4),
        BasisKind::HermiteCubic => (3, 4),
    };
    let nodes = match kind {
        BasisKind::HermiteCubic => Vec::new(),
        _ => (0..n1d).map(|a| a as f64 / degree as f64).collect(),
    };
    BasisFamily {
        kind,
        degree,
        n1d,
        nodes,
    }
}

impl BasisFamily {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Polynomial degree p; the L2 convergence order of the family is p+1.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Dofs per element per direction.
    pub fn n1d(&self) -> usize {
        self.n1d
    }

    pub fn dofs_per_element(&self, dim: usize) -> usize {
        self.n1d.pow(dim as u32)
    }

    /// One-dimensional shape function a at reference coordinate xi.
    pub fn shape_1d(&self, a: usize, xi: f64) -> f64 {
        debug_assert!(a < self.n1d);
        match self.kind {
            BasisKind::HermiteCubic => hermite_value(a, xi),
            _ => lagrange_value(&self.nodes, a, xi),
        }
    }

    /// Derivative of `shape_1d` with respect to xi.
    pub fn dshape_1d(&self, a: usize, xi: f64) -> f64 {
        debug_assert!(a < self.n1d);
        match self.kind {
            BasisKind::HermiteCubic => hermite_deriv(a, xi),
            _ => lagrange_deriv(&self.nodes, a, xi),
        }
    }

    /// Tensor-product shape function. Local index l = a2 * n1d + a1.
    pub fn shape(&self, dim: usize, l: usize, xi: Point) -> f64 {
        if dim == 1 {
            self.shape_1d(l, xi[0])
        } else {
            let (a1, a2) = (l % self.n1d, l / self.n1d);
            self.shape_1d(a1, xi[0]) * self.shape_1d(a2, xi[1])
        }
    }

    /// Reference gradient of the tensor-product shape function.
    pub fn grad(&self, dim: usize, l: usize, xi: Point) -> [f64; 2] {
        if dim == 1 {
            [self.dshape_1d(l, xi[0]), 0.0]
        } else {
            let (a1, a2) = (l % self.n1d, l / self.n1d);
            let (n1, n2) = (self.shape_1d(a1, xi[0]), self.shape_1d(a2, xi[1]));
            let (d1, d2) = (self.dshape_1d(a1, xi[0]), self.dshape_1d(a2, xi[1]));
            [d1 * n2, n1 * d2]
        }
    }
}

fn lagrange_value(nodes: &[f64], a: usize, xi: f64) -> f64 {
    let mut v = 1.0;
    for (b, &xb) in nodes.iter().enumerate() {
        if b != a {
            v *= (xi - xb) / (nodes[a] - xb);
        }
    }
    v
}

fn lagrange_deriv(nodes: &[f64], a: usize, xi: f64) -> f64 {
    let mut sum = 0.0;
    for c in 0..nodes.len() {
        if c == a {
            continue;
        }
        let mut term = 1.0 / (nodes[a] - nodes[c]);
        for (b, &xb) in nodes.iter().enumerate() {
            if b != a && b != c {
                term *= (xi - xb) / (nodes[a] - xb);
            }
        }
        sum += term;
    }
    sum
}

/// Cubic Hermite functions in local order (value left, slope left, value
/// right, slope right).
fn hermite_value(a: usize, x: f64) -> f64 {
    match a {
        0 => 1.0 + x * x * (2.0 * x - 3.0),
        1 => x * (1.0 + x * (x - 2.0)),
        2 => x * x * (3.0 - 2.0 * x),
        3 => x * x * (x - 1.0),
        _ => unreachable!(),
    }
}

fn hermite_deriv(a: usize, x: f64) -> f64 {
    match a {
        0 => 6.0 * x * (x - 1.0),
        1 => 1.0 + x * (3.0 * x - 4.0),
        2 => 6.0 * x * (1.0 - x),
        3 => x * (3.0 * x - 2.0),
        _ => unreachable!(),
    }
}

/// Shape values and reference gradients tabulated at the points of one
/// quadrature rule; assembly and error loops index it as [q][l].
#[derive(Debug, Clone)]
pub struct BasisTable {
    n_dofs: usize,
    shape: Vec<f64>,
    grad: Vec<[f64; 2]>,
}

impl BasisTable {
    pub fn new(basis: &BasisFamily, quad: &QuadratureRule) -> Self {
        let dim = quad.dim();
        let n_dofs = basis.dofs_per_element(dim);
        let nq = quad.len();
        let mut shape = Vec::with_capacity(nq * n_dofs);
        let mut grad = Vec::with_capacity(nq * n_dofs);
        for q in 0..nq {
            let xi = quad.point(q);
            for l in 0..n_dofs {
                shape.push(basis.shape(dim, l, xi));
                grad.push(basis.grad(dim, l, xi));
            }
        }
        Self {
            n_dofs,
            shape,
            grad,
        }
    }

    pub fn n_dofs(&self) -> usize {
        self.n_dofs
    }

    pub fn shape(&self, q: usize, l: usize) -> f64 {
        self.shape[q * self.n_dofs + l]
    }

    pub fn grad(&self, q: usize, l: usize) -> [f64; 2] {
        self.grad[q * self.n_dofs + l]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KINDS: [BasisKind; 4] = [
        BasisKind::LagrangeP1,
        BasisKind::LagrangeP2,
        BasisKind::LagrangeP3,
        BasisKind::HermiteCubic,
    ];

    #[test]
    fn dof_counts_per_element() {
        let expect = [(2, 4), (3, 9), (4, 16), (4, 16)];
        for (kind, (d1, d2)) in KINDS.iter().zip(expect) {
            let b = reference_basis(*kind);
            assert_eq!(b.dofs_per_element(1), d1);
            assert_eq!(b.dofs_per_element(2), d2);
        }
    }

    #[test]
    fn linear_hats_at_the_midpoint() {
        let b = reference_basis(BasisKind::LagrangeP1);
        assert_eq!(b.shape_1d(0, 0.5), 0.5);
        assert_eq!(b.shape_1d(1, 0.5), 0.5);
    }

    #[test]
    fn quadratic_bubble_peaks_mid_element() {
        let b = reference_basis(BasisKind::LagrangeP2);
        assert_eq!(b.shape_1d(0, 0.5), 0.0);
        assert_eq!(b.shape_1d(1, 0.5), 1.0);
        assert_eq!(b.shape_1d(2, 0.5), 0.0);
    }

    #[test]
    fn lagrange_satisfies_kronecker_property() {
        for kind in [
            BasisKind::LagrangeP1,
            BasisKind::LagrangeP2,
            BasisKind::LagrangeP3,
        ] {
            let b = reference_basis(kind);
            for a in 0..b.n1d() {
                for c in 0..b.n1d() {
                    let node = c as f64 / b.degree() as f64;
                    let expect = if a == c { 1.0 } else { 0.0 };
                    assert!(
                        (b.shape_1d(a, node) - expect).abs() < 1e-13,
                        "{kind} N_{a}({node})"
                    );
                }
            }
        }
    }

    #[test]
    fn hermite_interpolates_values_and_slopes() {
        let b = reference_basis(BasisKind::HermiteCubic);
        // Rows: (value(0), slope(0), value(1), slope(1)) per dof.
        let expect = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        for a in 0..4 {
            let got = [
                b.shape_1d(a, 0.0),
                b.dshape_1d(a, 0.0),
                b.shape_1d(a, 1.0),
                b.dshape_1d(a, 1.0),
            ];
            for (g, e) in got.iter().zip(expect[a]) {
                assert!((g - e).abs() < 1e-14, "dof {a}: {got:?}");
            }
        }
    }

    #[test]
    fn lagrange_partitions_unity() {
        for kind in [
            BasisKind::LagrangeP1,
            BasisKind::LagrangeP2,
            BasisKind::LagrangeP3,
        ] {
            let b = reference_basis(kind);
            for i in 0..=50 {
                let xi = i as f64 / 50.0;
                let s: f64 = (0..b.n1d()).map(|a| b.shape_1d(a, xi)).sum();
                let ds: f64 = (0..b.n1d()).map(|a| b.dshape_1d(a, xi)).sum();
                assert!((s - 1.0).abs() < 1e-13, "{kind} sum at {xi}");
                assert!(ds.abs() < 1e-12, "{kind} derivative sum at {xi}");
            }
        }
    }

    #[test]
    fn hermite_value_dofs_partition_unity() {
        // Constant 1 is reproduced by unit value dofs and zero slope dofs.
        let b = reference_basis(BasisKind::HermiteCubic);
        for i in 0..=50 {
            let xi = i as f64 / 50.0;
            let s = b.shape_1d(0, xi) + b.shape_1d(2, xi);
            assert!((s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        let eps = 1e-6;
        for kind in KINDS {
            let b = reference_basis(kind);
            for a in 0..b.n1d() {
                for i in 1..10 {
                    let xi = i as f64 / 10.0;
                    let fd = (b.shape_1d(a, xi + eps) - b.shape_1d(a, xi - eps)) / (2.0 * eps);
                    assert!(
                        (b.dshape_1d(a, xi) - fd).abs() < 1e-6,
                        "{kind} dof {a} at {xi}"
                    );
                }
            }
        }
    }

    #[test]
    fn two_dimensional_functions_factor_into_tensor_products() {
        for kind in KINDS {
            let b = reference_basis(kind);
            let xi = [0.3, 0.7];
            for l in 0..b.dofs_per_element(2) {
                let (a1, a2) = (l % b.n1d(), l / b.n1d());
                let expect = b.shape_1d(a1, xi[0]) * b.shape_1d(a2, xi[1]);
                assert!((b.shape(2, l, xi) - expect).abs() < 1e-15);
                let g = b.grad(2, l, xi);
                let e0 = b.dshape_1d(a1, xi[0]) * b.shape_1d(a2, xi[1]);
                let e1 = b.shape_1d(a1, xi[0]) * b.dshape_1d(a2, xi[1]);
                assert!((g[0] - e0).abs() < 1e-15 && (g[1] - e1).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let b = reference_basis(BasisKind::LagrangeP2);
        let quad = crate::discretization::gauss_rule(2, 3).unwrap();
        let table = BasisTable::new(&b, &quad);
        for q in 0..quad.len() {
            for l in 0..b.dofs_per_element(2) {
                assert_eq!(table.shape(q, l), b.shape(2, l, quad.point(q)));
                assert_eq!(table.grad(q, l), b.grad(2, l, quad.point(q)));
            }
        }
    }
}
