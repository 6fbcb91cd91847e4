//! Meshes, reference bases, quadrature, dof bookkeeping and discrete fields
//! on the unit cell.
//!
//! Everything is built on uniform tensor-product meshes of (0,1)^dim, so an
//! element is identified by its integer grid index and the reference cell is
//! always [0,1]^dim. Two-dimensional shape functions are tensor products of
//! the one-dimensional ones, and the dof numbering is the tensor product of
//! the one-dimensional numbering, which keeps the assembled matrices banded.

mod basis;
mod dofs;
mod field;
mod mesh;
mod quadrature;

pub use basis::{reference_basis, BasisFamily, BasisKind, BasisTable};
pub use dofs::{DofKind, DofMap};
pub use field::{evaluate_field, interpolate, DiscreteField, Space};
pub use mesh::{build_mesh, Mesh};
pub use quadrature::{gauss_rule, QuadratureRule};
