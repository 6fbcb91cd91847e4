//! Uniform tensor-product meshes of the unit cell.

use crate::{Error, Point, Result};

/// Uniform mesh of (0,1)^dim with nx cells per direction. The mesh size h
/// is the element diameter: 1/nx on the interval, sqrt(2)/nx on the square.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    dim: usize,
    nx: usize,
    h: f64,
}

/// Builds a mesh with at least two cells per direction.
pub fn build_mesh(dim: usize, nx: usize) -> Result<Mesh> {
    if dim != 1 && dim != 2 {
        return Err(Error::Config(format!(
            "spatial dimension must be 1 or 2, got {dim}"
        )));
    }
    if nx < 2 {
        return Err(Error::Config(format!(
            "mesh needs at least 2 cells per direction, got {nx}"
        )));
    }
    let diag = if dim == 2 { std::f64::consts::SQRT_2 } else { 1.0 };
    Ok(Mesh {
        dim,
        nx,
        h: diag / nx as f64,
    })
}

impl Mesh {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    /// Element diameter.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Edge length of a cell, 1/nx in every direction.
    pub fn element_size(&self) -> f64 {
        1.0 / self.nx as f64
    }

    pub fn n_elements(&self) -> usize {
        self.nx.pow(self.dim as u32)
    }

    pub fn n_vertices(&self) -> usize {
        (self.nx + 1).pow(self.dim as u32)
    }

    /// Grid index of element e, (ex, ey) with ey = 0 in one dimension.
    pub fn element_index(&self, e: usize) -> (usize, usize) {
        debug_assert!(e < self.n_elements());
        if self.dim == 1 {
            (e, 0)
        } else {
            (e % self.nx, e / self.nx)
        }
    }

    /// Lower-left corner of element e.
    pub fn element_origin(&self, e: usize) -> Point {
        let (ex, ey) = self.element_index(e);
        let s = self.element_size();
        [ex as f64 * s, ey as f64 * s]
    }

    /// Corner coordinates of element e in counterclockwise order (two
    /// points on the interval).
    pub fn element_vertices(&self, e: usize) -> Vec<Point> {
        let o = self.element_origin(e);
        let s = self.element_size();
        if self.dim == 1 {
            vec![o, [o[0] + s, 0.0]]
        } else {
            vec![
                o,
                [o[0] + s, o[1]],
                [o[0] + s, o[1] + s],
                [o[0], o[1] + s],
            ]
        }
    }

    /// Vertex coordinates by lexicographic index (x fastest).
    pub fn vertex(&self, v: usize) -> Point {
        debug_assert!(v < self.n_vertices());
        let np = self.nx + 1;
        let s = self.element_size();
        if self.dim == 1 {
            [v as f64 * s, 0.0]
        } else {
            [(v % np) as f64 * s, (v / np) as f64 * s]
        }
    }

    /// Element containing y together with the reference coordinate of y in
    /// it. Points on interelement faces are assigned to the cell on the
    /// lower-left side except at the top boundary.
    pub fn containing_element(&self, y: Point) -> Result<(usize, Point)> {
        let mut idx = [0usize; 2];
        let mut xi = [0.0f64; 2];
        for d in 0..self.dim {
            if !(0.0..=1.0).contains(&y[d]) || !y[d].is_finite() {
                return Err(Error::Domain(format!(
                    "point ({}, {}) lies outside the unit cell",
                    y[0], y[1]
                )));
            }
            let scaled = y[d] * self.nx as f64;
            let e = (scaled.floor() as usize).min(self.nx - 1);
            idx[d] = e;
            xi[d] = scaled - e as f64;
        }
        let e = if self.dim == 1 {
            idx[0]
        } else {
            idx[1] * self.nx + idx[0]
        };
        Ok((e, xi))
    }
}
