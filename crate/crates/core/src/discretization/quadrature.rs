//! Tensor-product Gauss-Legendre quadrature on the reference cell [0,1]^dim.

use crate::{Error, Point, Result};

/// Points and weights on [0,1]^dim. A rule with n points per direction
/// integrates polynomials of degree 2n-1 per direction exactly; `degree`
/// records that bound.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    dim: usize,
    points: Vec<Point>,
    weights: Vec<f64>,
    degree: usize,
}

impl QuadratureRule {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, q: usize) -> Point {
        self.points[q]
    }

    pub fn weight(&self, q: usize) -> f64 {
        self.weights[q]
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// Gauss-Legendre nodes and weights on [-1,1] by Newton iteration on the
/// Legendre recurrence, accurate to machine precision for the small n used
/// here.
fn gauss_legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based starting guess for the i-th positive root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' at x via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Builds the tensor Gauss-Legendre rule with n points per direction,
/// mapped to [0,1]^dim. Supported range: 1 <= n <= 10.
pub fn gauss_rule(dim: usize, n: usize) -> Result<QuadratureRule> {
    if dim != 1 && dim != 2 {
        return Err(Error::Config(format!(
            "quadrature dimension must be 1 or 2, got {dim}"
        )));
    }
    if n == 0 || n > 10 {
        return Err(Error::Config(format!(
            "points per direction must lie in 1..=10, got {n}"
        )));
    }
    let (nodes, weights) = gauss_legendre_reference(n);
    // Affine map [-1,1] -> [0,1] halves the weights.
    let p1: Vec<f64> = nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
    let w1: Vec<f64> = weights.iter().map(|w| 0.5 * w).collect();
    let (points, weights) = if dim == 1 {
        (p1.iter().map(|&x| [x, 0.0]).collect(), w1)
    } else {
        let mut pts = Vec::with_capacity(n * n);
        let mut wts = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                pts.push([p1[i], p1[j]]);
                wts.push(w1[i] * w1[j]);
            }
        }
        (pts, wts)
    };
    Ok(QuadratureRule {
        dim,
        points,
        weights,
        degree: 2 * n - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_rule_has_the_textbook_nodes() {
        let r = gauss_rule(1, 2).unwrap();
        let s = 1.0 / (2.0 * 3.0f64.sqrt());
        assert!((r.point(0)[0] - (0.5 - s)).abs() < 1e-15);
        assert!((r.point(1)[0] - (0.5 + s)).abs() < 1e-15);
        assert!((r.weight(0) - 0.5).abs() < 1e-15);
        assert!((r.weight(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn three_point_rule_integrates_quartics() {
        let r = gauss_rule(1, 3).unwrap();
        let s: f64 = (0..r.len())
            .map(|q| r.weight(q) * r.point(q)[0].powi(4))
            .sum();
        assert!((s - 0.2).abs() < 1e-15);
    }

    #[test]
    fn tensor_rule_weights_sum_to_cell_volume() {
        let r = gauss_rule(2, 2).unwrap();
        assert_eq!(r.len(), 4);
        let s: f64 = (0..r.len()).map(|q| r.weight(q)).sum();
        assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_unsupported_orders() {
        assert!(gauss_rule(1, 0).is_err());
        assert!(gauss_rule(1, 11).is_err());
        assert!(gauss_rule(3, 2).is_err());
    }

    #[test]
    fn monomials_up_to_declared_degree_are_exact() {
        for n in 1..=10usize {
            let r = gauss_rule(1, n).unwrap();
            for k in 0..=r.degree() {
                let s: f64 = (0..r.len())
                    .map(|q| r.weight(q) * r.point(q)[0].powi(k as i32))
                    .sum();
                let exact = 1.0 / (k as f64 + 1.0);
                assert!(
                    (s - exact).abs() <= 1e-13 * exact.max(1.0),
                    "n={n} k={k}: {s} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn tensor_rule_is_exact_on_mixed_monomials() {
        let r = gauss_rule(2, 4).unwrap();
        // x^6 y^3 has per-direction degree within 2*4-1 = 7.
        let s: f64 = (0..r.len())
            .map(|q| r.weight(q) * r.point(q)[0].powi(6) * r.point(q)[1].powi(3))
            .sum();
        assert!((s - 1.0 / 28.0).abs() < 1e-14);
    }
}
