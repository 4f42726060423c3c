//! Gauss-Lobatto-Legendre collocation: nodes, weights and the cardinal
//! differentiation matrix on the reference interval `[-1, 1]`.

use nalgebra::DMatrix;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-14;

/// Legendre polynomial `P_order(x)` and its first derivative.
///
/// Uses the three-term recurrence. The derivative comes from
/// `(1 - x²) P'_N = N (P_{N-1} - x P_N)`; at `x = ±1` the limit
/// `P'_N(±1) = (±1)^{N+1} N(N+1)/2` is used instead.
pub fn legendre_eval(order: usize, x: f64) -> (f64, f64) {
    if order == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=order {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let n = order as f64;
    let one_minus_x2 = 1.0 - x * x;
    let dp = if one_minus_x2 == 0.0 {
        let edge = 0.5 * n * (n + 1.0);
        if x > 0.0 || order % 2 == 1 {
            edge
        } else {
            -edge
        }
    } else {
        n * (p_prev - x * p) / one_minus_x2
    };
    (p, dp)
}

/// Second derivative of `P_N` at an interior point, from Legendre's equation.
fn legendre_second_derivative(order: usize, x: f64, p: f64, dp: f64) -> f64 {
    let n = order as f64;
    (2.0 * x * dp - n * (n + 1.0) * p) / (1.0 - x * x)
}

/// Collocation apparatus for a fixed polynomial order `N`.
///
/// Holds `N + 1` nodes `x_0 = -1 < … < x_N = 1`, the Lobatto quadrature
/// weights, the values `P_N(x_j)` and the matrix `D[k][j] = g'_j(x_k)` of
/// cardinal-function derivatives.
#[derive(Debug, Clone)]
pub struct LobattoGrid {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    legendre_at_nodes: Vec<f64>,
    deriv_matrix: DMatrix<f64>,
}

impl LobattoGrid {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(crate::error::invalid(format!(
                "Lobatto grid order must be >= 2, got {order}"
            )));
        }
        let n = order;
        let nf = n as f64;
        let mut nodes = vec![0.0; n + 1];
        nodes[0] = -1.0;
        nodes[n] = 1.0;

        // Interior nodes are the roots of P'_N. Solve for the left half and
        // mirror; the middle root (odd count) is exactly zero.
        for j in 1..=(n - 1) / 2 {
            let mut x = -(PI * j as f64 / nf).cos();
            let mut converged = false;
            for _ in 0..NEWTON_MAX_ITER {
                let (p, dp) = legendre_eval(n, x);
                let ddp = legendre_second_derivative(n, x, p, dp);
                let step = dp / ddp;
                x -= step;
                if step.abs() < 1e-15 * x.abs().max(1.0) || dp.abs() < NEWTON_TOL {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::NoConvergence {
                    what: "Lobatto node Newton iteration",
                    iterations: NEWTON_MAX_ITER,
                });
            }
            nodes[j] = x;
            nodes[n - j] = -x;
        }
        if n.is_multiple_of(2) {
            nodes[n / 2] = 0.0;
        }

        let legendre_at_nodes: Vec<f64> = nodes.iter().map(|&x| legendre_eval(n, x).0).collect();
        let scale = 2.0 / (nf * (nf + 1.0));
        let weights = legendre_at_nodes.iter().map(|p| scale / (p * p)).collect();

        // Each diagonal entry is minus the sum of the off-diagonal entries in its row.
        let mut deriv_matrix = DMatrix::from_fn(n + 1, n + 1, |k, j| {
            if k == j {
                0.0
            } else {
                legendre_at_nodes[k] / (legendre_at_nodes[j] * (nodes[k] - nodes[j]))
            }
        });
        for k in 0..=n {
            let off: f64 = deriv_matrix.row(k).iter().sum();
            deriv_matrix[(k, k)] = -off;
        }

        Ok(Self {
            order,
            nodes,
            weights,
            legendre_at_nodes,
            deriv_matrix,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `P_N(x_j)` at every node.
    pub fn legendre_at_nodes(&self) -> &[f64] {
        &self.legendre_at_nodes
    }

    pub fn deriv_matrix(&self) -> &DMatrix<f64> {
        &self.deriv_matrix
    }

    /// Evaluate the cardinal function `g_j` at an arbitrary `x` using the
    /// closed form `-(1 - x²) P'_N(x) / [N(N+1) P_N(x_j) (x - x_j)]`.
    pub fn cardinal(&self, j: usize, x: f64) -> f64 {
        let xj = self.nodes[j];
        if x == xj {
            return 1.0;
        }
        let nf = self.order as f64;
        let (_, dp) = legendre_eval(self.order, x);
        let q = (1.0 - x * x) * dp;
        -q / (nf * (nf + 1.0) * self.legendre_at_nodes[j] * (x - xj))
    }

    /// Apply the differentiation matrix to nodal samples.
    pub fn differentiate(&self, samples: &[f64]) -> Vec<f64> {
        assert_eq!(samples.len(), self.order + 1);
        (0..=self.order)
            .map(|k| {
                self.deriv_matrix
                    .row(k)
                    .iter()
                    .zip(samples)
                    .map(|(d, f)| d * f)
                    .sum()
            })
            .collect()
    }

    /// Lobatto quadrature of nodal samples over `[-1, 1]`.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        self.weights.iter().zip(samples).map(|(w, f)| w * f).sum()
    }
}
