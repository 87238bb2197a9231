//! Gauss–Hermite rule for integrals with weight e^{−x²}.
//!
//! Nodes are the roots of the degree-n Hermite polynomial, found by Newton
//! iteration on the orthonormal recurrence with the classical asymptotic
//! starting guesses; weights come from the derivative at each root. Orders up
//! to a few hundred are stable; the oracles here use ≤ 64.

use crate::error::{Error, Result};

/// π^{−1/4}, the normalization of the degree-0 orthonormal Hermite function.
const PI_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;

/// Nodes and weights of an n-point rule: ∫ e^{−x²} f(x) dx ≈ Σ wᵢ f(xᵢ).
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Orthonormal Hermite value and derivative at x: (p_n(x), p_n'(x)).
fn hermite_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 0.0;
    let mut p = PI_NEG_QUARTER;
    for j in 0..n {
        let jf = j as f64;
        let next = x * (2.0 / (jf + 1.0)).sqrt() * p - (jf / (jf + 1.0)).sqrt() * p_prev;
        p_prev = p;
        p = next;
    }
    let dp = (2.0 * n as f64).sqrt() * p_prev;
    (p, dp)
}

impl GaussHermite {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::OutOfRange {
                name: "nodes_per_axis",
                value: n as f64,
                range: "[2, ∞)",
            });
        }
        let m = n.div_ceil(2);
        // positive half, found largest-first
        let mut half = Vec::with_capacity(m);
        let mut half_w = Vec::with_capacity(m);
        let nf = n as f64;
        let mut z = 0.0f64;
        for i in 0..m {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * half[0],
                3 => 1.91 * z - 0.91 * half[1],
                _ => 2.0 * z - half[i - 2],
            };
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = hermite_pair(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() <= 1e-15 * (1.0 + z.abs()) {
                    let (_, d) = hermite_pair(n, z);
                    dp = d;
                    break;
                }
            }
            half.push(z);
            half_w.push(2.0 / (dp * dp));
        }
        // mirror to the full symmetric rule, ascending
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..m {
            nodes.push(-half[i]);
            weights.push(half_w[i]);
        }
        // odd n: the middle root is exactly 0 and must not be duplicated
        if n % 2 == 1 {
            nodes[m - 1] = 0.0;
        }
        for i in (0..m).rev() {
            if n % 2 == 1 && i == m - 1 {
                continue;
            }
            nodes.push(half[i]);
            weights.push(half_w[i]);
        }
        debug_assert_eq!(nodes.len(), n);
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Per-axis sample positions and bare weights for integrating a function
    /// *without* the e^{−x²} factor against a width rescale c:
    /// ∫ f(y) dy ≈ Σ vᵢ f(c·xᵢ) with vᵢ = c·wᵢ·e^{xᵢ²}.
    pub fn rescaled(&self, c: f64) -> (Vec<f64>, Vec<f64>) {
        let pts = self.nodes.iter().map(|&x| c * x).collect();
        let vals = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| c * w * (x * x).exp())
            .collect();
        (pts, vals)
    }
}
