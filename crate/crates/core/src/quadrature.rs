//! Grundmann–Möller quadrature on the reference triangle.
//!
//! The rule of index `s` integrates polynomials of degree `2s+1` exactly:
//!
//! ```text
//! ∫_Ω f ≈ Σ_{i=0}^{s} (−1)^i 2^{−2s} (d+2−2i)^d / (i! (d+2−i)!) Σ_{|β|=s−i} f((2β+1)/(d+2−2i))
//! ```
//!
//! with `d = 2s+1`. Weights and nodes are generated in exact rationals and
//! rounded once. Some weights are negative.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::combinatorics;
use crate::{Error, Result};

pub const MAX_EXACTNESS: usize = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    exactness: usize,
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Smallest Grundmann–Möller rule exact to total degree `exactness`.
    pub fn build(exactness: usize) -> Result<Self> {
        if exactness > MAX_EXACTNESS {
            return Err(Error::DegreeTooHigh(exactness, MAX_EXACTNESS));
        }
        let s = exactness.saturating_sub(1).div_ceil(2);
        let d = 2 * s + 1;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let fact = |n: usize| (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k));
        for i in 0..=s {
            let denom_pts = d + 2 - 2 * i;
            let mut w = BigRational::new(
                BigInt::from(denom_pts).pow(d as u32),
                fact(i) * fact(d + 2 - i) * BigInt::from(2).pow(2 * s as u32),
            );
            if i % 2 == 1 {
                w = -w;
            }
            let wf = w.to_f64().expect("finite weight");
            let level = combinatorics::enumerate(3, s - i)?;
            for beta in level.iter() {
                let node = [0, 1, 2].map(|k| (2 * beta.get(k) as usize + 1) as f64 / denom_pts as f64);
                nodes.push(node);
                weights.push(wf);
            }
        }
        Ok(Self { exactness: 2 * s + 1, nodes, weights })
    }

    /// Total degree integrated exactly (always odd for this family).
    pub fn exactness(&self) -> usize {
        self.exactness
    }

    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(&[f64; 3]) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(s, w)| w * f(s)).sum()
    }

    /// Transplants the rule onto the subtriangle with (barycentric) vertices
    /// `t`; weights scale by `area(T)/area(Ω)`.
    pub fn map_to_subtriangle(&self, t: &[[f64; 3]; 3]) -> Result<Self> {
        for v in t {
            let sum: f64 = v.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::NotNormalized(sum));
            }
        }
        let det = t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) - t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0])
            + t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0]);
        if det.abs() < 1e-14 {
            return Err(Error::DegenerateSimplex(det));
        }
        let scale = det.abs();
        let nodes =
            self.nodes.iter().map(|b| [0, 1, 2].map(|k| b[0] * t[0][k] + b[1] * t[1][k] + b[2] * t[2][k])).collect();
        let weights = self.weights.iter().map(|w| w * scale).collect();
        Ok(Self { exactness: self.exactness, nodes, weights })
    }

    /// Sum of absolute weights over the sum of weights; a measure of the
    /// cancellation the rule relies on.
    pub fn condition(&self) -> f64 {
        let abs: f64 = self.weights.iter().map(|w| w.abs()).sum();
        abs / self.weights.iter().sum::<f64>().abs()
    }
}
