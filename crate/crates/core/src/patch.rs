//! Triangular Bézier patches, polynomial and rational.
//!
//! Rational patches are implicitized through their homogeneous numerator:
//! with `h(s) = Σ wᵢ Bᵢⁿ(s)` the tetrahedral barycentric coordinates of
//! `r(s)` are `(Σ wᵢ u(cᵢ) Bᵢⁿ(s)) / h(s)`, and because the tetrahedral
//! Bernstein basis is homogeneous, `q(r(s)) = q(numerator) / h(s)ᵐ`. The
//! denominator never enters the matrix builders.

use serde::{Deserialize, Serialize};

use crate::barycentric::Simplex;
use crate::bernstein::{basis, basis_values, BernsteinPoly};
use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PatchRecord", into = "PatchRecord")]
pub struct TriangularPatch {
    degree: usize,
    control_points: Vec<[f64; 3]>,
    weights: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct PatchRecord {
    degree: usize,
    control_points: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

impl TryFrom<PatchRecord> for TriangularPatch {
    type Error = Error;

    fn try_from(r: PatchRecord) -> Result<Self> {
        match r.weights {
            Some(w) => TriangularPatch::rational(r.degree, r.control_points, w),
            None => TriangularPatch::new(r.degree, r.control_points),
        }
    }
}

impl From<TriangularPatch> for PatchRecord {
    fn from(p: TriangularPatch) -> Self {
        PatchRecord { degree: p.degree, control_points: p.control_points, weights: p.weights }
    }
}

fn check_count(degree: usize, n: usize) -> Result<()> {
    let expected = basis(3, degree)?.ordering.len();
    if n != expected {
        return Err(Error::InvalidPatch(format!("degree {degree} needs {expected} control points, got {n}")));
    }
    Ok(())
}

impl TriangularPatch {
    pub fn new(degree: usize, control_points: Vec<[f64; 3]>) -> Result<Self> {
        check_count(degree, control_points.len())?;
        if control_points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { degree, control_points, weights: None })
    }

    pub fn rational(degree: usize, control_points: Vec<[f64; 3]>, weights: Vec<f64>) -> Result<Self> {
        let mut p = Self::new(degree, control_points)?;
        if weights.len() != p.control_points.len() {
            return Err(Error::InvalidPatch(format!(
                "{} weights for {} control points",
                weights.len(),
                p.control_points.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidPatch(format!("weight {w} is not strictly positive")));
        }
        p.weights = Some(weights);
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn control_points(&self) -> &[[f64; 3]] {
        &self.control_points
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn is_rational(&self) -> bool {
        self.weights.is_some()
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    /// Surface point at triangle barycentric coordinates `s`.
    pub fn eval(&self, s: &[f64]) -> Result<[f64; 3]> {
        if s.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: s.len() });
        }
        let b = basis_values(self.degree, s)?;
        let mut num = [0.0; 3];
        let mut den = 0.0;
        for (i, (c, bi)) in self.control_points.iter().zip(&b).enumerate() {
            let wb = self.weight(i) * bi;
            den += wb;
            for k in 0..3 {
                num[k] += wb * c[k];
            }
        }
        if den == 0.0 {
            return Err(Error::InvalidPatch("rational denominator vanishes".into()));
        }
        Ok(num.map(|v| v / den))
    }

    /// `h(s) = Σ wᵢ Bᵢⁿ(s)`; identically one for polynomial patches.
    pub fn denominator(&self, s: &[f64]) -> Result<f64> {
        let b = basis_values(self.degree, s)?;
        Ok(b.iter().enumerate().map(|(i, v)| self.weight(i) * v).sum())
    }

    /// Minimum and maximum of the denominator over a 15-point-per-edge
    /// triangular lattice of the domain.
    pub fn denominator_range(&self) -> Result<(f64, f64)> {
        if self.weights.is_none() {
            return Ok((1.0, 1.0));
        }
        let r = 14;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in 0..=r {
            for b in 0..=r - a {
                let s = [(r - a - b) as f64 / r as f64, a as f64 / r as f64, b as f64 / r as f64];
                let h = self.denominator(&s)?;
                lo = lo.min(h);
                hi = hi.max(h);
            }
        }
        Ok((lo, hi))
    }

    /// Absorb the weights into the control data: `γᵢ = wᵢcᵢ` with the
    /// weights kept as homogeneous coordinates.
    pub fn absorb_weights(&self) -> HomogeneousPatch {
        HomogeneousPatch {
            degree: self.degree,
            control_points: self.control_points.clone(),
            weights: (0..self.control_points.len()).map(|i| self.weight(i)).collect(),
        }
    }

    pub fn to_barycentric_patch<T: Scalar>(&self, tetrahedron: &Simplex) -> Result<BarycentricPatch<T>> {
        self.absorb_weights().to_barycentric_patch(tetrahedron)
    }
}

/// Polynomial patch in homogeneous form: points `γᵢ = wᵢcᵢ` with weights
/// `wᵢ` (all one for a polynomial patch).
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPatch {
    degree: usize,
    control_points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl HomogeneousPatch {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn gamma(&self) -> Vec<[f64; 3]> {
        self.control_points.iter().zip(&self.weights).map(|(c, w)| c.map(|v| v * w)).collect()
    }

    pub fn is_polynomial(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// Coordinate functions relative to `tetrahedron`: the `k`-th polynomial
    /// has coefficients `wᵢ·βₖ(cᵢ)`, which is linear in `(γᵢ, wᵢ)`.
    pub fn to_barycentric_patch<T: Scalar>(&self, tetrahedron: &Simplex) -> Result<BarycentricPatch<T>> {
        if tetrahedron.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: tetrahedron.dim() });
        }
        let len = self.control_points.len();
        let mut coeffs: Vec<Vec<T>> = (0..4).map(|_| Vec::with_capacity(len)).collect();
        for (c, &w) in self.control_points.iter().zip(&self.weights) {
            let beta: Vec<T> = tetrahedron.to_barycentric_in(c)?;
            let w = T::from_f64(w);
            for (k, b) in beta.into_iter().enumerate() {
                coeffs[k].push(b * w.clone());
            }
        }
        let coords = coeffs.into_iter().map(|c| BernsteinPoly::new(3, self.degree, c)).collect::<Result<Vec<_>>>()?;
        Ok(BarycentricPatch { tetrahedron: tetrahedron.clone(), coords })
    }
}

/// A patch written as four triangular Bernstein polynomials giving its
/// barycentric coordinates relative to a reference tetrahedron.
#[derive(Clone, Debug, PartialEq)]
pub struct BarycentricPatch<T = f64> {
    tetrahedron: Simplex,
    coords: Vec<BernsteinPoly<T>>,
}

impl<T: Scalar> BarycentricPatch<T> {
    pub fn new(tetrahedron: Simplex, coords: Vec<BernsteinPoly<T>>) -> Result<Self> {
        if coords.len() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: coords.len() });
        }
        let degree = coords[0].degree();
        for c in &coords {
            if c.dim() != 3 {
                return Err(Error::DimensionMismatch { expected: 3, found: c.dim() });
            }
            if c.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: c.degree() });
            }
        }
        Ok(Self { tetrahedron, coords })
    }

    pub fn tetrahedron(&self) -> &Simplex {
        &self.tetrahedron
    }

    pub fn degree(&self) -> usize {
        self.coords[0].degree()
    }

    pub fn coords(&self) -> &[BernsteinPoly<T>] {
        &self.coords
    }

    /// The patch over the subtriangle whose corners have domain coordinates
    /// `corners`, reparametrized onto the full domain.
    pub fn restrict(&self, corners: &[[f64; 3]; 3]) -> Result<Self> {
        let c: Vec<Vec<T>> = corners.iter().map(|v| v.iter().map(|&x| T::from_f64(x)).collect()).collect();
        let coords = self.coords.iter().map(|p| p.reparametrize(&c)).collect::<Result<_>>()?;
        Ok(Self { tetrahedron: self.tetrahedron.clone(), coords })
    }

    /// Sum of the four coordinate functions: the constant one for a
    /// polynomial patch, the denominator `h` for an absorbed rational one.
    pub fn weight_polynomial(&self) -> BernsteinPoly<T> {
        let terms: Vec<(T, &BernsteinPoly<T>)> = self.coords.iter().map(|c| (T::one(), c)).collect();
        BernsteinPoly::linear_combination(&terms).expect("coordinate functions share degree")
    }

    /// Homogeneous tetrahedral coordinates at domain point `s`.
    pub fn evaluate(&self, s: &[f64]) -> Result<[f64; 4]> {
        if s.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: s.len() });
        }
        let b = basis_values(self.degree(), s)?;
        let mut out = [0.0; 4];
        for (o, c) in out.iter_mut().zip(&self.coords) {
            *o = c.coeffs().iter().zip(&b).map(|(ci, bi)| ci.to_f64() * bi).sum();
        }
        Ok(out)
    }

    /// Cartesian surface point at `s` (dehomogenized).
    pub fn cartesian(&self, s: &[f64]) -> Result<Vec<f64>> {
        let u = self.evaluate(s)?;
        let h: f64 = u.iter().sum();
        self.tetrahedron.to_cartesian(&u.map(|v| v / h))
    }

    pub fn to_f64(&self) -> BarycentricPatch<f64> {
        BarycentricPatch {
            tetrahedron: self.tetrahedron.clone(),
            coords: self.coords.iter().map(|c| c.to_f64()).collect(),
        }
    }
}
