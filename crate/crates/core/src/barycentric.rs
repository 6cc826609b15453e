//! Triangles and tetrahedra, and conversion between Cartesian and
//! barycentric coordinates.
//!
//! For a simplex with vertices `a₁ … a_{l+1}` the two coordinate systems are
//! related by the square system
//!
//! ```text
//! ( x )   ( a₁ … a_{l+1} )
//! ( 1 ) = ( 1  …   1     ) β
//! ```
//!
//! The reference domain of every patch is the standard triangle
//! `{(s₂,s₃) : s₂,s₃ ≥ 0, s₂+s₃ ≤ 1}` with `s = (1−s₂−s₃, s₂, s₃)`; its area
//! is ½.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Tolerance on `Σβ = 1` and on the degeneracy test.
pub const BARY_TOL: f64 = 1e-12;

/// Area of the reference triangle.
pub const DOMAIN_AREA: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
    /// Inverse of the homogeneous vertex matrix; row `k` maps `(x, 1)` to `β_k`.
    inverse: Vec<Vec<f64>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.len();
        if !(3..=4).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let l = n - 1;
        for v in &vertices {
            if v.len() != l {
                return Err(Error::DimensionMismatch { expected: l, found: v.len() });
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        let hom = homogeneous_matrix(&vertices);
        let det = determinant(&hom);
        let scale = vertices.iter().flatten().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale == 0.0 || det.abs() <= BARY_TOL * scale.powi(l as i32) {
            return Err(Error::DegenerateSimplex(det));
        }
        let inverse = invert(&hom).ok_or(Error::DegenerateSimplex(det))?;
        Ok(Self { vertices, inverse })
    }

    pub fn tetrahedron(v: [[f64; 3]; 4]) -> Result<Self> {
        Self::new(v.iter().map(|p| p.to_vec()).collect())
    }

    pub fn triangle(v: [[f64; 2]; 3]) -> Result<Self> {
        Self::new(v.iter().map(|p| p.to_vec()).collect())
    }

    /// `{(1,0,0), (0,1,0), (0,0,1), (0,0,0)}`.
    pub fn standard_tetrahedron() -> Self {
        Self::tetrahedron([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]).expect("non-degenerate")
    }

    /// The reference domain `Ω`, vertices `(0,0), (1,0), (0,1)`.
    pub fn reference_triangle() -> Self {
        Self::triangle([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).expect("non-degenerate")
    }

    /// Spatial dimension `l` (2 for a triangle, 3 for a tetrahedron).
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn to_barycentric(&self, x: &[f64]) -> Result<BaryPoint> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        let mut rhs: Vec<f64> = x.to_vec();
        rhs.push(1.0);
        let beta = solve_pivoted(homogeneous_matrix(&self.vertices), rhs).ok_or(Error::DegenerateSimplex(0.0))?;
        Ok(BaryPoint(beta))
    }

    /// Barycentric coordinates in an arbitrary field; exact for rationals.
    pub fn to_barycentric_in<T: Scalar>(&self, x: &[f64]) -> Result<Vec<T>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        let hom: Vec<Vec<T>> = homogeneous_matrix(&self.vertices)
            .into_iter()
            .map(|row| row.into_iter().map(T::from_f64).collect())
            .collect();
        let mut rhs: Vec<T> = x.iter().map(|&c| T::from_f64(c)).collect();
        rhs.push(T::one());
        solve_pivoted(hom, rhs).ok_or(Error::DegenerateSimplex(0.0))
    }

    pub fn to_cartesian(&self, beta: &[f64]) -> Result<Vec<f64>> {
        if beta.len() != self.vertices.len() {
            return Err(Error::DimensionMismatch { expected: self.vertices.len(), found: beta.len() });
        }
        let sum: f64 = beta.iter().sum();
        if (sum - 1.0).abs() > BARY_TOL {
            return Err(Error::NotNormalized(sum));
        }
        let mut x = vec![0.0; self.dim()];
        for (b, v) in beta.iter().zip(&self.vertices) {
            for (xc, vc) in x.iter_mut().zip(v) {
                *xc += b * vc;
            }
        }
        Ok(x)
    }

    /// `∂β_k/∂x_c`, one row per barycentric coordinate.
    pub fn barycentric_jacobian(&self) -> Vec<Vec<f64>> {
        let l = self.dim();
        self.inverse.iter().map(|row| row[..l].to_vec()).collect()
    }

    /// Same vertices within `tol`, relative to the largest coordinate.
    pub fn approx_eq(&self, other: &Simplex, tol: f64) -> bool {
        if self.vertices.len() != other.vertices.len() {
            return false;
        }
        let scale = self.vertices.iter().flatten().fold(1.0f64, |m, c| m.max(c.abs()));
        self.vertices.iter().flatten().zip(other.vertices.iter().flatten()).all(|(a, b)| (a - b).abs() <= tol * scale)
    }

    pub fn translated(&self, t: &[f64]) -> Result<Simplex> {
        Simplex::new(self.vertices.iter().map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect()).collect())
    }
}

impl TryFrom<Vec<Vec<f64>>> for Simplex {
    type Error = Error;

    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<Vec<f64>> {
    fn from(s: Simplex) -> Self {
        s.vertices
    }
}

/// Barycentric coordinates of a point relative to some simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct BaryPoint(Vec<f64>);

impl BaryPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let sum: f64 = coords.iter().sum();
        if (sum - 1.0).abs() > BARY_TOL {
            return Err(Error::NotNormalized(sum));
        }
        Ok(Self(coords))
    }

    /// Point of the reference triangle from its Cartesian `(s₂, s₃)`.
    pub fn from_domain(s2: f64, s3: f64) -> Self {
        Self(vec![1.0 - s2 - s3, s2, s3])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_inside(&self) -> bool {
        self.0.iter().all(|&b| b >= -BARY_TOL)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for BaryPoint {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// Deterministic tetrahedron enclosing `points`: pad the bounding box by 10%
/// of its largest extent (at least 1) and take the corner simplex with legs
/// three times the padded extent.
pub fn auto_tetrahedron(points: &[[f64; 3]]) -> Result<Simplex> {
    let first = points.first().ok_or_else(|| Error::InvalidArgument("no points to enclose".into()))?;
    let mut lo = *first;
    let mut hi = *first;
    for p in points {
        for c in 0..3 {
            lo[c] = lo[c].min(p[c]);
            hi[c] = hi[c].max(p[c]);
        }
    }
    let extent = (0..3).map(|c| hi[c] - lo[c]).fold(0.0f64, f64::max);
    let pad = (0.1 * extent).max(1.0);
    let corner = [lo[0] - pad, lo[1] - pad, lo[2] - pad];
    let leg = 3.0 * (extent + 2.0 * pad);
    let [x, y, z] = corner;
    Simplex::tetrahedron([[x, y, z], [x + leg, y, z], [x, y + leg, z], [x, y, z + leg]])
}

fn homogeneous_matrix(vertices: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = vertices.len();
    let mut m = vec![vec![0.0; n]; n];
    for (j, v) in vertices.iter().enumerate() {
        for (i, &c) in v.iter().enumerate() {
            m[i][j] = c;
        }
        m[n - 1][j] = 1.0;
    }
    m
}

/// Gaussian elimination with partial pivoting on magnitude.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve_pivoted<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r][col].magnitude().total_cmp(&a[s][col].magnitude()))?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let f = a[row][col].clone() / a[col][col].clone();
            for k in col..n {
                let v = a[row][k].clone() - f.clone() * a[col][k].clone();
                a[row][k] = v;
            }
            let v = b[row].clone() - f * b[col].clone();
            b[row] = v;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc = acc - a[row][k].clone() * x[k].clone();
        }
        x[row] = acc / a[row][row].clone();
    }
    Some(x)
}

#[allow(clippy::needless_range_loop)]
fn determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs())).unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    det
}

fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(solve_pivoted(m.to_vec(), e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}
