//! Dense matrices with a one-sided Jacobi SVD and a cyclic Jacobi
//! symmetric eigensolver. Sizes here stay in the low hundreds.

use std::fmt;

use crate::scalar::Scalar;
use crate::{Error, Result};

pub const SVD_TOL: f64 = 1e-14;
pub const SVD_MAX_SWEEPS: usize = 30;
const EIGEN_MAX_SWEEPS: usize = 50;

/// Singular values closer than this to the minimum count as tied with it.
pub const TIE_TOL: f64 = 1e-8;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        Ok(Self { rows: n, cols, data })
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.len() });
            }
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn matmul(&self, other: &DenseMatrix<T>) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(T::zero(), |a, (m, v)| a + m.clone() * v.clone()))
            .collect())
    }

    pub fn add(&self, other: &DenseMatrix<T>) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[&DenseMatrix<T>]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: b.cols });
            }
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Ok(Self { rows, cols, data })
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows).map(|i| self.row(i).iter().fold(T::zero(), |a, v| a + v.clone())).collect()
    }

    pub fn sum(&self) -> T {
        self.data.iter().fold(T::zero(), |a, v| a + v.clone())
    }

    pub fn to_f64(&self) -> DenseMatrix<f64> {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::to_f64).collect() }
    }

    pub fn map<F: Fn(&T) -> T>(&self, f: F) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl DenseMatrix<f64> {
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix<f64>) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Relative asymmetry `max|aᵢⱼ − aⱼᵢ| / max|aᵢⱼ|`.
    pub fn asymmetry(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst / scale
    }
}

impl<T: Scalar> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{:>10.5}", v.to_f64())).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Singular values in descending order with right (and left) singular
/// vectors.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub singular_values: Vec<f64>,
    /// `n × n`; column `j` pairs with `singular_values[j]`.
    pub v: DenseMatrix<f64>,
    /// `m × n`; columns with zero singular value are left at zero.
    pub u: DenseMatrix<f64>,
    pub sweeps: usize,
}

impl SvdResult {
    pub fn right_vector(&self, j: usize) -> Vec<f64> {
        self.v.column(j)
    }

    pub fn sigma_min(&self) -> f64 {
        *self.singular_values.last().expect("non-empty")
    }

    /// Indices with `σⱼ − σ_min ≤ TIE_TOL · σ_max`, smallest first.
    pub fn min_candidates(&self) -> Vec<usize> {
        let min = self.sigma_min();
        let tol = TIE_TOL * self.singular_values[0];
        (0..self.singular_values.len()).rev().filter(|&j| self.singular_values[j] - min <= tol).collect()
    }
}

/// One-sided (Hestenes) Jacobi SVD with cyclic column-pair sweeps.
pub fn svd(a: &DenseMatrix<f64>) -> Result<SvdResult> {
    if a.rows == 0 || a.cols == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    a.check_finite()?;
    let (m, n) = (a.rows, a.cols);
    // work column-major so rotations touch contiguous memory
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    // columns below this are numerically zero and left alone
    let negligible = (f64::EPSILON * a.frobenius_norm()).powi(2);
    let mut sweeps = 0;
    loop {
        if sweeps == SVD_MAX_SWEEPS {
            return Err(Error::NoConvergence("one-sided Jacobi SVD", SVD_MAX_SWEEPS));
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|x| x * x).sum();
                let beta: f64 = cols[q].iter().map(|x| x * x).sum();
                let gamma: f64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x * y).sum();
                if alpha <= negligible || beta <= negligible || gamma.abs() <= SVD_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut cols, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));
    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let vm = DenseMatrix::from_columns(n, &order.iter().map(|&j| v[j].clone()).collect::<Vec<_>>())?;
    let ucols: Vec<Vec<f64>> = order
        .iter()
        .map(|&j| if norms[j] > 0.0 { cols[j].iter().map(|x| x / norms[j]).collect() } else { vec![0.0; m] })
        .collect();
    let um = DenseMatrix::from_columns(m, &ucols)?;
    Ok(SvdResult { singular_values, v: vm, u: um, sweeps })
}

fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Eigenvalues in ascending order and matching orthonormal eigenvectors
/// (as columns).
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix<f64>,
}

impl SymmetricEigen {
    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.column(j)
    }

    /// Ties for the smallest eigenvalue of a positive semi-definite matrix,
    /// judged on the singular-value scale: `√λⱼ − √λ_min ≤ TIE_TOL · √λ_max`
    /// (negative rounding residue counts as zero).
    pub fn min_candidates(&self) -> Vec<usize> {
        let root = |v: f64| v.max(0.0).sqrt();
        let min = root(self.values[0]);
        let tol = TIE_TOL * root(*self.values.last().expect("non-empty"));
        (0..self.values.len()).filter(|&j| root(self.values[j]) - min <= tol).collect()
    }
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigen(a: &DenseMatrix<f64>) -> Result<SymmetricEigen> {
    if a.rows != a.cols || a.rows == 0 {
        return Err(Error::DimensionMismatch { expected: a.rows, found: a.cols });
    }
    a.check_finite()?;
    let asym = a.asymmetry();
    if asym > 1e-12 {
        return Err(Error::NotSymmetric(asym));
    }
    let n = a.rows;
    let mut w: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| 0.5 * (a.get(i, j) + a.get(j, i))).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let floor = 1e-18 * a.frobenius_norm();
    let mut sweeps = 0;
    loop {
        if sweeps == EIGEN_MAX_SWEEPS {
            return Err(Error::NoConvergence("Jacobi eigensolver", EIGEN_MAX_SWEEPS));
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = w[p][q];
                if apq.abs() <= floor || apq.abs() <= 1e-15 * (w[p][p] * w[q][q]).abs().sqrt() {
                    continue;
                }
                rotated = true;
                let theta = (w[q][q] - w[p][p]) / (2.0 * apq);
                let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (wkp, wkq) = (w[k][p], w[k][q]);
                    w[k][p] = c * wkp - s * wkq;
                    w[k][q] = s * wkp + c * wkq;
                }
                for k in 0..n {
                    let (wpk, wqk) = (w[p][k], w[q][k]);
                    w[p][k] = c * wpk - s * wqk;
                    w[q][k] = s * wpk + c * wqk;
                }
                w[p][q] = 0.0;
                w[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[i][i].total_cmp(&w[j][j]).then(i.cmp(&j)));
    let values = order.iter().map(|&j| w[j][j]).collect();
    let columns: Vec<Vec<f64>> = order.iter().map(|&j| (0..n).map(|i| v[i][j]).collect()).collect();
    Ok(SymmetricEigen { values, vectors: DenseMatrix::from_columns(n, &columns)? })
}

/// Lower-triangular Cholesky factor; fails unless the matrix is positive
/// definite.
pub fn cholesky(a: &DenseMatrix<f64>) -> Result<DenseMatrix<f64>> {
    if a.rows != a.cols {
        return Err(Error::DimensionMismatch { expected: a.rows, found: a.cols });
    }
    let n = a.rows;
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = *a.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::DegenerateMatrix("not positive definite"));
        }
        let djj = d.sqrt();
        l.set(j, j, djj);
        for i in j + 1..n {
            let mut s = *a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / djj);
        }
    }
    Ok(l)
}

/// Flips `v` so that its first entry of (near-)largest magnitude is positive.
pub fn sign_normalize(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(lead) = v.iter().find(|x| x.abs() >= max * (1.0 - 1e-9)) {
        if *lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
