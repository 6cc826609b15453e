//! Original and weak approximate implicitization.
//!
//! For a patch whose tetrahedral barycentric coordinates are the degree-`n`
//! triangular polynomials `p(s)`, and an implicit `q(u) = Σ_{|i|=m} bᵢ Bᵢᵐ(u)`,
//!
//! ```text
//! Bᵢᵐ(p(s)) = Σ_{|j|=mn} d_{i,j} Bⱼᵐⁿ(s)      so      q(p(s)) = Bᵐⁿ(s)ᵀ D b.
//! ```
//!
//! `D` has one row per `|j| = mn` and one column per `|i| = m`. The original
//! method takes `b` as the right singular vector of `σ_min(D)`; since the
//! Bernstein basis is a non-negative partition of unity,
//! `max_Ω |q(p(s))| ≤ ‖Db‖ = σ_min`.
//!
//! The weak method minimizes `∫_Ω q(p(s))² = bᵀ M b` with `M = DᵀAD`, where
//! `A` is the Gram matrix of the degree-`mn` triangular basis. Element-wise,
//! `m_{i,j} = (m¦i)(m¦j)/(2m¦i+j) · ∫_Ω B_{i+j}^{2m}(p(s)) ds`, so only the
//! `C(2m+3,3)` integrals over `|k| = 2m` are ever needed.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barycentric::{Simplex, DOMAIN_AREA};
use crate::bernstein::{basis, basis_values, reduced_ratio, BernsteinPoly};
use crate::combinatorics::{self, MultiIndex};
use crate::linalg::{self, DenseMatrix};
use crate::patch::BarycentricPatch;
use crate::quadrature::QuadratureRule;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Tolerance for matching reference tetrahedra across inputs.
const SIMPLEX_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Original,
    WeakExact,
    WeakNumeric,
    Combined,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Original => "original",
            Method::WeakExact => "weak-exact",
            Method::WeakNumeric => "weak-numeric",
            Method::Combined => "combined",
        })
    }
}

/// The composition matrix `D`, possibly stacked over several patches.
#[derive(Clone, Debug)]
pub struct DMatrix<T: Scalar = f64> {
    m: usize,
    patch_degrees: Vec<usize>,
    tetrahedron: Simplex,
    matrix: DenseMatrix<T>,
}

impl<T: Scalar> DMatrix<T> {
    pub fn implicit_degree(&self) -> usize {
        self.m
    }

    /// Degree of each stacked patch, in stacking order.
    pub fn patch_degrees(&self) -> &[usize] {
        &self.patch_degrees
    }

    pub fn tetrahedron(&self) -> &Simplex {
        &self.tetrahedron
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix {
            m: self.m,
            patch_degrees: self.patch_degrees.clone(),
            tetrahedron: self.tetrahedron.clone(),
            matrix: self.matrix.to_f64(),
        }
    }
}

/// Gram matrix of the degree-`mn` triangular Bernstein basis over `Ω`.
#[derive(Clone, Debug)]
pub struct GramMatrixA<T: Scalar = f64> {
    mn: usize,
    matrix: DenseMatrix<T>,
}

impl<T: Scalar> GramMatrixA<T> {
    pub fn degree(&self) -> usize {
        self.mn
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }
}

/// The weak-method matrix `M`, possibly summed over several patches.
#[derive(Clone, Debug)]
pub struct MMatrix<T: Scalar = f64> {
    m: usize,
    patches: usize,
    tetrahedron: Simplex,
    matrix: DenseMatrix<T>,
}

impl<T: Scalar> MMatrix<T> {
    pub fn implicit_degree(&self) -> usize {
        self.m
    }

    pub fn patches(&self) -> usize {
        self.patches
    }

    pub fn tetrahedron(&self) -> &Simplex {
        &self.tetrahedron
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn to_f64(&self) -> MMatrix<f64> {
        MMatrix {
            m: self.m,
            patches: self.patches,
            tetrahedron: self.tetrahedron.clone(),
            matrix: self.matrix.to_f64(),
        }
    }
}

/// Columns `Bᵢᵐ(p(s))` for every `|i| = m`, computed as
/// `(m¦i) · Πₖ pₖ(s)^{iₖ}` by repeated Bernstein multiplication.
pub fn build_d<T: Scalar>(bp: &BarycentricPatch<T>, m: usize) -> Result<DMatrix<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("implicit degree must be at least 1".into()));
    }
    let n = bp.degree();
    let powers = coordinate_powers(bp, m)?;
    let tet = basis(4, m)?;
    let rows = basis(3, m * n)?.ordering.len();
    let columns: Vec<Vec<T>> = tet
        .ordering
        .indices()
        .par_iter()
        .zip(tet.multinomials.par_iter())
        .map(|(i, &c)| composed_basis(&powers, i, c).map(BernsteinPoly::into_coeffs))
        .collect::<Result<_>>()?;
    Ok(DMatrix {
        m,
        patch_degrees: vec![n],
        tetrahedron: bp.tetrahedron().clone(),
        matrix: DenseMatrix::from_columns(rows, &columns)?,
    })
}

/// `powers[k][e] = pₖ(s)^e` for `e = 0..=max`.
fn coordinate_powers<T: Scalar>(bp: &BarycentricPatch<T>, max: usize) -> Result<Vec<Vec<BernsteinPoly<T>>>> {
    bp.coords()
        .iter()
        .map(|p| {
            let mut out = vec![BernsteinPoly::constant(3, 0, T::one())?];
            for e in 0..max {
                out.push(out[e].multiply(p)?);
            }
            Ok(out)
        })
        .collect()
}

fn composed_basis<T: Scalar>(
    powers: &[Vec<BernsteinPoly<T>>],
    i: &MultiIndex,
    multinomial: u128,
) -> Result<BernsteinPoly<T>> {
    let mut acc = powers[0][i.get(0) as usize].clone();
    for k in 1..4 {
        acc = acc.multiply(&powers[k][i.get(k) as usize])?;
    }
    Ok(acc.scale(&T::from_ratio(multinomial, 1)))
}

/// `a_{i,j} = (mn¦i)(mn¦j)/(2mn¦i+j) · 1/((2mn+1)(2mn+2))`.
pub fn build_a<T: Scalar>(mn: usize) -> Result<GramMatrixA<T>> {
    if mn == 0 {
        return Err(Error::InvalidArgument("Gram degree must be at least 1".into()));
    }
    let tri = basis(3, mn)?;
    let size = tri.ordering.len();
    let top = (2 * mn) as u128;
    let area_factor = T::from_ratio(1, (top + 1) * (top + 2));
    let doubled = basis(3, 2 * mn)?;
    let mut a = DenseMatrix::zeros(size, size);
    for (r, (i, &ci)) in tri.ordering.iter().zip(&tri.multinomials).enumerate() {
        for (c, (j, &cj)) in tri.ordering.iter().zip(&tri.multinomials).enumerate().skip(r) {
            let k = combinatorics::rank(&(*i + *j));
            let (num, den) = reduced_ratio(ci, cj, doubled.multinomials[k], 2 * mn)?;
            let v = T::from_ratio(num, den) * area_factor.clone();
            a.set(r, c, v.clone());
            a.set(c, r, v);
        }
    }
    Ok(GramMatrixA { mn, matrix: a })
}

/// `M = DᵀAD` for a single-patch `D`.
pub fn build_m_exact<T: Scalar>(d: &DMatrix<T>, a: &GramMatrixA<T>) -> Result<MMatrix<T>> {
    if d.patch_degrees.len() != 1 {
        return Err(Error::InvalidArgument("stacked D has no single Gram matrix; sum per-patch M instead".into()));
    }
    let mn = d.m * d.patch_degrees[0];
    if a.mn != mn {
        return Err(Error::DegreeMismatch { expected: mn, found: a.mn });
    }
    let ad = a.matrix.matmul(&d.matrix)?;
    let m = d.matrix.transpose().matmul(&ad)?;
    Ok(MMatrix { m: d.m, patches: 1, tetrahedron: d.tetrahedron.clone(), matrix: m })
}

/// How the `C(2m+3,3)` integrals of the element-wise construction are done.
#[derive(Clone, Copy, Debug)]
pub enum IntegralSource<'a> {
    /// Expand `B_k^{2m}(p(s))` in Bernstein form and sum its coefficients.
    Exact,
    /// Sum evaluations at the nodes of the rule.
    Quadrature(&'a QuadratureRule),
}

/// Element-wise `M` together with bookkeeping.
#[derive(Clone, Debug)]
pub struct ElementwiseM<T: Scalar = f64> {
    pub matrix: MMatrix<T>,
    /// Number of distinct integrals that were evaluated.
    pub integrals: usize,
    pub warnings: Vec<String>,
}

pub fn build_m_elementwise<T: Scalar>(
    bp: &BarycentricPatch<T>,
    m: usize,
    source: IntegralSource<'_>,
) -> Result<ElementwiseM<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("implicit degree must be at least 1".into()));
    }
    let counter = AtomicUsize::new(0);
    let doubled = basis(4, 2 * m)?;
    let mut warnings = Vec::new();
    let integrals: Vec<T> = match source {
        IntegralSource::Exact => {
            let powers = coordinate_powers(bp, 2 * m)?;
            doubled
                .ordering
                .indices()
                .par_iter()
                .zip(doubled.multinomials.par_iter())
                .map(|(k, &c)| {
                    counter.fetch_add(1, Ordering::Relaxed);
                    composed_basis(&powers, k, c)?.integrate_triangle()
                })
                .collect::<Result<_>>()?
        }
        IntegralSource::Quadrature(rule) => {
            let needed = 2 * m * bp.degree();
            if rule.exactness() < needed {
                warnings.push(insufficient_rule_warning(rule.exactness(), needed));
            }
            let f = bp.to_f64();
            let samples = rule.nodes().iter().map(|s| f.evaluate(s)).collect::<Result<Vec<_>>>()?;
            quadrature_integrals(rule, &samples, m, &counter)?.into_iter().map(T::from_f64).collect()
        }
    };
    let matrix = assemble_m(m, &integrals)?;
    Ok(ElementwiseM {
        matrix: MMatrix { m, patches: 1, tetrahedron: bp.tetrahedron().clone(), matrix },
        integrals: counter.into_inner(),
        warnings,
    })
}

/// Weak `M` for a surface known only through an evaluator
/// `s ↦ (u₁,u₂,u₃,u₄)` returning tetrahedral barycentric coordinates.
/// `equivalent_degree` is the polynomial degree the evaluator is treated as
/// having when checking the rule's exactness.
pub fn build_m_procedural<F>(
    eval: F,
    tetrahedron: &Simplex,
    m: usize,
    equivalent_degree: usize,
    rule: &QuadratureRule,
) -> Result<ElementwiseM<f64>>
where
    F: Fn(&[f64; 3]) -> [f64; 4] + Sync,
{
    if m == 0 {
        return Err(Error::InvalidArgument("implicit degree must be at least 1".into()));
    }
    let mut warnings = Vec::new();
    let needed = 2 * m * equivalent_degree;
    if rule.exactness() < needed {
        warnings.push(insufficient_rule_warning(rule.exactness(), needed));
    }
    let samples: Vec<[f64; 4]> = rule
        .nodes()
        .par_iter()
        .map(|s| {
            let u = eval(s);
            let sum: f64 = u.iter().sum();
            if (sum - 1.0).abs() > 1e-8 || u.iter().any(|v| !v.is_finite()) {
                Err(Error::NotNormalized(sum))
            } else {
                Ok(u)
            }
        })
        .collect::<Result<_>>()?;
    let counter = AtomicUsize::new(0);
    let integrals = quadrature_integrals(rule, &samples, m, &counter)?;
    Ok(ElementwiseM {
        matrix: MMatrix { m, patches: 1, tetrahedron: tetrahedron.clone(), matrix: assemble_m(m, &integrals)? },
        integrals: counter.into_inner(),
        warnings,
    })
}

fn insufficient_rule_warning(have: usize, need: usize) -> String {
    format!("quadrature exact to degree {have} but the integrand has degree {need}; M is approximate")
}

/// `∫ B_k^{2m}(u(s)) ds` for every `|k| = 2m`, each summed over the nodes in
/// rule order.
fn quadrature_integrals(
    rule: &QuadratureRule,
    samples: &[[f64; 4]],
    m: usize,
    counter: &AtomicUsize,
) -> Result<Vec<f64>> {
    let values: Vec<Vec<f64>> = samples.par_iter().map(|u| basis_values(2 * m, u)).collect::<Result<_>>()?;
    let count = basis(4, 2 * m)?.ordering.len();
    Ok((0..count)
        .into_par_iter()
        .map(|k| {
            counter.fetch_add(1, Ordering::Relaxed);
            values.iter().zip(rule.weights()).map(|(v, w)| w * v[k]).sum()
        })
        .collect())
}

/// `m_{i,j} = (m¦i)(m¦j)/(2m¦i+j) · I_{i+j}`.
fn assemble_m<T: Scalar>(m: usize, integrals: &[T]) -> Result<DenseMatrix<T>> {
    let tet = basis(4, m)?;
    let doubled = basis(4, 2 * m)?;
    let size = tet.ordering.len();
    let mut out = DenseMatrix::zeros(size, size);
    for (r, (i, &ci)) in tet.ordering.iter().zip(&tet.multinomials).enumerate() {
        for (c, (j, &cj)) in tet.ordering.iter().zip(&tet.multinomials).enumerate().skip(r) {
            let k = combinatorics::rank(&(*i + *j));
            let (num, den) = reduced_ratio(ci, cj, doubled.multinomials[k], 2 * m)?;
            let v = T::from_ratio(num, den) * integrals[k].clone();
            out.set(r, c, v.clone());
            out.set(c, r, v);
        }
    }
    Ok(out)
}

/// Vertical concatenation of per-patch `D` matrices sharing `m` and `Λ`.
pub fn stack_d<T: Scalar>(blocks: &[DMatrix<T>]) -> Result<DMatrix<T>> {
    let first = blocks.first().ok_or_else(|| Error::InvalidArgument("nothing to stack".into()))?;
    for b in blocks {
        if b.m != first.m {
            return Err(Error::ImplicitDegreeMismatch(first.m, b.m));
        }
        if !b.tetrahedron.approx_eq(&first.tetrahedron, SIMPLEX_TOL) {
            return Err(Error::SimplexMismatch);
        }
    }
    let mats: Vec<&DenseMatrix<T>> = blocks.iter().map(|b| &b.matrix).collect();
    Ok(DMatrix {
        m: first.m,
        patch_degrees: blocks.iter().flat_map(|b| b.patch_degrees.iter().copied()).collect(),
        tetrahedron: first.tetrahedron.clone(),
        matrix: DenseMatrix::vstack(&mats)?,
    })
}

/// Entry-wise sum of per-patch `M` matrices sharing `m` and `Λ`.
pub fn sum_m<T: Scalar>(parts: &[MMatrix<T>]) -> Result<MMatrix<T>> {
    let first = parts.first().ok_or_else(|| Error::InvalidArgument("nothing to sum".into()))?;
    let mut acc = first.matrix.clone();
    for p in &parts[1..] {
        if p.m != first.m {
            return Err(Error::ImplicitDegreeMismatch(first.m, p.m));
        }
        if !p.tetrahedron.approx_eq(&first.tetrahedron, SIMPLEX_TOL) {
            return Err(Error::SimplexMismatch);
        }
        acc = acc.add(&p.matrix)?;
    }
    Ok(MMatrix {
        m: first.m,
        patches: parts.iter().map(|p| p.patches).sum(),
        tetrahedron: first.tetrahedron.clone(),
        matrix: acc,
    })
}

/// Implicit polynomial in tetrahedral Bernstein form with unit coefficient
/// norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ApproxRecord", into = "ApproxRecord")]
pub struct ImplicitApprox {
    degree: usize,
    coefficients: Vec<f64>,
    tetrahedron: Simplex,
    sigma: f64,
    method: Method,
}

#[derive(Serialize, Deserialize)]
struct ApproxRecord {
    degree: usize,
    tetrahedron: Simplex,
    coefficients: Vec<f64>,
    sigma: f64,
    method: Method,
    ordering: String,
}

const ORDERING_TAG: &str = "descending-lex";

impl TryFrom<ApproxRecord> for ImplicitApprox {
    type Error = Error;

    fn try_from(r: ApproxRecord) -> Result<Self> {
        if r.ordering != ORDERING_TAG {
            return Err(Error::InvalidArgument(format!("unsupported coefficient ordering {:?}", r.ordering)));
        }
        ImplicitApprox::new(r.degree, r.coefficients, r.tetrahedron, r.sigma, r.method)
    }
}

impl From<ImplicitApprox> for ApproxRecord {
    fn from(a: ImplicitApprox) -> Self {
        ApproxRecord {
            degree: a.degree,
            tetrahedron: a.tetrahedron,
            coefficients: a.coefficients,
            sigma: a.sigma,
            method: a.method,
            ordering: ORDERING_TAG.into(),
        }
    }
}

impl ImplicitApprox {
    pub fn new(
        degree: usize,
        coefficients: Vec<f64>,
        tetrahedron: Simplex,
        sigma: f64,
        method: Method,
    ) -> Result<Self> {
        let expected = basis(4, degree)?.ordering.len();
        if coefficients.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: coefficients.len() });
        }
        if tetrahedron.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: tetrahedron.dim() });
        }
        let nrm = linalg::norm(&coefficients);
        if (nrm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("coefficient vector has norm {nrm}, expected 1")));
        }
        Ok(Self { degree, coefficients, tetrahedron, sigma, method })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn tetrahedron(&self) -> &Simplex {
        &self.tetrahedron
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn polynomial(&self) -> BernsteinPoly {
        BernsteinPoly::new(4, self.degree, self.coefficients.clone()).expect("validated length")
    }

    /// `q(u)` at (possibly homogeneous) tetrahedral coordinates.
    pub fn evaluate_barycentric(&self, u: &[f64]) -> Result<f64> {
        self.polynomial().evaluate(u)
    }

    /// `q(x)` at a Cartesian point.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        let u = self.tetrahedron.to_barycentric(x)?;
        self.evaluate_barycentric(u.coords())
    }

    /// Cartesian gradient `∇q(x)`: `∂q/∂uₖ = m Σ_{|j|=m−1} b_{j+eₖ} Bⱼᵐ⁻¹(u)`,
    /// chained through the affine map `x ↦ u`.
    pub fn gradient(&self, x: &[f64]) -> Result<[f64; 3]> {
        let u = self.tetrahedron.to_barycentric(x)?;
        let du = self.barycentric_partials(u.coords())?;
        let jac = self.tetrahedron.barycentric_jacobian();
        let mut g = [0.0; 3];
        for (k, row) in jac.iter().enumerate() {
            for c in 0..3 {
                g[c] += du[k] * row[c];
            }
        }
        let scale = linalg::norm(&du) * jac.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
        let gn = linalg::norm(&g);
        if scale == 0.0 || gn <= 1e-12 * scale {
            return Err(Error::SingularPoint);
        }
        Ok(g)
    }

    fn barycentric_partials(&self, u: &[f64]) -> Result<[f64; 4]> {
        let m = self.degree;
        let mut out = [0.0; 4];
        if m == 0 {
            return Ok(out);
        }
        let lower = basis(4, m - 1)?;
        let values = basis_values(m - 1, u)?;
        for (k, o) in out.iter_mut().enumerate() {
            let ek = MultiIndex::unit(4, k)?;
            *o = m as f64
                * lower
                    .ordering
                    .iter()
                    .zip(&values)
                    .map(|(j, v)| self.coefficients[combinatorics::rank(&(*j + ek))] * v)
                    .sum::<f64>();
        }
        Ok(out)
    }

    /// First-order distance proxy `|q(x)| / ‖∇q(x)‖`.
    pub fn distance_estimate(&self, x: &[f64]) -> Result<f64> {
        let q = self.evaluate(x)?;
        let g = self.gradient(x)?;
        Ok(q.abs() / linalg::norm(&g))
    }
}

/// A solve result: the chosen approximation, the full spectrum, and every
/// unit vector tied with the minimum.
#[derive(Clone, Debug)]
pub struct Solution {
    pub approx: ImplicitApprox,
    /// Singular values descending (original) or eigenvalues ascending (weak).
    pub spectrum: Vec<f64>,
    /// Candidate vectors for the minimum, the chosen one first.
    pub tied: Vec<Vec<f64>>,
}

impl Solution {
    pub fn multiplicity(&self) -> usize {
        self.tied.len()
    }
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let n = linalg::norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    linalg::sign_normalize(&mut v);
    v
}

/// Right singular vector of `σ_min(D)`.
pub fn solve_original(d: &DMatrix<f64>) -> Result<Solution> {
    let svd = linalg::svd(&d.matrix)?;
    let candidates = svd.min_candidates();
    let tied: Vec<Vec<f64>> = candidates.iter().map(|&j| normalized(svd.right_vector(j))).collect();
    let sigma = svd.sigma_min();
    Ok(Solution {
        approx: ImplicitApprox::new(d.m, tied[0].clone(), d.tetrahedron.clone(), sigma, Method::Original)?,
        spectrum: svd.singular_values,
        tied,
    })
}

/// Eigenvector of `λ_min(M)`. `method` records how `M` was built.
pub fn solve_weak(m: &MMatrix<f64>, method: Method) -> Result<Solution> {
    if m.matrix.max_abs() <= f64::MIN_POSITIVE {
        return Err(Error::DegenerateMatrix("M vanishes (zero-area patch)"));
    }
    let eig = linalg::symmetric_eigen(&m.matrix)?;
    let tied: Vec<Vec<f64>> = eig.min_candidates().iter().map(|&j| normalized(eig.vector(j))).collect();
    Ok(Solution {
        approx: ImplicitApprox::new(m.m, tied[0].clone(), m.tetrahedron.clone(), eig.values[0], method)?,
        spectrum: eig.values,
        tied,
    })
}

/// `w₁a + w₂b` renormalized, after flipping `b` if it opposes `a`.
/// `sigma` is left as the weighted combination of the two inputs' values.
pub fn combine(a: &ImplicitApprox, b: &ImplicitApprox, weights: [f64; 2]) -> Result<ImplicitApprox> {
    if a.degree != b.degree {
        return Err(Error::ImplicitDegreeMismatch(a.degree, b.degree));
    }
    if !a.tetrahedron.approx_eq(&b.tetrahedron, SIMPLEX_TOL) {
        return Err(Error::SimplexMismatch);
    }
    let flip = if linalg::dot(&a.coefficients, &b.coefficients) < 0.0 { -1.0 } else { 1.0 };
    let raw: Vec<f64> =
        a.coefficients.iter().zip(&b.coefficients).map(|(x, y)| weights[0] * x + weights[1] * flip * y).collect();
    let n = linalg::norm(&raw);
    if n < 1e-8 {
        return Err(Error::Cancellation(n));
    }
    let coefficients: Vec<f64> = raw.iter().map(|x| x / n).collect();
    let sigma = (weights[0].abs() * a.sigma + weights[1].abs() * b.sigma) / (weights[0].abs() + weights[1].abs());
    ImplicitApprox::new(a.degree, coefficients, a.tetrahedron.clone(), sigma, Method::Combined)
}

/// `q(p(s))` sampled on the triangular lattice of resolution `r`.
#[derive(Clone, Debug)]
pub struct ErrorField {
    pub resolution: usize,
    pub samples: Vec<ErrorSample>,
    pub max_abs: f64,
    /// Quadrature value of `∫_Ω q(p(s))² ds`.
    pub integral_sq: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorSample {
    /// Domain barycentric coordinates `(s₁, s₂, s₃)`.
    pub s: [f64; 3],
    pub value: f64,
    /// `|q|/‖∇q‖` at the surface point; `None` at singular points.
    pub distance: Option<f64>,
}

/// Lattice points `(i/r, j/r, k/r)` in canonical (descending lex) order.
pub fn domain_lattice(resolution: usize) -> Result<Vec<[f64; 3]>> {
    let r = resolution as f64;
    Ok(combinatorics::enumerate(3, resolution)?
        .iter()
        .map(|i| [i.get(0) as f64 / r, i.get(1) as f64 / r, i.get(2) as f64 / r])
        .collect())
}

pub fn algebraic_error(approx: &ImplicitApprox, bp: &BarycentricPatch<f64>, resolution: usize) -> Result<ErrorField> {
    if resolution < 1 {
        return Err(Error::InvalidArgument("grid resolution must be positive".into()));
    }
    if !approx.tetrahedron.approx_eq(bp.tetrahedron(), SIMPLEX_TOL) {
        return Err(Error::SimplexMismatch);
    }
    let q = approx.polynomial();
    let mut samples = Vec::new();
    let mut max_abs = 0.0f64;
    for s in domain_lattice(resolution)? {
        let u = bp.evaluate(&s)?;
        let value = q.evaluate(&u)?;
        max_abs = max_abs.max(value.abs());
        let x = bp.cartesian(&s)?;
        let distance = approx.gradient(&x).ok().map(|g| value.abs() / linalg::norm(&g));
        samples.push(ErrorSample { s, value, distance });
    }
    let rule = QuadratureRule::build((2 * approx.degree * bp.degree()).min(crate::quadrature::MAX_EXACTNESS))?;
    let mut integral_sq = 0.0;
    for (s, w) in rule.nodes().iter().zip(rule.weights()) {
        let v = q.evaluate(&bp.evaluate(s)?)?;
        integral_sq += w * v * v;
    }
    Ok(ErrorField { resolution, samples, max_abs, integral_sq })
}

/// Weak solve through the Cholesky factor `A = LLᵀ`: the singular values
/// of `LᵀD` are the square roots of the eigenvalues of `M = DᵀAD`, and the
/// SVD resolves them to `ε·‖LᵀD‖` rather than `ε·‖M‖`.
pub fn solve_weak_factored(d: &DMatrix<f64>, a: &GramMatrixA<f64>) -> Result<Solution> {
    if d.patch_degrees.len() != 1 {
        return Err(Error::InvalidArgument("factored weak solve needs a single-patch D".into()));
    }
    let mn = d.m * d.patch_degrees[0];
    if a.mn != mn {
        return Err(Error::DegreeMismatch { expected: mn, found: a.mn });
    }
    let l = linalg::cholesky(&a.matrix)?;
    let svd = linalg::svd(&l.transpose().matmul(&d.matrix)?)?;
    let tied: Vec<Vec<f64>> = svd.min_candidates().iter().map(|&j| normalized(svd.right_vector(j))).collect();
    let mut spectrum: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    spectrum.reverse();
    Ok(Solution {
        approx: ImplicitApprox::new(d.m, tied[0].clone(), d.tetrahedron.clone(), spectrum[0], Method::WeakExact)?,
        spectrum,
        tied,
    })
}

/// One refinement level of the convergence experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceLevel {
    /// Diameter of the subdomain in `(s₂, s₃)` coordinates.
    pub h: f64,
    /// `√(λ_min / area)`: root-mean-square algebraic error of the best weak
    /// approximation on the subdomain.
    pub rms: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub levels: Vec<ConvergenceLevel>,
    /// `log₂(e_k / e_{k+1})` per consecutive pair; `+∞` once the error is at
    /// rounding level.
    pub orders: Vec<f64>,
}

/// RMS error below which a level counts as exact.
pub const EXACT_RMS: f64 = 1e-13;

/// Weak approximation on the nested subtriangles
/// `centroid + 2⁻ᵏ (corner − centroid)`, `k = 0..levels`, with `Λ` held fixed.
/// Each subpatch is reparametrized onto `Ω`, so its mean square error is
/// `λ_min / area(Ω)`.
pub fn convergence_experiment(bp: &BarycentricPatch<f64>, m: usize, levels: usize) -> Result<ConvergenceReport> {
    if levels < 3 {
        return Err(Error::InvalidArgument("need at least 3 levels".into()));
    }
    let a = build_a::<f64>(m * bp.degree())?;
    let third = 1.0 / 3.0;
    let corners = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let out = (0..levels)
        .map(|k| {
            let f = 0.5f64.powi(k as i32);
            let sub = bp.restrict(&corners.map(|c| c.map(|v| third + f * (v - third))))?;
            let lambda = solve_weak_factored(&build_d(&sub, m)?, &a)?.approx.sigma;
            Ok(ConvergenceLevel { h: std::f64::consts::SQRT_2 * f, rms: (lambda / DOMAIN_AREA).max(0.0).sqrt() })
        })
        .collect::<Result<Vec<_>>>()?;
    let orders = out
        .windows(2)
        .map(
            |w| if w[0].rms < EXACT_RMS || w[1].rms < EXACT_RMS { f64::INFINITY } else { (w[0].rms / w[1].rms).log2() },
        )
        .collect();
    Ok(ConvergenceReport { levels: out, orders })
}
