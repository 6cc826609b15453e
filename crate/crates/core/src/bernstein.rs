//! Scalar polynomials in Bernstein–Bézier form over a triangle (three
//! barycentric coordinates) or a tetrahedron (four).
//!
//! `p(β) = Σ_{|i|=n} c_i B_iⁿ(β)` with `B_iⁿ(β) = (n¦i) β^i`. Coefficients are
//! stored densely in canonical (descending lexicographic) order.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use crate::combinatorics::{self, BasisOrdering, MultiIndex};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Ordering and multinomial coefficients for one `(dim, degree)` pair.
#[derive(Debug)]
pub struct BasisData {
    pub ordering: BasisOrdering,
    pub multinomials: Vec<u128>,
}

/// Shared, lazily built basis table.
pub fn basis(dim: usize, degree: usize) -> Result<Arc<BasisData>> {
    type Cache = Mutex<HashMap<(usize, usize), Arc<BasisData>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().expect("basis cache").get(&(dim, degree)) {
        return Ok(b.clone());
    }
    let ordering = combinatorics::enumerate(dim, degree)?;
    let multinomials = ordering.iter().map(combinatorics::multinomial).collect::<Result<Vec<_>>>()?;
    let data = Arc::new(BasisData { ordering, multinomials });
    cache.lock().expect("basis cache").insert((dim, degree), data.clone());
    Ok(data)
}

/// Values `B_iⁿ(β)` of every basis function, in canonical order.
///
/// `β` need not sum to one: the forms are homogeneous of degree `n`.
pub fn basis_values(degree: usize, beta: &[f64]) -> Result<Vec<f64>> {
    let data = basis(beta.len(), degree)?;
    let powers: Vec<Vec<f64>> = beta
        .iter()
        .map(|&b| {
            let mut p = Vec::with_capacity(degree + 1);
            let mut acc = 1.0;
            for _ in 0..=degree {
                p.push(acc);
                acc *= b;
            }
            p
        })
        .collect();
    Ok(data
        .ordering
        .iter()
        .zip(&data.multinomials)
        .map(|(i, &c)| i.entries().iter().enumerate().fold(c as f64, |acc, (k, &e)| acc * powers[k][e as usize]))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinPoly<T = f64> {
    dim: usize,
    degree: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> BernsteinPoly<T> {
    pub fn new(dim: usize, degree: usize, coeffs: Vec<T>) -> Result<Self> {
        let expected = basis(dim, degree)?.ordering.len();
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: coeffs.len() });
        }
        Ok(Self { dim, degree, coeffs })
    }

    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        let len = basis(dim, degree)?.ordering.len();
        Ok(Self { dim, degree, coeffs: vec![T::zero(); len] })
    }

    /// The constant function `value`, represented at the given degree.
    pub fn constant(dim: usize, degree: usize, value: T) -> Result<Self> {
        let len = basis(dim, degree)?.ordering.len();
        Ok(Self { dim, degree, coeffs: vec![value; len] })
    }

    /// The single basis function `B_iⁿ`.
    pub fn basis_function(index: &MultiIndex) -> Result<Self> {
        let mut p = Self::zero(index.dim(), index.degree())?;
        p.coeffs[combinatorics::rank(index)] = T::one();
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, index: &MultiIndex) -> Option<&T> {
        if index.dim() != self.dim || index.degree() != self.degree {
            return None;
        }
        self.coeffs.get(combinatorics::rank(index))
    }

    pub fn to_f64(&self) -> BernsteinPoly<f64> {
        BernsteinPoly { dim: self.dim, degree: self.degree, coeffs: self.coeffs.iter().map(Scalar::to_f64).collect() }
    }

    pub fn evaluate(&self, beta: &[f64]) -> Result<f64> {
        if beta.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: beta.len() });
        }
        let values = basis_values(self.degree, beta)?;
        Ok(self.coeffs.iter().zip(values).map(|(c, v)| c.to_f64() * v).sum())
    }

    /// Product via `Bᵢⁿ Bⱼᵐ = (n¦i)(m¦j)/(n+m¦i+j) · Bᵢ₊ⱼⁿ⁺ᵐ`; each ratio is
    /// reduced in exact integers before it enters the field.
    pub fn multiply(&self, other: &BernsteinPoly<T>) -> Result<BernsteinPoly<T>> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let degree = self.degree + other.degree;
        let left = basis(self.dim, self.degree)?;
        let right = basis(self.dim, other.degree)?;
        let target = basis(self.dim, degree)?;
        let mut out = vec![T::zero(); target.ordering.len()];
        for ((i, ci), &mi) in left.ordering.iter().zip(&self.coeffs).zip(&left.multinomials) {
            if ci.is_zero() {
                continue;
            }
            for ((j, cj), &mj) in right.ordering.iter().zip(&other.coeffs).zip(&right.multinomials) {
                if cj.is_zero() {
                    continue;
                }
                let k = *i + *j;
                let slot = combinatorics::rank(&k);
                let (num, den) = reduced_ratio(mi, mj, target.multinomials[slot], degree)?;
                let term = ci.clone() * cj.clone() * T::from_ratio(num, den);
                out[slot] = out[slot].clone() + term;
            }
        }
        Ok(BernsteinPoly { dim: self.dim, degree, coeffs: out })
    }

    /// Same function at degree `degree + by`.
    pub fn elevate(&self, by: usize) -> Result<BernsteinPoly<T>> {
        self.multiply(&BernsteinPoly::constant(self.dim, by, T::one())?)
    }

    pub fn pow(&self, e: u32) -> Result<BernsteinPoly<T>> {
        let mut acc = BernsteinPoly::constant(self.dim, 0, T::one())?;
        for _ in 0..e {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    pub fn scale(&self, s: &T) -> BernsteinPoly<T> {
        BernsteinPoly {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn linear_combination(terms: &[(T, &BernsteinPoly<T>)]) -> Result<BernsteinPoly<T>> {
        let (_, first) = terms.first().ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
        let mut out = BernsteinPoly::<T>::zero(first.dim, first.degree)?;
        for (s, p) in terms {
            if p.dim != first.dim {
                return Err(Error::DimensionMismatch { expected: first.dim, found: p.dim });
            }
            if p.degree != first.degree {
                return Err(Error::DegreeMismatch { expected: first.degree, found: p.degree });
            }
            for (o, c) in out.coeffs.iter_mut().zip(&p.coeffs) {
                *o = o.clone() + s.clone() * c.clone();
            }
        }
        Ok(out)
    }

    /// Exact integral over the reference triangle (area ½):
    /// `Σ cᵢ / ((n+1)(n+2))`.
    pub fn integrate_triangle(&self) -> Result<T> {
        if self.dim != 3 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        let n = self.degree as u128;
        let sum = self.coeffs.iter().fold(T::zero(), |a, c| a + c.clone());
        Ok(sum * T::from_ratio(1, (n + 1) * (n + 2)))
    }

    pub fn coeff_sum(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |a, c| a + c.clone())
    }

    /// The polar form evaluated at `degree` points, by de Casteljau steps
    /// with a different argument at each level.
    pub fn blossom(&self, args: &[&[T]]) -> Result<T> {
        if args.len() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: args.len() });
        }
        let mut level = self.coeffs.clone();
        for (r, a) in args.iter().enumerate() {
            if a.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: a.len() });
            }
            let lower = basis(self.dim, self.degree - r - 1)?;
            level = lower
                .ordering
                .iter()
                .map(|j| {
                    (0..self.dim).fold(T::zero(), |acc, k| {
                        let up = *j + MultiIndex::unit(self.dim, k).expect("valid unit index");
                        acc + a[k].clone() * level[combinatorics::rank(&up)].clone()
                    })
                })
                .collect();
        }
        Ok(level.pop().expect("degree-0 level has one entry"))
    }

    /// `t ↦ p(Σₖ tₖ cₖ)`: the same polynomial over the simplex whose
    /// vertices have barycentric coordinates `corners`.
    pub fn reparametrize(&self, corners: &[Vec<T>]) -> Result<BernsteinPoly<T>> {
        if corners.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: corners.len() });
        }
        let data = basis(self.dim, self.degree)?;
        let coeffs = data
            .ordering
            .iter()
            .map(|i| {
                let args: Vec<&[T]> =
                    (0..self.dim).flat_map(|k| std::iter::repeat_n(corners[k].as_slice(), i.get(k) as usize)).collect();
                self.blossom(&args)
            })
            .collect::<Result<_>>()?;
        Ok(BernsteinPoly { dim: self.dim, degree: self.degree, coeffs })
    }
}

/// `a·b / c` reduced so that the numerator product cannot overflow early.
pub(crate) fn reduced_ratio(a: u128, b: u128, c: u128, degree: usize) -> Result<(u128, u128)> {
    let g1 = a.gcd(&c);
    let (a, c) = (a / g1, c / g1);
    let g2 = b.gcd(&c);
    let (b, c) = (b / g2, c / g2);
    Ok((a.checked_mul(b).ok_or(Error::Overflow(degree))?, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e).unwrap()
    }

    fn random_beta(rng: &mut impl Rng, d: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..1.0)).collect();
        let s: f64 = raw.iter().sum();
        raw.iter().map(|r| r / s).collect()
    }

    fn random_poly(rng: &mut impl Rng, d: usize, n: usize) -> BernsteinPoly {
        let len = basis(d, n).unwrap().ordering.len();
        BernsteinPoly::new(d, n, (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let one = BernsteinPoly::constant(3, 5, 1.0).unwrap();
        assert!((one.evaluate(&[0.2, 0.3, 0.5]).unwrap() - 1.0).abs() < 1e-15);
        let b200: BernsteinPoly = BernsteinPoly::basis_function(&mi(&[2, 0, 0])).unwrap();
        assert_eq!(b200.evaluate(&[1.0, 0.0, 0.0]).unwrap(), 1.0);
        let third = 1.0 / 3.0;
        assert!((b200.evaluate(&[third, third, third]).unwrap() - 1.0 / 9.0).abs() < 1e-16);
        assert!(matches!(b200.evaluate(&[1.0, 0.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn product_rule_examples() {
        let b200: BernsteinPoly<Rational> = BernsteinPoly::basis_function(&mi(&[2, 0, 0])).unwrap();
        let b020: BernsteinPoly<Rational> = BernsteinPoly::basis_function(&mi(&[0, 2, 0])).unwrap();
        let p = b200.multiply(&b020).unwrap();
        assert_eq!(p.degree(), 4);
        assert_eq!(p.coeff(&mi(&[2, 2, 0])), Some(&ratio(1, 6)));
        assert_eq!(p.coeff_sum(), ratio(1, 6));
        let sq = b200.multiply(&b200).unwrap();
        assert_eq!(sq, BernsteinPoly::basis_function(&mi(&[4, 0, 0])).unwrap());
    }

    #[test]
    fn multiply_dimension_mismatch() {
        let a: BernsteinPoly = BernsteinPoly::constant(3, 1, 1.0).unwrap();
        let b: BernsteinPoly = BernsteinPoly::constant(4, 1, 1.0).unwrap();
        assert!(matches!(a.multiply(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn elevation_preserves_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in [3, 4] {
            let p = random_poly(&mut rng, d, 3);
            let q = p.elevate(2).unwrap();
            let same = p.multiply(&BernsteinPoly::constant(d, 0, 1.0).unwrap()).unwrap();
            assert_eq!(same, p);
            for _ in 0..20 {
                let b = random_beta(&mut rng, d);
                assert!((p.evaluate(&b).unwrap() - q.evaluate(&b).unwrap()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn integration_examples() {
        let b800: BernsteinPoly<Rational> = BernsteinPoly::basis_function(&mi(&[8, 0, 0])).unwrap();
        assert_eq!(b800.integrate_triangle().unwrap(), ratio(1, 90));
        for n in 0..10 {
            for i in basis(3, n).unwrap().ordering.iter() {
                let b: BernsteinPoly<Rational> = BernsteinPoly::basis_function(i).unwrap();
                assert_eq!(b.integrate_triangle().unwrap(), ratio(1, ((n + 1) * (n + 2)) as i64));
            }
        }
        let one: BernsteinPoly<Rational> = BernsteinPoly::constant(3, 3, ratio(1, 1)).unwrap();
        assert_eq!(one.integrate_triangle().unwrap(), ratio(1, 2));
        let tet: BernsteinPoly = BernsteinPoly::constant(4, 1, 1.0).unwrap();
        assert_eq!(tet.integrate_triangle(), Err(Error::UnsupportedDimension(4)));
    }

    #[test]
    fn linear_combinations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_poly(&mut rng, 3, 2);
        let q = random_poly(&mut rng, 3, 2);
        assert_eq!(BernsteinPoly::linear_combination(&[(1.0, &p), (0.0, &q)]).unwrap(), p);
        let z = BernsteinPoly::linear_combination(&[(1.0, &p), (-1.0, &p)]).unwrap();
        assert!(z.coeffs().iter().all(|&c| c == 0.0));
        let r = random_poly(&mut rng, 3, 3);
        assert!(matches!(
            BernsteinPoly::linear_combination(&[(1.0, &p), (1.0, &r)]),
            Err(Error::DegreeMismatch { .. })
        ));

        let b = |e: &[u32]| -> BernsteinPoly { BernsteinPoly::basis_function(&mi(e)).unwrap() };
        let (b011, b101, b110) = (b(&[0, 1, 1]), b(&[1, 0, 1]), b(&[1, 1, 0]));
        let fourth = BernsteinPoly::linear_combination(&[(1.0, &b011), (1.0, &b101), (1.0, &b110)]).unwrap();
        assert_eq!(fourth.coeffs(), &[0.0, 1.0, 1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn blossom_on_the_diagonal_is_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = BernsteinPoly::new(3, 3, (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let s = [0.2, 0.5, 0.3];
        let v = p.blossom(&[&s, &s, &s]).unwrap();
        assert!((v - p.evaluate(&s).unwrap()).abs() < 1e-15);
        // at the vertices the blossom returns the control coefficients
        let e: Vec<Vec<f64>> = (0..3).map(|k| (0..3).map(|j| if j == k { 1.0 } else { 0.0 }).collect()).collect();
        assert_eq!(
            p.blossom(&[&e[0], &e[1], &e[2]]).unwrap(),
            p.coeffs()[combinatorics::rank(&MultiIndex::new(&[1, 1, 1]).unwrap())]
        );
    }

    #[test]
    fn reparametrization_matches_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let p = BernsteinPoly::new(3, 4, (0..15).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let corners = vec![vec![0.6, 0.2, 0.2], vec![0.1, 0.8, 0.1], vec![0.3, 0.3, 0.4]];
        let q = p.reparametrize(&corners).unwrap();
        for _ in 0..20 {
            let a: f64 = rng.gen_range(0.0..1.0);
            let b: f64 = rng.gen_range(0.0..1.0 - a);
            let t = [a, b, 1.0 - a - b];
            let s: Vec<f64> = (0..3).map(|k| (0..3).map(|j| t[j] * corners[j][k]).sum()).collect();
            assert!((q.evaluate(&t).unwrap() - p.evaluate(&s).unwrap()).abs() < 1e-14);
        }
        let exact = BernsteinPoly::<Rational>::basis_function(&MultiIndex::new(&[2, 0, 0]).unwrap()).unwrap();
        let half = vec![
            vec![ratio(1, 1), ratio(0, 1), ratio(0, 1)],
            vec![ratio(1, 2), ratio(1, 2), ratio(0, 1)],
            vec![ratio(1, 2), ratio(0, 1), ratio(1, 2)],
        ];
        // s₁² on the corner quarter: coefficients 1, ½, ½, ¼, ¼, ¼
        let sub = exact.reparametrize(&half).unwrap();
        assert_eq!(sub.coeffs(), &[ratio(1, 1), ratio(1, 2), ratio(1, 2), ratio(1, 4), ratio(1, 4), ratio(1, 4)]);
    }

    #[test]
    fn partition_of_unity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [3, 4] {
            for n in 0..=8 {
                for _ in 0..100 {
                    let b = random_beta(&mut rng, d);
                    let total: f64 = basis_values(n, &b).unwrap().iter().sum();
                    assert!((total - 1.0).abs() < 1e-13);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn product_evaluates_to_product(seed in any::<u64>(), d in 3usize..=4, n in 0usize..5, m in 0usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_poly(&mut rng, d, n);
            let q = random_poly(&mut rng, d, m);
            let pq = p.multiply(&q).unwrap();
            let b = random_beta(&mut rng, d);
            let expected = p.evaluate(&b).unwrap() * q.evaluate(&b).unwrap();
            let got = pq.evaluate(&b).unwrap();
            prop_assert!((got - expected).abs() <= 1e-12 * expected.abs().max(1.0));
        }
    }
}
