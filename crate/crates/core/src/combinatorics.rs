//! Multi-indices, the canonical basis ordering, and exact multinomials.
//!
//! Basis functions of degree `n` over a simplex with `d` barycentric
//! coordinates are labelled by multi-indices `i = (i₁, …, i_d)` with
//! `|i| = n`. They are always listed in *descending* lexicographic order:
//! `(n,0,…,0)` first and `(0,…,0,n)` last.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_integer::Integer;

use crate::{Error, Result};

/// Largest total degree for which combinatorial quantities are guaranteed
/// to fit the exact integer representation.
pub const MAX_DEGREE: usize = 40;

/// Exponent tuple of length 3 (triangle) or 4 (tetrahedron).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    dim: u8,
    entries: [u32; 4],
}

impl MultiIndex {
    pub fn new(entries: &[u32]) -> Result<Self> {
        check_dim(entries.len())?;
        let mut e = [0u32; 4];
        e[..entries.len()].copy_from_slice(entries);
        Ok(Self { dim: entries.len() as u8, entries: e })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim: dim as u8, entries: [0; 4] })
    }

    /// `(0,…,1,…,0)` with the one at position `k`.
    pub fn unit(dim: usize, k: usize) -> Result<Self> {
        let mut i = Self::zero(dim)?;
        if k >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: k + 1 });
        }
        i.entries[k] = 1;
        Ok(i)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries[..self.dim as usize]
    }

    pub fn get(&self, k: usize) -> u32 {
        self.entries()[k]
    }

    pub fn degree(&self) -> usize {
        self.entries().iter().map(|&e| e as usize).sum()
    }

    /// `self - other` when every entry stays non-negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.dim != other.dim {
            return None;
        }
        let mut out = *self;
        for k in 0..self.dim() {
            out.entries[k] = self.entries[k].checked_sub(other.entries[k])?;
        }
        Some(out)
    }

    /// The comparison predicate `i < j` iff the first differing entry of
    /// `i` is smaller.
    pub fn lex_less(&self, other: &MultiIndex) -> bool {
        self.cmp(other) == Ordering::Less
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries().cmp(other.entries())
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for MultiIndex {
    type Output = MultiIndex;

    fn add(self, rhs: MultiIndex) -> MultiIndex {
        assert_eq!(self.dim, rhs.dim, "multi-index dimensions differ");
        let mut out = self;
        for k in 0..self.dim() {
            out.entries[k] += rhs.entries[k];
        }
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.entries().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 3 || d == 4 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(d))
    }
}

/// All multi-indices of one dimension and degree, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisOrdering {
    dim: usize,
    degree: usize,
    indices: Vec<MultiIndex>,
}

impl BasisOrdering {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MultiIndex> {
        self.indices.iter()
    }

    pub fn unrank(&self, k: usize) -> Option<MultiIndex> {
        self.indices.get(k).copied()
    }

    pub fn rank(&self, i: &MultiIndex) -> Option<usize> {
        if i.dim() != self.dim || i.degree() != self.degree {
            return None;
        }
        Some(rank(i))
    }
}

impl<'a> IntoIterator for &'a BasisOrdering {
    type Item = &'a MultiIndex;
    type IntoIter = std::slice::Iter<'a, MultiIndex>;

    fn into_iter(self) -> Self::IntoIter {
        self.indices.iter()
    }
}

/// Number of basis functions, `C(n+d−1, d−1)`.
pub fn basis_size(dim: usize, degree: usize) -> usize {
    binomial((degree + dim - 1) as u64, (dim - 1) as u64).expect("small binomial") as usize
}

/// Enumerates every multi-index of length `dim` and total `degree` in
/// descending lexicographic order.
pub fn enumerate(dim: usize, degree: usize) -> Result<BasisOrdering> {
    check_dim(dim)?;
    let mut indices = Vec::with_capacity(basis_size(dim, degree));
    let mut current = [0u32; 4];
    fill(dim, 0, degree as u32, &mut current, &mut indices);
    Ok(BasisOrdering { dim, degree, indices })
}

fn fill(dim: usize, pos: usize, remaining: u32, current: &mut [u32; 4], out: &mut Vec<MultiIndex>) {
    if pos == dim - 1 {
        current[pos] = remaining;
        out.push(MultiIndex { dim: dim as u8, entries: *current });
        return;
    }
    for v in (0..=remaining).rev() {
        current[pos] = v;
        fill(dim, pos + 1, remaining - v, current, out);
    }
    current[pos] = 0;
}

/// Position of `i` among the indices of its degree, in descending lex order.
pub fn rank(i: &MultiIndex) -> usize {
    let d = i.dim();
    let mut remaining = i.degree();
    let mut r = 0usize;
    for k in 0..d - 1 {
        let e = i.get(k) as usize;
        // indices agreeing so far but with a larger k-th entry come first
        let slots = d - k - 2;
        for v in e + 1..=remaining {
            r += binomial((remaining - v + slots) as u64, slots as u64).expect("small binomial") as usize;
        }
        remaining -= e;
    }
    r
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        // acc * (n - t) / (t + 1) stays integral at every step
        let num = (n - t) as u128;
        let den = (t + 1) as u128;
        let g = acc.gcd(&den);
        acc = (acc / g).checked_mul(num / (den / g))?;
    }
    Some(acc)
}

/// `|i|! / (i₁! ⋯ i_d!)`, computed exactly.
pub fn multinomial(i: &MultiIndex) -> Result<u128> {
    let n = i.degree();
    let mut remaining = n as u64;
    let mut acc: u128 = 1;
    for &e in i.entries() {
        let b = binomial(remaining, e as u64).ok_or(Error::Overflow(n))?;
        acc = acc.checked_mul(b).ok_or(Error::Overflow(n))?;
        remaining -= e as u64;
    }
    Ok(acc)
}

/// Reduced fraction `C(n;i)·C(m;j) / C(n+m;i+j)` from the Bernstein product
/// rule `Bᵢⁿ Bⱼᵐ = ratio · Bᵢ₊ⱼⁿ⁺ᵐ`.
pub fn product_ratio(i: &MultiIndex, j: &MultiIndex) -> Result<(u128, u128)> {
    let k = *i + *j;
    let overflow = Error::Overflow(k.degree());
    let a = multinomial(i)?;
    let b = multinomial(j)?;
    let c = multinomial(&k)?;
    let g1 = a.gcd(&c);
    let (a, c) = (a / g1, c / g1);
    let g2 = b.gcd(&c);
    let (b, c) = (b / g2, c / g2);
    Ok((a.checked_mul(b).ok_or(overflow)?, c))
}
