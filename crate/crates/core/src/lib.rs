//! Approximate implicitization of triangular Bézier surfaces.
//!
//! A patch `p(s)` over the reference triangle is expressed in the barycentric
//! coordinates of a reference tetrahedron, and an implicit polynomial `q` of
//! chosen degree `m` (tetrahedral Bernstein form) is sought that makes the
//! algebraic distance `q(p(s))` small:
//!
//! * the *original* method minimizes a pointwise bound via the smallest
//!   singular value of the composition matrix `D`;
//! * the *weak* method minimizes `∫ q(p(s))² ds` via the smallest eigenvalue
//!   of `M = DᵀAD`, built either exactly or element-wise by quadrature.
//!
//! Every coefficient vector and every matrix axis uses descending
//! lexicographic multi-index order (see [`combinatorics`]).

pub mod barycentric;
pub mod bernstein;
pub mod combinatorics;
mod error;
pub mod fixtures;
pub mod implicitize;
pub mod linalg;
pub mod patch;
pub mod quadrature;
pub mod scalar;

pub use barycentric::{BaryPoint, Simplex};
pub use bernstein::BernsteinPoly;
pub use combinatorics::{BasisOrdering, MultiIndex};
pub use error::{Error, Result};
pub use implicitize::{DMatrix, GramMatrixA, ImplicitApprox, MMatrix, Method};
pub use linalg::{DenseMatrix, SvdResult};
pub use patch::{BarycentricPatch, HomogeneousPatch, TriangularPatch};
pub use quadrature::QuadratureRule;
pub use scalar::{Rational, Scalar};
