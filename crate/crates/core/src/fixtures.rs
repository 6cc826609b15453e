//! Built-in patches used by the tests and the command line demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::barycentric::Simplex;
use crate::patch::TriangularPatch;

/// Degenerate quadratic patch whose control points span the standard
/// tetrahedron: corners at the unit points, interior controls at the origin.
pub fn p1() -> TriangularPatch {
    let z = [0.0; 3];
    TriangularPatch::new(2, vec![[1.0, 0.0, 0.0], z, z, [0.0, 1.0, 0.0], z, [0.0, 0.0, 1.0]]).expect("valid fixture")
}

/// Quadratic patch with singularities: the corners collapse to the origin and
/// the edge controls sit at the unit points.
pub fn p2() -> TriangularPatch {
    let z = [0.0; 3];
    TriangularPatch::new(2, vec![z, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], z, [0.0, 0.0, 1.0], z]).expect("valid fixture")
}

/// `(u, v, u² + v²)` over the triangle with `(u,v)`-vertices `a, b, c`.
///
/// Control points come from the blossom `F(x,y) = ((x+y)/2, x·y)` evaluated at
/// the vertex pairs selected by each multi-index.
pub fn paraboloid_over(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> TriangularPatch {
    let blossom = |x: [f64; 2], y: [f64; 2]| [(x[0] + y[0]) / 2.0, (x[1] + y[1]) / 2.0, x[0] * y[0] + x[1] * y[1]];
    TriangularPatch::new(
        2,
        vec![blossom(a, a), blossom(a, b), blossom(a, c), blossom(b, b), blossom(b, c), blossom(c, c)],
    )
    .expect("valid fixture")
}

/// `(u, v, u² + v²)` with `u = s₂`, `v = s₃`.
pub fn paraboloid() -> TriangularPatch {
    paraboloid_over([0.0, 0.0], [1.0, 0.0], [0.0, 1.0])
}

/// Rational quadratic patch on the unit sphere: the inverse stereographic
/// image `(2u, 2v, 1−u²−v²)/(1+u²+v²)` of the triangle `(0,0), (1,0), (0,1)`.
/// Its corners are the three octant corners `(0,0,1), (1,0,0), (0,1,0)`.
pub fn sphere_octant() -> TriangularPatch {
    TriangularPatch::rational(
        2,
        vec![[0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [1.0, 0.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 0.0]],
        vec![1.0, 1.0, 1.0, 2.0, 1.0, 2.0],
    )
    .expect("valid fixture")
}

/// Patch of the given degree with control points drawn uniformly from the
/// unit cube.
pub fn random_patch(degree: usize, seed: u64) -> TriangularPatch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = (degree + 1) * (degree + 2) / 2;
    let pts = (0..count).map(|_| [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
    TriangularPatch::new(degree, pts).expect("valid fixture")
}

/// Smooth cubic patch: a gently curved graph perturbed by seeded noise.
pub fn smooth_cubic(seed: u64) -> TriangularPatch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 3;
    let mut pts = Vec::new();
    for i in (0..=n).rev() {
        for j in (0..=n - i).rev() {
            let k = n - i - j;
            let (u, v) = (j as f64 / n as f64, k as f64 / n as f64);
            let mut jitter = || rng.gen_range(-0.15..0.15);
            pts.push([u + jitter(), v + jitter(), 0.5 * (u * u - v * v) + u * v + jitter()]);
        }
    }
    TriangularPatch::new(n, pts).expect("valid fixture")
}

/// A named built-in patch and the reference tetrahedron it ships with, if any.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub patch: TriangularPatch,
    pub tetrahedron: Option<Simplex>,
}

pub const FIXTURE_NAMES: [&str; 4] = ["p1", "p2", "paraboloid", "sphere-octant"];

pub fn by_name(name: &str) -> Option<Fixture> {
    let (patch, tetrahedron) = match name {
        "p1" => (p1(), Some(Simplex::standard_tetrahedron())),
        "p2" => (p2(), Some(Simplex::standard_tetrahedron())),
        "paraboloid" => (paraboloid(), None),
        "sphere-octant" | "sphere-octant-rational" => (sphere_octant(), None),
        _ => return None,
    };
    Some(Fixture { patch, tetrahedron })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(r: usize) -> Vec<[f64; 3]> {
        let mut out = Vec::new();
        for a in 0..=r {
            for b in 0..=r - a {
                let (s2, s3) = (a as f64 / r as f64, b as f64 / r as f64);
                out.push([1.0 - s2 - s3, s2, s3]);
            }
        }
        out
    }

    #[test]
    fn paraboloid_matches_direct_evaluation() {
        let p = paraboloid();
        for s in lattice(9) {
            let (u, v) = (s[1], s[2]);
            let x = p.eval(&s).unwrap();
            for (got, want) in x.iter().zip([u, v, u * u + v * v]) {
                assert!((got - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn sub_paraboloids_follow_the_affine_reparametrization() {
        let (a, b, c) = ([0.0, 0.0], [1.0, 0.0], [0.5, 0.5]);
        let sub = paraboloid_over(a, b, c);
        let whole = paraboloid();
        for t in lattice(7) {
            let u = t[0] * a[0] + t[1] * b[0] + t[2] * c[0];
            let v = t[0] * a[1] + t[1] * b[1] + t[2] * c[1];
            let x = sub.eval(&t).unwrap();
            let y = whole.eval(&[1.0 - u - v, u, v]).unwrap();
            for k in 0..3 {
                assert!((x[k] - y[k]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn sphere_fixture_lies_on_unit_sphere() {
        let p = sphere_octant();
        for s in lattice(12) {
            let x = p.eval(&s).unwrap();
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            assert!((r2 - 1.0).abs() < 1e-14, "{x:?}");
            assert!(x.iter().all(|&c| c >= -1e-15));
        }
        assert_eq!(p.eval(&[1.0, 0.0, 0.0]).unwrap(), [0.0, 0.0, 1.0]);
        assert_eq!(p.eval(&[0.0, 1.0, 0.0]).unwrap(), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn lookup() {
        for name in FIXTURE_NAMES {
            assert!(by_name(name).is_some());
        }
        assert!(by_name("p3").is_none());
    }
}
