//! Quadrics through cube vertices and focal points, their inertia, and the
//! regions of focal-point placements where the quadric is ruled.

mod region;

pub use region::{region_grid, region_grid_with, PlaneChart, QuadricRoute, RegionCell};

use std::fmt;

use nalgebra::{DMatrix, Matrix4, SymmetricEigen, Vector4};

use crate::degeneracy::{unit_cube, veronese_matrix_normalized, CubeConfig, CUBE_LABELS};
use crate::error::{Error, Result};
use crate::linalg::{cross4, FullSvd};
use crate::projective::HomPoint3;
use crate::tolerance::Tolerances;

/// Symmetric 4×4 matrix up to scale, stored with unit Frobenius norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymQuadric(Matrix4<f64>);

impl SymQuadric {
    /// Symmetrises and rescales `m`.
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let s = (m + m.transpose()) / 2.0;
        let n = s.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroMatrix);
        }
        Ok(Self(s / n))
    }

    pub fn from_diagonal(d: [f64; 4]) -> Result<Self> {
        Self::new(Matrix4::from_diagonal(&Vector4::from(d)))
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// `pᵀ Q p`.
    pub fn eval(&self, p: &HomPoint3) -> f64 {
        p.coords().dot(&(self.0 * p.coords()))
    }

    /// Equality up to nonzero scale.
    pub fn projectively_eq(&self, other: &Self, tol: f64) -> bool {
        let d = self.0.dot(&other.0);
        let other = if d < 0.0 { -other.0 } else { other.0 };
        (self.0 - other).norm() <= tol
    }
}

/// Signed eigenvalue counts, with the global sign chosen so that
/// `n_plus ≥ n_minus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

/// Type of a quadric surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadricKind {
    /// Inertia (2, 2, 0): hyperboloid of one sheet and its projective relatives.
    RuledNondegenerate,
    /// Inertia (3, 1, 0): ellipsoid-like.
    NonruledNondegenerate,
    /// Inertia (4, 0, 0): no real points.
    Empty,
    /// Some zero eigenvalue: cones, plane pairs, or no unique quadric at all.
    Degenerate,
}

impl QuadricKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            QuadricKind::RuledNondegenerate => "RULED_NONDEGENERATE",
            QuadricKind::NonruledNondegenerate => "NONRULED_NONDEGENERATE",
            QuadricKind::Empty => "EMPTY",
            QuadricKind::Degenerate => "DEGENERATE",
        }
    }

    /// Cells where reconstruction of `F` is not guaranteed.
    pub fn is_failure(&self) -> bool {
        matches!(self, QuadricKind::RuledNondegenerate | QuadricKind::Degenerate)
    }
}

impl fmt::Display for QuadricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classification of a quadric together with its raw inertia.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadricClass {
    pub kind: QuadricKind,
    pub inertia: Inertia,
    /// `min |λ| / max |λ|`; small values mean the class sits near a boundary.
    pub margin: f64,
}

impl QuadricClass {
    /// Marker for configurations through which no unique quadric passes.
    pub fn underdetermined() -> Self {
        Self { kind: QuadricKind::Degenerate, inertia: Inertia { n_plus: 0, n_minus: 0, n_zero: 4 }, margin: 0.0 }
    }
}

/// Sign pattern of the eigenvalues of `q`, zero threshold
/// `tol.inertia · max|λ|`.
pub fn classify(q: &SymQuadric) -> QuadricClass {
    classify_with(q, &Tolerances::default())
}

pub fn classify_with(q: &SymQuadric, tol: &Tolerances) -> QuadricClass {
    let eig = SymmetricEigen::new(q.0).eigenvalues;
    let max = eig.amax();
    let min = eig.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()));
    let cutoff = tol.inertia * max;
    let mut n_plus = eig.iter().filter(|&&l| l > cutoff).count();
    let mut n_minus = eig.iter().filter(|&&l| l < -cutoff).count();
    let n_zero = 4 - n_plus - n_minus;
    if n_minus > n_plus {
        std::mem::swap(&mut n_plus, &mut n_minus);
    }
    let kind = match (n_plus, n_minus, n_zero) {
        (_, _, z) if z > 0 => QuadricKind::Degenerate,
        (2, 2, 0) => QuadricKind::RuledNondegenerate,
        (3, 1, 0) => QuadricKind::NonruledNondegenerate,
        _ => QuadricKind::Empty,
    };
    QuadricClass { kind, inertia: Inertia { n_plus, n_minus, n_zero }, margin: if max > 0.0 { min / max } else { 0.0 } }
}

/// The unique quadric through 9 or 10 points, from the kernel of their
/// Veronese matrix. Off-diagonal entries are half the monomial coefficients.
pub fn quadric_through_points(points: &[HomPoint3]) -> Result<SymQuadric> {
    quadric_through_points_with(points, &Tolerances::default())
}

pub fn quadric_through_points_with(points: &[HomPoint3], tol: &Tolerances) -> Result<SymQuadric> {
    if !(9..=10).contains(&points.len()) {
        return Err(Error::InvalidArgument(format!("need 9 or 10 points, got {}", points.len())));
    }
    let svd = FullSvd::new(&veronese_matrix_normalized(points));
    let rank = svd.rank(tol.rank);
    if rank < 9 {
        return Err(Error::PencilOfQuadrics { rank });
    }
    if rank == 10 {
        return Err(Error::NoQuadric);
    }
    let q: Vec<f64> = svd.v.column(9).iter().copied().collect();
    SymQuadric::new(quadric_from_coefficients(&q))
}

/// Symmetric matrix of the quadratic form with monomial coefficients `q`
/// (Veronese order).
pub fn quadric_from_coefficients(q: &[f64]) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    let mut k = 0;
    for i in 0..4 {
        for j in i..4 {
            if i == j {
                m[(i, i)] = q[k];
            } else {
                m[(i, j)] = q[k] / 2.0;
                m[(j, i)] = q[k] / 2.0;
            }
            k += 1;
        }
    }
    m
}

fn squared(p: &HomPoint3) -> Vector4<f64> {
    p.coords().map(|x| x * x)
}

/// Diagonal `(α, β, γ, δ)` of the quadric through the vertices `(±1, ±1, ±1, 1)`
/// and the two focal points: the signed maximal minors of
/// `M = [(1, 1, 1, 1); f₁∘f₁; f₂∘f₂]`.
pub fn unit_cube_diagonal(f1: &HomPoint3, f2: &HomPoint3) -> Result<[f64; 4]> {
    unit_cube_diagonal_with(f1, f2, &Tolerances::default())
}

pub fn unit_cube_diagonal_with(f1: &HomPoint3, f2: &HomPoint3, tol: &Tolerances) -> Result<[f64; 4]> {
    let ones = Vector4::repeat(1.0);
    let (a, b) = (squared(f1), squared(f2));
    let w = cross4(&ones, &a, &b);
    if w.norm() <= tol.zero * ones.norm() * a.norm() * b.norm() {
        return Err(Error::RankDeficient);
    }
    Ok([w[0], w[1], w[2], w[3]])
}

/// [`unit_cube_diagonal`] as a quadric.
pub fn unit_cube_quadric(f1: &HomPoint3, f2: &HomPoint3) -> Result<SymQuadric> {
    SymQuadric::from_diagonal(unit_cube_diagonal(f1, f2)?)
}

/// Whether `diag(α, β, −α − β − 1, 1)` is a ruled quadric.
///
/// Ruled means two positive and two negative entries: either `α, β ≤ 0` with
/// `α + β ≤ −1`, or `α, β` of opposite sign with `α + β ≥ −1`.
pub fn ruled_region_delta1(alpha: f64, beta: f64) -> bool {
    let both_nonpositive = alpha <= 0.0 && beta <= 0.0 && alpha + beta <= -1.0;
    let opposite = alpha * beta < 0.0 && alpha + beta >= -1.0;
    both_nonpositive || opposite
}

/// `(α, β)` of the unit-cube quadric in the chart `δ = 1`.
///
/// With `γ = −1 − α − β` substituted the two focal-point equations become the
/// 2×2 system `α(x₁² − x₃²) + β(x₂² − x₃²) = x₃² − x₄²` (and likewise for
/// `y`), solved by Cramer's rule. Its determinant is `−δ`.
pub fn delta1_coordinates(f1: &HomPoint3, f2: &HomPoint3) -> Result<(f64, f64)> {
    let (x, y) = (squared(f1), squared(f2));
    let det2 = |a: f64, b: f64, c: f64, d: f64| a * d - b * c;
    let d = det2(x[0] - x[2], x[1] - x[2], y[0] - y[2], y[1] - y[2]);
    let scale = x.norm() * y.norm();
    if d.abs() <= 1e-12 * scale {
        return Err(Error::AtInfinity);
    }
    let alpha = det2(x[2] - x[3], x[1] - x[2], y[2] - y[3], y[1] - y[2]) / d;
    let beta = det2(x[0] - x[2], x[2] - x[3], y[0] - y[2], y[2] - y[3]) / d;
    Ok((alpha, beta))
}

/// Result of [`transport_from_unit_cube`].
#[derive(Debug, Clone, PartialEq)]
pub enum Transport {
    /// `T` maps every labelled unit-cube vertex onto the matching vertex.
    Equivalent { t: Matrix4<f64>, residual: f64 },
    /// No projective map fits; `residual` is the relative least singular value.
    NotEquivalent { residual: f64 },
}

/// Looks for a projective map taking the unit cube onto `cube`, label by label.
///
/// Stacks the six 2×2 minors of `cᵢ ∧ T uᵢ` for every vertex into a 48×16
/// homogeneous system and accepts its least singular vector when the relative
/// least singular value is below `tol.transport`.
pub fn transport_from_unit_cube(cube: &CubeConfig) -> Transport {
    transport_from_unit_cube_with(cube, &Tolerances::default())
}

pub fn transport_from_unit_cube_with(cube: &CubeConfig, tol: &Tolerances) -> Transport {
    let unit = unit_cube();
    let mut a = DMatrix::zeros(48, 16);
    let mut row = 0;
    for &label in &CUBE_LABELS {
        let u = unit.vertex(label).coords().normalize();
        let c = cube.vertex(label).coords().normalize();
        for j in 0..4 {
            for k in (j + 1)..4 {
                // c_j (T u)_k − c_k (T u)_j
                for s in 0..4 {
                    a[(row, 4 * k + s)] += c[j] * u[s];
                    a[(row, 4 * j + s)] -= c[k] * u[s];
                }
                row += 1;
            }
        }
    }
    let svd = FullSvd::new(&a);
    let residual = svd.sigma[15] / svd.sigma_max();
    let unique = svd.sigma[14] > tol.transport * svd.sigma_max();
    let t = Matrix4::from_row_slice(svd.v.column(15).as_slice());
    let invertible = t.determinant().abs() > tol.zero * t.norm().powi(4);
    if residual <= tol.transport && unique && invertible {
        Transport::Equivalent { t: t / t.norm(), residual }
    } else {
        Transport::NotEquivalent { residual }
    }
}

/// Classifies the quadric through `cube ∪ {f₁, f₂}` by pulling the focal points
/// back to the unit cube. `None` when the cube is not projectively a cube image.
pub fn classify_via_transport(cube: &CubeConfig, f1: &HomPoint3, f2: &HomPoint3) -> Option<Result<QuadricClass>> {
    let Transport::Equivalent { t, .. } = transport_from_unit_cube(cube) else {
        return None;
    };
    let inv = t.try_inverse()?;
    let pull = |f: &HomPoint3| HomPoint3::from_vector(inv * f.coords());
    Some((|| {
        let (g1, g2) = (pull(f1)?, pull(f2)?);
        match unit_cube_quadric(&g1, &g2) {
            Ok(q) => Ok(classify(&q)),
            Err(Error::RankDeficient) => Ok(QuadricClass::underdetermined()),
            Err(e) => Err(e),
        }
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex_f1() -> HomPoint3 {
        HomPoint3::affine(-2.0, -3.0, -2.0)
    }
    fn ex_f2() -> HomPoint3 {
        HomPoint3::affine(-2.0, -3.0, -1.0)
    }

    #[test]
    fn example_diagonal_from_minors() {
        // oracle: the four 3×3 minors expanded by hand
        assert_eq!(unit_cube_diagonal(&ex_f1(), &ex_f2()).unwrap(), [-24.0, 9.0, 0.0, 15.0]);
    }

    #[test]
    fn repeated_squares_are_rank_deficient() {
        let f1 = HomPoint3::affine(1.0, 2.0, 3.0);
        let f2 = HomPoint3::affine(-1.0, 2.0, -3.0);
        assert_eq!(unit_cube_diagonal(&f1, &f2), Err(Error::RankDeficient));
    }

    #[test]
    fn all_ten_points_lie_on_the_fast_path_quadric() {
        let f1 = HomPoint3::affine(0.3, 4.0, -2.0);
        let f2 = HomPoint3::new(1.0, -2.0, 5.0, 0.5).unwrap();
        let q = unit_cube_quadric(&f1, &f2).unwrap();
        for p in unit_cube().vertices().iter().chain([&f1, &f2]) {
            assert!(q.eval(p).abs() <= 1e-10 * p.coords().norm_squared());
        }
    }

    #[test]
    fn general_fit_reproduces_example_quadric() {
        let mut pts: Vec<HomPoint3> = unit_cube().vertices().to_vec();
        pts.push(ex_f1());
        pts.push(ex_f2());
        let q = quadric_through_points(&pts).unwrap();
        let expected = SymQuadric::from_diagonal([-24.0, 9.0, 0.0, 15.0]).unwrap();
        assert!(q.projectively_eq(&expected, 1e-10), "{q:?}");
    }

    #[test]
    fn sphere_through_nine_points() {
        let dirs = [
            (1.0, 0.0, 0.0),
            (-1.0, 0.0, 0.0),
            (0.0, 1.0, 0.0),
            (0.0, -1.0, 0.0),
            (0.0, 0.0, 1.0),
            (0.0, 0.0, -1.0),
            (0.6, 0.8, 0.0),
            (0.0, 0.6, -0.8),
            (0.48, 0.6, 0.64),
        ];
        let pts: Vec<HomPoint3> = dirs.iter().map(|&(x, y, z)| HomPoint3::affine(x, y, z)).collect();
        let q = quadric_through_points(&pts).unwrap();
        let expected = SymQuadric::from_diagonal([1.0, 1.0, 1.0, -1.0]).unwrap();
        assert!(q.projectively_eq(&expected, 1e-10));
    }

    #[test]
    fn cube_plus_one_focal_point_is_a_pencil() {
        let mut pts: Vec<HomPoint3> = unit_cube().vertices().to_vec();
        pts.push(ex_f1());
        assert_eq!(quadric_through_points(&pts), Err(Error::PencilOfQuadrics { rank: 8 }));
    }

    #[test]
    fn classification_examples() {
        let c = classify(&SymQuadric::from_diagonal([1.0, -1.0, 1.0, -1.0]).unwrap());
        assert_eq!(c.kind, QuadricKind::RuledNondegenerate);
        let c = classify(&SymQuadric::from_diagonal([1.0, 1.0, 1.0, -1.0]).unwrap());
        assert_eq!(c.kind, QuadricKind::NonruledNondegenerate);
        let c = classify(&SymQuadric::from_diagonal([-24.0, 9.0, 0.0, 15.0]).unwrap());
        assert_eq!(c.kind, QuadricKind::Degenerate);
        assert_eq!(c.inertia, Inertia { n_plus: 2, n_minus: 1, n_zero: 1 });
        let c = classify(&SymQuadric::from_diagonal([-1.0, -2.0, -3.0, -0.5]).unwrap());
        assert_eq!(c.kind, QuadricKind::Empty);
        assert_eq!(c.inertia.n_plus, 4);
    }

    #[test]
    fn classification_ignores_scale_and_sign() {
        let m = Matrix4::new(2.0, 0.5, 0.0, 1.0, 0.5, -1.0, 0.3, 0.0, 0.0, 0.3, 0.7, -0.2, 1.0, 0.0, -0.2, -3.0);
        let a = classify(&SymQuadric::new(m).unwrap());
        let b = classify(&SymQuadric::new(-3.0 * m).unwrap());
        assert_eq!(a.kind, b.kind);
        assert_eq!(a.inertia, b.inertia);
    }

    #[test]
    fn delta1_examples() {
        assert!(ruled_region_delta1(-1.0, -1.0));
        assert!(ruled_region_delta1(2.0, -0.5));
        assert!(!ruled_region_delta1(1.0, 1.0));
        let c = classify(&SymQuadric::from_diagonal([1.0, 1.0, -3.0, 1.0]).unwrap());
        assert_eq!(c.kind, QuadricKind::NonruledNondegenerate);
    }

    #[test]
    fn delta1_chart_of_example() {
        let (a, b) = delta1_coordinates(&ex_f1(), &ex_f2()).unwrap();
        assert!((a + 24.0 / 15.0).abs() < 1e-15);
        assert!((b - 9.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn delta1_swap_symmetry() {
        let f1 = HomPoint3::affine(2.0, 1.0, 1.0);
        let f2 = HomPoint3::affine(1.0, 2.0, 1.0);
        let (a, b) = delta1_coordinates(&f1, &f2).unwrap();
        assert_eq!(a, b);
        let f1 = HomPoint3::affine(3.0, 0.5, 2.0);
        let f2 = HomPoint3::affine(-1.0, 2.5, 1.5);
        let (a, b) = delta1_coordinates(&f1, &f2).unwrap();
        let swap = |p: &HomPoint3| {
            let c = p.coords();
            HomPoint3::new(c[1], c[0], c[2], c[3]).unwrap()
        };
        let (a2, b2) = delta1_coordinates(&swap(&f1), &swap(&f2)).unwrap();
        assert!((a - b2).abs() < 1e-12 && (b - a2).abs() < 1e-12);
    }

    #[test]
    fn delta1_undefined_when_delta_minor_vanishes() {
        // x₁² = x₃² and y₁² = y₃² make the δ-minor zero
        let f1 = HomPoint3::affine(2.0, 1.0, 2.0);
        let f2 = HomPoint3::affine(3.0, 0.5, -3.0);
        assert_eq!(delta1_coordinates(&f1, &f2), Err(Error::AtInfinity));
    }

    #[test]
    fn transport_of_unit_cube_is_identity() {
        match transport_from_unit_cube(&unit_cube()) {
            Transport::Equivalent { t, .. } => {
                let t = t / t[(0, 0)];
                assert!((t - Matrix4::identity()).amax() < 1e-10);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn generic_normal_form_cube_is_not_equivalent() {
        let params = crate::degeneracy::CubeParams { v1: [1.3, 0.9], v6: [0.8, 1.4], v7: [1.1, 1.2] };
        let cube = params.close().unwrap();
        assert!(crate::degeneracy::is_combinatorial_cube(&cube, 1e-10).is_cube);
        assert!(matches!(transport_from_unit_cube(&cube), Transport::NotEquivalent { .. }));
    }
}
