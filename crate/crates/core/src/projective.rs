//! Homogeneous points, cameras, fundamental matrices and the metrics shared by
//! every other module.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, Matrix3, Matrix3x4, Vector3, Vector4};

use crate::error::{Error, Result};
use crate::linalg::FullSvd;

/// Scales `v` to unit norm with its first clearly nonzero entry positive.
fn canonicalize<const N: usize>(v: &nalgebra::SVector<f64, N>) -> nalgebra::SVector<f64, N> {
    let n = v.norm();
    let mut out = v / n;
    let cutoff = 1e-12 * out.amax();
    if let Some(first) = out.iter().find(|x| x.abs() > cutoff) {
        if *first < 0.0 {
            out = -out;
        }
    }
    out
}

/// Are `a` and `b` the same projective point, i.e. is `a ∧ b` negligible?
fn parallel<const N: usize>(a: &nalgebra::SVector<f64, N>, b: &nalgebra::SVector<f64, N>, tol: f64) -> bool {
    let (na, nb) = (a.norm(), b.norm());
    let mut wedge = 0.0f64;
    for i in 0..N {
        for j in (i + 1)..N {
            wedge = wedge.max((a[i] * b[j] - a[j] * b[i]).abs());
        }
    }
    wedge <= tol * na * nb
}

/// A point of the projective plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomPoint2(Vector3<f64>);

impl HomPoint2 {
    pub fn new(x: f64, y: f64, w: f64) -> Result<Self> {
        Self::from_vector(Vector3::new(x, y, w))
    }

    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        if v.iter().all(|&x| x == 0.0) || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::ZeroPoint);
        }
        Ok(Self(v))
    }

    /// Affine point `(x, y, 1)`.
    pub fn affine(x: f64, y: f64) -> Self {
        Self(Vector3::new(x, y, 1.0))
    }

    pub fn coords(&self) -> &Vector3<f64> {
        &self.0
    }

    /// Unit-norm representative with first nonzero coordinate positive.
    pub fn canonical(&self) -> Vector3<f64> {
        canonicalize(&self.0)
    }

    /// Equality up to nonzero scale.
    pub fn projectively_eq(&self, other: &Self, tol: f64) -> bool {
        parallel(&self.0, &other.0, tol)
    }

    /// Inhomogeneous coordinates, or `None` at infinity.
    pub fn dehomogenize(&self) -> Option<(f64, f64)> {
        let w = self.0[2];
        if w.abs() <= 1e-14 * self.0.norm() {
            None
        } else {
            Some((self.0[0] / w, self.0[1] / w))
        }
    }
}

/// A point of projective 3-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomPoint3(Vector4<f64>);

impl HomPoint3 {
    pub fn new(x: f64, y: f64, z: f64, w: f64) -> Result<Self> {
        Self::from_vector(Vector4::new(x, y, z, w))
    }

    pub fn from_vector(v: Vector4<f64>) -> Result<Self> {
        if v.iter().all(|&x| x == 0.0) || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::ZeroPoint);
        }
        Ok(Self(v))
    }

    /// Affine point `(x, y, z, 1)`.
    pub fn affine(x: f64, y: f64, z: f64) -> Self {
        Self(Vector4::new(x, y, z, 1.0))
    }

    pub fn coords(&self) -> &Vector4<f64> {
        &self.0
    }

    pub fn canonical(&self) -> Vector4<f64> {
        canonicalize(&self.0)
    }

    pub fn projectively_eq(&self, other: &Self, tol: f64) -> bool {
        parallel(&self.0, &other.0, tol)
    }

    pub fn is_affine(&self, tol: f64) -> bool {
        self.0[3].abs() > tol * self.0.norm()
    }

    /// Inhomogeneous coordinates, or `None` at infinity.
    pub fn dehomogenize(&self) -> Option<Vector3<f64>> {
        if self.is_affine(1e-14) {
            Some(self.0.xyz() / self.0[3])
        } else {
            None
        }
    }
}

/// A pinhole camera `A ∈ R^{3×4}` with invertible left 3×3 block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera(Matrix3x4<f64>);

impl Camera {
    /// Wraps `matrix`, rejecting rank-deficient matrices and cameras whose
    /// center lies at infinity.
    pub fn new(matrix: Matrix3x4<f64>) -> Result<Self> {
        let svd = FullSvd::new(&DMatrix::from_column_slice(3, 4, matrix.as_slice()));
        let rank = svd.rank(1e-12);
        if rank < 3 {
            return Err(Error::RankDeficientCamera(rank));
        }
        let left = matrix.fixed_view::<3, 3>(0, 0).into_owned();
        if left.determinant().abs() <= 1e-12 * left.norm().powi(3) {
            return Err(Error::RankDeficientCamera(3));
        }
        Ok(Self(matrix))
    }

    /// `[M | t]`.
    pub fn from_parts(m: Matrix3<f64>, t: Vector3<f64>) -> Result<Self> {
        let mut a = Matrix3x4::zeros();
        a.fixed_view_mut::<3, 3>(0, 0).copy_from(&m);
        a.set_column(3, &t);
        Self::new(a)
    }

    pub fn matrix(&self) -> &Matrix3x4<f64> {
        &self.0
    }
}

/// Image of a world point: the product `A · p`.
pub fn project(camera: &Camera, p: &HomPoint3) -> Result<HomPoint2> {
    let x = camera.0 * p.0;
    let scale = camera.0.norm() * p.0.norm();
    if x.norm() <= 1e-14 * scale {
        return Err(Error::FocalPointProjection);
    }
    Ok(HomPoint2(x))
}

/// Projects every point of `points`.
pub fn project_all(camera: &Camera, points: &[HomPoint3]) -> Result<Vec<HomPoint2>> {
    points.iter().map(|p| project(camera, p)).collect()
}

/// Camera center: the kernel of `A`. For `[M | t]` this is `(−M⁻¹t, 1)`.
pub fn focal_point(camera: &Camera) -> Result<HomPoint3> {
    let a = &camera.0;
    let left = a.fixed_view::<3, 3>(0, 0).into_owned();
    let t = a.column(3).into_owned();
    match left.lu().solve(&t) {
        Some(c) if c.iter().all(|x| x.is_finite()) => Ok(HomPoint3(Vector4::new(-c[0], -c[1], -c[2], 1.0))),
        _ => {
            let svd = FullSvd::new(&DMatrix::from_column_slice(3, 4, a.as_slice()));
            let rank = svd.rank(1e-12);
            if rank < 3 {
                return Err(Error::RankDeficientCamera(rank));
            }
            let k = svd.v.column(3);
            HomPoint3::new(k[0], k[1], k[2], k[3])
        }
    }
}

/// A 3×3 matrix up to scale, stored with unit Frobenius norm and first
/// nonzero entry positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FMatrix(Matrix3<f64>);

impl FMatrix {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let n = m.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroMatrix);
        }
        let mut out = m / n;
        let cutoff = 1e-12 * out.amax();
        // row-major scan so "first" matches the vectorisation
        let first =
            (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| out[(i, j)]).find(|x| x.abs() > cutoff);
        if matches!(first, Some(x) if x < 0.0) {
            out = -out;
        }
        Ok(Self(out))
    }

    /// Builds `F` from its row-major vectorisation.
    pub fn from_row_major(v: &[f64]) -> Result<Self> {
        if v.len() != 9 {
            return Err(Error::LengthMismatch { left: v.len(), right: 9 });
        }
        Self::new(Matrix3::from_row_slice(v))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// Row-major vectorisation (the ordering paired with the constraint rows).
    pub fn to_row_major(&self) -> [f64; 9] {
        let m = &self.0;
        [m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(1, 0)], m[(1, 1)], m[(1, 2)], m[(2, 0)], m[(2, 1)], m[(2, 2)]]
    }

    /// Determinant of the unit-norm representative.
    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    /// A valid fundamental matrix is singular.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.det().abs() <= tol
    }

    /// Numerical rank with threshold `tol · σ_max`.
    pub fn rank(&self, tol: f64) -> usize {
        let s = self.0.singular_values();
        let max = s.max();
        s.iter().filter(|&&x| x > tol * max).count()
    }
}

/// Scale-invariant algebraic residual `Σ (Yᵢᵀ F Xᵢ)²` with `F` and every
/// point scaled to unit norm.
pub fn epipolar_residual(f: &FMatrix, x: &[HomPoint2], y: &[HomPoint2]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.is_empty() {
        return Err(Error::TooFewPoints { need: 1, got: 0 });
    }
    let fm = f.0 / f.0.norm();
    Ok(x.iter()
        .zip(y)
        .map(|(xi, yi)| {
            let xv = xi.0 / xi.0.norm();
            let yv = yi.0 / yi.0.norm();
            let r = yv.dot(&(fm * xv));
            r * r
        })
        .sum())
}

/// Angle between the lines spanned by `vec F1` and `vec F2`, in `[0, π/2]`.
///
/// Equal to `arccos(|⟨F1, F2⟩| / (‖F1‖‖F2‖))`; evaluated through the
/// half-angle form, which stays accurate for nearly parallel inputs.
pub fn grassmann_angle(f1: &Matrix3<f64>, f2: &Matrix3<f64>) -> Result<f64> {
    let (n1, n2) = (f1.norm(), f2.norm());
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let a = f1 / n1;
    let mut b = f2 / n2;
    if a.dot(&b) < 0.0 {
        b = -b;
    }
    let angle = 2.0 * (a - b).norm().atan2((a + b).norm());
    Ok(angle.clamp(0.0, FRAC_PI_2))
}

/// [`grassmann_angle`] on fundamental matrices.
pub fn f_angle(f1: &FMatrix, f2: &FMatrix) -> f64 {
    grassmann_angle(&f1.0, &f2.0).expect("FMatrix is never zero")
}

/// Skew-symmetric cross-product matrix `[v]ₓ`.
pub fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0)
}
