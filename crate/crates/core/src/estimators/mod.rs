//! Fundamental-matrix estimators: the plain 8-point algorithm, the 7-point
//! pencil and the Cube-8-point algorithm, which keeps working when the
//! correspondences are images of a combinatorial cube.

mod normalize;
mod pencil;

pub use normalize::{hartley_normalize, NormalizationTransform};
pub use pencil::{pencil_cubic, pencil_member, pencil_solve, pencil_solve_with, real_roots, PencilSolution};

use nalgebra::{DMatrix, Matrix3};

use crate::degeneracy::build_z;
use crate::error::{Error, Result};
use crate::linalg::{eckart_young_truncate, FullSvd};
use crate::projective::{epipolar_residual, focal_point, skew, Camera, FMatrix, HomPoint2};
use crate::tolerance::Tolerances;

fn check_lengths(x: &[HomPoint2], y: &[HomPoint2], need: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    if x.len() < need {
        return Err(Error::TooFewPoints { need, got: x.len() });
    }
    Ok(())
}

fn reshape(v: &[f64]) -> Matrix3<f64> {
    Matrix3::from_row_slice(v)
}

/// The 8-point algorithm without noise handling: `F` is the kernel of `Z`.
///
/// Fails with [`Error::DegenerateInput`] unless the kernel is exactly
/// one-dimensional, which is what happens on images of a combinatorial cube.
pub fn eight_point(x: &[HomPoint2], y: &[HomPoint2]) -> Result<FMatrix> {
    eight_point_with(x, y, &Tolerances::default())
}

pub fn eight_point_with(x: &[HomPoint2], y: &[HomPoint2], tol: &Tolerances) -> Result<FMatrix> {
    check_lengths(x, y, 8)?;
    let z = build_z(x, y)?;
    let kernel = FullSvd::new(&z).kernel(tol.rank);
    if kernel.len() != 1 {
        return Err(Error::DegenerateInput { kernel_dim: kernel.len() });
    }
    FMatrix::from_row_major(kernel[0].as_slice())
}

/// Ground-truth `F = [e₂]ₓ A₂ A₁⁺` with `e₂` the image of the first center in
/// the second camera.
pub fn fundamental_from_cameras(a1: &Camera, a2: &Camera) -> Result<FMatrix> {
    let c1 = focal_point(a1)?;
    let c2 = focal_point(a2)?;
    if c1.projectively_eq(&c2, 1e-12) {
        return Err(Error::CoincidentCenters);
    }
    let m1 = a1.matrix();
    let e2 = a2.matrix() * c1.coords();
    let gram = m1 * m1.transpose();
    let pinv = m1.transpose() * gram.try_inverse().ok_or(Error::RankDeficientCamera(2))?;
    FMatrix::new(skew(&e2) * a2.matrix() * pinv)
}

/// The 7-point algorithm: the two kernel generators of `Z` span a pencil
/// whose singular members are the candidates.
pub fn seven_point(x: &[HomPoint2], y: &[HomPoint2]) -> Result<PencilSolution> {
    seven_point_with(x, y, &Tolerances::default())
}

pub fn seven_point_with(x: &[HomPoint2], y: &[HomPoint2], tol: &Tolerances) -> Result<PencilSolution> {
    check_lengths(x, y, 7)?;
    if x.len() != 7 {
        return Err(Error::InvalidArgument(format!("seven_point takes exactly 7 correspondences, got {}", x.len())));
    }
    let z = build_z(x, y)?;
    let kernel = FullSvd::new(&z).kernel(tol.rank);
    if kernel.len() != 2 {
        return Err(Error::DegenerateInput { kernel_dim: kernel.len() });
    }
    pencil_solve_with(&reshape(kernel[0].as_slice()), &reshape(kernel[1].as_slice()), tol)
}

/// Index and residual of the candidate with the smallest
/// [`epipolar_residual`] on `(x, y)`. Residuals within `tol.residual_tie` of
/// the best keep the earlier index.
pub fn select_by_residual(
    candidates: &[FMatrix],
    x: &[HomPoint2],
    y: &[HomPoint2],
    tol: &Tolerances,
) -> Result<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, f) in candidates.iter().enumerate() {
        let r = epipolar_residual(f, x, y)?;
        match best {
            Some((_, b)) if r >= b - tol.residual_tie => {}
            _ => best = Some((i, r)),
        }
    }
    best.ok_or(Error::NoRealRoot)
}

/// Knobs of [`cube_eight_point_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubeEightPointOptions {
    /// Apply Hartley conditioning to each image (falls back to the identity
    /// for an image containing points at infinity).
    pub normalize: bool,
}

impl Default for CubeEightPointOptions {
    fn default() -> Self {
        Self { normalize: true }
    }
}

/// Everything [`cube_eight_point_with`] computed along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeEightPoint {
    pub f: FMatrix,
    /// Index of `f` in `candidates`.
    pub chosen: usize,
    /// Pencil roots in the conditioned frame.
    pub roots: Vec<f64>,
    /// Denormalised candidates, one per root.
    pub candidates: Vec<FMatrix>,
    /// Residual of each candidate on the original correspondences.
    pub residuals: Vec<f64>,
    /// Singular values of the conditioned `Z`, descending.
    pub sigma: Vec<f64>,
    /// `‖Z − Z′‖_F` of the rank-7 truncation.
    pub truncation_error: f64,
}

/// Cube-8-point algorithm with default options.
pub fn cube_eight_point(x: &[HomPoint2], y: &[HomPoint2]) -> Result<FMatrix> {
    cube_eight_point_with(x, y, CubeEightPointOptions::default(), &Tolerances::default()).map(|r| r.f)
}

/// Conditions both images, truncates `Z` to its nearest rank-7 matrix `Z′`,
/// solves the pencil spanned by the two kernel generators of `Z′` and returns
/// the candidate with minimal residual on the original points.
pub fn cube_eight_point_with(
    x: &[HomPoint2],
    y: &[HomPoint2],
    opts: CubeEightPointOptions,
    tol: &Tolerances,
) -> Result<CubeEightPoint> {
    check_lengths(x, y, 8)?;
    let condition = |pts: &[HomPoint2]| -> Result<(NormalizationTransform, Vec<HomPoint2>)> {
        if !opts.normalize {
            return Ok((NormalizationTransform::identity(), pts.to_vec()));
        }
        match hartley_normalize(pts) {
            Ok(r) => Ok(r),
            Err(Error::NotAffine) => Ok((NormalizationTransform::identity(), pts.to_vec())),
            Err(e) => Err(e),
        }
    };
    let (tx, xn) = condition(x)?;
    let (ty, yn) = condition(y)?;

    let z = build_z(&xn, &yn)?;
    let (z7, sigma) = eckart_young_truncate(&z, 7);
    let truncation_error = (&z - &z7).norm();
    let svd = FullSvd::new(&z7);
    let g1 = reshape(svd.v.column(7).as_slice());
    let g2 = reshape(svd.v.column(8).as_slice());
    let pencil = pencil_solve_with(&g1, &g2, tol)?;

    let candidates = pencil
        .candidates
        .iter()
        .map(|f| FMatrix::new(ty.t.transpose() * f.matrix() * tx.t))
        .collect::<Result<Vec<_>>>()?;
    let residuals = candidates.iter().map(|f| epipolar_residual(f, x, y)).collect::<Result<Vec<_>>>()?;
    let (chosen, _) = select_by_residual(&candidates, x, y, tol)?;

    Ok(CubeEightPoint {
        f: candidates[chosen],
        chosen,
        roots: pencil.roots,
        candidates,
        residuals,
        sigma,
        truncation_error,
    })
}

/// Rank-7 truncation of `z` as used by the Cube-8-point algorithm.
pub fn truncate_to_rank7(z: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    eckart_young_truncate(z, 7)
}
