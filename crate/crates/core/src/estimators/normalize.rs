use std::f64::consts::SQRT_2;

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::projective::HomPoint2;

/// Similarity `T` (translation plus isotropic scale) applied to homogeneous
/// image points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationTransform {
    pub t: Matrix3<f64>,
}

impl NormalizationTransform {
    pub fn identity() -> Self {
        Self { t: Matrix3::identity() }
    }

    pub fn apply(&self, p: &HomPoint2) -> HomPoint2 {
        HomPoint2::from_vector(self.t * p.coords()).expect("T is invertible")
    }
}

/// Hartley conditioning: moves the centroid of the dehomogenised cloud to the
/// origin and scales it to RMS radius `√2`. Returns `T` and the transformed
/// points `T · pᵢ`, rescaled to last coordinate 1.
pub fn hartley_normalize(pts: &[HomPoint2]) -> Result<(NormalizationTransform, Vec<HomPoint2>)> {
    if pts.len() < 2 {
        return Err(Error::TooFewPoints { need: 2, got: pts.len() });
    }
    let affine: Vec<(f64, f64)> =
        pts.iter().map(|p| p.dehomogenize().ok_or(Error::NotAffine)).collect::<Result<_>>()?;
    let n = affine.len() as f64;
    let cx = affine.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = affine.iter().map(|p| p.1).sum::<f64>() / n;
    let ms = affine.iter().map(|p| (p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sum::<f64>() / n;
    let extent = affine.iter().map(|p| p.0.abs().max(p.1.abs())).fold(0.0, f64::max).max(1.0);
    if ms.sqrt() <= 1e-14 * extent {
        return Err(Error::DegenerateCloud);
    }
    let s = SQRT_2 / ms.sqrt();
    let t = Matrix3::new(s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0);
    let out = affine.iter().map(|&(x, y)| HomPoint2::affine(s * (x - cx), s * (y - cy))).collect();
    Ok((NormalizationTransform { t }, out))
}
