//! Synthetic camera rigs, image noise, the noise-sweep experiment and CSV IO.

pub mod io;
mod sweep;

pub use sweep::{
    noise_grid, run_noise_sweep, run_trial, summarize, trial_scene, trial_seeds, Algo, ExperimentConfig, SummaryRow,
    TrialRecord, TrialScene,
};

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rand_distr::{Distribution, Normal, UnitSphere};

use crate::error::{Error, Result};
use crate::projective::{Camera, HomPoint2};

/// Relative thickness of the shell focal points are drawn from.
pub const DEFAULT_SHELL: f64 = 0.05;

/// Camera at `center` looking at the origin with identity intrinsics.
pub fn look_at(center: &Vector3<f64>) -> Result<Camera> {
    let dist = center.norm();
    if dist == 0.0 {
        return Err(Error::InvalidArgument("camera center at the look-at target".into()));
    }
    let forward = -center / dist;
    let up = if forward.z.abs() < 0.9 { Vector3::z() } else { Vector3::y() };
    let right = up.cross(&forward).normalize();
    let down = forward.cross(&right);
    let r = Matrix3::from_rows(&[right.transpose(), down.transpose(), forward.transpose()]);
    Camera::from_parts(r, -(r * center))
}

/// Two look-at cameras with centers uniform on directions and uniform in
/// radius on `[r(1 − shell), r(1 + shell)]`, at least `r / 10` apart.
pub fn sample_camera_pair<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Result<(Camera, Camera)> {
    sample_camera_pair_with(rng, radius, DEFAULT_SHELL)
}

pub fn sample_camera_pair_with<R: Rng + ?Sized>(rng: &mut R, radius: f64, shell: f64) -> Result<(Camera, Camera)> {
    if !(radius.is_finite() && radius > 0.0) || !(0.0..1.0).contains(&shell) {
        return Err(Error::InvalidArgument(format!("radius {radius} / shell {shell} out of range")));
    }
    let center = |rng: &mut R| {
        let dir: [f64; 3] = UnitSphere.sample(rng);
        let r = radius * (1.0 + shell * (2.0 * rng.random::<f64>() - 1.0));
        Vector3::from(dir) * r
    };
    loop {
        let c1 = center(rng);
        let c2 = center(rng);
        if (c1 - c2).norm() >= radius / 10.0 {
            return Ok((look_at(&c1)?, look_at(&c2)?));
        }
    }
}

/// Diagonal of the bounding box of the dehomogenised points.
pub fn image_diagonal(pts: &[HomPoint2]) -> Result<f64> {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in pts {
        let (x, y) = p.dehomogenize().ok_or(Error::NotAffine)?;
        lo = [lo[0].min(x), lo[1].min(y)];
        hi = [hi[0].max(x), hi[1].max(y)];
    }
    if pts.is_empty() {
        return Ok(0.0);
    }
    Ok((hi[0] - lo[0]).hypot(hi[1] - lo[1]))
}

/// Adds i.i.d. Gaussian offsets with standard deviation
/// `sigma_frac · image_diagonal(pts)` to every dehomogenised point.
/// With `sigma_frac = 0` the points come back untouched and no randomness is
/// consumed.
pub fn add_noise<R: Rng + ?Sized>(pts: &[HomPoint2], sigma_frac: f64, rng: &mut R) -> Result<Vec<HomPoint2>> {
    if !(sigma_frac.is_finite() && sigma_frac >= 0.0) {
        return Err(Error::InvalidArgument(format!("noise level {sigma_frac} must be finite and non-negative")));
    }
    let diag = image_diagonal(pts)?;
    if sigma_frac == 0.0 {
        return Ok(pts.to_vec());
    }
    let normal = Normal::new(0.0, sigma_frac * diag).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(pts
        .iter()
        .map(|p| {
            let (x, y) = p.dehomogenize().expect("checked affine");
            HomPoint2::affine(x + normal.sample(rng), y + normal.sample(rng))
        })
        .collect())
}
