use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{add_noise, sample_camera_pair_with, DEFAULT_SHELL};
use crate::degeneracy::random_combinatorial_cube;
use crate::error::{Error, Result};
use crate::estimators::{cube_eight_point, eight_point, fundamental_from_cameras, select_by_residual, seven_point};
use crate::projective::{epipolar_residual, f_angle, project_all, Camera, FMatrix, HomPoint2, HomPoint3};
use crate::tolerance::Tolerances;

/// Estimators compared by the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Algo {
    #[serde(rename = "8pt")]
    EightPoint,
    #[serde(rename = "7pt")]
    SevenPoint,
    #[serde(rename = "cube8")]
    CubeEight,
}

impl Algo {
    pub const ALL: [Algo; 3] = [Algo::EightPoint, Algo::SevenPoint, Algo::CubeEight];

    pub fn as_str(self) -> &'static str {
        match self {
            Algo::EightPoint => "8pt",
            Algo::SevenPoint => "7pt",
            Algo::CubeEight => "cube8",
        }
    }

    /// Runs the estimator on 8 correspondences. The 7-point algorithm uses the
    /// first seven and keeps the candidate with the smallest residual on all.
    pub fn estimate(self, x: &[HomPoint2], y: &[HomPoint2]) -> Result<FMatrix> {
        match self {
            Algo::EightPoint => eight_point(x, y),
            Algo::CubeEight => cube_eight_point(x, y),
            Algo::SevenPoint => {
                let sol = seven_point(&x[..7.min(x.len())], &y[..7.min(y.len())])?;
                let (i, _) = select_by_residual(&sol.candidates, x, y, &Tolerances::default())?;
                Ok(sol.candidates[i])
            }
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algo::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {s:?}")))
    }
}

/// Parameters of the noise-sweep experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Trials per noise level.
    pub trials: usize,
    /// Noise standard deviations as fractions of the image diagonal.
    pub noise_levels: Vec<f64>,
    /// Cubes are sampled inside `[−cube_box, cube_box]³`.
    pub cube_box: f64,
    pub camera_radius: f64,
    pub camera_shell: f64,
    /// Upper bound of the cube normal-form parameters.
    pub spread: f64,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            trials: 2000,
            noise_levels: noise_grid(0.10, 11),
            cube_box: 1.0,
            camera_radius: 6.0,
            camera_shell: DEFAULT_SHELL,
            spread: 2.0,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("at least one trial is required".into()));
        }
        if self.noise_levels.is_empty() || self.noise_levels.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::InvalidArgument("noise levels must be finite and non-negative".into()));
        }
        if [self.cube_box, self.camera_radius, self.spread].iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidArgument("cube box, camera radius and spread must be positive".into()));
        }
        Ok(())
    }
}

/// `levels` evenly spaced values from 0 to `max`.
pub fn noise_grid(max: f64, levels: usize) -> Vec<f64> {
    match levels {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect(),
    }
}

/// One estimator run on one trial at one noise level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub noise: f64,
    pub algo: Algo,
    /// Grassmann angle to the true `F`; `π/2` when `failed`.
    pub angle_rad: f64,
    /// Epipolar residual on the noisy correspondences; NaN when `failed`.
    pub residual: f64,
    pub failed: bool,
    pub cube_seed: u64,
    pub cam_seed: u64,
}

/// Seeds of the cube and camera streams of a trial. Every noise level of a
/// trial shares them.
pub fn trial_seeds(master: u64, trial: usize) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(trial as u64);
    (rng.next_u64(), rng.next_u64())
}

/// Noise-free geometry of one trial.
#[derive(Debug, Clone)]
pub struct TrialScene {
    /// Cube vertices in label order 0, 1, 2, 3, 6, 7, 8, 9.
    pub world: Vec<HomPoint3>,
    pub cameras: (Camera, Camera),
    pub x: Vec<HomPoint2>,
    pub y: Vec<HomPoint2>,
    pub truth: FMatrix,
}

/// Rebuilds the cube, cameras, images and true `F` of `trial`.
pub fn trial_scene(cfg: &ExperimentConfig, trial: usize) -> Result<TrialScene> {
    let (cube_seed, cam_seed) = trial_seeds(cfg.seed, trial);
    let mut cube_rng = ChaCha8Rng::seed_from_u64(cube_seed);
    let cube = random_combinatorial_cube(&mut cube_rng, cfg.spread)?;
    let world = cube
        .vertices()
        .iter()
        .map(|v| {
            let c = v.coords();
            HomPoint3::new(c[0] * cfg.cube_box, c[1] * cfg.cube_box, c[2] * cfg.cube_box, c[3])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cam_rng = ChaCha8Rng::seed_from_u64(cam_seed);
    let (a1, a2) = sample_camera_pair_with(&mut cam_rng, cfg.camera_radius, cfg.camera_shell)?;
    let truth = fundamental_from_cameras(&a1, &a2)?;
    Ok(TrialScene { x: project_all(&a1, &world)?, y: project_all(&a2, &world)?, world, cameras: (a1, a2), truth })
}

/// Records for one trial, noise-major then in [`Algo::ALL`] order.
///
/// The noise at every level is the same standard normal draw scaled by the
/// level, so curves are compared on common random numbers.
pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Vec<TrialRecord> {
    let (cube_seed, cam_seed) = trial_seeds(cfg.seed, trial);
    let record = |noise: f64, algo: Algo, outcome: Option<(f64, f64)>| {
        let (angle_rad, residual, failed) = match outcome {
            Some((a, r)) => (a, r, false),
            None => (FRAC_PI_2, f64::NAN, true),
        };
        TrialRecord { trial, noise, algo, angle_rad, residual, failed, cube_seed, cam_seed }
    };

    let setup = trial_scene(cfg, trial);

    let mut out = Vec::with_capacity(cfg.noise_levels.len() * Algo::ALL.len());
    for &noise in &cfg.noise_levels {
        let images = setup.as_ref().ok().and_then(|scene| {
            let mut noise_rng = ChaCha8Rng::seed_from_u64(cam_seed);
            noise_rng.set_stream(1);
            let xn = add_noise(&scene.x, noise, &mut noise_rng).ok()?;
            let yn = add_noise(&scene.y, noise, &mut noise_rng).ok()?;
            Some((xn, yn, &scene.truth))
        });
        for algo in Algo::ALL {
            let outcome = images.as_ref().and_then(|(x, y, truth)| {
                let f = algo.estimate(x, y).ok()?;
                let r = epipolar_residual(&f, x, y).ok()?;
                Some((f_angle(&f, truth), r))
            });
            out.push(record(noise, algo, outcome));
        }
    }
    out
}

/// Runs every trial at every noise level. Rows are ordered by noise level,
/// then trial, then algorithm, independently of thread scheduling.
pub fn run_noise_sweep(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let per_trial: Vec<Vec<TrialRecord>> = (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect();
    let per_level = Algo::ALL.len();
    let mut out = Vec::with_capacity(cfg.trials * cfg.noise_levels.len() * per_level);
    for level in 0..cfg.noise_levels.len() {
        for rows in &per_trial {
            out.extend_from_slice(&rows[level * per_level..(level + 1) * per_level]);
        }
    }
    Ok(out)
}

/// Aggregate of one (noise level, algorithm) group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub noise: f64,
    pub algo: Algo,
    pub trials: usize,
    pub failures: usize,
    /// Over all rows, failed ones contributing `π/2`.
    pub mean_angle: f64,
    pub median_angle: f64,
}

/// Mean and median angle per noise level and algorithm; groups appear in
/// order of first occurrence.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(f64, Algo)> = Vec::new();
    for r in records {
        if !keys.iter().any(|&(n, a)| n.to_bits() == r.noise.to_bits() && a == r.algo) {
            keys.push((r.noise, r.algo));
        }
    }
    keys.into_iter()
        .map(|(noise, algo)| {
            let group: Vec<&TrialRecord> =
                records.iter().filter(|r| r.noise.to_bits() == noise.to_bits() && r.algo == algo).collect();
            let mut angles: Vec<f64> = group.iter().map(|r| r.angle_rad).collect();
            let mean_angle = angles.iter().sum::<f64>() / angles.len() as f64;
            angles.sort_by(f64::total_cmp);
            let n = angles.len();
            let median_angle = if n % 2 == 1 { angles[n / 2] } else { (angles[n / 2 - 1] + angles[n / 2]) / 2.0 };
            SummaryRow {
                noise,
                algo,
                trials: n,
                failures: group.iter().filter(|r| r.failed).count(),
                mean_angle,
                median_angle,
            }
        })
        .collect()
}
