use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    exact_cube, exact_det, exact_is_combinatorial_cube, exact_rank, exact_transform, exact_turnbull_young,
    exact_veronese_matrix, rat, ExactConfigTen, ExactCubeParams, ExactPoint, Rational, RationalMatrix,
};
use crate::error::{Error, Result};

/// Where certificate cubes come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateSampling {
    /// The coordinate normal form itself.
    NormalForm,
    /// Normal-form cubes moved by random rational projective maps.
    Projective,
    /// Alternate between the two.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateConfig {
    pub trials: usize,
    /// Cubes with one vertex pushed off its facets.
    pub controls: usize,
    pub seed: u64,
    pub sampling: CertificateSampling,
    /// Bound on numerators and denominators of sampled coordinates.
    pub max_height: i64,
    /// Focal points are drawn from `[−focal_box, focal_box]³`.
    pub focal_box: i64,
}

impl Default for CertificateConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            controls: 25,
            seed: 0,
            sampling: CertificateSampling::Both,
            max_height: 1000,
            focal_box: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CertificateReport {
    pub trials: usize,
    /// Trials whose invariant is exactly zero.
    pub invariant_zero: usize,
    /// Exact Veronese rank of the eight vertices → number of trials.
    pub rank_histogram: BTreeMap<usize, usize>,
    pub projective_trials: usize,
    pub controls: usize,
    /// Controls whose invariant is nonzero.
    pub controls_nonzero: usize,
}

impl CertificateReport {
    pub fn max_rank(&self) -> usize {
        self.rank_histogram.keys().next_back().copied().unwrap_or(0)
    }

    /// Every cube gives zero with rank ≤ 7 and every control is nonzero.
    pub fn passed(&self) -> bool {
        self.invariant_zero == self.trials && self.max_rank() <= 7 && self.controls_nonzero == self.controls
    }
}

struct Sampler {
    rng: ChaCha8Rng,
    max_height: i64,
}

impl Sampler {
    fn new(seed: u64, stream: u64, max_height: i64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, max_height }
    }

    /// Rational in `(0, bound]` with denominator ≤ `max_height / bound`.
    fn positive(&mut self, bound: i64) -> Rational {
        let d = self.rng.random_range(1..=(self.max_height / bound).max(1));
        let n = self.rng.random_range(1..=bound * d);
        rat(n, d)
    }

    /// Rational in `[−bound, bound]` with denominator ≤ `max_height / bound`.
    fn signed(&mut self, bound: i64) -> Rational {
        let d = self.rng.random_range(1..=(self.max_height / bound).max(1));
        let n = self.rng.random_range(-bound * d..=bound * d);
        rat(n, d)
    }

    fn focal(&mut self, bound: i64) -> ExactPoint {
        [self.signed(bound), self.signed(bound), self.signed(bound), rat(1, 1)]
    }

    fn cube(&mut self) -> Result<[ExactPoint; 8]> {
        for _ in 0..10_000 {
            let params = ExactCubeParams {
                v1: [self.positive(2), self.positive(2)],
                v6: [self.positive(2), self.positive(2)],
                v7: [self.positive(2), self.positive(2)],
            };
            let Ok(cube) = exact_cube(&params) else { continue };
            if exact_is_combinatorial_cube(&cube) {
                return Ok(cube);
            }
        }
        Err(Error::ExhaustedRetries(10_000))
    }

    /// Random integer projective map that keeps the whole cube on one side of
    /// the plane sent to infinity, so convexity survives.
    fn projective_image(&mut self, cube: &[ExactPoint; 8]) -> Result<[ExactPoint; 8]> {
        for _ in 0..10_000 {
            let entries: Vec<i64> = (0..16).map(|_| self.rng.random_range(-5..=5)).collect();
            let t = RationalMatrix::from_i64(4, 4, &entries)?;
            if exact_det(&t)?.is_zero() {
                continue;
            }
            let image = cube.clone().map(|p| exact_transform(&t, &p));
            if exact_is_combinatorial_cube(&image) {
                return Ok(image);
            }
        }
        Err(Error::ExhaustedRetries(10_000))
    }

    /// Nonzero affine offset of height ≤ `max_height`.
    fn offset(&mut self) -> ExactPoint {
        loop {
            let o = [self.signed(1), self.signed(1), self.signed(1), Rational::zero()];
            if o.iter().any(|x| !x.is_zero()) {
                return o;
            }
        }
    }
}

struct Outcome {
    zero: bool,
    rank: usize,
    projective: bool,
}

fn cube_trial(cfg: &CertificateConfig, index: usize) -> Result<Outcome> {
    let mut s = Sampler::new(cfg.seed, 2 * index as u64, cfg.max_height);
    let projective = match cfg.sampling {
        CertificateSampling::NormalForm => false,
        CertificateSampling::Projective => true,
        CertificateSampling::Both => index % 2 == 1,
    };
    let mut cube = s.cube()?;
    if projective {
        cube = s.projective_image(&cube)?;
    }
    let f1 = s.focal(cfg.focal_box);
    let f2 = s.focal(cfg.focal_box);
    let rank = exact_rank(&exact_veronese_matrix(&cube));
    let zero = exact_turnbull_young(&ExactConfigTen::new(&cube, f1, f2)).is_zero();
    Ok(Outcome { zero, rank, projective })
}

fn control_trial(cfg: &CertificateConfig, index: usize) -> Result<bool> {
    let mut s = Sampler::new(cfg.seed, 2 * index as u64 + 1, cfg.max_height);
    let mut cube = s.cube()?;
    let off = s.offset();
    let w = cube[6][3].clone();
    for k in 0..4 {
        cube[6][k] += &off[k] * &w;
    }
    let f1 = s.focal(cfg.focal_box);
    let f2 = s.focal(cfg.focal_box);
    Ok(!exact_turnbull_young(&ExactConfigTen::new(&cube, f1, f2)).is_zero())
}

/// Checks the vanishing of the reduced invariant and the Veronese rank bound
/// on random rational cubes, plus nonvanishing on perturbed controls.
/// Deterministic in `cfg`.
pub fn run_certificate(cfg: &CertificateConfig) -> Result<CertificateReport> {
    if cfg.max_height < cfg.focal_box.max(2) || cfg.focal_box < 1 {
        return Err(Error::InvalidArgument("coordinate height too small for the sampling box".into()));
    }
    let outcomes = (0..cfg.trials).into_par_iter().map(|i| cube_trial(cfg, i)).collect::<Result<Vec<_>>>()?;
    let controls = (0..cfg.controls).into_par_iter().map(|i| control_trial(cfg, i)).collect::<Result<Vec<_>>>()?;

    let mut report = CertificateReport { trials: cfg.trials, controls: cfg.controls, ..Default::default() };
    for o in outcomes {
        report.invariant_zero += usize::from(o.zero);
        report.projective_trials += usize::from(o.projective);
        *report.rank_histogram.entry(o.rank).or_default() += 1;
    }
    report.controls_nonzero = controls.into_iter().filter(|&b| b).count();
    Ok(report)
}
