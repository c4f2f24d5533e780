#![allow(dead_code)]

use epicube::degeneracy::{build_z, random_combinatorial_cube};
use epicube::estimators::fundamental_from_cameras;
use epicube::harness::sample_camera_pair;
use epicube::linalg::numerical_rank;
use epicube::projective::{focal_point, project_all};
use epicube::quadrics::{classify, quadric_through_points, QuadricClass};
use epicube::{Camera, FMatrix, HomPoint2, HomPoint3};
use rand::Rng;

pub const CAMERA_RADIUS: f64 = 6.0;

/// Cube or generic world points seen by a random camera pair.
pub struct Scene {
    pub world: Vec<HomPoint3>,
    pub cameras: (Camera, Camera),
    pub x: Vec<HomPoint2>,
    pub y: Vec<HomPoint2>,
    pub truth: FMatrix,
}

impl Scene {
    pub fn new<R: Rng>(rng: &mut R, world: Vec<HomPoint3>) -> Self {
        let (a1, a2) = sample_camera_pair(rng, CAMERA_RADIUS).unwrap();
        Self {
            x: project_all(&a1, &world).unwrap(),
            y: project_all(&a2, &world).unwrap(),
            truth: fundamental_from_cameras(&a1, &a2).unwrap(),
            cameras: (a1, a2),
            world,
        }
    }

    pub fn cube<R: Rng>(rng: &mut R) -> Self {
        let cube = random_combinatorial_cube(rng, 2.0).unwrap();
        Self::new(rng, cube.vertices().to_vec())
    }

    /// Class of the quadric through the world points and both focal points.
    pub fn quadric_class(&self) -> Option<QuadricClass> {
        quadric_class_with_foci(&self.world, &self.cameras)
    }
}

pub fn quadric_class_with_foci(world: &[HomPoint3], cameras: &(Camera, Camera)) -> Option<QuadricClass> {
    let mut pts = world.to_vec();
    pts.push(focal_point(&cameras.0).unwrap());
    pts.push(focal_point(&cameras.1).unwrap());
    quadric_through_points(&pts).ok().map(|q| classify(&q))
}

pub fn random_points<R: Rng>(rng: &mut R, n: usize) -> Vec<HomPoint3> {
    (0..n)
        .map(|_| {
            HomPoint3::affine(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .collect()
}

/// Numerical rank of the constraint matrix built from unit-norm points.
pub fn z_rank(x: &[HomPoint2], y: &[HomPoint2], tol: f64) -> usize {
    let unit = |p: &HomPoint2| HomPoint2::from_vector(p.coords().normalize()).unwrap();
    let xn: Vec<_> = x.iter().map(unit).collect();
    let yn: Vec<_> = y.iter().map(unit).collect();
    numerical_rank(&build_z(&xn, &yn).unwrap(), tol)
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}
