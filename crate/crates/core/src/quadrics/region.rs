use nalgebra::Vector3;
use rayon::prelude::*;

use super::{classify_with, quadric_through_points_with, unit_cube_quadric, QuadricClass};
use crate::degeneracy::{unit_cube, CubeConfig};
use crate::error::{Error, Result};
use crate::projective::HomPoint3;
use crate::tolerance::Tolerances;

/// Affine plane `origin + u · u_axis + v · v_axis` sampled over a rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneChart {
    pub origin: Vector3<f64>,
    pub u_axis: Vector3<f64>,
    pub v_axis: Vector3<f64>,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
}

impl PlaneChart {
    /// Horizontal plane `z = height` over `[−half, half]²`.
    pub fn horizontal(height: f64, half: f64) -> Self {
        Self {
            origin: Vector3::new(0.0, 0.0, height),
            u_axis: Vector3::x(),
            v_axis: Vector3::y(),
            u_range: (-half, half),
            v_range: (-half, half),
        }
    }

    pub fn point(&self, u: f64, v: f64) -> HomPoint3 {
        let p = self.origin + self.u_axis * u + self.v_axis * v;
        HomPoint3::affine(p[0], p[1], p[2])
    }

    /// `(u, v)` of grid node `(i, j)` on a `resolution × resolution` lattice
    /// including both ends of each range.
    pub fn node(&self, i: usize, j: usize, resolution: usize) -> (f64, f64) {
        let lerp = |(a, b): (f64, f64), k: usize| a + (b - a) * k as f64 / (resolution - 1) as f64;
        (lerp(self.u_range, i), lerp(self.v_range, j))
    }
}

/// How the quadric of each cell is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadricRoute {
    /// Kernel of the 10-point Veronese matrix.
    General,
    /// Signed minors for the cube `(±1, ±1, ±1)`; only valid for that cube.
    UnitCube,
    /// `UnitCube` when the cube is the unit cube, `General` otherwise.
    Auto,
}

/// One grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCell {
    pub u: f64,
    pub v: f64,
    pub class: QuadricClass,
}

/// Classifies the quadric through the cube, `f1` and every grid point `f2`
/// of the chart. Cells are ordered with `u` varying fastest.
pub fn region_grid(
    cube: &CubeConfig,
    f1: &HomPoint3,
    chart: &PlaneChart,
    resolution: usize,
) -> Result<Vec<RegionCell>> {
    region_grid_with(cube, f1, chart, resolution, QuadricRoute::Auto, &Tolerances::default())
}

pub fn region_grid_with(
    cube: &CubeConfig,
    f1: &HomPoint3,
    chart: &PlaneChart,
    resolution: usize,
    route: QuadricRoute,
    tol: &Tolerances,
) -> Result<Vec<RegionCell>> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!("resolution must be at least 2, got {resolution}")));
    }
    let is_unit = {
        let unit = unit_cube();
        cube.vertices().iter().zip(unit.vertices()).all(|(a, b)| a.projectively_eq(b, 1e-12))
    };
    let route = match route {
        QuadricRoute::Auto if is_unit => QuadricRoute::UnitCube,
        QuadricRoute::Auto => QuadricRoute::General,
        QuadricRoute::UnitCube if !is_unit => {
            return Err(Error::InvalidArgument("unit-cube route requires the unit cube".into()));
        }
        r => r,
    };

    (0..resolution * resolution)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % resolution, k / resolution);
            let (u, v) = chart.node(i, j, resolution);
            let f2 = chart.point(u, v);
            let class = cell_class(cube, f1, &f2, route, tol)?;
            Ok(RegionCell { u, v, class })
        })
        .collect()
}

fn cell_class(
    cube: &CubeConfig,
    f1: &HomPoint3,
    f2: &HomPoint3,
    route: QuadricRoute,
    tol: &Tolerances,
) -> Result<QuadricClass> {
    let q = match route {
        QuadricRoute::UnitCube => unit_cube_quadric(f1, f2),
        _ => {
            let mut pts: Vec<HomPoint3> = cube.vertices().to_vec();
            pts.push(*f1);
            pts.push(*f2);
            quadric_through_points_with(&pts, tol)
        }
    };
    match q {
        Ok(q) => Ok(classify_with(&q, tol)),
        Err(Error::RankDeficient | Error::PencilOfQuadrics { .. }) => Ok(QuadricClass::underdetermined()),
        Err(e) => Err(e),
    }
}
