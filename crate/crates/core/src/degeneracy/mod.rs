//! Veronese lift, the epipolar constraint matrix, the reduced Turnbull–Young
//! bracket polynomial and combinatorial cubes.

mod cube;

pub use crate::linalg::kernel_basis;
pub use cube::{
    is_combinatorial_cube, random_combinatorial_cube, random_combinatorial_cube_with, unit_cube, CubeCheck, CubeConfig,
    CubeParams, GeneratedCube, CUBE_LABELS, FACETS,
};

use nalgebra::{DMatrix, Vector4};

use crate::error::{Error, Result};
use crate::linalg::{bracket, bracket_scale};
use crate::projective::{HomPoint2, HomPoint3};

/// All degree-two monomials of `(x₁, x₂, x₃, x₄)`, in the order
/// `x₁², x₁x₂, x₁x₃, x₁x₄, x₂², x₂x₃, x₂x₄, x₃², x₃x₄, x₄²`.
pub fn veronese24(p: &HomPoint3) -> [f64; 10] {
    veronese_of(p.coords())
}

pub(crate) fn veronese_of(x: &Vector4<f64>) -> [f64; 10] {
    let mut out = [0.0; 10];
    let mut k = 0;
    for i in 0..4 {
        for j in i..4 {
            out[k] = x[i] * x[j];
            k += 1;
        }
    }
    out
}

/// Stacks [`veronese24`] of every point into an `n × 10` matrix.
pub fn veronese_matrix(points: &[HomPoint3]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(points.len(), 10);
    for (i, p) in points.iter().enumerate() {
        for (j, v) in veronese24(p).iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    m
}

/// Veronese matrix of the unit-normalised points; same rank and kernel as
/// [`veronese_matrix`] but better conditioned.
pub(crate) fn veronese_matrix_normalized(points: &[HomPoint3]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(points.len(), 10);
    for (i, p) in points.iter().enumerate() {
        let x = p.coords() / p.coords().norm();
        for (j, v) in veronese_of(&x).iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    m
}

/// Numerical rank of the Veronese matrix, computed on unit-normalised
/// points with relative threshold `tol`.
pub fn veronese_rank(points: &[HomPoint3], tol: f64) -> usize {
    crate::linalg::numerical_rank(&veronese_matrix_normalized(points), tol)
}

/// Constraint matrix whose `i`-th row is `kron(Yᵢ, Xᵢ)`, so that
/// `row · vec_rowmajor(F) = Yᵢᵀ F Xᵢ`.
pub fn build_z(x: &[HomPoint2], y: &[HomPoint2]) -> Result<DMatrix<f64>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    let mut z = DMatrix::zeros(x.len(), 9);
    for (i, (xi, yi)) in x.iter().zip(y).enumerate() {
        let (xv, yv) = (xi.coords(), yi.coords());
        for a in 0..3 {
            for b in 0..3 {
                z[(i, 3 * a + b)] = yv[a] * xv[b];
            }
        }
    }
    Ok(z)
}

/// The ten points `[P, f₁, f₂]` with the cube in labels 0–3, 6–9 and the
/// focal points in labels 4 and 5.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigTen {
    pub points: [HomPoint3; 10],
}

impl ConfigTen {
    pub fn new(cube: &CubeConfig, f1: HomPoint3, f2: HomPoint3) -> Self {
        let v = cube.vertices();
        Self { points: [v[0], v[1], v[2], v[3], f1, f2, v[4], v[5], v[6], v[7]] }
    }

    pub fn from_points(points: [HomPoint3; 10]) -> Self {
        Self { points }
    }
}

/// Signed bracket monomials of the reduced invariant: `(sign, [brackets])`,
/// every bracket a 4-tuple of labels.
pub const TURNBULL_YOUNG_TERMS: [(i8, [[usize; 4]; 5]); 4] = [
    (1, [[0, 1, 3, 5], [0, 2, 4, 7], [1, 2, 6, 8], [3, 4, 6, 9], [5, 7, 8, 9]]),
    (-1, [[0, 1, 3, 4], [0, 2, 5, 7], [1, 2, 6, 8], [3, 5, 6, 9], [4, 7, 8, 9]]),
    (1, [[0, 1, 2, 5], [0, 3, 4, 6], [1, 3, 7, 8], [2, 4, 7, 9], [5, 6, 8, 9]]),
    (-1, [[0, 1, 2, 4], [0, 3, 5, 6], [1, 3, 7, 8], [2, 5, 7, 9], [4, 6, 8, 9]]),
];

fn gather(c: &ConfigTen, labels: &[usize; 4]) -> [Vector4<f64>; 4] {
    labels.map(|l| *c.points[l].coords())
}

/// Evaluates the reduced Turnbull–Young bracket polynomial. It vanishes when
/// the eight cube vertices form a combinatorial cube, whatever the two focal
/// points are.
pub fn turnbull_young_reduced(c: &ConfigTen) -> f64 {
    TURNBULL_YOUNG_TERMS
        .iter()
        .map(|(sign, brackets)| f64::from(*sign) * brackets.iter().map(|b| bracket(&gather(c, b))).product::<f64>())
        .sum()
}

/// Sum over monomials of the product of Hadamard bounds; the natural scale
/// for judging whether [`turnbull_young_reduced`] vanishes.
pub fn turnbull_young_scale(c: &ConfigTen) -> f64 {
    TURNBULL_YOUNG_TERMS
        .iter()
        .map(|(_, brackets)| brackets.iter().map(|b| bracket_scale(&gather(c, b))).product::<f64>())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::numerical_rank;

    #[test]
    fn veronese_examples() {
        let v = veronese24(&HomPoint3::new(0.0, 0.0, 0.0, 1.0).unwrap());
        assert_eq!(v, [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(veronese24(&HomPoint3::affine(1.0, 1.0, 1.0)), [1.0; 10]);
        // direct enumeration: x1², x1x2, x1x3, x1x4, x2², x2x3, x2x4, x3², x3x4, x4²
        let (a, b, c, d) = (1.0, 2.0, 3.0, 1.0);
        let oracle = [a * a, a * b, a * c, a * d, b * b, b * c, b * d, c * c, c * d, d * d];
        assert_eq!(veronese24(&HomPoint3::affine(1.0, 2.0, 3.0)), oracle);
        assert_eq!(oracle, [1.0, 2.0, 3.0, 1.0, 4.0, 6.0, 2.0, 9.0, 3.0, 1.0]);
    }

    #[test]
    fn veronese_rank_of_single_point() {
        let m = veronese_matrix(&[HomPoint3::affine(0.3, -1.0, 2.0)]);
        assert_eq!(m.shape(), (1, 10));
        assert_eq!(numerical_rank(&m, 1e-10), 1);
    }

    #[test]
    fn veronese_rank_of_standard_cube_is_seven() {
        let m = veronese_matrix(unit_cube().vertices());
        assert_eq!(numerical_rank(&m, 1e-10), 7);
    }

    #[test]
    fn z_rows_match_printed_values() {
        let z = build_z(&[HomPoint2::new(1.0, 2.0, 1.0).unwrap()], &[HomPoint2::new(1.0, 2.0, 0.0).unwrap()]).unwrap();
        assert_eq!(z.row(0).iter().copied().collect::<Vec<_>>(), vec![1.0, 2.0, 1.0, 2.0, 4.0, 2.0, 0.0, 0.0, 0.0]);
        let z = build_z(&[HomPoint2::new(3.0, 4.0, 3.0).unwrap()], &[HomPoint2::new(3.0, 4.0, 2.0).unwrap()]).unwrap();
        assert_eq!(z.row(0).iter().copied().collect::<Vec<_>>(), vec![9.0, 12.0, 9.0, 12.0, 16.0, 12.0, 6.0, 8.0, 6.0]);
        let e1 = HomPoint2::new(1.0, 0.0, 0.0).unwrap();
        let z = build_z(&[e1], &[e1]).unwrap();
        assert_eq!(z.row(0).iter().copied().collect::<Vec<_>>(), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn z_length_mismatch() {
        let p = HomPoint2::affine(0.0, 0.0);
        assert!(matches!(build_z(&[p], &[]), Err(Error::LengthMismatch { .. })));
    }

    fn unit_cube_config(f1: HomPoint3, f2: HomPoint3) -> ConfigTen {
        // labels 0..9 in the normal form of the cube parametrisation
        let p = |x, y, z| HomPoint3::affine(x, y, z);
        ConfigTen::from_points([
            p(0.0, 0.0, 0.0),
            p(1.0, 1.0, 0.0),
            p(0.0, 1.0, 0.0),
            p(1.0, 0.0, 0.0),
            f1,
            f2,
            p(1.0, 0.0, 1.0),
            p(0.0, 1.0, 1.0),
            p(1.0, 1.0, 1.0),
            p(0.0, 0.0, 1.0),
        ])
    }

    #[test]
    fn invariant_vanishes_on_unit_cube() {
        let c = unit_cube_config(HomPoint3::affine(1.0, 2.0, 3.0), HomPoint3::affine(-1.0, 5.0, 2.0));
        assert!(turnbull_young_reduced(&c).abs() <= 1e-12 * turnbull_young_scale(&c));
    }

    #[test]
    fn invariant_nonzero_off_the_cube() {
        let mut c = unit_cube_config(HomPoint3::affine(1.0, 2.0, 3.0), HomPoint3::affine(-1.0, 5.0, 2.0));
        c.points[8] = HomPoint3::affine(2.0, 5.0, 7.0);
        // exact value computed with rational arithmetic
        assert!((turnbull_young_reduced(&c) - 1062.0).abs() <= 1e-12 * turnbull_young_scale(&c));
    }

    #[test]
    fn invariant_with_repeated_point() {
        let mut c = unit_cube_config(HomPoint3::affine(1.0, 2.0, 3.0), HomPoint3::affine(-1.0, 5.0, 2.0));
        c.points[1] = c.points[0];
        // every monomial contains a bracket with labels 0 and 1
        assert_eq!(turnbull_young_reduced(&c), 0.0);
    }
}
