//! Exact rational arithmetic: determinants, ranks, the reduced Turnbull–Young
//! invariant and closure of rational cubes.

mod certificate;
mod matrix;

pub use certificate::{run_certificate, CertificateConfig, CertificateReport, CertificateSampling};
pub use matrix::{exact_det, exact_rank, rat, rat_from_f64, Rational, RationalMatrix};

use num_traits::{One, Signed, Zero};

use crate::degeneracy::{ConfigTen, CUBE_LABELS, FACETS, TURNBULL_YOUNG_TERMS};
use crate::error::{Error, Result};
use crate::projective::HomPoint3;

/// Homogeneous point of ℙ³ with rational coordinates.
pub type ExactPoint = [Rational; 4];

pub fn exact_affine(x: Rational, y: Rational, z: Rational) -> ExactPoint {
    [x, y, z, Rational::one()]
}

/// Exact image of a floating-point homogeneous point.
pub fn exact_point(p: &HomPoint3) -> Result<ExactPoint> {
    let c = p.coords();
    Ok([rat_from_f64(c[0])?, rat_from_f64(c[1])?, rat_from_f64(c[2])?, rat_from_f64(c[3])?])
}

fn det3(m: [[&Rational; 3]; 3]) -> Rational {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Signed maximal minors of `[a; b; c]`, so that `r · w = det[r; a; b; c]`.
pub fn exact_cross4(a: &ExactPoint, b: &ExactPoint, c: &ExactPoint) -> ExactPoint {
    std::array::from_fn(|i| {
        let cols: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        let m = det3([a, b, c].map(|p| [&p[cols[0]], &p[cols[1]], &p[cols[2]]]));
        if i % 2 == 0 {
            m
        } else {
            -m
        }
    })
}

pub fn exact_dot(a: &ExactPoint, b: &ExactPoint) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `det[a; b; c; d]`.
pub fn exact_bracket(p: [&ExactPoint; 4]) -> Rational {
    exact_dot(p[0], &exact_cross4(p[1], p[2], p[3]))
}

/// The ten labelled points of a configuration, exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactConfigTen {
    pub points: [ExactPoint; 10],
}

impl ExactConfigTen {
    /// Cube vertices in label order 0, 1, 2, 3, 6, 7, 8, 9; focal points become labels 4 and 5.
    pub fn new(cube: &[ExactPoint; 8], f1: ExactPoint, f2: ExactPoint) -> Self {
        let [v0, v1, v2, v3, v6, v7, v8, v9] = cube.clone();
        Self { points: [v0, v1, v2, v3, f1, f2, v6, v7, v8, v9] }
    }

    pub fn from_float(c: &ConfigTen) -> Result<Self> {
        let pts = c.points.iter().map(exact_point).collect::<Result<Vec<_>>>()?;
        Ok(Self { points: pts.try_into().expect("ten points") })
    }
}

/// Exact value of the reduced Turnbull–Young bracket polynomial.
pub fn exact_turnbull_young(c: &ExactConfigTen) -> Rational {
    let mut acc = Rational::zero();
    for (sign, brackets) in &TURNBULL_YOUNG_TERMS {
        let mut term = Rational::one();
        for b in brackets {
            term *= exact_bracket(b.map(|l| &c.points[l]));
            if term.is_zero() {
                break;
            }
        }
        if *sign < 0 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    acc
}

/// Free coordinates of a rational cube in normal form: vertex 1 = `(x₁, x₂, 0)`,
/// vertex 6 = `(x₅, 0, x₆)`, vertex 7 = `(0, x₃, x₄)`, with 0 at the origin and
/// 3, 2, 9 at the unit vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCubeParams {
    pub v1: [Rational; 2],
    pub v6: [Rational; 2],
    pub v7: [Rational; 2],
}

impl ExactCubeParams {
    fn fixed(&self) -> [ExactPoint; 7] {
        let z = Rational::zero;
        let o = Rational::one;
        [
            exact_affine(z(), z(), z()),
            exact_affine(self.v1[0].clone(), self.v1[1].clone(), z()),
            exact_affine(z(), o(), z()),
            exact_affine(o(), z(), z()),
            exact_affine(self.v6[0].clone(), z(), self.v6[1].clone()),
            exact_affine(z(), self.v7[0].clone(), self.v7[1].clone()),
            exact_affine(z(), z(), o()),
        ]
    }
}

/// Vertex 8: the common point of the planes through `{1, 2, 7}`, `{1, 3, 6}`
/// and `{6, 7, 9}`, scaled to last coordinate 1 when it is finite.
pub fn exact_cube_closure(params: &ExactCubeParams) -> Result<ExactPoint> {
    let [_, p1, p2, p3, p6, p7, p9] = params.fixed();
    let a = exact_cross4(&p1, &p2, &p7);
    let b = exact_cross4(&p1, &p3, &p6);
    let c = exact_cross4(&p6, &p7, &p9);
    let p8 = exact_cross4(&a, &b, &c);
    if p8.iter().all(Zero::is_zero) {
        return Err(Error::DegenerateIntersection);
    }
    if p8[3].is_zero() {
        return Ok(p8);
    }
    let w = p8[3].clone();
    Ok(p8.map(|x| x / &w))
}

/// All eight vertices, in label order 0, 1, 2, 3, 6, 7, 8, 9.
pub fn exact_cube(params: &ExactCubeParams) -> Result<[ExactPoint; 8]> {
    let p8 = exact_cube_closure(params)?;
    let [p0, p1, p2, p3, p6, p7, p9] = params.fixed();
    Ok([p0, p1, p2, p3, p6, p7, p8, p9])
}

fn slot(label: usize) -> usize {
    CUBE_LABELS.iter().position(|&l| l == label).expect("cube label")
}

/// The six facet brackets; all zero exactly when every facet is planar.
pub fn exact_facet_determinants(cube: &[ExactPoint; 8]) -> [Rational; 6] {
    FACETS.map(|f| exact_bracket(f.map(|l| &cube[slot(l)])))
}

/// Planar facets and strictly convex position, decided exactly. Vertices
/// must all be finite with last coordinates of one sign.
pub fn exact_is_combinatorial_cube(cube: &[ExactPoint; 8]) -> bool {
    let positive = cube[0][3].is_positive();
    if cube.iter().any(|v| v[3].is_zero() || v[3].is_positive() != positive) {
        return false;
    }
    // orient every vertex to positive last coordinate so side tests are meaningful
    let pts: Vec<ExactPoint> = cube.iter().map(|v| if positive { v.clone() } else { v.clone().map(|x| -x) }).collect();
    let at = |l: usize| &pts[slot(l)];
    for facet in &FACETS {
        let [a, b, c, d] = facet.map(at);
        let mut plane = exact_cross4(a, b, c);
        if plane.iter().all(Zero::is_zero) {
            plane = exact_cross4(a, b, d);
            if plane.iter().all(Zero::is_zero) {
                return false;
            }
        }
        if !exact_bracket([a, b, c, d]).is_zero() {
            return false;
        }
        let sides: Vec<Rational> =
            CUBE_LABELS.iter().filter(|l| !facet.contains(l)).map(|&l| exact_dot(&plane, at(l))).collect();
        let all_pos = sides.iter().all(Signed::is_positive);
        let all_neg = sides.iter().all(Signed::is_negative);
        if !(all_pos || all_neg) {
            return false;
        }
    }
    true
}

/// All degree-two monomials in the same order as the floating-point lift.
pub fn exact_veronese(p: &ExactPoint) -> [Rational; 10] {
    let mut out: [Rational; 10] = Default::default();
    let mut k = 0;
    for i in 0..4 {
        for j in i..4 {
            out[k] = &p[i] * &p[j];
            k += 1;
        }
    }
    out
}

pub fn exact_veronese_matrix(points: &[ExactPoint]) -> RationalMatrix {
    RationalMatrix::from_rows(points.iter().map(|p| exact_veronese(p).to_vec()).collect()).expect("ten columns")
}

/// `T · p` for a 4×4 rational matrix.
pub fn exact_transform(t: &RationalMatrix, p: &ExactPoint) -> ExactPoint {
    std::array::from_fn(|i| (0..4).map(|j| t.get(i, j) * &p[j]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneracy::{turnbull_young_reduced, unit_cube};

    fn ri(n: i64) -> Rational {
        rat(n, 1)
    }

    fn ones() -> [Rational; 2] {
        [ri(1), ri(1)]
    }

    #[test]
    fn unit_parameters_close_at_the_unit_corner() {
        let params = ExactCubeParams { v1: ones(), v6: ones(), v7: ones() };
        assert_eq!(exact_cube_closure(&params).unwrap(), [ri(1), ri(1), ri(1), ri(1)]);
    }

    #[test]
    fn closure_satisfies_every_facet() {
        let params =
            ExactCubeParams { v1: [rat(1, 2), rat(1, 3)], v6: [rat(2, 3), rat(1, 5)], v7: [rat(3, 4), rat(1, 2)] };
        let cube = exact_cube(&params).unwrap();
        for d in exact_facet_determinants(&cube) {
            assert!(d.is_zero());
        }
    }

    #[test]
    fn collapsed_vertex_has_no_closure() {
        // vertex 1 on top of vertex 2
        let params = ExactCubeParams { v1: [ri(0), ri(1)], v6: ones(), v7: ones() };
        assert_eq!(exact_cube_closure(&params), Err(Error::DegenerateIntersection));
    }

    #[test]
    fn cross4_is_orthogonal_to_its_arguments() {
        let a = [ri(1), ri(2), ri(-3), rat(1, 2)];
        let b = [ri(0), rat(5, 7), ri(1), ri(1)];
        let c = [ri(4), ri(-1), ri(2), ri(3)];
        let w = exact_cross4(&a, &b, &c);
        for p in [&a, &b, &c] {
            assert!(exact_dot(p, &w).is_zero());
        }
        let r = [ri(2), ri(1), ri(1), ri(-1)];
        let rows: Vec<Vec<Rational>> = [&r, &a, &b, &c].iter().map(|p| p.to_vec()).collect();
        assert_eq!(exact_dot(&r, &w), exact_det(&RationalMatrix::from_rows(rows).unwrap()).unwrap());
    }

    #[test]
    fn invariant_vanishes_on_the_unit_cube() {
        let cube: [ExactPoint; 8] = unit_cube().vertices().map(|v| exact_point(&v).unwrap());
        let f1 = [ri(1), ri(2), ri(3), ri(1)];
        let f2 = [ri(-1), ri(5), ri(2), ri(1)];
        assert!(exact_turnbull_young(&ExactConfigTen::new(&cube, f1, f2)).is_zero());
        assert!(exact_is_combinatorial_cube(&cube));
    }

    #[test]
    fn moved_corner_gives_the_known_value() {
        let params = ExactCubeParams { v1: ones(), v6: ones(), v7: ones() };
        let mut cube = exact_cube(&params).unwrap();
        cube[6] = [ri(2), ri(5), ri(7), ri(1)];
        let f1 = [ri(1), ri(2), ri(3), ri(1)];
        let f2 = [ri(-1), ri(5), ri(2), ri(1)];
        let c = ExactConfigTen::new(&cube, f1, f2);
        assert_eq!(exact_turnbull_young(&c), ri(1062));
        assert!(!exact_is_combinatorial_cube(&cube));
    }

    #[test]
    fn float_and_exact_invariants_agree() {
        let mut v = *unit_cube().vertices();
        v[6] = HomPoint3::affine(1.25, 0.875, 1.5);
        let c = ConfigTen::new(
            &crate::degeneracy::CubeConfig::new(v),
            HomPoint3::affine(0.5, -2.0, 3.0),
            HomPoint3::affine(-1.5, 4.0, 0.25),
        );
        let exact = exact_turnbull_young(&ExactConfigTen::from_float(&c).unwrap());
        let exact_f = num_traits::ToPrimitive::to_f64(&exact).unwrap();
        let float = turnbull_young_reduced(&c);
        assert!((float - exact_f).abs() <= 1e-9 * exact_f.abs().max(1.0), "{float} vs {exact_f}");
    }

    #[test]
    fn veronese_rank_of_the_unit_cube_is_seven() {
        let cube: Vec<ExactPoint> = unit_cube().vertices().iter().map(|v| exact_point(v).unwrap()).collect();
        assert_eq!(exact_rank(&exact_veronese_matrix(&cube)), 7);
        let float = crate::linalg::numerical_rank(&crate::degeneracy::veronese_matrix(unit_cube().vertices()), 1e-10);
        assert_eq!(float, 7);
    }

    #[test]
    fn generic_points_have_full_veronese_rank() {
        let pts: Vec<ExactPoint> =
            (1..=10i64).map(|k| [rat(k, 3), rat(k * k % 7 + 1, 2), rat(k * k * k % 11 - 5, 5), ri(1)]).collect();
        assert_eq!(exact_rank(&exact_veronese_matrix(&pts)), 10);
    }
}
