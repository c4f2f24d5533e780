use nalgebra::{DMatrix, Matrix3, Vector3, Vector4};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{bracket, bracket_scale, cross4, FullSvd};
use crate::projective::HomPoint3;

/// Vertex labels of a combinatorial cube; labels 4 and 5 are reserved for the
/// two focal points.
pub const CUBE_LABELS: [usize; 8] = [0, 1, 2, 3, 6, 7, 8, 9];

/// The six facets as label quadruples.
pub const FACETS: [[usize; 4]; 6] =
    [[0, 1, 2, 3], [6, 7, 8, 9], [0, 3, 6, 9], [1, 2, 7, 8], [0, 2, 7, 9], [1, 3, 6, 8]];

const DEFAULT_RETRIES: usize = 10_000;

/// Eight labelled vertices, stored in [`CUBE_LABELS`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeConfig {
    vertices: [HomPoint3; 8],
}

fn slot(label: usize) -> usize {
    CUBE_LABELS.iter().position(|&l| l == label).unwrap_or_else(|| panic!("label {label} is not a cube vertex"))
}

impl CubeConfig {
    /// Wraps vertices given in label order `0, 1, 2, 3, 6, 7, 8, 9`. No
    /// validity check is made; see [`is_combinatorial_cube`].
    pub fn new(vertices: [HomPoint3; 8]) -> Self {
        Self { vertices }
    }

    pub fn vertices(&self) -> &[HomPoint3; 8] {
        &self.vertices
    }

    /// Vertex carrying `label`.
    pub fn vertex(&self, label: usize) -> &HomPoint3 {
        &self.vertices[slot(label)]
    }

    /// Applies `p ↦ T p` to every vertex.
    pub fn transformed(&self, t: &nalgebra::Matrix4<f64>) -> Result<Self> {
        let mut out = self.vertices;
        for (dst, v) in out.iter_mut().zip(&self.vertices) {
            *dst = HomPoint3::from_vector(t * v.coords())?;
        }
        Ok(Self { vertices: out })
    }
}

/// The cube with vertices `(±1, ±1, ±1, 1)`.
pub fn unit_cube() -> CubeConfig {
    let p = |x, y, z| HomPoint3::affine(x, y, z);
    CubeConfig::new([
        p(-1.0, -1.0, -1.0), // 0
        p(1.0, 1.0, -1.0),   // 1
        p(-1.0, 1.0, -1.0),  // 2
        p(1.0, -1.0, -1.0),  // 3
        p(1.0, -1.0, 1.0),   // 6
        p(-1.0, 1.0, 1.0),   // 7
        p(1.0, 1.0, 1.0),    // 8
        p(-1.0, -1.0, 1.0),  // 9
    ])
}

/// Outcome of [`is_combinatorial_cube`].
#[derive(Debug, Clone, PartialEq)]
pub struct CubeCheck {
    pub is_cube: bool,
    /// `|det| / Hadamard bound` of each facet quadruple.
    pub facet_residuals: [f64; 6],
    /// Every facet plane has the four remaining vertices strictly on one side.
    pub strictly_convex: bool,
    pub reason: Option<String>,
}

/// Tests coplanarity of the six facets and the strict-side condition that
/// makes each facet plane a supporting plane of the polytope.
pub fn is_combinatorial_cube(cube: &CubeConfig, tol: f64) -> CubeCheck {
    let mut facet_residuals = [0.0; 6];
    let mut reason = None;

    if let Some(l) = CUBE_LABELS.iter().find(|&&l| !cube.vertex(l).is_affine(tol)) {
        return CubeCheck {
            is_cube: false,
            facet_residuals,
            strictly_convex: false,
            reason: Some(format!("vertex {l} is not affine")),
        };
    }
    let affine: Vec<Vector4<f64>> = cube.vertices.iter().map(|v| v.coords() / v.coords()[3]).collect();
    let at = |label: usize| affine[slot(label)];

    for (k, facet) in FACETS.iter().enumerate() {
        let pts = facet.map(at);
        facet_residuals[k] = bracket(&pts).abs() / bracket_scale(&pts);
        if facet_residuals[k] > tol && reason.is_none() {
            reason = Some(format!("facet {facet:?} is not planar"));
        }
    }

    let mut strictly_convex = true;
    for facet in &FACETS {
        let rows: Vec<f64> = facet.iter().flat_map(|&l| at(l).iter().copied().collect::<Vec<_>>()).collect();
        let svd = FullSvd::new(&DMatrix::from_row_slice(4, 4, &rows));
        let plane = Vector4::from_iterator(svd.v.column(3).iter().copied());
        let sides: Vec<f64> =
            CUBE_LABELS.iter().filter(|l| !facet.contains(l)).map(|&l| plane.dot(&at(l)) / at(l).norm()).collect();
        let all_pos = sides.iter().all(|&s| s > tol);
        let all_neg = sides.iter().all(|&s| s < -tol);
        if !(all_pos || all_neg) {
            strictly_convex = false;
            if reason.is_none() {
                reason = Some(format!("vertices off facet {facet:?} are not strictly on one side"));
            }
        }
    }

    CubeCheck { is_cube: reason.is_none(), facet_residuals, strictly_convex, reason }
}

/// Free coordinates of the normal form: vertex 0 at the origin, vertices 3, 2,
/// 9 at the unit vectors, vertex 1 = `(x₁, x₂, 0)` on the xy-plane,
/// vertex 6 = `(x₅, 0, x₆)` on the xz-plane and vertex 7 = `(0, x₃, x₄)` on
/// the yz-plane. Vertex 8 is determined by the remaining facets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubeParams {
    pub v1: [f64; 2],
    pub v6: [f64; 2],
    pub v7: [f64; 2],
}

impl CubeParams {
    /// Draws every free coordinate uniformly from `(0, spread]`.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, spread: f64) -> Self {
        let mut draw = || spread * (1.0 - rng.random::<f64>());
        Self { v1: [draw(), draw()], v6: [draw(), draw()], v7: [draw(), draw()] }
    }

    /// Completes the normal form by intersecting the planes through
    /// `{1, 2, 7}`, `{1, 3, 6}` and `{6, 7, 9}`.
    pub fn close(&self) -> Result<CubeConfig> {
        let p0 = Vector4::new(0.0, 0.0, 0.0, 1.0);
        let p1 = Vector4::new(self.v1[0], self.v1[1], 0.0, 1.0);
        let p2 = Vector4::new(0.0, 1.0, 0.0, 1.0);
        let p3 = Vector4::new(1.0, 0.0, 0.0, 1.0);
        let p6 = Vector4::new(self.v6[0], 0.0, self.v6[1], 1.0);
        let p7 = Vector4::new(0.0, self.v7[0], self.v7[1], 1.0);
        let p9 = Vector4::new(0.0, 0.0, 1.0, 1.0);

        let unit = |v: Vector4<f64>| {
            let n = v.norm();
            if n <= 1e-12 {
                Err(Error::DegenerateIntersection)
            } else {
                Ok(v / n)
            }
        };
        let a = unit(cross4(&p1, &p2, &p7))?;
        let b = unit(cross4(&p1, &p3, &p6))?;
        let c = unit(cross4(&p6, &p7, &p9))?;
        let p8 = cross4(&a, &b, &c);
        // near-parallel planes: the intersection is ill-conditioned
        if p8.norm() <= 1e-8 || p8[3].abs() <= 1e-8 * p8.norm() {
            return Err(Error::DegenerateIntersection);
        }
        let p8 = p8 / p8[3];
        let pt = |v: Vector4<f64>| HomPoint3::from_vector(v).expect("nonzero");
        Ok(CubeConfig::new([pt(p0), pt(p1), pt(p2), pt(p3), pt(p6), pt(p7), pt(p8), pt(p9)]))
    }
}

/// A sampled cube together with how it was built.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedCube {
    pub cube: CubeConfig,
    pub params: CubeParams,
    pub normal_form: CubeConfig,
    /// The affine map `x ↦ linear · x + translation` taking the normal form to `cube`.
    pub linear: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

/// Samples a combinatorial cube inside `[−1, 1]³` with the default retry budget.
pub fn random_combinatorial_cube<R: Rng + ?Sized>(rng: &mut R, spread: f64) -> Result<CubeConfig> {
    random_combinatorial_cube_with(rng, spread, DEFAULT_RETRIES).map(|g| g.cube)
}

/// Samples normal-form parameters, closes the cube, rejects non-convex
/// outcomes and applies a random invertible affine map that fits the result
/// into `[−1, 1]³`.
pub fn random_combinatorial_cube_with<R: Rng + ?Sized>(
    rng: &mut R,
    spread: f64,
    max_retries: usize,
) -> Result<GeneratedCube> {
    if !(spread.is_finite() && spread > 0.0) {
        return Err(Error::InvalidArgument(format!("spread must be positive, got {spread}")));
    }
    for _ in 0..max_retries {
        let params = CubeParams::sample(rng, spread);
        let Ok(normal_form) = params.close() else { continue };
        if !is_combinatorial_cube(&normal_form, 1e-10).is_cube {
            continue;
        }
        let Some((linear, translation)) = random_fitting_affine(rng, &normal_form) else { continue };
        let mut t = nalgebra::Matrix4::identity();
        t.fixed_view_mut::<3, 3>(0, 0).copy_from(&linear);
        t.fixed_view_mut::<3, 1>(0, 3).copy_from(&translation);
        let cube = normal_form.transformed(&t)?;
        if !is_combinatorial_cube(&cube, 1e-10).is_cube {
            continue;
        }
        return Ok(GeneratedCube { cube, params, normal_form, linear, translation });
    }
    Err(Error::ExhaustedRetries(max_retries))
}

/// Random well-conditioned linear map followed by the translation and
/// uniform scaling that centre the bounding box and fit it into `[−1, 1]³`.
fn random_fitting_affine<R: Rng + ?Sized>(rng: &mut R, cube: &CubeConfig) -> Option<(Matrix3<f64>, Vector3<f64>)> {
    let m = Matrix3::from_fn(|_, _| rng.random::<f64>() * 2.0 - 1.0);
    let s = m.singular_values();
    if s.min() <= 0.1 * s.max() {
        return None;
    }
    let pts: Vec<Vector3<f64>> = cube.vertices().iter().map(|v| m * v.dehomogenize().expect("affine")).collect();
    let mut lo = pts[0];
    let mut hi = pts[0];
    for p in &pts {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let center = (lo + hi) / 2.0;
    let half = (hi - lo).max() / 2.0;
    let target = 0.5 + 0.5 * rng.random::<f64>();
    let scale = target / half;
    Some((m * scale, -center * scale))
}
