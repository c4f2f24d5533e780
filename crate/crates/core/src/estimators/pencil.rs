//! Singular members of the pencil `αF₁ + (1 − α)F₂`.

use nalgebra::{Complex, DMatrix, Matrix3};

use crate::error::{Error, Result};
use crate::projective::{grassmann_angle, FMatrix};
use crate::tolerance::Tolerances;

/// Real roots of `det(αF₁ + (1 − α)F₂)` and the matching rank-≤2 matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilSolution {
    /// Ascending.
    pub roots: Vec<f64>,
    pub candidates: Vec<FMatrix>,
}

/// Member `αF₁ + (1 − α)F₂` of the pencil.
pub fn pencil_member(f1: &Matrix3<f64>, f2: &Matrix3<f64>, alpha: f64) -> Matrix3<f64> {
    f1 * alpha + f2 * (1.0 - alpha)
}

/// Coefficients `[c₀, c₁, c₂, c₃]` of `det(αF₁ + (1 − α)F₂) = Σ cₖ αᵏ`,
/// interpolated from the determinant at `α ∈ {−1, 0, 1, 2}`.
pub fn pencil_cubic(f1: &Matrix3<f64>, f2: &Matrix3<f64>) -> [f64; 4] {
    let p = |a: f64| pencil_member(f1, f2, a).determinant();
    let (pm1, p0, p1, p2) = (p(-1.0), p(0.0), p(1.0), p(2.0));
    let c0 = p0;
    let c2 = (pm1 + p1) / 2.0 - p0;
    let c3 = (p2 - 4.0 * c2 - p0 - p1 + pm1) / 6.0;
    let c1 = (p1 - pm1) / 2.0 - c3;
    [c0, c1, c2, c3]
}

fn eval(c: &[f64], z: Complex<f64>) -> Complex<f64> {
    c.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &k| acc * z + k)
}

fn eval_deriv(c: &[f64], z: Complex<f64>) -> Complex<f64> {
    c.iter().enumerate().skip(1).rev().fold(Complex::new(0.0, 0.0), |acc, (i, &k)| acc * z + k * i as f64)
}

/// `Σ |cₖ| rᵏ`: scale of `p(z)` for `|z| = r`.
fn scale0(c: &[f64], r: f64) -> f64 {
    c.iter().enumerate().map(|(i, k)| k.abs() * r.powi(i as i32)).sum()
}

/// `Σ k |cₖ| rᵏ⁻¹`: scale of `p'(z)` for `|z| = r`.
fn scale1(c: &[f64], r: f64) -> f64 {
    c.iter().enumerate().skip(1).map(|(i, k)| i as f64 * k.abs() * r.powi(i as i32 - 1)).sum()
}

/// Is the polynomial within relative perturbation `eta` of one with a
/// multiple root at `m`? Scales use `max(1, |m|)` so that a root near zero is
/// judged against the whole coefficient vector rather than `c₀` alone.
fn is_multiple_root(c: &[f64], m: Complex<f64>, eta: f64) -> bool {
    let r = m.norm().max(1.0);
    eval(c, m).norm() <= eta * scale0(c, r) && eval_deriv(c, m).norm() <= eta * scale1(c, r)
}

/// Complex roots of `Σ cₖ zᵏ` through the eigenvalues of its companion matrix.
fn companion_roots(c: &[f64]) -> Vec<Complex<f64>> {
    let deg = c.len() - 1;
    let lead = c[deg];
    if deg == 1 {
        return vec![Complex::new(-c[0] / lead, 0.0)];
    }
    let mut m = DMatrix::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lead;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

/// Real roots of the polynomial `Σ cₖ αᵏ` (degree ≤ 3), ascending.
///
/// Leading coefficients below `1e-14 · max|cₖ|` are dropped. Companion roots
/// that are numerically a multiple root are merged into their centroid, real
/// roots are filtered by `|im| ≤ tol.imag · (1 + |re|)`, simple roots are
/// Newton-polished and roots closer than `tol.root_dedup` are deduplicated.
pub fn real_roots(coeffs: &[f64], tol: &Tolerances) -> Result<Vec<f64>> {
    let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if max == 0.0 {
        return Err(Error::IdenticallyZeroPencil);
    }
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].abs() <= 1e-14 * max {
        deg -= 1;
    }
    if deg == 0 {
        return Err(Error::NoRealRoot);
    }
    let c = &coeffs[..=deg];
    let mut roots = companion_roots(c);

    // (root, merged?)
    let mut clustered: Vec<(Complex<f64>, bool)> = Vec::new();
    if roots.len() == 3 {
        let m = (roots[0] + roots[1] + roots[2]) / 3.0;
        if is_multiple_root(c, m, tol.root_cluster_triple) {
            clustered.push((m, true));
            roots.clear();
        }
    }
    while let Some(z) = roots.pop() {
        let partner = roots.iter().position(|w| is_multiple_root(c, (z + w) / 2.0, tol.root_cluster_pair));
        match partner {
            Some(j) => {
                let w = roots.remove(j);
                clustered.push(((z + w) / 2.0, true));
            }
            None => clustered.push((z, false)),
        }
    }

    let mut real: Vec<f64> = clustered
        .into_iter()
        .filter(|(z, _)| z.im.abs() <= tol.imag * (1.0 + z.re.abs()))
        .map(|(z, merged)| if merged { z.re } else { polish(c, z.re) })
        .collect();
    real.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(real.len());
    for r in real {
        match out.last() {
            Some(&prev) if (r - prev).abs() <= tol.root_dedup => {}
            _ => out.push(r),
        }
    }
    Ok(out)
}

/// A few Newton steps, kept only while they reduce `|p|`.
fn polish(c: &[f64], mut x: f64) -> f64 {
    let p = |x: f64| c.iter().rev().fold(0.0, |acc, &k| acc * x + k);
    let dp = |x: f64| c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (i, &k)| acc * x + k * i as f64);
    for _ in 0..3 {
        let (v, d) = (p(x), dp(x));
        if d == 0.0 || v == 0.0 {
            break;
        }
        let next = x - v / d;
        if p(next).abs() < v.abs() {
            x = next;
        } else {
            break;
        }
    }
    x
}

/// Solves `det(αF₁ + (1 − α)F₂) = 0` for real `α`.
pub fn pencil_solve(f1: &Matrix3<f64>, f2: &Matrix3<f64>) -> Result<PencilSolution> {
    pencil_solve_with(f1, f2, &Tolerances::default())
}

pub fn pencil_solve_with(f1: &Matrix3<f64>, f2: &Matrix3<f64>, tol: &Tolerances) -> Result<PencilSolution> {
    match grassmann_angle(f1, f2) {
        Err(_) => return Err(Error::DependentInputs),
        Ok(a) if a <= tol.zero => return Err(Error::DependentInputs),
        Ok(_) => {}
    }
    let coeffs = pencil_cubic(f1, f2);
    let scale = (f1.norm() + f2.norm()).powi(3);
    if coeffs.iter().all(|c| c.abs() <= tol.zero * scale) {
        return Err(Error::IdenticallyZeroPencil);
    }
    let roots = real_roots(&coeffs, tol)?;
    let candidates = roots.iter().map(|&a| FMatrix::new(pencil_member(f1, f2, a))).collect::<Result<Vec<_>>>()?;
    Ok(PencilSolution { roots, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::f_angle;

    fn skew_f() -> Matrix3<f64> {
        Matrix3::new(0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    #[test]
    fn cubic_matches_direct_expansion() {
        // det = (1 − α)((1 − α)² + α²) = 1 − 3α + 4α² − 2α³
        let c = pencil_cubic(&skew_f(), &Matrix3::identity());
        let expected = [1.0, -3.0, 4.0, -2.0];
        for (a, b) in c.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14, "{c:?}");
        }
    }

    #[test]
    fn skew_and_identity_pencil() {
        let sol = pencil_solve(&skew_f(), &Matrix3::identity()).unwrap();
        assert_eq!(sol.roots.len(), 1);
        assert!((sol.roots[0] - 1.0).abs() < 1e-12);
        let f = FMatrix::new(skew_f()).unwrap();
        assert!(f_angle(&sol.candidates[0], &f) < 1e-12);
    }

    #[test]
    fn diagonal_pencil_roots() {
        let f1 = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, 0.0));
        let f2 = Matrix3::from_diagonal(&nalgebra::Vector3::new(0.0, 1.0, 1.0));
        let sol = pencil_solve(&f1, &f2).unwrap();
        assert_eq!(sol.roots.len(), 2);
        assert!(sol.roots[0].abs() < 1e-12);
        assert!((sol.roots[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dependent_inputs() {
        let f = skew_f();
        assert_eq!(pencil_solve(&f, &(3.0 * f)), Err(Error::DependentInputs));
        assert_eq!(pencil_solve(&f, &Matrix3::zeros()), Err(Error::DependentInputs));
    }

    #[test]
    fn identically_singular_pencil() {
        // both rank one with a common kernel: every member is singular
        let f1 = Matrix3::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let f2 = Matrix3::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(pencil_solve(&f1, &f2), Err(Error::IdenticallyZeroPencil));
    }

    #[test]
    fn triple_root_is_recovered_to_full_precision() {
        // (α − 0.3)³ perturbed at the 1e-13 level splits into a 1e-4 cluster
        let r: f64 = 0.3;
        let c = [-r * r * r + 1e-13, 3.0 * r * r, -3.0 * r, 1.0];
        let roots = real_roots(&c, &Tolerances::default()).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - r).abs() < 1e-12, "{roots:?}");
    }

    #[test]
    fn three_distinct_roots() {
        // (α + 1)(α − 0.5)(α − 2)
        let c = [1.0, -1.5, -1.5, 1.0];
        let roots = real_roots(&c, &Tolerances::default()).unwrap();
        assert_eq!(roots.len(), 3);
        for (a, b) in roots.iter().zip([-1.0, 0.5, 2.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn complex_pair_is_dropped() {
        // (α − 1)(α² + 1)
        let c = [-1.0, 1.0, -1.0, 1.0];
        let roots = real_roots(&c, &Tolerances::default()).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn candidates_are_singular() {
        let f1 = Matrix3::new(0.3, -1.2, 0.8, 2.0, 0.1, -0.4, 0.5, 0.9, 1.7);
        let f2 = Matrix3::new(-0.7, 0.2, 1.1, 0.4, 1.5, -0.3, -1.0, 0.6, 0.2);
        let sol = pencil_solve(&f1, &f2).unwrap();
        assert!(!sol.roots.is_empty());
        for f in &sol.candidates {
            assert!(f.det().abs() <= 1e-12);
        }
    }
}
