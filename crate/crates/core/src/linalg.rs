//! Dense linear-algebra helpers built on nalgebra's SVD.

use nalgebra::{DMatrix, DVector, Matrix3, Matrix4, Vector4};

/// Singular value decomposition with a complete right basis.
///
/// Wide matrices are padded with zero rows so that `v` is always square
/// (`cols × cols`). Singular values are sorted in descending order and
/// `sigma.len() == cols`; padded directions carry zero singular values.
#[derive(Debug, Clone)]
pub struct FullSvd {
    pub u: DMatrix<f64>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
    rows: usize,
}

impl FullSvd {
    pub fn new(m: &DMatrix<f64>) -> Self {
        let (rows, cols) = m.shape();
        let padded = if rows < cols {
            let mut p = DMatrix::zeros(cols, cols);
            p.view_mut((0, 0), (rows, cols)).copy_from(m);
            p
        } else {
            m.clone()
        };
        let svd = padded.svd(true, true);
        let u = svd.u.expect("requested U");
        let v_t = svd.v_t.expect("requested V^T");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

        let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
        let mut v = DMatrix::zeros(cols, cols);
        let mut u_sorted = DMatrix::zeros(u.nrows(), order.len());
        for (dst, &src) in order.iter().enumerate() {
            v.set_column(dst, &v_t.row(src).transpose());
            u_sorted.set_column(dst, &u.column(src));
        }
        let u_sorted = u_sorted.rows(0, rows).into_owned();
        Self { u: u_sorted, sigma, v, rows }
    }

    /// Largest singular value.
    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `tol · σ_max`, capped at `min(rows, cols)`.
    pub fn rank(&self, tol: f64) -> usize {
        let cutoff = tol * self.sigma_max();
        let limit = self.rows.min(self.sigma.len());
        if self.sigma_max() == 0.0 {
            return 0;
        }
        self.sigma[..limit].iter().filter(|&&s| s > cutoff).count()
    }

    /// Right singular vectors spanning the numerical kernel.
    pub fn kernel(&self, tol: f64) -> Vec<DVector<f64>> {
        let r = self.rank(tol);
        (r..self.v.ncols()).map(|j| self.v.column(j).into_owned()).collect()
    }
}

/// Orthonormal basis of the numerical right kernel of `m`.
///
/// Right singular vectors whose singular value is at most `rank_tol · σ_max`
/// are returned; the list is empty for full column rank.
pub fn kernel_basis(m: &DMatrix<f64>, rank_tol: f64) -> Vec<DVector<f64>> {
    FullSvd::new(m).kernel(rank_tol)
}

/// Numerical rank with threshold `σ_i ≤ tol · σ_1`.
pub fn numerical_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    FullSvd::new(m).rank(tol)
}

/// Nearest matrix of rank at most `rank` in Frobenius norm.
///
/// Returns the truncated matrix together with the full sorted singular values
/// of the input.
pub fn eckart_young_truncate(m: &DMatrix<f64>, rank: usize) -> (DMatrix<f64>, Vec<f64>) {
    let svd = FullSvd::new(m);
    let (rows, cols) = m.shape();
    let k = rank.min(rows.min(cols));
    let mut out = DMatrix::zeros(rows, cols);
    for i in 0..k {
        out += svd.sigma[i] * svd.u.column(i) * svd.v.column(i).transpose();
    }
    (out, svd.sigma)
}

/// Vector of signed maximal minors of the 3×4 matrix with rows `a`, `b`, `c`.
///
/// The result `w` satisfies `r · w = det[r; a; b; c]` for every `r`, so it is
/// orthogonal to all three rows.
pub fn cross4(a: &Vector4<f64>, b: &Vector4<f64>, c: &Vector4<f64>) -> Vector4<f64> {
    let minor = |skip: usize| {
        let cols: Vec<usize> = (0..4).filter(|&j| j != skip).collect();
        Matrix3::new(
            a[cols[0]], a[cols[1]], a[cols[2]], b[cols[0]], b[cols[1]], b[cols[2]], c[cols[0]], c[cols[1]], c[cols[2]],
        )
        .determinant()
    };
    Vector4::new(minor(0), -minor(1), minor(2), -minor(3))
}

/// Determinant of the 4×4 matrix whose rows are the given points.
pub fn bracket(p: &[Vector4<f64>; 4]) -> f64 {
    Matrix4::from_rows(&[p[0].transpose(), p[1].transpose(), p[2].transpose(), p[3].transpose()]).determinant()
}

/// Hadamard bound `Π ‖row‖`, the natural scale of a bracket.
pub fn bracket_scale(p: &[Vector4<f64>; 4]) -> f64 {
    p.iter().map(|r| r.norm()).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = DMatrix::<f64>::identity(9, 9);
        assert!(kernel_basis(&m, 1e-10).is_empty());
    }

    #[test]
    fn kernel_of_rank_one_outer_product() {
        let u = DVector::from_vec(vec![1.0, -2.0, 0.5, 3.0]);
        let v = DVector::from_vec(vec![2.0, 1.0, -1.0]);
        let m = &u * v.transpose();
        let k = kernel_basis(&m, 1e-10);
        assert_eq!(k.len(), 2);
        for b in &k {
            assert!(b.dot(&v).abs() < 1e-12);
            assert!((b.norm() - 1.0).abs() < 1e-12);
        }
        assert!(k[0].dot(&k[1]).abs() < 1e-12);
    }

    #[test]
    fn wide_matrix_gets_full_right_basis() {
        let m = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let svd = FullSvd::new(&m);
        assert_eq!(svd.v.shape(), (4, 4));
        assert_eq!(svd.rank(1e-10), 2);
        assert_eq!(svd.kernel(1e-10).len(), 2);
        assert_eq!(svd.u.shape(), (2, 4));
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(numerical_rank(&DMatrix::zeros(3, 5), 1e-10), 0);
    }

    #[test]
    fn truncation_distance_is_dropped_singular_value() {
        let m = DMatrix::from_fn(8, 9, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0 + (i as f64) * 0.1);
        let (t, sigma) = eckart_young_truncate(&m, 7);
        let dist = (&m - &t).norm();
        let tail = (sigma[7] * sigma[7] + sigma[8] * sigma[8]).sqrt();
        assert!((dist - tail).abs() <= 1e-12 * sigma[0]);
        assert_eq!(numerical_rank(&t, 1e-10), 7);
    }

    #[test]
    fn cross4_is_orthogonal_to_rows() {
        let a = Vector4::new(1.0, 2.0, 3.0, 4.0);
        let b = Vector4::new(-1.0, 0.5, 2.0, 1.0);
        let c = Vector4::new(0.0, 3.0, -2.0, 1.0);
        let w = cross4(&a, &b, &c);
        for r in [a, b, c] {
            assert!(r.dot(&w).abs() < 1e-12);
        }
        let r = Vector4::new(0.3, -0.7, 1.1, 2.0);
        assert!((r.dot(&w) - bracket(&[r, a, b, c])).abs() < 1e-12);
    }
}
