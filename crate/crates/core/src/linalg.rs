//! Small fixed-size helpers for the 2×2 block algebra.

use nalgebra::{DMatrix, Matrix2};

/// Single-mode symplectic form `[[0, 1], [-1, 0]]`.
pub fn j2() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

/// Reflection `diag(1, -1)`.
pub fn z2() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

/// `J^(N)`: direct sum of `n_modes` copies of the single-mode form.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        j[(2 * k, 2 * k + 1)] = 1.0;
        j[(2 * k + 1, 2 * k)] = -1.0;
    }
    j
}

/// Adjugate of a 2×2 matrix, equal to `J Xᵀ Jᵀ`.
pub fn adjugate(m: &Matrix2<f64>) -> Matrix2<f64> {
    Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

pub fn block(m: &DMatrix<f64>, i: usize, j: usize) -> Matrix2<f64> {
    m.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
}

pub fn set_block(m: &mut DMatrix<f64>, i: usize, j: usize, b: &Matrix2<f64>) {
    m.fixed_view_mut::<2, 2>(2 * i, 2 * j).copy_from(b);
}

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn symmetrize2(m: &Matrix2<f64>) -> Matrix2<f64> {
    (m + m.transpose()) * 0.5
}

/// `true` when a symmetric 2×2 matrix is strictly positive definite.
pub fn is_positive_definite2(m: &Matrix2<f64>) -> bool {
    m[(0, 0)] > 0.0 && m.determinant() > 0.0
}

/// Rotation by `theta` acting on a quadrature pair.
pub fn rotation2(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}
