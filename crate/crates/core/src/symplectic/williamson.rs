use nalgebra::{DMatrix, SymmetricEigen};

use super::state::CovarianceMatrix;
use super::standard_form::TwoModeBlocks;
use crate::error::{Error, Result};
use crate::linalg;

fn symmetric_eigen(m: DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(m, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigen-solve did not converge".into()))
}

/// Symplectic spectrum of a symmetric matrix, ascending.
///
/// `J V` is similar to `K = V^{1/2} J V^{1/2}`, which is real antisymmetric, so the
/// moduli of its eigenvalues are the singular values of `K`, each appearing twice.
pub(crate) fn symplectic_spectrum(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = v.nrows() / 2;
    let eig = symmetric_eigen(v.clone())?;
    let min = eig.eigenvalues.min();
    if min <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let k = &root * linalg::symplectic_form(n) * &root;
    let ktk = k.transpose() * &k;
    let ktk = (&ktk + ktk.transpose()) * 0.5;
    let mut squares: Vec<f64> = symmetric_eigen(ktk)?.eigenvalues.iter().copied().collect();
    squares.sort_by(f64::total_cmp);
    Ok(squares
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect())
}

/// Williamson (symplectic) eigenvalues of `cm`, ascending, one per mode.
pub fn williamson_eigenvalues(cm: &CovarianceMatrix) -> Result<Vec<f64>> {
    symplectic_spectrum(cm.matrix())
}

/// Closed-form `(ν₋, ν₊)` of a two-mode covariance matrix from its blocks.
pub fn two_mode_symplectic_eigenvalues(blocks: &TwoModeBlocks) -> Result<(f64, f64)> {
    two_mode_from_invariants(blocks.delta(), blocks.det_v())
}

/// `ν±² = (Δ ± sqrt(Δ² − 4 det V)) / 2`, with the small root taken in the
/// cancellation-free form `2 det V / (Δ + sqrt(...))`.
pub(crate) fn two_mode_from_invariants(delta: f64, det_v: f64) -> Result<(f64, f64)> {
    let disc = delta * delta - 4.0 * det_v;
    let scale = (delta * delta).max(f64::MIN_POSITIVE);
    if disc < -1e-9 * scale || det_v <= 0.0 || !disc.is_finite() {
        return Err(Error::NegativeDiscriminant(disc));
    }
    let root = disc.max(0.0).sqrt();
    let big = delta + root;
    if big <= 0.0 {
        return Err(Error::NegativeDiscriminant(disc));
    }
    let nu_plus = (0.5 * big).sqrt();
    let nu_minus = (2.0 * det_v / big).sqrt();
    Ok((nu_minus.min(nu_plus), nu_plus.max(nu_minus)))
}
