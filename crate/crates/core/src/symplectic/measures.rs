use super::state::{CovarianceMatrix, GaussianState};
use super::williamson::williamson_eigenvalues;
use crate::error::{Error, Result};

/// `g(ν) = (ν + ½) ln(ν + ½) − (ν − ½) ln(ν − ½)`, with `g(½) = 0`.
pub fn entropy_function(nu: f64) -> f64 {
    let plus = nu + 0.5;
    let minus = nu - 0.5;
    let tail = if minus <= 1e-9 { 0.0 } else { minus * minus.ln() };
    plus * plus.ln() - tail
}

/// Von Neumann entropy (natural log) from the Williamson spectrum.
pub fn von_neumann_entropy(cm: &CovarianceMatrix) -> Result<f64> {
    Ok(williamson_eigenvalues(cm)?
        .into_iter()
        .map(|nu| if nu - 0.5 <= 1e-9 { 0.0 } else { entropy_function(nu) })
        .sum())
}

/// Overlap `(2π)^N ∫ W₁ W₂ = exp(−½ δᵀ(V₁+V₂)⁻¹δ) / √det(V₁+V₂)`; equals the
/// purity when `s1 = s2` and is `Tr ρ₁ρ₂` in general.
pub fn overlap(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    if s1.n_modes() != s2.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: 2 * s1.n_modes(),
            found: 2 * s2.n_modes(),
        });
    }
    let sum = s1.cm().matrix() + s2.cm().matrix();
    let delta = s1.displacement() - s2.displacement();
    let chol = sum
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NumericalFailure("V1 + V2 is not positive definite".into()))?;
    let solved = chol.solve(&delta);
    let q = delta.dot(&solved);
    let det: f64 = chol.l().diagonal().iter().map(|x| x * x).product();
    Ok((-0.5 * q).exp() / det.sqrt())
}

/// Purity `Tr ρ² = Π_k 1/(2ν_k)`.
pub fn purity(cm: &CovarianceMatrix) -> Result<f64> {
    Ok(williamson_eigenvalues(cm)?
        .into_iter()
        .map(|nu| 1.0 / (2.0 * nu))
        .product())
}
