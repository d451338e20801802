//! Closed-form teleportation fidelity of a pure Gaussian input through a two-mode Gaussian channel.

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use serde::{Serialize, Serializer};

use crate::entanglement::pt_min_symplectic_eigenvalue;
use crate::error::{Error, Result};
use crate::linalg::z2;
use crate::numeric;
use crate::symplectic::{CovarianceMatrix, GaussianState, TwoModeBlocks};

/// Half-width of the bracket searched for the optimal local squeezing.
const KAPPA_BRACKET: f64 = 8.0;

/// `Γ = 2V_in + ZAZ + B − ZC − CᵀZ`, the 2×2 matrix fixing the fidelity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaMatrix(pub Matrix2<f64>);

impl GammaMatrix {
    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.0
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }
}

impl Serialize for GammaMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m = &self.0;
        [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]].serialize(s)
    }
}

/// How a fidelity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityReport {
    pub fidelity: f64,
    pub gamma: GammaMatrix,
    /// Bob's extra displacement `δ̃ = (Re, Im)` as a complex amplitude.
    pub delta: [f64; 2],
    pub method: Method,
}

/// Result of optimizing the fidelity over local squeezings `diag(e^κ, e^−κ)` on both modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalSqueezeOptimum {
    pub kappa: f64,
    pub fidelity: f64,
    /// Smallest partially transposed symplectic eigenvalue, unchanged by the local squeezing.
    pub nu_tilde_minus: f64,
}

/// Checks that `v` is the covariance matrix of a pure single-mode state.
pub fn check_pure_input(v: &Matrix2<f64>) -> Result<()> {
    let asym = (v[(0, 1)] - v[(1, 0)]).abs();
    let det = v.determinant();
    if !(v[(0, 0)] > 0.0) || asym > 1e-12 * v.abs().max().max(1.0) || (4.0 * det - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "input covariance matrix must be that of a pure single-mode state (det = {det}, expected 1/4)"
        )));
    }
    Ok(())
}

/// Channel part `ZAZ + B − ZC − CᵀZ` of Γ.
pub fn channel_noise(blocks: &TwoModeBlocks) -> Matrix2<f64> {
    let z = z2();
    z * blocks.a * z + blocks.b - z * blocks.c - blocks.c.transpose() * z
}

/// The same matrix written through the EPR operators `X₋ = x_a − x_b`, `P₊ = p_a + p_b`:
/// `[[Var X₋, −Cov(X₋, P₊)], [−Cov(X₋, P₊), Var P₊]]`.
pub fn epr_variance_matrix(blocks: &TwoModeBlocks) -> Matrix2<f64> {
    let v = blocks.to_matrix();
    let x_minus = DVector::from_vec(vec![1.0, 0.0, -1.0, 0.0]);
    let p_plus = DVector::from_vec(vec![0.0, 1.0, 0.0, 1.0]);
    let var_x = x_minus.dot(&(&v * &x_minus));
    let var_p = p_plus.dot(&(&v * &p_plus));
    let cov = x_minus.dot(&(&v * &p_plus));
    Matrix2::new(var_x, -cov, -cov, var_p)
}

pub fn gamma_matrix(v_in: &Matrix2<f64>, blocks: &TwoModeBlocks) -> Result<GammaMatrix> {
    check_pure_input(v_in)?;
    let g = v_in * 2.0 + channel_noise(blocks);
    Ok(GammaMatrix((g + g.transpose()) * 0.5))
}

/// Channel first moments in the amplitude parameterization `d_ch = 2(d₁, d₂, d₃, d₄)`,
/// i.e. `d_i = (quadrature mean)_i / √2`.
fn amplitude_moments(displacement: &DVector<f64>) -> [f64; 4] {
    let d = |i: usize| displacement[i] / SQRT_2;
    [d(0), d(1), d(2), d(3)]
}

/// Bob's extra displacement cancelling the channel shift: `δ̃ = (d₁ − d₃, −d₂ − d₄)`.
///
/// `displacement` holds the plain quadrature means `(x_a, p_a, x_b, p_b)` of the channel.
pub fn optimal_delta(displacement: &DVector<f64>) -> Result<[f64; 2]> {
    if displacement.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: displacement.len(),
        });
    }
    let [d1, d2, d3, d4] = amplitude_moments(displacement);
    // `+ 0.0` maps a signed zero to `0.0`.
    Ok([d1 - d3 + 0.0, -d2 - d4 + 0.0])
}

/// `h(δ̃) = (−δ̃ᴿ + d₁ − d₃, −δ̃ᴵ − d₂ − d₄)`.
fn shift_vector(displacement: &DVector<f64>, delta: [f64; 2]) -> Vector2<f64> {
    let [d1, d2, d3, d4] = amplitude_moments(displacement);
    Vector2::new(-delta[0] + d1 - d3, -delta[1] - d2 - d4)
}

fn two_mode_blocks(channel: &GaussianState) -> Result<TwoModeBlocks> {
    if channel.n_modes() != 2 {
        return Err(Error::InvalidCm(format!(
            "teleportation channel must have two modes, got {}",
            channel.n_modes()
        )));
    }
    TwoModeBlocks::from_cm(channel.cm())
}

/// `F(δ̃) = exp(−hᵀΓ⁻¹h) / √det Γ`; with `delta = None` the optimal `δ̃` is used and `F = 1/√det Γ`.
pub fn fidelity(
    v_in: &Matrix2<f64>,
    channel: &GaussianState,
    delta: Option<[f64; 2]>,
) -> Result<FidelityReport> {
    let blocks = two_mode_blocks(channel)?;
    let gamma = gamma_matrix(v_in, &blocks)?;
    let det = gamma.determinant();
    let (delta, q) = match delta {
        None => (optimal_delta(channel.displacement())?, 0.0),
        Some(delta) => {
            let h = shift_vector(channel.displacement(), delta);
            let inv = gamma
                .0
                .try_inverse()
                .ok_or_else(|| Error::NumericalFailure("Γ is singular".into()))?;
            (delta, h.dot(&(inv * h)))
        }
    };
    Ok(FidelityReport {
        fidelity: (-q).exp() / det.sqrt(),
        gamma,
        delta,
        method: Method::ClosedForm,
    })
}

/// Optimal coherent-state fidelity of a channel in standard form I:
/// `[(1 + a + b − 2c)(1 + a + b + 2c′)]^{−1/2}`.
pub fn coherent_fidelity_standard_form(a: f64, b: f64, c: f64, c_prime: f64) -> Result<f64> {
    let blocks = TwoModeBlocks {
        a: Matrix2::identity() * a,
        b: Matrix2::identity() * b,
        c: Matrix2::new(c, 0.0, 0.0, c_prime),
    };
    CovarianceMatrix::new(blocks.to_matrix())?;
    let var_x = a + b - 2.0 * c;
    let var_p = a + b + 2.0 * c_prime;
    Ok(1.0 / ((1.0 + var_x) * (1.0 + var_p)).sqrt())
}

/// Coherent-state fidelity after the local squeezing `S(κ) = diag(e^κ, e^−κ, e^κ, e^−κ)`.
fn squeezed_log_det(noise: &Matrix2<f64>, kappa: f64) -> f64 {
    let s = Matrix2::new(kappa.exp(), 0.0, 0.0, (-kappa).exp());
    (Matrix2::identity() + s * noise * s).determinant().ln()
}

/// Maximizes the coherent-state fidelity over local squeezings `S(κ) V S(κ)ᵀ` by
/// Brent's method on `ln det Γ(κ)` over `κ ∈ [−8, 8]`.
pub fn local_squeeze_optimize(channel: &GaussianState) -> Result<LocalSqueezeOptimum> {
    let blocks = two_mode_blocks(channel)?;
    let noise = channel_noise(&blocks);
    let (kappa, log_det) = numeric::minimize_scalar(
        |k| squeezed_log_det(&noise, k),
        -KAPPA_BRACKET,
        KAPPA_BRACKET,
        1e-11,
    )?;
    Ok(LocalSqueezeOptimum {
        kappa,
        fidelity: (-0.5 * log_det).exp(),
        nu_tilde_minus: pt_min_symplectic_eigenvalue(channel.cm())?,
    })
}

/// Applies `S(κ)` to both modes of a two-mode state.
pub fn locally_squeezed(channel: &GaussianState, kappa: f64) -> Result<GaussianState> {
    let s = DMatrix::from_diagonal(&DVector::from_vec(vec![
        kappa.exp(),
        (-kappa).exp(),
        kappa.exp(),
        (-kappa).exp(),
    ]));
    let m = crate::symplectic::SymplecticMatrix::new(s)?;
    crate::symplectic::apply_symplectic(channel, &m)
}

/// Coherent-input covariance matrix `I/2`.
pub fn coherent_input() -> Matrix2<f64> {
    Matrix2::identity() * 0.5
}

/// Quadrature displacement vector of a channel whose amplitude parameters are `(d₁..d₄)`.
pub fn displacement_from_amplitudes(d: [f64; 4]) -> DVector<f64> {
    DVector::from_iterator(4, d.iter().map(|x| SQRT_2 * x))
}
