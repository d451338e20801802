//! Constructors for the two- and three-mode channels and the pure single-mode inputs.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::{
    apply_symplectic, n_splitter, squeezer, CovarianceMatrix, GaussianState, SymplecticMatrix,
};

fn check_r(r: f64) -> Result<()> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::NegativeSqueezing(r));
    }
    if !r.is_finite() {
        return Err(Error::InvalidParameter(format!("squeezing must be finite, got {r}")));
    }
    Ok(())
}

/// Two-mode squeezed vacuum with squeezing `r`: `A = B = cosh(2r)/2 · I`, `C = sinh(2r)/2 · Z`.
pub fn tmsv(r: f64) -> Result<GaussianState> {
    check_r(r)?;
    let a = (2.0 * r).cosh() / 2.0;
    let c = (2.0 * r).sinh() / 2.0;
    let m = DMatrix::from_row_slice(
        4,
        4,
        &[a, 0., c, 0., 0., a, 0., -c, c, 0., a, 0., 0., -c, 0., a],
    );
    // Pure by construction; a numerical bona fide check would reject large r,
    // where the smallest eigenvalue e^{-2r}/2 falls below the rounding of cosh(2r).
    Ok(GaussianState::centered(CovarianceMatrix::from_trusted(m)))
}

/// Twin beam with thermal noises `n_a`, `n_b` entering modes a and b.
///
/// `n_a = n_b = 1/2` gives the pure [`tmsv`]; the symplectic eigenvalues are `n_a` and
/// `n_b`, so the state is physical exactly when both are at least `1/2`.
pub fn thermal_tmsv(r: f64, n_a: f64, n_b: f64) -> Result<GaussianState> {
    check_r(r)?;
    if !(n_a > 0.0 && n_b > 0.0 && n_a.is_finite() && n_b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "thermal noises must be positive, got n_a = {n_a}, n_b = {n_b}"
        )));
    }
    let (e, ei) = ((2.0 * r).exp(), (-2.0 * r).exp());
    let xx = n_a * e + n_b * ei;
    let xc = n_a * e - n_b * ei;
    let pp = n_a * ei + n_b * e;
    let pc = n_a * ei - n_b * e;
    let m = DMatrix::from_row_slice(
        4,
        4,
        &[xx, 0., xc, 0., 0., pp, 0., pc, xc, 0., xx, 0., 0., pc, 0., pp],
    ) * 0.5;
    Ok(GaussianState::centered(CovarianceMatrix::new(m)?))
}

fn squeezed_modes(n_modes: usize, phases: &[f64], r: f64) -> Result<GaussianState> {
    let mut state = GaussianState::vacuum(n_modes);
    for (k, &phi) in phases.iter().enumerate() {
        let s = SymplecticMatrix::embed(&squeezer(r, phi), k, n_modes)?;
        state = apply_symplectic(&state, &s)?;
    }
    apply_symplectic(&state, &n_splitter(n_modes)?)
}

/// N-mode squeezed vacuum: mode 1 squeezed in momentum, modes 2..N in position,
/// all by `r`, then mixed by the N-splitter.
pub fn nmsv(n_modes: usize, r: f64) -> Result<GaussianState> {
    check_r(r)?;
    if n_modes < 2 {
        return Err(Error::InvalidParameter(format!(
            "an N-mode squeezed vacuum needs at least two modes, got {n_modes}"
        )));
    }
    let phases: Vec<f64> = (0..n_modes)
        .map(|k| if k == 0 { FRAC_PI_2 } else { 0.0 })
        .collect();
    squeezed_modes(n_modes, &phases, r)
}

/// Three-mode state from a single momentum-squeezed mode and two vacua through the 3-splitter.
pub fn cheap_three_mode(r: f64) -> Result<GaussianState> {
    check_r(r)?;
    squeezed_modes(3, &[FRAC_PI_2], r)
}

/// Covariance matrix `(ξ v vᵀ + ξ⁻¹ w wᵀ)/2` of a pure squeezed vacuum, with
/// `v = (sin φ, cos φ)` and `w = (cos φ, −sin φ)`.
pub fn squeezed_vacuum_cm(xi: f64, phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    let v = Vector2::new(s, c);
    let w = Vector2::new(c, -s);
    (v * v.transpose() * xi + w * w.transpose() / xi) * 0.5
}

/// Pure single-mode input: a coherent state or a displaced squeezed state.
///
/// `alpha` is the complex amplitude `(Re α, Im α)` with `α = (x + ip)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSpec {
    Coherent { alpha: [f64; 2] },
    Squeezed { alpha: [f64; 2], xi: f64, phi: f64 },
}

impl InputSpec {
    pub fn coherent() -> Self {
        InputSpec::Coherent { alpha: [0.0, 0.0] }
    }

    pub fn cm(&self) -> Result<Matrix2<f64>> {
        match *self {
            InputSpec::Coherent { .. } => Ok(Matrix2::identity() * 0.5),
            InputSpec::Squeezed { xi, phi, .. } => {
                if !(xi > 0.0 && xi.is_finite() && phi.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "squeezed input needs finite xi > 0, got xi = {xi}, phi = {phi}"
                    )));
                }
                Ok(squeezed_vacuum_cm(xi, phi))
            }
        }
    }

    pub fn alpha(&self) -> [f64; 2] {
        match *self {
            InputSpec::Coherent { alpha } | InputSpec::Squeezed { alpha, .. } => alpha,
        }
    }

    pub fn state(&self) -> Result<GaussianState> {
        input_state(self)
    }
}

/// The single-mode pure state described by `spec`.
pub fn input_state(spec: &InputSpec) -> Result<GaussianState> {
    let v = spec.cm()?;
    let [re, im] = spec.alpha();
    let cm = CovarianceMatrix::new(DMatrix::from_column_slice(2, 2, v.as_slice()))?;
    GaussianState::new(DVector::from_vec(vec![SQRT_2 * re, SQRT_2 * im]), cm)
}

/// Names every channel family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    Tmsv { r: f64 },
    ThermalTmsv { r: f64, n_a: f64, n_b: f64 },
    Nmsv { n_modes: usize, r: f64 },
    CheapThreeMode { r: f64 },
    Custom { state: GaussianState },
}

impl ChannelSpec {
    pub fn build(&self) -> Result<GaussianState> {
        match self {
            ChannelSpec::Tmsv { r } => tmsv(*r),
            ChannelSpec::ThermalTmsv { r, n_a, n_b } => thermal_tmsv(*r, *n_a, *n_b),
            ChannelSpec::Nmsv { n_modes, r } => nmsv(*n_modes, *r),
            ChannelSpec::CheapThreeMode { r } => cheap_three_mode(*r),
            ChannelSpec::Custom { state } => Ok(state.clone()),
        }
    }
}
