//! Seeded generators of random symplectic matrices and bona fide covariance matrices.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngExt};
use rand_distr::StandardNormal;

use crate::symplectic::{
    apply_symplectic, beam_splitter, phase_rotation, squeezer, CovarianceMatrix, GaussianState,
    SymplecticMatrix,
};

/// Ranges used when drawing random Gaussian states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomStateParams {
    /// Single-mode squeezing drawn uniformly from `[0, max_squeezing]`.
    pub max_squeezing: f64,
    /// Williamson eigenvalues drawn uniformly from `[1/2, 1/2 + max_thermal]`.
    pub max_thermal: f64,
    /// Displacement entries drawn from a normal distribution with this deviation.
    pub displacement_scale: f64,
}

impl Default for RandomStateParams {
    fn default() -> Self {
        RandomStateParams {
            max_squeezing: 1.0,
            max_thermal: 1.0,
            displacement_scale: 0.0,
        }
    }
}

fn embed(single: &SymplecticMatrix, mode: usize, n_modes: usize) -> SymplecticMatrix {
    SymplecticMatrix::embed(single, mode, n_modes).expect("mode index in range")
}

/// Random symplectic matrix built from layers of local rotations, squeezers and
/// beam splitters between every pair of modes.
pub fn random_symplectic<R: Rng + ?Sized>(
    n_modes: usize,
    max_squeezing: f64,
    rng: &mut R,
) -> SymplecticMatrix {
    let mut total = SymplecticMatrix::identity(n_modes);
    for _layer in 0..2 {
        for k in 0..n_modes {
            let rot = embed(&phase_rotation(rng.random_range(0.0..2.0 * PI)), k, n_modes);
            let sq = embed(
                &squeezer(rng.random_range(0.0..=max_squeezing), rng.random_range(0.0..PI)),
                k,
                n_modes,
            );
            total = &(&sq * &rot) * &total;
        }
        for i in 0..n_modes {
            for j in i + 1..n_modes {
                let bs = beam_splitter(rng.random_range(0.0..PI), i, j, n_modes)
                    .expect("distinct modes in range");
                total = &bs * &total;
            }
        }
    }
    total
}

/// Random bona fide covariance matrix `S diag(ν) Sᵀ`.
pub fn random_cm<R: Rng + ?Sized>(
    n_modes: usize,
    params: &RandomStateParams,
    rng: &mut R,
) -> CovarianceMatrix {
    random_state(n_modes, params, rng).cm().clone()
}

/// Random Gaussian state with covariance matrix from [`random_cm`].
pub fn random_state<R: Rng + ?Sized>(
    n_modes: usize,
    params: &RandomStateParams,
    rng: &mut R,
) -> GaussianState {
    let nus: Vec<f64> = (0..n_modes)
        .flat_map(|_| {
            let nu = 0.5 + rng.random_range(0.0..=params.max_thermal);
            [nu, nu]
        })
        .collect();
    let thermal = CovarianceMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(nus)))
        .expect("thermal state is bona fide");
    let s = random_symplectic(n_modes, params.max_squeezing, rng);
    let state = apply_symplectic(&GaussianState::centered(thermal), &s)
        .expect("dimensions agree");
    let d = DVector::from_fn(2 * n_modes, |_, _| {
        params.displacement_scale * rng.sample::<f64, _>(StandardNormal)
    });
    state.with_displacement(d).expect("dimensions agree")
}

/// Random pure single-mode state `V₀(ξ, φ)` with `ln ξ` uniform in `[−2 max_squeezing, 2 max_squeezing]`.
pub fn random_pure_single_mode<R: Rng + ?Sized>(max_squeezing: f64, rng: &mut R) -> GaussianState {
    let r = rng.random_range(-max_squeezing..=max_squeezing);
    let s = squeezer(r, rng.random_range(0.0..PI));
    apply_symplectic(&GaussianState::vacuum(1), &s).expect("single mode")
}
