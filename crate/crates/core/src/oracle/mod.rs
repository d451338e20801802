//! Independent numerical checks of the closed-form results: grid quadrature of
//! Wigner functions and the teleportation kernel, and Monte Carlo simulation of
//! the Bell-measurement protocol.

mod branch;
mod grid;
mod kernel;
mod montecarlo;
mod wigner;

pub use branch::{branch_grid, non_gaussian_branch_fidelity, NonGaussianBranch};
pub use grid::{PhaseGrid, DEFAULT_POINTS, DEFAULT_SIGMAS};
pub use kernel::{kernel_fidelity, KernelQuadrature};
pub use montecarlo::{
    montecarlo_protocol, montecarlo_protocol_with_delta, BellStatistics, MonteCarloEstimate,
    CHUNK, MIN_SAMPLES,
};
pub use wigner::{wigner_of, NumericWigner, WignerComponent, NORMALIZATION_TOL};

#[cfg(test)]
mod tests;
