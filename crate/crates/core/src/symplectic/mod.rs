//! Phase-space representation of Gaussian states and the symplectic group acting on them.

mod measures;
mod ops;
mod standard_form;
mod state;
mod williamson;

pub use measures::{entropy_function, overlap, purity, von_neumann_entropy};
pub use ops::{
    apply_symplectic, beam_splitter, n_splitter, partial_trace, partial_transpose,
    phase_rotation, squeezer, SymplecticMatrix,
};
pub use standard_form::{standard_form_i, StandardFormI, TwoModeBlocks};
pub use state::{validate_cm, validate_cm_with, CovarianceMatrix, GaussianState, StateFile};
pub use williamson::{two_mode_symplectic_eigenvalues, williamson_eigenvalues};

pub(crate) use williamson::two_mode_from_invariants;
#[cfg(test)]
pub(crate) use williamson::symplectic_spectrum;
