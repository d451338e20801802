//! Three-mode teleportation network: non-assisted fidelity, conditioning on a Gaussian
//! measurement of the third mode, and the search for the optimal measurement.

mod blocks;
mod measurement;
mod optimizer;

pub use blocks::{traced_fidelity, ThreeModeBlocks};
pub use measurement::{
    condition_on_gaussian, condition_on_measurement, conditional_fidelity, conditional_gamma,
    m_matrix, projector_m, ConditionalChannel, OutcomeWeight, SqueezedProjectorSpec,
};
pub use optimizer::{
    optimal_xi, optimize_measurement, optimize_measurement_with, optimizer_vectors,
    stationary_phases, Branch, OptimizerOptions, OptimizerResult, OptimizerVectors,
    StationaryKind, StationaryPhase,
};
