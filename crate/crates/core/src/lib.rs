//! Gaussian continuous-variable state algebra, teleportation fidelities and the
//! measurement-assisted three-mode teleportation network.
//!
//! Conventions: quadratures are ordered `(x1, p1, ..., xN, pN)`, the vacuum
//! covariance matrix is `I/2`, and logarithms are natural.

pub mod channels;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod network;
pub mod numeric;
pub mod oracle;
pub mod random;
pub mod teleport;
pub mod symplectic;
pub mod tolerance;

pub use error::{Error, Result};
pub use symplectic::{CovarianceMatrix, GaussianState, SymplecticMatrix};
pub use tolerance::Tolerances;
