//! Numerical tolerances shared by the validators.

/// Tolerances used when checking invariants of covariance and symplectic matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative asymmetry allowed in a covariance matrix.
    pub symmetry: f64,
    /// Absolute slack for invariant checks (bona fide condition, purity, ...).
    pub invariant: f64,
    /// Max-norm deviation allowed in `M J Mᵀ = J`.
    pub symplectic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            symmetry: 1e-12,
            invariant: 1e-9,
            symplectic: 1e-10,
        }
    }
}
