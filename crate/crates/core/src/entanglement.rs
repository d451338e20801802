//! Separability tests and entanglement quantifiers for two-mode Gaussian states.

use serde::Serialize;

use crate::error::Result;
use crate::symplectic::{two_mode_from_invariants, CovarianceMatrix, TwoModeBlocks};

/// Lower end of the searched range of `q²` in the variance test.
const Q2_MIN: f64 = 1e-6;
/// Upper end of the searched range of `q²`.
const Q2_MAX: f64 = 1e6;
/// Points in the logarithmic refinement grid over `q²`.
const Q2_GRID: usize = 241;

/// A `q` for which the EPR-like variance sum falls below its separable bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DuanWitness {
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Summary of the entanglement properties of a two-mode Gaussian state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub nu_tilde_minus: f64,
    pub log_negativity: f64,
    pub ppt_separable: bool,
    pub duan_witness: Option<DuanWitness>,
    pub aleph: Option<f64>,
}

/// Smallest symplectic eigenvalue `ν̃₋` of the partially transposed covariance matrix.
pub fn pt_min_symplectic_eigenvalue(cm: &CovarianceMatrix) -> Result<f64> {
    let blocks = TwoModeBlocks::from_cm(cm)?;
    Ok(two_mode_from_invariants(blocks.delta_tilde(), blocks.det_v())?.0)
}

/// `max(0, −ln 2ν̃₋)`.
pub fn log_negativity(cm: &CovarianceMatrix) -> Result<f64> {
    Ok(log_negativity_from(pt_min_symplectic_eigenvalue(cm)?))
}

fn log_negativity_from(nu_tilde_minus: f64) -> f64 {
    (-(2.0 * nu_tilde_minus).ln()).max(0.0)
}

/// Variances of `L(q) = |q| x_A + q⁻¹ x_B` and `M(q) = |q| p_A − q⁻¹ p_B` summed.
fn duan_lhs(v: &nalgebra::DMatrix<f64>, q: f64) -> f64 {
    let t = q * q;
    let s = q.signum();
    t * (v[(0, 0)] + v[(1, 1)]) + (v[(2, 2)] + v[(3, 3)]) / t + 2.0 * s * (v[(0, 2)] - v[(1, 3)])
}

/// Searches `q ≠ 0` for a violation of `Var L(q) + Var M(q) ≥ q² + q⁻²`.
///
/// For each sign of `q` the excess `f(t) = αt + β/t + 2s(V₁₃ − V₂₄)` in `t = q²` is
/// minimized in closed form, then a logarithmic grid over `t` is scanned as a check.
pub fn duan_test(cm: &CovarianceMatrix) -> Result<Option<DuanWitness>> {
    TwoModeBlocks::from_cm(cm)?;
    let v = cm.matrix();
    let alpha = v[(0, 0)] + v[(1, 1)] - 1.0;
    let beta = v[(2, 2)] + v[(3, 3)] - 1.0;
    let excess = |q: f64| duan_lhs(v, q) - (q * q + 1.0 / (q * q));

    let mut candidates: Vec<f64> = Vec::with_capacity(2 * (Q2_GRID + 1));
    let t_star = if alpha > 0.0 && beta > 0.0 {
        (beta / alpha).sqrt().clamp(Q2_MIN, Q2_MAX)
    } else if alpha > 0.0 {
        Q2_MIN
    } else {
        Q2_MAX
    };
    let log_min = Q2_MIN.ln();
    let step = (Q2_MAX.ln() - log_min) / (Q2_GRID - 1) as f64;
    for s in [-1.0, 1.0] {
        candidates.push(s * t_star.sqrt());
        for k in 0..Q2_GRID {
            candidates.push(s * (log_min + step * k as f64).exp().sqrt());
        }
    }
    let (q, f) = candidates
        .into_iter()
        .map(|q| (q, excess(q)))
        .fold((f64::NAN, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    if f < -1e-12 {
        Ok(Some(DuanWitness {
            q,
            lhs: duan_lhs(v, q),
            rhs: q * q + 1.0 / (q * q),
        }))
    } else {
        Ok(None)
    }
}

/// Common variance `ℵ` of `x_A − x_B` and `p_A + p_B`, when the two agree to 1e-9.
pub fn epr_aleph(cm: &CovarianceMatrix) -> Result<Option<f64>> {
    TwoModeBlocks::from_cm(cm)?;
    let v = cm.matrix();
    let var_x = v[(0, 0)] + v[(2, 2)] - 2.0 * v[(0, 2)];
    let var_p = v[(1, 1)] + v[(3, 3)] + 2.0 * v[(1, 3)];
    Ok(((var_x - var_p).abs() <= 1e-9).then_some(0.5 * (var_x + var_p)))
}

/// All entanglement diagnostics of a two-mode state at once.
pub fn entanglement_report(cm: &CovarianceMatrix) -> Result<EntanglementReport> {
    let nu = pt_min_symplectic_eigenvalue(cm)?;
    Ok(EntanglementReport {
        nu_tilde_minus: nu,
        log_negativity: log_negativity_from(nu),
        ppt_separable: nu >= 0.5,
        duan_witness: duan_test(cm)?,
        aleph: epr_aleph(cm)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::tmsv;
    use crate::symplectic::{partial_transpose, symplectic_spectrum};
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn twin_beam_values() {
        let cm = tmsv(0.5).unwrap().cm().clone();
        let nu = pt_min_symplectic_eigenvalue(&cm).unwrap();
        assert!((nu - (-1.0_f64).exp() / 2.0).abs() < 1e-12);
        assert!((log_negativity(&cm).unwrap() - 1.0).abs() < 1e-12);
        let cm1 = tmsv(1.0).unwrap().cm().clone();
        assert!((log_negativity(&cm1).unwrap() - 2.0).abs() < 1e-12);
        assert!((epr_aleph(&cm).unwrap().unwrap() - (-1.0_f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_numeric_pt_spectrum() {
        let cm = tmsv(0.8).unwrap().cm().clone();
        let pt = partial_transpose(&cm, &[1]).unwrap();
        let numeric = symplectic_spectrum(&pt).unwrap()[0];
        assert!((numeric - pt_min_symplectic_eigenvalue(&cm).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn product_states() {
        let vac = CovarianceMatrix::vacuum(2);
        assert!((pt_min_symplectic_eigenvalue(&vac).unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(log_negativity(&vac).unwrap(), 0.0);
        assert_eq!(duan_test(&vac).unwrap(), None);
        assert_eq!(epr_aleph(&vac).unwrap(), Some(1.0));
        let th = CovarianceMatrix::thermal(2, 1.0).unwrap();
        assert!((pt_min_symplectic_eigenvalue(&th).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(duan_test(&th).unwrap(), None);
    }

    #[test]
    fn duan_witness_for_twin_beam() {
        let r: f64 = 0.3;
        let w = duan_test(tmsv(r).unwrap().cm()).unwrap().unwrap();
        assert!(w.lhs < w.rhs);
        let v = tmsv(r).unwrap().cm().matrix().clone();
        assert!((duan_lhs(&v, -1.0) - 2.0 * (-2.0 * r).exp()).abs() < 1e-12);
    }

    #[test]
    fn aleph_absent_for_asymmetric_variances() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.5, 1.0, 0.5]));
        assert_eq!(epr_aleph(&CovarianceMatrix::new(m).unwrap()).unwrap(), None);
    }

    #[test]
    fn report_is_consistent() {
        let rep = entanglement_report(tmsv(0.5).unwrap().cm()).unwrap();
        assert!(!rep.ppt_separable);
        assert!(rep.duan_witness.is_some());
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("nu_tilde_minus"));
    }
}
