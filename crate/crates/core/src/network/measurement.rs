use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::blocks::ThreeModeBlocks;
use crate::channels::squeezed_vacuum_cm;
use crate::error::{Error, Result};
use crate::linalg::{self, j2};
use crate::symplectic::{CovarianceMatrix, GaussianState};

/// Projection of Charlie's mode onto a pure squeezed state with covariance
/// matrix `V₀(ξ, φ)` and displacement `alpha`.
///
/// `xi` ranges over `[0, +∞]`; the end points are quadrature eigenstates (homodyne
/// detection). `alpha` is the plain quadrature displacement `d₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedProjectorSpec {
    #[serde(serialize_with = "serialize_xi", deserialize_with = "deserialize_xi")]
    pub xi: f64,
    pub phi: f64,
    pub alpha: [f64; 2],
}

impl SqueezedProjectorSpec {
    pub fn new(xi: f64, phi: f64) -> Self {
        SqueezedProjectorSpec {
            xi,
            phi,
            alpha: [0.0, 0.0],
        }
    }

    fn check(&self) -> Result<()> {
        if self.xi.is_nan() || self.xi < 0.0 || !self.phi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "projector needs xi in [0, inf] and a finite phase, got xi = {}, phi = {}",
                self.xi, self.phi
            )));
        }
        Ok(())
    }

    /// `true` for the homodyne end points `ξ ∈ {0, +∞}`.
    pub fn is_homodyne(&self) -> bool {
        self.xi == 0.0 || self.xi == f64::INFINITY
    }

    /// `V₀(ξ, φ)`, defined for finite positive `ξ`.
    pub fn v0(&self) -> Option<Matrix2<f64>> {
        (self.xi > 0.0 && self.xi.is_finite()).then(|| squeezed_vacuum_cm(self.xi, self.phi))
    }
}

pub(crate) fn serialize_xi<S: Serializer>(xi: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if xi.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*xi)
    }
}

pub(crate) fn deserialize_xi<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Xi {
        Number(f64),
        Text(String),
    }
    match Xi::deserialize(d)? {
        Xi::Number(x) => Ok(x),
        Xi::Text(t) if t == "inf" || t == "+inf" || t == "infinity" => Ok(f64::INFINITY),
        Xi::Text(t) => Err(serde::de::Error::custom(format!("invalid xi {t:?}"))),
    }
}

/// Weight of the selected outcome: a probability for a projector on a normalizable
/// state, a probability density per unit quadrature for the homodyne end points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeWeight {
    Probability(f64),
    Density(f64),
}

/// Alice and Bob's state conditioned on the Gaussian outcome at Charlie's mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalChannel {
    pub state: GaussianState,
    /// `None` for a mixed measurement operator, where it is not defined here.
    pub weight: Option<OutcomeWeight>,
}

/// `M = g⁻¹ J [2(det V₀ + ¼) V₀ + 4 det V₀ C] Jᵀ` and the normalization `g`.
pub fn m_matrix(c: &Matrix2<f64>, v0: &Matrix2<f64>) -> Result<(Matrix2<f64>, f64)> {
    let j = j2();
    let det_v0 = v0.determinant();
    let jcj = j * c * j.transpose();
    let g = 4.0 * det_v0 * c.determinant()
        + 2.0 * (det_v0 + 0.25) * (v0 * jcj).trace()
        + (det_v0 + 0.25).powi(2);
    if !(g > 0.5) {
        return Err(Error::GOutOfRange(g));
    }
    let m = j * (v0 * (2.0 * (det_v0 + 0.25)) + c * (4.0 * det_v0)) * j.transpose() / g;
    let m = linalg::symmetrize2(&m);
    if !linalg::is_positive_definite2(&m) {
        return Err(Error::GOutOfRange(g));
    }
    Ok((m, g))
}

/// `M` for the projector `spec`, with the homodyne limits
/// `M(ξ→∞) = wwᵀ/(wᵀCw)` and `M(ξ→0) = vvᵀ/(vᵀCv)`, `v = (sin φ, cos φ)`, `w = (cos φ, −sin φ)`.
pub fn projector_m(c: &Matrix2<f64>, spec: &SqueezedProjectorSpec) -> Result<Matrix2<f64>> {
    spec.check()?;
    let (s, co) = spec.phi.sin_cos();
    let v = Vector2::new(s, co);
    let w = Vector2::new(co, -s);
    let projector = |u: Vector2<f64>| u * u.transpose() / u.dot(&(c * u));
    if spec.xi == f64::INFINITY {
        Ok(projector(w))
    } else if spec.xi == 0.0 {
        Ok(projector(v))
    } else {
        Ok(m_matrix(c, &squeezed_vacuum_cm(spec.xi, spec.phi))?.0)
    }
}

fn conditioned_state(
    net: &ThreeModeBlocks,
    m: &Matrix2<f64>,
    d0: &Vector2<f64>,
) -> Result<GaussianState> {
    let tr = net.traced_channel();
    let mut ed = DMatrix::zeros(4, 2);
    ed.fixed_view_mut::<2, 2>(0, 0).copy_from(&net.e);
    ed.fixed_view_mut::<2, 2>(2, 0).copy_from(&net.d);
    let m_dyn = DMatrix::from_column_slice(2, 2, m.as_slice());
    let v = tr.cm().matrix() - &ed * &m_dyn * ed.transpose();
    let shift = DVector::from_column_slice((d0 - net.d_c).as_slice());
    let d = tr.displacement() + &ed * (&m_dyn * shift);
    GaussianState::new(d, CovarianceMatrix::new(v)?)
}

/// Conditional state of Alice and Bob after Charlie's projection on `spec`.
pub fn condition_on_measurement(
    net: &ThreeModeBlocks,
    spec: &SqueezedProjectorSpec,
) -> Result<ConditionalChannel> {
    let m = projector_m(&net.c, spec)?;
    let d0 = Vector2::new(spec.alpha[0], spec.alpha[1]);
    let state = conditioned_state(net, &m, &d0)?;
    let diff = d0 - net.d_c;
    let weight = match spec.v0() {
        Some(v0) => {
            let sum = net.c + v0;
            let inv = sum.try_inverse().ok_or_else(|| {
                Error::NumericalFailure("C + V0 is singular".into())
            })?;
            OutcomeWeight::Probability((-0.5 * diff.dot(&(inv * diff))).exp() / sum.determinant().sqrt())
        }
        None => {
            let (s, co) = spec.phi.sin_cos();
            let u = if spec.xi == 0.0 {
                Vector2::new(s, co)
            } else {
                Vector2::new(co, -s)
            };
            let var = u.dot(&(net.c * u));
            let x = u.dot(&diff);
            OutcomeWeight::Density((-0.5 * x * x / var).exp() / (2.0 * std::f64::consts::PI * var).sqrt())
        }
    };
    Ok(ConditionalChannel {
        state,
        weight: Some(weight),
    })
}

/// Conditioning on a general Gaussian operator with covariance `v0` and displacement `d0`.
pub fn condition_on_gaussian(
    net: &ThreeModeBlocks,
    v0: &Matrix2<f64>,
    d0: &Vector2<f64>,
) -> Result<ConditionalChannel> {
    CovarianceMatrix::new(DMatrix::from_column_slice(2, 2, v0.as_slice()))?;
    let (m, _) = m_matrix(&net.c, v0)?;
    let state = conditioned_state(net, &m, d0)?;
    let pure = (4.0 * v0.determinant() - 1.0).abs() <= 1e-9;
    let weight = if pure {
        let sum = net.c + v0;
        let diff = d0 - net.d_c;
        let inv = sum
            .try_inverse()
            .ok_or_else(|| Error::NumericalFailure("C + V0 is singular".into()))?;
        Some(OutcomeWeight::Probability(
            (-0.5 * diff.dot(&(inv * diff))).exp() / sum.determinant().sqrt(),
        ))
    } else {
        None
    };
    Ok(ConditionalChannel { state, weight })
}

/// `Γ^(0) = Γ^tr − Σᵀ M Σ`.
pub fn conditional_gamma(
    net: &ThreeModeBlocks,
    v_in: &Matrix2<f64>,
    spec: &SqueezedProjectorSpec,
) -> Result<Matrix2<f64>> {
    let m = projector_m(&net.c, spec)?;
    let sigma = net.sigma();
    Ok(linalg::symmetrize2(&(net.gamma_tr(v_in)? - sigma.transpose() * m * sigma)))
}

/// Conditional fidelity `F^(0) = (det Γ^(0))^{−1/2}`.
pub fn conditional_fidelity(
    net: &ThreeModeBlocks,
    v_in: &Matrix2<f64>,
    spec: &SqueezedProjectorSpec,
) -> Result<f64> {
    let det = conditional_gamma(net, v_in, spec)?.determinant();
    if !(det > 0.0) {
        return Err(Error::NumericalFailure(format!("det Γ(0) = {det} is not positive")));
    }
    Ok(1.0 / det.sqrt())
}
