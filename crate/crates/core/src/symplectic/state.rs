use nalgebra::{DMatrix, DVector, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerance::Tolerances;

/// Covariance matrix of an `N`-mode Gaussian state.
///
/// Entries are symmetrized second moments of the quadratures ordered as
/// `(x1, p1, ..., xN, pN)`, in units where the vacuum is `I/2`. A value of
/// this type is always symmetric, positive definite and bona fide.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Validates `matrix` with the default tolerances.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        validate_cm_with(matrix, &Tolerances::default())
    }

    /// Vacuum of `n_modes` modes, `I/2`.
    pub fn vacuum(n_modes: usize) -> Self {
        CovarianceMatrix {
            n_modes,
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        }
    }

    /// Thermal state with the same symplectic eigenvalue `nu` on every mode.
    pub fn thermal(n_modes: usize, nu: f64) -> Result<Self> {
        Self::new(DMatrix::identity(2 * n_modes, 2 * n_modes) * nu)
    }

    /// Wraps a matrix produced by a symplectic congruence or a block selection of
    /// an already validated matrix; only the rounding asymmetry is removed.
    pub(crate) fn from_trusted(matrix: DMatrix<f64>) -> Self {
        let sym = (&matrix + matrix.transpose()) * 0.5;
        CovarianceMatrix {
            n_modes: sym.nrows() / 2,
            matrix: sym,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// The 2×2 block coupling modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        linalg::block(&self.matrix, i, j)
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }
}

/// Checks shape, symmetry and the bona fide condition, returning the validated matrix.
pub fn validate_cm(matrix: DMatrix<f64>) -> Result<CovarianceMatrix> {
    validate_cm_with(matrix, &Tolerances::default())
}

pub fn validate_cm_with(matrix: DMatrix<f64>, tol: &Tolerances) -> Result<CovarianceMatrix> {
    let (rows, cols) = matrix.shape();
    if rows != cols || rows == 0 || rows % 2 != 0 {
        return Err(Error::WrongShape(format!(
            "expected a non-empty 2N x 2N matrix, got {rows} x {cols}"
        )));
    }
    if matrix.iter().any(|x| !x.is_finite()) {
        return Err(Error::WrongShape("matrix has non-finite entries".into()));
    }
    let scale = linalg::max_abs(&matrix).max(1.0);
    let asymmetry = linalg::max_abs(&(&matrix - matrix.transpose()));
    if asymmetry > tol.symmetry * scale {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let cm = CovarianceMatrix::from_trusted(matrix);
    let nus = super::williamson::symplectic_spectrum(&cm.matrix)?;
    for (index, &nu) in nus.iter().enumerate() {
        if nu < 0.5 - tol.invariant {
            return Err(Error::NotBonaFide { index, nu });
        }
    }
    Ok(cm)
}

/// A Gaussian state: first moments plus covariance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "StateFile", try_from = "StateFile")]
pub struct GaussianState {
    displacement: DVector<f64>,
    cm: CovarianceMatrix,
}

impl GaussianState {
    pub fn new(displacement: DVector<f64>, cm: CovarianceMatrix) -> Result<Self> {
        if displacement.len() != 2 * cm.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: 2 * cm.n_modes(),
                found: displacement.len(),
            });
        }
        if displacement.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("displacement has non-finite entries".into()));
        }
        Ok(GaussianState { displacement, cm })
    }

    /// Zero-mean state with the given covariance matrix.
    pub fn centered(cm: CovarianceMatrix) -> Self {
        GaussianState {
            displacement: DVector::zeros(2 * cm.n_modes()),
            cm,
        }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self::centered(CovarianceMatrix::vacuum(n_modes))
    }

    pub fn n_modes(&self) -> usize {
        self.cm.n_modes()
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.displacement
    }

    pub fn cm(&self) -> &CovarianceMatrix {
        &self.cm
    }

    /// Same covariance matrix, new first moments.
    pub fn with_displacement(&self, displacement: DVector<f64>) -> Result<Self> {
        Self::new(displacement, self.cm.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_with(text, &Tolerances::default())
    }

    /// Parses a state file, validating the covariance matrix with `tol`.
    pub fn from_json_with(text: &str, tol: &Tolerances) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        file.into_state(tol)
    }
}

/// On-disk layout: `{"n_modes": N, "displacement": [..], "cm": [[..], ..]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub n_modes: usize,
    pub displacement: Vec<f64>,
    pub cm: Vec<Vec<f64>>,
}

impl From<GaussianState> for StateFile {
    fn from(state: GaussianState) -> Self {
        let m = state.cm.matrix();
        StateFile {
            n_modes: state.n_modes(),
            displacement: state.displacement.iter().copied().collect(),
            cm: (0..m.nrows())
                .map(|i| m.row(i).iter().copied().collect())
                .collect(),
        }
    }
}

impl StateFile {
    pub fn into_state(self, tol: &Tolerances) -> Result<GaussianState> {
        let dim = 2 * self.n_modes;
        if self.cm.len() != dim || self.cm.iter().any(|row| row.len() != dim) {
            return Err(Error::WrongShape(format!(
                "cm must be {dim} x {dim} for n_modes = {}",
                self.n_modes
            )));
        }
        let matrix = DMatrix::from_fn(dim, dim, |i, j| self.cm[i][j]);
        let cm = validate_cm_with(matrix, tol)?;
        GaussianState::new(DVector::from_vec(self.displacement), cm)
    }
}

impl TryFrom<StateFile> for GaussianState {
    type Error = Error;

    fn try_from(file: StateFile) -> Result<Self> {
        file.into_state(&Tolerances::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_valid() {
        let cm = validate_cm(DMatrix::identity(4, 4) * 0.5).unwrap();
        assert_eq!(cm.n_modes(), 2);
    }

    #[test]
    fn below_vacuum_noise_is_rejected() {
        match validate_cm(DMatrix::identity(4, 4) * 0.25) {
            Err(Error::NotBonaFide { nu, .. }) => assert!((nu - 0.25).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn twin_beam_cm_at_half_squeezing_is_valid() {
        // cosh(1)/2 and sinh(1)/2
        let a = 0.771_540_317_407_621_9;
        let c = 0.587_600_596_821_900_7;
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[a, 0., c, 0., 0., a, 0., -c, c, 0., a, 0., 0., -c, 0., a],
        );
        assert!(validate_cm(m).is_ok());
    }

    #[test]
    fn shape_and_symmetry_errors() {
        assert!(matches!(
            validate_cm(DMatrix::identity(3, 3)),
            Err(Error::WrongShape(_))
        ));
        assert!(matches!(
            validate_cm(DMatrix::identity(2, 4)),
            Err(Error::WrongShape(_))
        ));
        let mut m = DMatrix::identity(2, 2);
        m[(0, 1)] = 0.1;
        assert!(matches!(validate_cm(m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(validate_cm(m).is_err());
    }

    #[test]
    fn json_round_trip() {
        let cm = CovarianceMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[0.9, 0.2, 0.2, 0.7],
        ))
        .unwrap();
        let s = GaussianState::new(DVector::from_vec(vec![0.25, -1.5]), cm).unwrap();
        let back = GaussianState::from_json(&s.to_json()).unwrap();
        assert_eq!(back.n_modes(), 1);
        assert!((back.cm().matrix() - s.cm().matrix()).abs().max() < 1e-12);
        assert!((back.displacement() - s.displacement()).abs().max() < 1e-12);
    }

    #[test]
    fn json_rejects_wrong_dimensions() {
        let text = r#"{"n_modes": 2, "displacement": [0,0], "cm": [[0.5,0],[0,0.5]]}"#;
        assert!(matches!(GaussianState::from_json(text), Err(Error::WrongShape(_))));
        let text = r#"{"n_modes": 1, "displacement": [0], "cm": [[0.5,0],[0,0.5]]}"#;
        assert!(matches!(
            GaussianState::from_json(text),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
