use std::f64::consts::FRAC_PI_4;
use std::ops::Mul;

use nalgebra::{DMatrix, DVector, Matrix2};

use super::state::{CovarianceMatrix, GaussianState};
use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerance::Tolerances;

/// A real `2N×2N` matrix with `M J Mᵀ = J`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    matrix: DMatrix<f64>,
}

impl SymplecticMatrix {
    /// Checks the symplectic condition with the default tolerance.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        Self::new_with(matrix, &Tolerances::default())
    }

    pub fn new_with(matrix: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(Error::WrongShape(format!(
                "expected a non-empty 2N x 2N matrix, got {rows} x {cols}"
            )));
        }
        let m = SymplecticMatrix { matrix };
        let deviation = m.deviation();
        if !(deviation <= tol.symplectic) {
            return Err(Error::NotSymplectic { deviation });
        }
        Ok(m)
    }

    pub fn identity(n_modes: usize) -> Self {
        SymplecticMatrix {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// Block-diagonal matrix with one 2×2 single-mode block per mode.
    pub fn local(blocks: &[Matrix2<f64>]) -> Result<Self> {
        let n = blocks.len();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for (k, b) in blocks.iter().enumerate() {
            linalg::set_block(&mut m, k, k, b);
        }
        Self::new(m)
    }

    /// Embeds a single-mode symplectic acting on `mode` into `n_modes` modes.
    pub fn embed(single: &SymplecticMatrix, mode: usize, n_modes: usize) -> Result<Self> {
        if single.n_modes() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: single.matrix.nrows(),
            });
        }
        check_index(mode, n_modes)?;
        let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
        linalg::set_block(&mut m, mode, mode, &linalg::block(&single.matrix, 0, 0));
        Ok(SymplecticMatrix { matrix: m })
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `‖M J Mᵀ − J‖∞` (max-entry norm).
    pub fn deviation(&self) -> f64 {
        let j = linalg::symplectic_form(self.n_modes());
        linalg::max_abs(&(&self.matrix * &j * self.matrix.transpose() - j))
    }

    /// Inverse `J Mᵀ Jᵀ`.
    pub fn inverse(&self) -> Self {
        let j = linalg::symplectic_form(self.n_modes());
        SymplecticMatrix {
            matrix: &j * self.matrix.transpose() * j.transpose(),
        }
    }
}

impl Mul for &SymplecticMatrix {
    type Output = SymplecticMatrix;

    /// Composition: `(a * b)` applies `b` first.
    fn mul(self, rhs: &SymplecticMatrix) -> SymplecticMatrix {
        assert_eq!(self.matrix.nrows(), rhs.matrix.nrows(), "mode count mismatch");
        SymplecticMatrix {
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

fn check_index(index: usize, n_modes: usize) -> Result<()> {
    if index >= n_modes {
        Err(Error::IndexOutOfRange { index, n_modes })
    } else {
        Ok(())
    }
}

/// Lossless beam splitter of angle `theta` between modes `i` and `j`.
///
/// On `(x_i, p_i, x_j, p_j)` it acts as `[[cos θ·I, sin θ·I], [sin θ·I, −cos θ·I]]`,
/// which squares to the identity.
pub fn beam_splitter(theta: f64, i: usize, j: usize, n_modes: usize) -> Result<SymplecticMatrix> {
    check_index(i, n_modes)?;
    check_index(j, n_modes)?;
    if i == j {
        return Err(Error::InvalidParameter(format!(
            "beam splitter needs two distinct modes, got {i} twice"
        )));
    }
    let (s, c) = theta.sin_cos();
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for q in 0..2 {
        let (a, b) = (2 * i + q, 2 * j + q);
        m[(a, a)] = c;
        m[(a, b)] = s;
        m[(b, a)] = s;
        m[(b, b)] = -c;
    }
    Ok(SymplecticMatrix { matrix: m })
}

/// Single-mode squeezer with squeezing `r` along the phase `phi`.
///
/// Acting on the vacuum it produces `(ξ v vᵀ + ξ⁻¹ w wᵀ)/2` with `ξ = e^{2r}`,
/// `v = (sin φ, cos φ)` and `w = (cos φ, −sin φ)`: `φ = 0` squeezes `x`,
/// `φ = π/2` squeezes `p`.
pub fn squeezer(r: f64, phi: f64) -> SymplecticMatrix {
    let (s, c) = phi.sin_cos();
    let v = nalgebra::Vector2::new(s, c);
    let w = nalgebra::Vector2::new(c, -s);
    let m = v * v.transpose() * r.exp() + w * w.transpose() * (-r).exp();
    SymplecticMatrix {
        matrix: DMatrix::from_column_slice(2, 2, m.as_slice()),
    }
}

/// Single-mode phase rotation by `theta`.
pub fn phase_rotation(theta: f64) -> SymplecticMatrix {
    let m = linalg::rotation2(theta);
    SymplecticMatrix {
        matrix: DMatrix::from_column_slice(2, 2, m.as_slice()),
    }
}

/// N-splitter: `B_{N−1,N}(π/4) ⋯ B_{1,2}(arccos 1/√N)`, the rightmost factor acting first.
///
/// Mode `k` (1-based) is mixed with mode `k+1` at angle `arccos(1/√(N−k+1))`, so the
/// first input is spread uniformly over all outputs.
pub fn n_splitter(n_modes: usize) -> Result<SymplecticMatrix> {
    if n_modes < 2 {
        return Err(Error::InvalidParameter(format!(
            "an N-splitter needs at least two modes, got {n_modes}"
        )));
    }
    let mut total = SymplecticMatrix::identity(n_modes);
    for k in 0..n_modes - 1 {
        let remaining = (n_modes - k) as f64;
        let theta = if n_modes - k == 2 {
            FRAC_PI_4
        } else {
            (1.0 / remaining.sqrt()).acos()
        };
        let b = beam_splitter(theta, k, k + 1, n_modes)?;
        total = &b * &total;
    }
    Ok(total)
}

/// `V → M V Mᵀ`, `d → M d`.
pub fn apply_symplectic(state: &GaussianState, m: &SymplecticMatrix) -> Result<GaussianState> {
    if m.n_modes() != state.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: 2 * state.n_modes(),
            found: m.matrix.nrows(),
        });
    }
    let v = m.matrix() * state.cm().matrix() * m.matrix().transpose();
    let d = m.matrix() * state.displacement();
    GaussianState::new(d, CovarianceMatrix::from_trusted(v))
}

fn check_modes(modes: &[usize], n_modes: usize) -> Result<()> {
    for (k, &m) in modes.iter().enumerate() {
        check_index(m, n_modes)?;
        if modes[..k].contains(&m) {
            return Err(Error::InvalidParameter(format!("mode {m} listed twice")));
        }
    }
    Ok(())
}

/// Reduced state of the listed modes, in the listed order.
pub fn partial_trace(state: &GaussianState, keep_modes: &[usize]) -> Result<GaussianState> {
    let n = state.n_modes();
    check_modes(keep_modes, n)?;
    if keep_modes.is_empty() {
        return Err(Error::InvalidParameter("no modes kept".into()));
    }
    let idx: Vec<usize> = keep_modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
    let v = state.cm().matrix();
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| v[(idx[i], idx[j])]);
    let d = DVector::from_iterator(idx.len(), idx.iter().map(|&i| state.displacement()[i]));
    GaussianState::new(d, CovarianceMatrix::from_trusted(sub))
}

/// `Λ V Λ` where `Λ` flips the momentum of every listed mode.
///
/// The result is returned as a plain matrix: it is a covariance matrix only when
/// the state is PPT.
pub fn partial_transpose(cm: &CovarianceMatrix, modes: &[usize]) -> Result<DMatrix<f64>> {
    check_modes(modes, cm.n_modes())?;
    let mut v = cm.matrix().clone();
    for &m in modes {
        let p = 2 * m + 1;
        for k in 0..v.nrows() {
            v[(p, k)] = -v[(p, k)];
        }
        for k in 0..v.nrows() {
            v[(k, p)] = -v[(k, p)];
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::williamson::williamson_eigenvalues;

    #[test]
    fn generated_matrices_are_symplectic() {
        for m in [
            beam_splitter(0.3, 0, 2, 3).unwrap(),
            squeezer(0.8, 1.1),
            phase_rotation(2.0),
            n_splitter(2).unwrap(),
            n_splitter(5).unwrap(),
        ] {
            assert!(m.deviation() < 1e-12, "{m:?}");
        }
    }

    #[test]
    fn beam_splitter_is_an_involution() {
        let b = beam_splitter(FRAC_PI_4, 0, 1, 2).unwrap();
        let sq = &b * &b;
        assert!((sq.matrix() - DMatrix::identity(4, 4)).abs().max() < 1e-15);
    }

    #[test]
    fn two_splitter_is_a_balanced_beam_splitter() {
        assert_eq!(
            n_splitter(2).unwrap(),
            beam_splitter(FRAC_PI_4, 0, 1, 2).unwrap()
        );
    }

    #[test]
    fn n_splitter_spreads_first_mode_uniformly() {
        let n = 4;
        let m = n_splitter(n).unwrap();
        for k in 0..n {
            assert!((m.matrix()[(2 * k, 0)].abs() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn squeezer_conventions() {
        assert!((squeezer(0.0, 0.7).matrix() - DMatrix::identity(2, 2)).abs().max() < 1e-15);
        let r = 0.4;
        let out = apply_symplectic(&GaussianState::vacuum(1), &squeezer(r, std::f64::consts::FRAC_PI_2))
            .unwrap();
        let v = out.cm().matrix();
        assert!((v[(0, 0)] - (2.0 * r).exp() / 2.0).abs() < 1e-14);
        assert!((v[(1, 1)] - (-2.0 * r).exp() / 2.0).abs() < 1e-14);
        assert!(v[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn index_errors() {
        assert!(matches!(
            beam_splitter(0.1, 0, 2, 2),
            Err(Error::IndexOutOfRange { index: 2, n_modes: 2 })
        ));
        assert!(matches!(
            partial_trace(&GaussianState::vacuum(2), &[3]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            partial_transpose(&CovarianceMatrix::vacuum(2), &[5]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        assert!(matches!(
            apply_symplectic(&GaussianState::vacuum(2), &squeezer(0.1, 0.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let s = apply_symplectic(&GaussianState::vacuum(1), &squeezer(0.3, 0.2)).unwrap();
        let t = apply_symplectic(&s, &SymplecticMatrix::identity(1)).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let s = apply_symplectic(
            &GaussianState::vacuum(2),
            &(&beam_splitter(0.4, 0, 1, 2).unwrap()
                * &SymplecticMatrix::embed(&squeezer(0.5, 0.3), 0, 2).unwrap()),
        )
        .unwrap();
        let once = partial_transpose(s.cm(), &[1]).unwrap();
        let twice = partial_transpose(&CovarianceMatrix::from_trusted(once), &[1]).unwrap();
        assert!((twice - s.cm().matrix()).abs().max() < 1e-15);
    }

    #[test]
    fn partial_transpose_of_product_state_is_bona_fide() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.3, 0.7, 0.5]));
        let cm = CovarianceMatrix::new(m).unwrap();
        let pt = partial_transpose(&cm, &[0]).unwrap();
        let nus = williamson_eigenvalues(&CovarianceMatrix::new(pt).unwrap()).unwrap();
        assert!(nus.iter().all(|&nu| nu >= 0.5 - 1e-12));
    }

    #[test]
    fn symplectic_constructor_rejects_non_symplectic() {
        assert!(matches!(
            SymplecticMatrix::new(DMatrix::identity(2, 2) * 2.0),
            Err(Error::NotSymplectic { .. })
        ));
    }

    #[test]
    fn inverse_composes_to_identity() {
        let m = &n_splitter(3).unwrap() * &SymplecticMatrix::embed(&squeezer(0.9, 0.4), 1, 3).unwrap();
        let id = &m * &m.inverse();
        assert!((id.matrix() - DMatrix::identity(6, 6)).abs().max() < 1e-12);
    }
}
