use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use serde::Serialize;

use super::ops::SymplecticMatrix;
use super::state::CovarianceMatrix;
use crate::error::{Error, Result};
use crate::linalg;

/// Blocks of a two-mode covariance matrix `[[A, C], [Cᵀ, B]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeBlocks {
    pub a: Matrix2<f64>,
    pub b: Matrix2<f64>,
    pub c: Matrix2<f64>,
}

impl TwoModeBlocks {
    pub fn from_cm(cm: &CovarianceMatrix) -> Result<Self> {
        if cm.n_modes() != 2 {
            return Err(Error::InvalidCm(format!(
                "expected a two-mode covariance matrix, got {} modes",
                cm.n_modes()
            )));
        }
        Ok(Self::from_matrix(cm.matrix()))
    }

    pub(crate) fn from_matrix(m: &DMatrix<f64>) -> Self {
        TwoModeBlocks {
            a: linalg::block(m, 0, 0),
            b: linalg::block(m, 1, 1),
            c: linalg::block(m, 0, 1),
        }
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(4, 4);
        linalg::set_block(&mut m, 0, 0, &self.a);
        linalg::set_block(&mut m, 1, 1, &self.b);
        linalg::set_block(&mut m, 0, 1, &self.c);
        linalg::set_block(&mut m, 1, 0, &self.c.transpose());
        m
    }

    /// `Δ(V) = det A + det B + 2 det C`.
    pub fn delta(&self) -> f64 {
        self.a.determinant() + self.b.determinant() + 2.0 * self.c.determinant()
    }

    /// `Δ̃(V) = det A + det B − 2 det C`, the same invariant after partial transposition.
    pub fn delta_tilde(&self) -> f64 {
        self.a.determinant() + self.b.determinant() - 2.0 * self.c.determinant()
    }

    pub fn det_v(&self) -> f64 {
        self.to_matrix().determinant()
    }
}

/// Local invariants `(a, b, c, c′)` and the local symplectic bringing a two-mode
/// covariance matrix to `[[aI, diag(c, c′)], [diag(c, c′), bI]]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardFormI {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub c_prime: f64,
    #[serde(skip)]
    pub local_transform: SymplecticMatrix,
}

impl StandardFormI {
    pub fn to_matrix(&self) -> DMatrix<f64> {
        TwoModeBlocks {
            a: Matrix2::identity() * self.a,
            b: Matrix2::identity() * self.b,
            c: Matrix2::new(self.c, 0.0, 0.0, self.c_prime),
        }
        .to_matrix()
    }
}

/// Rotation followed by a squeeze that maps a positive 2×2 block to `√det · I`.
fn normalize_local(block: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let det = block.determinant();
    if !(det > 0.0) || block[(0, 0)] <= 0.0 {
        return Err(Error::DegenerateBlock { det });
    }
    let eig = SymmetricEigen::new(linalg::symmetrize2(block));
    let mut r = eig.eigenvectors;
    if r.determinant() < 0.0 {
        r.set_column(1, &(-r.column(1)));
    }
    let (l1, l2) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    let squeeze = Matrix2::new((l2 / l1).powf(0.25), 0.0, 0.0, (l1 / l2).powf(0.25));
    Ok(squeeze * r.transpose())
}

/// Proper rotation obtained from an orthogonal matrix by flipping its second column if needed.
fn proper(mut o: Matrix2<f64>) -> Matrix2<f64> {
    if o.determinant() < 0.0 {
        o.set_column(1, &(-o.column(1)));
    }
    o
}

/// Standard form I of a two-mode covariance matrix, with `c ≥ 0` and `|c| ≥ |c′|`.
pub fn standard_form_i(cm: &CovarianceMatrix) -> Result<StandardFormI> {
    let blocks = TwoModeBlocks::from_cm(cm)?;
    let la = normalize_local(&blocks.a)?;
    let lb = normalize_local(&blocks.b)?;
    let c1 = la * blocks.c * lb.transpose();
    let svd = c1.svd(true, true);
    let u = proper(svd.u.ok_or_else(|| Error::NumericalFailure("svd".into()))?);
    let w = proper(
        svd.v_t
            .ok_or_else(|| Error::NumericalFailure("svd".into()))?
            .transpose(),
    );
    let oa = u.transpose() * la;
    let ob = w.transpose() * lb;
    let local_transform = SymplecticMatrix::local(&[oa, ob])?;
    let reduced = TwoModeBlocks::from_matrix(
        &(local_transform.matrix() * cm.matrix() * local_transform.matrix().transpose()),
    );
    Ok(StandardFormI {
        a: blocks.a.determinant().sqrt(),
        b: blocks.b.determinant().sqrt(),
        c: reduced.c[(0, 0)],
        c_prime: reduced.c[(1, 1)],
        local_transform,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::ops::{apply_symplectic, beam_splitter, squeezer};
    use crate::symplectic::state::GaussianState;

    fn tmsv_matrix(r: f64) -> DMatrix<f64> {
        let (a, c) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
        DMatrix::from_row_slice(
            4,
            4,
            &[a, 0., c, 0., 0., a, 0., -c, c, 0., a, 0., 0., -c, 0., a],
        )
    }

    #[test]
    fn twin_beam_is_already_in_form() {
        let r = 0.7;
        let sf = standard_form_i(&CovarianceMatrix::new(tmsv_matrix(r)).unwrap()).unwrap();
        assert!((sf.a - (2.0 * r).cosh() / 2.0).abs() < 1e-12);
        assert!((sf.b - sf.a).abs() < 1e-12);
        assert!((sf.c - (2.0 * r).sinh() / 2.0).abs() < 1e-12);
        assert!((sf.c_prime + sf.c).abs() < 1e-12);
    }

    #[test]
    fn uncorrelated_product_has_no_correlations() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 0.5, 0.8, 0.9]));
        let sf = standard_form_i(&CovarianceMatrix::new(m).unwrap()).unwrap();
        assert!(sf.c.abs() < 1e-14 && sf.c_prime.abs() < 1e-14);
        assert!((sf.a - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reproduces_form_for_generic_state() {
        let s0 = GaussianState::centered(CovarianceMatrix::thermal(2, 0.8).unwrap());
        let m = &(&beam_splitter(0.3, 0, 1, 2).unwrap()
            * &crate::symplectic::ops::SymplecticMatrix::embed(&squeezer(0.6, 0.9), 0, 2).unwrap())
            * &crate::symplectic::ops::SymplecticMatrix::embed(&squeezer(0.2, 0.1), 1, 2).unwrap();
        let s = apply_symplectic(&s0, &m).unwrap();
        let sf = standard_form_i(s.cm()).unwrap();
        let t = sf.local_transform.matrix();
        let reduced = t * s.cm().matrix() * t.transpose();
        assert!((reduced - sf.to_matrix()).abs().max() < 1e-9);
        assert!(sf.c >= 0.0 && sf.c.abs() >= sf.c_prime.abs());
        assert!((sf.to_matrix().determinant() - s.cm().determinant()).abs() < 1e-9);
    }

    #[test]
    fn blocks_round_trip() {
        let m = tmsv_matrix(0.3);
        let b = TwoModeBlocks::from_cm(&CovarianceMatrix::new(m.clone()).unwrap()).unwrap();
        assert_eq!(b.to_matrix(), m);
    }

    #[test]
    fn wrong_mode_count_is_rejected() {
        assert!(matches!(
            TwoModeBlocks::from_cm(&CovarianceMatrix::vacuum(3)),
            Err(Error::InvalidCm(_))
        ));
    }
}
