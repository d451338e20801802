use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::linalg::{self, z2};
use crate::symplectic::{partial_trace, CovarianceMatrix, GaussianState};
use crate::teleport::check_pure_input;

/// Blocks of a three-mode state shared by Alice (a), Bob (b) and Charlie (c):
/// `V = [[A, F, E], [Fᵀ, B, D], [Eᵀ, Dᵀ, C]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeModeBlocks {
    pub a: Matrix2<f64>,
    pub b: Matrix2<f64>,
    pub c: Matrix2<f64>,
    pub d: Matrix2<f64>,
    pub e: Matrix2<f64>,
    pub f: Matrix2<f64>,
    pub d_a: Vector2<f64>,
    pub d_b: Vector2<f64>,
    pub d_c: Vector2<f64>,
}

impl ThreeModeBlocks {
    /// Reads the blocks of a three-mode state with modes ordered `(a, b, c)`.
    pub fn from_state(state: &GaussianState) -> Result<Self> {
        if state.n_modes() != 3 {
            return Err(Error::InvalidCm(format!(
                "a network state needs three modes, got {}",
                state.n_modes()
            )));
        }
        let v = state.cm().matrix();
        let d = state.displacement();
        let pair = |k: usize| Vector2::new(d[2 * k], d[2 * k + 1]);
        Ok(ThreeModeBlocks {
            a: linalg::block(v, 0, 0),
            b: linalg::block(v, 1, 1),
            c: linalg::block(v, 2, 2),
            d: linalg::block(v, 1, 2),
            e: linalg::block(v, 0, 2),
            f: linalg::block(v, 0, 1),
            d_a: pair(0),
            d_b: pair(1),
            d_c: pair(2),
        })
    }

    /// Assigns the roles `(a, b, c)` to modes `roles` of a three-mode state.
    pub fn with_roles(state: &GaussianState, roles: [usize; 3]) -> Result<Self> {
        Self::from_state(&partial_trace(state, &roles)?)
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let mut v = DMatrix::zeros(6, 6);
        let blocks = [
            (0, 0, self.a),
            (1, 1, self.b),
            (2, 2, self.c),
            (0, 1, self.f),
            (0, 2, self.e),
            (1, 2, self.d),
        ];
        for (i, j, m) in blocks {
            linalg::set_block(&mut v, i, j, &m);
            if i != j {
                linalg::set_block(&mut v, j, i, &m.transpose());
            }
        }
        v
    }

    pub fn to_state(&self) -> Result<GaussianState> {
        let d = DVector::from_iterator(
            6,
            self.d_a.iter().chain(self.d_b.iter()).chain(self.d_c.iter()).copied(),
        );
        GaussianState::new(d, CovarianceMatrix::new(self.to_matrix())?)
    }

    /// Reduced state of Alice and Bob, `V^tr = [[A, F], [Fᵀ, B]]`.
    pub fn traced_channel(&self) -> GaussianState {
        let mut v = DMatrix::zeros(4, 4);
        linalg::set_block(&mut v, 0, 0, &self.a);
        linalg::set_block(&mut v, 1, 1, &self.b);
        linalg::set_block(&mut v, 0, 1, &self.f);
        linalg::set_block(&mut v, 1, 0, &self.f.transpose());
        let d = DVector::from_iterator(4, self.d_a.iter().chain(self.d_b.iter()).copied());
        GaussianState::new(d, CovarianceMatrix::from_trusted(v)).expect("four entries")
    }

    /// `Σ = EᵀZ − Dᵀ`.
    pub fn sigma(&self) -> Matrix2<f64> {
        self.e.transpose() * z2() - self.d.transpose()
    }

    /// `Γ^tr = 2V_in + ZAZ + B − ZF − FᵀZ`.
    pub fn gamma_tr(&self, v_in: &Matrix2<f64>) -> Result<Matrix2<f64>> {
        check_pure_input(v_in)?;
        let z = z2();
        let g = v_in * 2.0 + z * self.a * z + self.b - z * self.f - self.f.transpose() * z;
        Ok((g + g.transpose()) * 0.5)
    }
}

/// Non-assisted fidelity `F^tr = (det Γ^tr)^{−1/2}`.
pub fn traced_fidelity(net: &ThreeModeBlocks, v_in: &Matrix2<f64>) -> Result<f64> {
    Ok(1.0 / net.gamma_tr(v_in)?.determinant().sqrt())
}
