use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use super::grid::PhaseGrid;
use crate::error::{Error, Result};
use crate::symplectic::{partial_trace, GaussianState};

/// Allowed deviation of the grid integral of a Wigner function from one.
pub const NORMALIZATION_TOL: f64 = 1e-4;

/// One Gaussian term `weight · W_state` of a Wigner function.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerComponent {
    pub weight: f64,
    pub state: GaussianState,
}

/// Wigner function sampled on a [`PhaseGrid`].
///
/// It is stored as a finite combination of Gaussian terms with real weights summing
/// to one, and evaluated at grid nodes on demand: a two-mode function at 128 points
/// per axis has 2.7·10⁸ nodes. Negative weights arise only from conditioning
/// differences such as `(W^tr − P₀W^(0))/P₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericWigner {
    pub grid: PhaseGrid,
    pub components: Vec<WignerComponent>,
}

/// Normalized Gaussian density with mean `mean` and covariance `cov`.
pub(crate) struct GaussianDensity {
    pub mean: DVector<f64>,
    pub precision: DMatrix<f64>,
    pub norm: f64,
}

impl GaussianDensity {
    pub fn new(mean: DVector<f64>, cov: &DMatrix<f64>) -> Result<Self> {
        let chol = cov
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NumericalFailure("covariance is not positive definite".into()))?;
        let det: f64 = chol.l().diagonal().iter().map(|x| x * x).product();
        let dim = cov.nrows() as f64;
        Ok(GaussianDensity {
            mean,
            precision: chol.inverse(),
            norm: 1.0 / ((2.0 * PI).powf(dim / 2.0) * det.sqrt()),
        })
    }

    pub fn eval(&self, z: &DVector<f64>) -> f64 {
        let y = z - &self.mean;
        self.norm * (-0.5 * y.dot(&(&self.precision * &y))).exp()
    }
}

impl NumericWigner {
    /// Wigner function of a combination of Gaussian states, checked for normalization on `grid`.
    pub fn from_components(grid: PhaseGrid, components: Vec<WignerComponent>) -> Result<Self> {
        let n = grid.n_modes();
        if components.is_empty() || components.iter().any(|c| c.state.n_modes() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: components.first().map_or(0, |c| c.state.n_modes()),
            });
        }
        let w = NumericWigner { grid, components };
        let integral = w.worst_marginal_integral()?;
        if (integral - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::GridTooSmall { integral });
        }
        Ok(w)
    }

    pub fn n_modes(&self) -> usize {
        self.grid.n_modes()
    }

    /// Value at the quadrature point `z = (x1, p1, ...)`.
    pub fn value(&self, z: &DVector<f64>) -> Result<f64> {
        let mut total = 0.0;
        for c in &self.components {
            let g = GaussianDensity::new(c.state.displacement().clone(), c.state.cm().matrix())?;
            total += c.weight * g.eval(z);
        }
        Ok(total)
    }

    /// Single-mode marginal of mode `k` on the grid plane, row-major in `(x, p)`.
    pub fn mode_marginal(&self, k: usize) -> Result<Vec<f64>> {
        let nodes = self.grid.nodes();
        let n = nodes.len();
        let mut out = vec![0.0; n * n];
        for c in &self.components {
            let red = partial_trace(&c.state, &[k])?;
            let g = GaussianDensity::new(red.displacement().clone(), red.cm().matrix())?;
            let p = Matrix2::new(g.precision[(0, 0)], g.precision[(0, 1)], g.precision[(1, 0)], g.precision[(1, 1)]);
            let m = Vector2::new(g.mean[0], g.mean[1]);
            for (i, &x) in nodes.iter().enumerate() {
                for (j, &y) in nodes.iter().enumerate() {
                    let d = Vector2::new(x, y) - m;
                    out[i * n + j] += c.weight * g.norm * (-0.5 * d.dot(&(p * d))).exp();
                }
            }
        }
        Ok(out)
    }

    /// Grid integral of the single-mode marginal of every mode; returns the one
    /// farthest from one. For a single mode this is the full integral of `W`.
    pub fn worst_marginal_integral(&self) -> Result<f64> {
        let h2 = self.grid.spacing().powi(2);
        let mut worst = 1.0;
        for k in 0..self.n_modes() {
            let s: f64 = self.mode_marginal(k)?.iter().sum::<f64>() * h2;
            if (s - 1.0).abs() > (worst - 1.0_f64).abs() {
                worst = s;
            }
        }
        Ok(worst)
    }
}

/// Gaussian Wigner function of `state` on `grid`, normalized in quadrature variables.
pub fn wigner_of(state: &GaussianState, grid: &PhaseGrid) -> Result<NumericWigner> {
    if grid.n_modes() != state.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: grid.n_modes(),
            found: state.n_modes(),
        });
    }
    NumericWigner::from_components(
        grid.clone(),
        vec![WignerComponent {
            weight: 1.0,
            state: state.clone(),
        }],
    )
}
