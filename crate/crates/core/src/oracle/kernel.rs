use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use rayon::prelude::*;

use super::wigner::NumericWigner;
use crate::error::{Error, Result};
use crate::teleport::check_pure_input;

/// Terms with `q/2` above this are below `e^-50` of the peak and skipped.
const EXPONENT_CUTOFF: f64 = 100.0;

/// Amplitude-plane Gaussian term of the channel Wigner function.
struct AmplitudeTerm {
    weight: f64,
    mean: Vector4<f64>,
    precision: Matrix4<f64>,
    /// `BᵀPB` for the map `(u_R, u_I) ↦ (u_R, −u_I, u_R, u_I)`.
    h: Matrix2<f64>,
}

impl AmplitudeTerm {
    fn new(weight: f64, mean_q: &[f64], cov_q: &nalgebra::DMatrix<f64>) -> Result<Self> {
        // α = (x + ip)/√2: means scale by 1/√2, covariances by 1/2.
        let mean = Vector4::from_iterator(mean_q.iter().map(|m| m * FRAC_1_SQRT_2));
        let cov = Matrix4::from_fn(|i, j| 0.5 * cov_q[(i, j)]);
        let chol = cov
            .cholesky()
            .ok_or_else(|| Error::NumericalFailure("channel covariance is not positive definite".into()))?;
        let det: f64 = chol.l().diagonal().iter().map(|x| x * x).product();
        let precision = chol.inverse();
        let b = nalgebra::Matrix4x2::new(1.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, 1.0);
        Ok(AmplitudeTerm {
            weight: weight / ((2.0 * PI).powi(2) * det.sqrt()),
            mean,
            precision,
            h: b.transpose() * precision * b,
        })
    }
}

/// Grid quadrature of the teleportation fidelity of one input state through a
/// fixed two-mode channel Wigner function, for any Bob displacement δ.
///
/// With `s = β − γ` the output is the convolution of the input with
/// `K(s, δ) = ∫d²u W^ch(u*, s + u − δ)`, and
/// `F(δ) = π ∫d²s K(s, δ) A(s)` where `A(s) = ∫d²γ W_in(γ + s) W_in(γ)`.
/// The `u` integral runs over the channel grid's mode-1 plane, `A` over a
/// lattice sized to the input.
pub struct KernelQuadrature {
    terms: Vec<AmplitudeTerm>,
    /// Mode-1 amplitude nodes and the amplitude-plane cell area.
    u_nodes: Vec<f64>,
    u_area: f64,
    s_nodes: Vec<f64>,
    s_area: f64,
    /// `A(s)` on the `s` lattice, row-major in `(s_R, s_I)`.
    overlap: Vec<f64>,
}

impl KernelQuadrature {
    pub fn new(channel: &NumericWigner, v_in: &Matrix2<f64>) -> Result<Self> {
        if channel.n_modes() != 2 {
            return Err(Error::InvalidCm(format!(
                "channel Wigner function must have 2 modes, got {}",
                channel.n_modes()
            )));
        }
        check_pure_input(v_in)?;
        let terms = channel
            .components
            .iter()
            .map(|c| {
                AmplitudeTerm::new(
                    c.weight,
                    c.state.displacement().as_slice(),
                    c.state.cm().matrix(),
                )
            })
            .collect::<Result<Vec<_>>>()?;

        let grid = &channel.grid;
        let u_nodes: Vec<f64> = grid.nodes().iter().map(|x| x * FRAC_1_SQRT_2).collect();
        let u_area = 0.5 * grid.spacing().powi(2);

        // A has amplitude covariance V_in; cover 6σ of it with the same point count.
        let n = grid.points_per_axis;
        let lambda_max = v_in.symmetric_eigenvalues().max();
        let half = super::grid::DEFAULT_SIGMAS * lambda_max.sqrt();
        let h = 2.0 * half / n as f64;
        let s_nodes: Vec<f64> = (0..n).map(|i| -half + (i as f64 + 0.5) * h).collect();
        let overlap = input_autocorrelation(v_in, half, n);
        Ok(KernelQuadrature {
            terms,
            u_nodes,
            u_area,
            s_nodes,
            s_area: h * h,
            overlap,
        })
    }

    /// `K(s, δ)` by quadrature over the mode-1 plane.
    fn kernel(&self, s: Vector2<f64>, delta: Vector2<f64>, u_sq: &[f64]) -> f64 {
        let mut total = 0.0;
        for t in &self.terms {
            // z − m = y0 + B u with y0 = (−m1, −m2, s_R − δ_R − m3, s_I − δ_I − m4).
            let y0 = Vector4::new(
                -t.mean[0],
                -t.mean[1],
                s[0] - delta[0] - t.mean[2],
                s[1] - delta[1] - t.mean[3],
            );
            let py = t.precision * y0;
            let c0 = y0.dot(&py);
            let g = Vector2::new(2.0 * (py[0] + py[2]), 2.0 * (py[3] - py[1]));
            let (h11, h12, h22) = (t.h[(0, 0)], t.h[(0, 1)], t.h[(1, 1)]);
            let mut sum = 0.0;
            for (&ur, &ur2) in self.u_nodes.iter().zip(u_sq) {
                let row = c0 + g[0] * ur + h11 * ur2;
                let lin = g[1] + 2.0 * h12 * ur;
                for (&ui, &ui2) in self.u_nodes.iter().zip(u_sq) {
                    let q = row + lin * ui + h22 * ui2;
                    if q < EXPONENT_CUTOFF {
                        sum += (-0.5 * q).exp();
                    }
                }
            }
            total += t.weight * sum;
        }
        total * self.u_area
    }

    /// Fidelity with Bob's extra displacement `delta` in amplitude units.
    pub fn fidelity(&self, delta: [f64; 2]) -> f64 {
        let delta = Vector2::from(delta);
        let n = self.s_nodes.len();
        let u_sq: Vec<f64> = self.u_nodes.iter().map(|u| u * u).collect();
        let rows: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = 0.0;
                for j in 0..n {
                    let a = self.overlap[i * n + j];
                    if a != 0.0 {
                        let s = Vector2::new(self.s_nodes[i], self.s_nodes[j]);
                        acc += a * self.kernel(s, delta, &u_sq);
                    }
                }
                acc
            })
            .collect();
        PI * self.s_area * rows.iter().sum::<f64>()
    }
}

/// `A(s) = ∫d²γ W_in(γ + s) W_in(γ)` on the midpoint lattice of `[−L, L]²`,
/// from lattice index sums: `γ_j + s_k` lands on the lattice `−2L + m h`.
fn input_autocorrelation(v_in: &Matrix2<f64>, half: f64, n: usize) -> Vec<f64> {
    let h = 2.0 * half / n as f64;
    let cov = v_in * 0.5;
    let p = cov.try_inverse().expect("pure input covariance is invertible");
    let norm = 1.0 / (2.0 * PI * cov.determinant().sqrt());
    let w = |x: f64, y: f64| {
        let z = Vector2::new(x, y);
        norm * (-0.5 * z.dot(&(p * z))).exp()
    };
    let mid: Vec<f64> = (0..n).map(|i| -half + (i as f64 + 0.5) * h).collect();
    let m = 2 * n + 1;
    let wide: Vec<f64> = (0..m)
        .flat_map(|a| (0..m).map(move |b| (a, b)))
        .map(|(a, b)| w(-2.0 * half + a as f64 * h, -2.0 * half + b as f64 * h))
        .collect();
    let w_mid: Vec<f64> = (0..n * n).map(|k| w(mid[k / n], mid[k % n])).collect();
    (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (k1, k2) = (k / n, k % n);
            let mut acc = 0.0;
            for j1 in 0..n {
                let base = (j1 + k1 + 1) * m + k2 + 1;
                let row = &w_mid[j1 * n..(j1 + 1) * n];
                acc += row
                    .iter()
                    .zip(&wide[base..base + n])
                    .map(|(a, b)| a * b)
                    .sum::<f64>();
            }
            acc * h * h
        })
        .collect()
}

/// Teleportation fidelity of a pure input with covariance `v_in` through the channel
/// whose Wigner function is `channel`, with Bob's extra displacement `delta`
/// (amplitude units, same convention as [`crate::teleport::fidelity`]).
pub fn kernel_fidelity(channel: &NumericWigner, v_in: &Matrix2<f64>, delta: [f64; 2]) -> Result<f64> {
    Ok(KernelQuadrature::new(channel, v_in)?.fidelity(delta))
}
