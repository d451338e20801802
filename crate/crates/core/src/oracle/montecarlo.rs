use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::InputSpec;
use crate::error::{Error, Result};
use crate::symplectic::GaussianState;
use crate::teleport::{check_pure_input, optimal_delta};

/// Smallest accepted sample count.
pub const MIN_SAMPLES: usize = 1000;
/// Samples per independent random substream.
pub const CHUNK: usize = 1000;

/// Mean and standard error of the sampled fidelity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub f_estimate: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Joint Gaussian law of the Bell outcomes `(x̃₋, p̃₊)` and Bob's quadratures, where
/// `x₋ = (x_a − x_in)/√2` and `p₊ = (p_a + p_in)/√2` after the balanced beam splitter.
#[derive(Debug, Clone, PartialEq)]
pub struct BellStatistics {
    pub outcome_mean: Vector2<f64>,
    pub outcome_cov: Matrix2<f64>,
    pub bob_mean: Vector2<f64>,
    pub bob_cov: Matrix2<f64>,
    pub cross_cov: Matrix2<f64>,
}

impl BellStatistics {
    pub fn new(channel: &GaussianState, input: &GaussianState) -> Result<Self> {
        if channel.n_modes() != 2 || input.n_modes() != 1 {
            return Err(Error::InvalidCm(format!(
                "expected a two-mode channel and a single-mode input, got {} and {}",
                channel.n_modes(),
                input.n_modes()
            )));
        }
        // Ordering (x_in, p_in, x_a, p_a, x_b, p_b).
        let mut cov = DMatrix::zeros(6, 6);
        cov.view_mut((0, 0), (2, 2)).copy_from(input.cm().matrix());
        cov.view_mut((2, 2), (4, 4)).copy_from(channel.cm().matrix());
        let mean = DVector::from_iterator(
            6,
            input.displacement().iter().chain(channel.displacement().iter()).copied(),
        );
        let s = FRAC_1_SQRT_2;
        #[rustfmt::skip]
        let l = DMatrix::from_row_slice(4, 6, &[
            -s, 0.0, s, 0.0, 0.0, 0.0,
            0.0, s, 0.0, s, 0.0, 0.0,
            0.0, 0.0, 0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
        ]);
        let m = &l * mean;
        let c = &l * cov * l.transpose();
        let blk = |i: usize, j: usize| Matrix2::new(c[(i, j)], c[(i, j + 1)], c[(i + 1, j)], c[(i + 1, j + 1)]);
        Ok(BellStatistics {
            outcome_mean: Vector2::new(m[0], m[1]),
            outcome_cov: blk(0, 0),
            bob_mean: Vector2::new(m[2], m[3]),
            bob_cov: blk(2, 2),
            cross_cov: blk(2, 0),
        })
    }

    /// Probability density of the outcome `(x̃₋, p̃₊)`.
    pub fn outcome_density(&self, o: Vector2<f64>) -> f64 {
        let d = o - self.outcome_mean;
        let inv = self.outcome_cov.try_inverse().unwrap_or_else(Matrix2::zeros);
        (-0.5 * d.dot(&(inv * d))).exp()
            / (2.0 * std::f64::consts::PI * self.outcome_cov.determinant().sqrt())
    }

    /// Bob's covariance given any outcome, `Σ_bb − Σ_bo Σ_oo⁻¹ Σ_ob`.
    pub fn conditional_bob_cov(&self) -> Result<Matrix2<f64>> {
        let inv = self
            .outcome_cov
            .try_inverse()
            .ok_or_else(|| Error::NumericalFailure("Bell outcome covariance is singular".into()))?;
        let k = self.cross_cov * inv;
        let v = self.bob_cov - k * self.cross_cov.transpose();
        Ok((v + v.transpose()) * 0.5)
    }
}

/// Simulates the teleportation protocol with the optimal Bob displacement.
pub fn montecarlo_protocol(
    channel: &GaussianState,
    input: &InputSpec,
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    let delta = optimal_delta(channel.displacement())?;
    montecarlo_protocol_with_delta(channel, input, delta, n_samples, seed)
}

/// Simulates the protocol: samples Bell outcomes, conditions Bob's mode, applies
/// `β → β + γ̃ + δ̃` with `γ̃ = −x̃₋ + i p̃₊`, and averages the overlap with the input.
///
/// Samples are drawn in chunks of [`CHUNK`], chunk `k` from stream `k` of a ChaCha8
/// generator seeded with `seed`, so the result does not depend on the thread count.
pub fn montecarlo_protocol_with_delta(
    channel: &GaussianState,
    input: &InputSpec,
    delta: [f64; 2],
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "n_samples must be at least {MIN_SAMPLES}, got {n_samples}"
        )));
    }
    let v_in = input.cm()?;
    check_pure_input(&v_in)?;
    let input_state = input.state()?;
    let stats = BellStatistics::new(channel, &input_state)?;

    let chol = stats
        .outcome_cov
        .cholesky()
        .ok_or_else(|| Error::NumericalFailure("Bell outcome covariance is not positive definite".into()))?;
    let l = chol.l();
    let gain = stats.cross_cov * chol.inverse(); // Σ_bo Σ_oo⁻¹
    let bob_cov = stats.conditional_bob_cov()?;
    // Tr(ρ_in ρ_out) = exp(−½ΔᵀS⁻¹Δ)/√det S with S = V_in + V_out, for pure ρ_in.
    let s = v_in + bob_cov;
    let s_inv = s
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("overlap matrix is singular".into()))?;
    let norm = 1.0 / s.determinant().sqrt();
    let d_in = Vector2::new(input_state.displacement()[0], input_state.displacement()[1]);
    let offset = stats.bob_mean - d_in + Vector2::new(delta[0], delta[1]) * std::f64::consts::SQRT_2;

    let n_chunks = n_samples.div_ceil(CHUNK);
    let partial: Vec<(f64, f64)> = (0..n_chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let count = CHUNK.min(n_samples - k * CHUNK);
            let mut sum = CompensatedSum::default();
            let mut sum_sq = CompensatedSum::default();
            for _ in 0..count {
                let z: Vector2<f64> = Vector2::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                let dev = l * z;
                let o = stats.outcome_mean + dev;
                let shift = Vector2::new(-o[0], o[1]) * std::f64::consts::SQRT_2;
                let diff = offset + gain * dev + shift;
                let f = norm * (-0.5 * diff.dot(&(s_inv * diff))).exp();
                sum.add(f);
                sum_sq.add(f * f);
            }
            (sum.value(), sum_sq.value())
        })
        .collect();
    let mut sum = CompensatedSum::default();
    let mut sum_sq = CompensatedSum::default();
    for (a, b) in partial {
        sum.add(a);
        sum_sq.add(b);
    }
    let n = n_samples as f64;
    let mean = sum.value() / n;
    let var = ((sum_sq.value() / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(MonteCarloEstimate {
        f_estimate: mean,
        std_error: (var / n).sqrt(),
        n_samples,
    })
}
