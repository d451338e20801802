use nalgebra::Matrix2;
use serde::Serialize;

use super::grid::PhaseGrid;
use super::kernel::KernelQuadrature;
use super::wigner::{NumericWigner, WignerComponent};
use crate::error::{Error, Result};
use crate::network::{
    condition_on_measurement, conditional_fidelity, traced_fidelity, OutcomeWeight,
    SqueezedProjectorSpec, ThreeModeBlocks,
};
use crate::teleport::optimal_delta;

/// Points per side of the coarse δ search grid.
pub const DELTA_GRID: usize = 21;
/// Points per side of the refined δ grid around the coarse maximum.
pub const DELTA_REFINE: usize = 11;
/// Smallest half-span of the coarse δ grid, amplitude units.
pub const DELTA_MIN_HALF_SPAN: f64 = 2.0;

/// Fidelities of the two outcomes of the dichotomic measurement `{E₀, E₁}` at Charlie.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonGaussianBranch {
    /// Optimized fidelity of the non-Gaussian outcome `E₁ = I − E₀`.
    pub f1: f64,
    /// `P₀F^(0) + P₁F^(1)`.
    pub f_assisted: f64,
    pub p0: f64,
    pub p1: f64,
    /// Gaussian-outcome fidelity `F^(0)`.
    pub f0: f64,
    /// Non-assisted fidelity `F^tr`.
    pub f_tr: f64,
    /// Bob's displacement maximizing `F^(1)`.
    pub delta1: [f64; 2],
}

/// Grid covering both `W^tr` and `W^(0)` for the projector `spec`.
pub fn branch_grid(
    net: &ThreeModeBlocks,
    spec: &SqueezedProjectorSpec,
    points_per_axis: usize,
) -> Result<PhaseGrid> {
    let cond = condition_on_measurement(net, spec)?;
    let tr = net.traced_channel();
    Ok(PhaseGrid::covering(&[&tr, &cond.state], points_per_axis))
}

fn delta_grid(center: [f64; 2], half: f64, n: usize) -> impl Iterator<Item = [f64; 2]> {
    let step = 2.0 * half / (n - 1) as f64;
    (0..n * n).map(move |k| {
        [
            center[0] - half + (k / n) as f64 * step,
            center[1] - half + (k % n) as f64 * step,
        ]
    })
}

fn best_on(kq: &KernelQuadrature, points: impl Iterator<Item = [f64; 2]>) -> ([f64; 2], f64) {
    points
        .map(|d| (d, kq.fidelity(d)))
        .fold(([0.0; 2], f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// Teleportation through the non-Gaussian outcome of `{E₀ = |ψ⟩⟨ψ|, E₁ = I − E₀}`.
///
/// `W^(1) = (W^tr − P₀W^(0))/P₁` is integrated on `grid` by the kernel quadrature
/// and `F^(1)` maximized over Bob's displacement: a 21×21 grid centered on the
/// Gaussian-outcome optimum and wide enough to contain the non-assisted optimum,
/// followed by an 11×11 grid spanning two coarse cells around the best point.
pub fn non_gaussian_branch_fidelity(
    net: &ThreeModeBlocks,
    spec: &SqueezedProjectorSpec,
    v_in: &Matrix2<f64>,
    grid: &PhaseGrid,
) -> Result<NonGaussianBranch> {
    let cond = condition_on_measurement(net, spec)?;
    let p0 = match cond.weight {
        Some(OutcomeWeight::Probability(p)) => p,
        _ => {
            return Err(Error::InvalidParameter(
                "the non-Gaussian branch needs a normalizable projector (0 < xi < inf)".into(),
            ))
        }
    };
    let p1 = 1.0 - p0;
    if !(p1 > 0.0) {
        return Err(Error::NegativeProbability(p1));
    }
    let tr = net.traced_channel();
    let w1 = NumericWigner::from_components(
        grid.clone(),
        vec![
            WignerComponent {
                weight: 1.0 / p1,
                state: tr.clone(),
            },
            WignerComponent {
                weight: -p0 / p1,
                state: cond.state.clone(),
            },
        ],
    )?;
    let kq = KernelQuadrature::new(&w1, v_in)?;

    let center = optimal_delta(cond.state.displacement())?;
    let delta_tr = optimal_delta(tr.displacement())?;
    let reach = (delta_tr[0] - center[0]).abs().max((delta_tr[1] - center[1]).abs());
    let half = DELTA_MIN_HALF_SPAN.max(1.5 * reach);
    let (coarse, _) = best_on(&kq, delta_grid(center, half, DELTA_GRID));
    let cell = 2.0 * half / (DELTA_GRID - 1) as f64;
    let (delta1, f1) = best_on(&kq, delta_grid(coarse, cell, DELTA_REFINE));

    let f0 = conditional_fidelity(net, v_in, spec)?;
    Ok(NonGaussianBranch {
        f1,
        f_assisted: p0 * f0 + p1 * f1,
        p0,
        p1,
        f0,
        f_tr: traced_fidelity(net, v_in)?,
        delta1,
    })
}
