use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::channels::{tmsv, InputSpec};
use crate::error::Error;
use crate::network::{SqueezedProjectorSpec, ThreeModeBlocks};
use crate::random::{random_state, RandomStateParams};
use crate::symplectic::{overlap, CovarianceMatrix, GaussianState};
use crate::teleport::{coherent_input, displacement_from_amplitudes, fidelity};

fn closed_form(channel: &GaussianState, delta: Option<[f64; 2]>) -> f64 {
    fidelity(&coherent_input(), channel, delta).unwrap().fidelity
}

#[test]
fn vacuum_wigner_integrates_to_one() {
    let grid = PhaseGrid::new(1, 6.0, 256);
    let w = wigner_of(&GaussianState::vacuum(1), &grid).unwrap();
    assert!((w.worst_marginal_integral().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn peak_value_matches_gaussian_normalization() {
    let cm = CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[0.9, 0.3, 0.3, 0.8])).unwrap();
    let d = DVector::from_vec(vec![0.4, -1.1]);
    let s = GaussianState::new(d.clone(), cm.clone()).unwrap();
    let w = wigner_of(&s, &PhaseGrid::for_state(&s)).unwrap();
    let expected = 1.0 / (2.0 * std::f64::consts::PI * cm.determinant().sqrt());
    assert!((w.value(&d).unwrap() - expected).abs() < 1e-14);
}

#[test]
fn position_marginal_has_variance_v11() {
    let cm = CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[1.3, -0.4, -0.4, 0.6])).unwrap();
    let s = GaussianState::centered(cm);
    let grid = PhaseGrid::for_state(&s);
    let w = wigner_of(&s, &grid).unwrap();
    let values = w.mode_marginal(0).unwrap();
    let nodes = grid.nodes();
    let n = nodes.len();
    let h = grid.spacing();
    let var: f64 = (0..n)
        .map(|i| {
            let marginal: f64 = values[i * n..(i + 1) * n].iter().sum::<f64>() * h;
            nodes[i] * nodes[i] * marginal * h
        })
        .sum();
    assert!((var - 1.3).abs() < 1e-6, "{var}");
}

#[test]
fn narrow_grid_is_rejected() {
    let s = tmsv(0.5).unwrap();
    let grid = PhaseGrid::new(2, 1.0, 32);
    assert!(matches!(wigner_of(&s, &grid), Err(Error::GridTooSmall { .. })));
    let wrong_modes = PhaseGrid::new(1, 6.0, 32);
    assert!(matches!(
        wigner_of(&s, &wrong_modes),
        Err(Error::DimensionMismatch { .. })
    ));
}

fn kernel_at(channel: &GaussianState, points: usize, delta: [f64; 2]) -> f64 {
    let grid = PhaseGrid::covering(&[channel], points);
    let w = wigner_of(channel, &grid).unwrap();
    kernel_fidelity(&w, &coherent_input(), delta).unwrap()
}

#[test]
fn kernel_reproduces_twin_beam_fidelity() {
    let f = kernel_at(&tmsv(0.5).unwrap(), 64, [0.0, 0.0]);
    let e = std::f64::consts::E;
    assert!((f - e / (1.0 + e)).abs() < 1e-3, "{f}");
}

#[test]
fn kernel_reproduces_classical_bound() {
    let f = kernel_at(&GaussianState::vacuum(2), 64, [0.0, 0.0]);
    assert!((f - 0.5).abs() < 1e-3, "{f}");
}

#[test]
fn kernel_matches_shifted_channel_with_suboptimal_delta() {
    let shifted = tmsv(0.5)
        .unwrap()
        .with_displacement(displacement_from_amplitudes([1.0, 1.0, 0.0, 0.0]))
        .unwrap();
    let f = kernel_at(&shifted, 64, [0.0, 0.0]);
    assert!((f - 0.169_419).abs() < 1e-3, "{f}");
    assert!((f - closed_form(&shifted, Some([0.0, 0.0]))).abs() < 1e-3);
    let optimal = kernel_at(&shifted, 64, [1.0, -1.0]);
    assert!((optimal - closed_form(&shifted, None)).abs() < 1e-3, "{optimal}");
}

#[test]
fn kernel_matches_random_channels_and_squeezed_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let params = RandomStateParams {
        max_squeezing: 0.6,
        max_thermal: 0.8,
        displacement_scale: 0.5,
    };
    for _ in 0..3 {
        let ch = random_state(2, &params, &mut rng);
        let v_in = crate::channels::squeezed_vacuum_cm(1.7, 0.4);
        let grid = PhaseGrid::covering(&[&ch], 48);
        let w = wigner_of(&ch, &grid).unwrap();
        let delta = [0.3, -0.2];
        let oracle = kernel_fidelity(&w, &v_in, delta).unwrap();
        let exact = fidelity(&v_in, &ch, Some(delta)).unwrap().fidelity;
        assert!((oracle - exact).abs() < 1e-3, "{oracle} vs {exact}");
    }
}

#[test]
fn halving_spacing_reduces_error() {
    let ch = tmsv(0.3).unwrap();
    let exact = closed_form(&ch, None);
    let coarse = (kernel_at(&ch, 12, [0.0, 0.0]) - exact).abs();
    let fine = (kernel_at(&ch, 24, [0.0, 0.0]) - exact).abs();
    assert!(coarse > 1e-8, "coarse error {coarse} too small to compare");
    assert!(fine <= 0.5 * coarse, "{coarse} -> {fine}");
}

#[test]
fn kernel_rejects_mixed_input_and_wrong_mode_count() {
    let ch = tmsv(0.5).unwrap();
    let w = wigner_of(&ch, &PhaseGrid::covering(&[&ch], 16)).unwrap();
    assert!(kernel_fidelity(&w, &Matrix2::identity(), [0.0, 0.0]).is_err());
    let single = GaussianState::vacuum(1);
    let w1 = wigner_of(&single, &PhaseGrid::for_state(&single)).unwrap();
    assert!(matches!(
        kernel_fidelity(&w1, &coherent_input(), [0.0, 0.0]),
        Err(Error::InvalidCm(_))
    ));
}

#[test]
fn montecarlo_matches_twin_beam_closed_form() {
    let est = montecarlo_protocol(&tmsv(1.0).unwrap(), &InputSpec::coherent(), 100_000, 5).unwrap();
    let e2 = 2f64.exp();
    let exact = e2 / (1.0 + e2);
    assert!((est.f_estimate - exact).abs() < 3.0 * est.std_error, "{est:?}");
}

#[test]
fn montecarlo_near_ideal_channel_is_perfect() {
    let est = montecarlo_protocol(&tmsv(10.0).unwrap(), &InputSpec::coherent(), 10_000, 1).unwrap();
    assert!(est.f_estimate > 0.999, "{est:?}");
}

#[test]
fn montecarlo_is_deterministic_per_seed() {
    let ch = tmsv(0.4).unwrap();
    let input = InputSpec::Squeezed {
        alpha: [0.5, -0.3],
        xi: 1.4,
        phi: 0.2,
    };
    let a = montecarlo_protocol(&ch, &input, 12_345, 99).unwrap();
    let b = montecarlo_protocol(&ch, &input, 12_345, 99).unwrap();
    assert_eq!(a.f_estimate.to_bits(), b.f_estimate.to_bits());
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    let c = montecarlo_protocol(&ch, &input, 12_345, 100).unwrap();
    assert_ne!(a.f_estimate.to_bits(), c.f_estimate.to_bits());
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let d = pool.install(|| montecarlo_protocol(&ch, &input, 12_345, 99).unwrap());
    assert_eq!(a.f_estimate.to_bits(), d.f_estimate.to_bits());
}

#[test]
fn montecarlo_matches_shifted_channel_and_suboptimal_delta() {
    let shifted = tmsv(0.5)
        .unwrap()
        .with_displacement(displacement_from_amplitudes([1.0, 1.0, 0.0, 0.0]))
        .unwrap();
    let est = montecarlo_protocol_with_delta(&shifted, &InputSpec::coherent(), [0.0, 0.0], 50_000, 3)
        .unwrap();
    let exact = closed_form(&shifted, Some([0.0, 0.0]));
    assert!((est.f_estimate - exact).abs() < 4.0 * est.std_error, "{est:?} vs {exact}");
}

#[test]
fn montecarlo_rejects_small_sample_counts() {
    assert!(matches!(
        montecarlo_protocol(&tmsv(0.5).unwrap(), &InputSpec::coherent(), 999, 0),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn bell_outcome_density_integrates_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ch = random_state(
        2,
        &RandomStateParams {
            displacement_scale: 1.0,
            ..Default::default()
        },
        &mut rng,
    );
    let input = InputSpec::Coherent { alpha: [0.7, 0.2] }.state().unwrap();
    let stats = BellStatistics::new(&ch, &input).unwrap();
    let sigma = stats.outcome_cov.symmetric_eigenvalues().max().sqrt();
    let half = 7.0 * sigma;
    let n = 200;
    let h = 2.0 * half / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let o = stats.outcome_mean
                + Vector2::new(-half + (i as f64 + 0.5) * h, -half + (j as f64 + 0.5) * h);
            total += stats.outcome_density(o) * h * h;
        }
    }
    assert!((total - 1.0).abs() < 1e-9, "{total}");
}

#[test]
fn overlap_formula_in_sampler_matches_library_overlap() {
    // One outcome conditioned by hand against the library overlap.
    let ch = tmsv(0.7).unwrap();
    let input = InputSpec::coherent().state().unwrap();
    let stats = BellStatistics::new(&ch, &input).unwrap();
    let v = stats.conditional_bob_cov().unwrap();
    let out = GaussianState::new(
        DVector::from_vec(vec![0.3, -0.1]),
        CovarianceMatrix::new(DMatrix::from_column_slice(2, 2, v.as_slice())).unwrap(),
    )
    .unwrap();
    let s = coherent_input() + v;
    let d = Vector2::new(0.3, -0.1);
    let formula = (-0.5 * d.dot(&(s.try_inverse().unwrap() * d))).exp() / s.determinant().sqrt();
    assert!((overlap(&input, &out).unwrap() - formula).abs() < 1e-14);
}

fn uncorrelated_net() -> ThreeModeBlocks {
    let ab = tmsv(0.4).unwrap();
    let mut v = DMatrix::zeros(6, 6);
    v.view_mut((0, 0), (4, 4)).copy_from(ab.cm().matrix());
    v[(4, 4)] = 1.1;
    v[(5, 5)] = 0.9;
    v[(4, 5)] = 0.2;
    v[(5, 4)] = 0.2;
    let s = GaussianState::centered(CovarianceMatrix::new(v).unwrap());
    ThreeModeBlocks::from_state(&s).unwrap()
}

#[test]
fn branch_on_uncorrelated_mode_reproduces_traced_fidelity() {
    let net = uncorrelated_net();
    let spec = SqueezedProjectorSpec::new(1.3, 0.4);
    let grid = branch_grid(&net, &spec, 24).unwrap();
    let b = non_gaussian_branch_fidelity(&net, &spec, &coherent_input(), &grid).unwrap();
    assert!((b.f1 - b.f_tr).abs() < 1e-2, "{b:?}");
    assert!((b.f0 - b.f_tr).abs() < 1e-12);
    assert!((b.p0 + b.p1 - 1.0).abs() < 1e-15 && b.p0 > 0.0 && b.p1 > 0.0);
}

#[test]
fn branch_rejects_certain_gaussian_outcome() {
    let ab = tmsv(0.4).unwrap();
    let mut v = DMatrix::identity(6, 6) * 0.5;
    v.view_mut((0, 0), (4, 4)).copy_from(ab.cm().matrix());
    let net = ThreeModeBlocks::from_state(&GaussianState::centered(CovarianceMatrix::new(v).unwrap()))
        .unwrap();
    let spec = SqueezedProjectorSpec::new(1.0, 0.0);
    let grid = PhaseGrid::covering(&[&net.traced_channel()], 16);
    assert!(matches!(
        non_gaussian_branch_fidelity(&net, &spec, &coherent_input(), &grid),
        Err(Error::NegativeProbability(_))
    ));
}

#[test]
fn branch_rejects_homodyne_limits() {
    let net = uncorrelated_net();
    let spec = SqueezedProjectorSpec::new(f64::INFINITY, 0.0);
    let grid = PhaseGrid::covering(&[&net.traced_channel()], 16);
    assert!(matches!(
        non_gaussian_branch_fidelity(&net, &spec, &coherent_input(), &grid),
        Err(Error::InvalidParameter(_))
    ));
}

