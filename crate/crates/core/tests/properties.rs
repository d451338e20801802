use approx::relative_eq;
use gaussnet::entanglement::pt_min_symplectic_eigenvalue;
use gaussnet::linalg::symplectic_form;
use gaussnet::network::{condition_on_measurement, SqueezedProjectorSpec, ThreeModeBlocks};
use gaussnet::random::{random_state, random_symplectic, RandomStateParams};
use gaussnet::symplectic::{
    apply_symplectic, overlap, partial_transpose, purity, standard_form_i,
    two_mode_symplectic_eigenvalues, williamson_eigenvalues, GaussianState, TwoModeBlocks,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state(seed: u64, n_modes: usize) -> GaussianState {
    let params = RandomStateParams {
        displacement_scale: 1.0,
        ..Default::default()
    };
    random_state(n_modes, &params, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_symplectic_preserves_form(seed in any::<u64>(), n in 1usize..5) {
        let s = random_symplectic(n, 1.0, &mut ChaCha8Rng::seed_from_u64(seed));
        let j = symplectic_form(n);
        let dev = (s.matrix() * &j * s.matrix().transpose() - &j).abs().max();
        prop_assert!(dev < 1e-10, "deviation {}", dev);
    }

    #[test]
    fn williamson_spectrum_is_symplectic_invariant(seed in any::<u64>(), n in 1usize..5) {
        let st = state(seed, n);
        let s = random_symplectic(n, 0.8, &mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
        let moved = apply_symplectic(&st, &s).unwrap();
        let before = sorted(williamson_eigenvalues(st.cm()).unwrap());
        let after = sorted(williamson_eigenvalues(moved.cm()).unwrap());
        for (a, b) in before.iter().zip(&after) {
            prop_assert!(*a >= 0.5 - 1e-9);
            prop_assert!(relative_eq!(*a, *b, max_relative = 1e-8), "{} vs {}", a, b);
        }
    }

    #[test]
    fn two_mode_closed_form_matches_general_spectrum(seed in any::<u64>()) {
        let st = state(seed, 2);
        let (minus, plus) = two_mode_symplectic_eigenvalues(&TwoModeBlocks::from_cm(st.cm()).unwrap()).unwrap();
        let general = sorted(williamson_eigenvalues(st.cm()).unwrap());
        prop_assert!(relative_eq!(minus, general[0], max_relative = 1e-9));
        prop_assert!(relative_eq!(plus, general[1], max_relative = 1e-9));
    }

    #[test]
    fn transposed_spectrum_matches_eigenvalues_of_j_v(seed in any::<u64>()) {
        let st = state(seed, 2);
        let pt = partial_transpose(st.cm(), &[1]).unwrap();
        let jv = symplectic_form(2) * pt;
        let smallest = jv
            .complex_eigenvalues()
            .iter()
            .map(|z| z.im.abs())
            .fold(f64::INFINITY, f64::min);
        let nu = pt_min_symplectic_eigenvalue(st.cm()).unwrap();
        prop_assert!(relative_eq!(nu, smallest, max_relative = 1e-8), "{} vs {}", nu, smallest);
    }

    #[test]
    fn standard_form_keeps_local_invariants(seed in any::<u64>()) {
        let st = state(seed, 2);
        let sf = standard_form_i(st.cm()).unwrap();
        let v = st.cm().matrix();
        let moved = sf.local_transform.matrix() * v * sf.local_transform.matrix().transpose();
        prop_assert!((moved - sf.to_matrix()).abs().max() < 1e-9);
        let blocks = TwoModeBlocks::from_cm(st.cm()).unwrap();
        prop_assert!(relative_eq!(blocks.a.determinant(), sf.a * sf.a, max_relative = 1e-9));
        prop_assert!(relative_eq!(blocks.c.determinant(), sf.c * sf.c_prime, epsilon = 1e-9, max_relative = 1e-9));
        prop_assert!(sf.c >= 0.0 && sf.c.abs() >= sf.c_prime.abs() - 1e-12);
    }

    #[test]
    fn overlap_is_symmetric_and_bounded(seed in any::<u64>()) {
        let a = state(seed, 2);
        let b = state(seed.wrapping_add(1), 2);
        let ab = overlap(&a, &b).unwrap();
        prop_assert!(relative_eq!(ab, overlap(&b, &a).unwrap(), max_relative = 1e-12));
        prop_assert!(ab > 0.0 && ab <= 1.0);
        prop_assert!(relative_eq!(overlap(&a, &a).unwrap(), purity(a.cm()).unwrap(), max_relative = 1e-12));
    }

    #[test]
    fn state_json_round_trip(seed in any::<u64>(), n in 1usize..4) {
        let st = state(seed, n);
        let back = GaussianState::from_json(&st.to_json()).unwrap();
        prop_assert_eq!(back, st);
    }

    #[test]
    fn conditional_cm_does_not_depend_on_outcome(
        seed in any::<u64>(),
        xi in 0.05f64..20.0,
        phi in 0.0f64..std::f64::consts::PI,
        alpha in prop::array::uniform2(-3.0f64..3.0),
    ) {
        let net = ThreeModeBlocks::from_state(&state(seed, 3)).unwrap();
        let reference = condition_on_measurement(&net, &SqueezedProjectorSpec::new(xi, phi)).unwrap();
        let mut spec = SqueezedProjectorSpec::new(xi, phi);
        spec.alpha = alpha;
        let other = condition_on_measurement(&net, &spec).unwrap();
        let same: &DMatrix<f64> = reference.state.cm().matrix();
        prop_assert_eq!(same, other.state.cm().matrix());
    }
}
