use dephaser::channel::{kraus_canonical, DephasingMap};
use dephaser::infometrics::{
    pipeline_metrics, two_use_exchange_spectrum, two_use_family_metrics, PqInput,
};
use dephaser::linalg::ComplexMatrix;
use dephaser::qstate::{purify, von_neumann_entropy};
use dephaser::{DensityMatrix, DephasingParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_state(seed: u64, qubits: usize) -> DensityMatrix {
    DensityMatrix::random(&mut ChaCha8Rng::seed_from_u64(seed), qubits)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dephasing_keeps_states_physical(g in 0.0..=1.0f64, gamma in 0.0..=1.0f64, seed in any::<u64>()) {
        let params = DephasingParams::from_factors(g, gamma).unwrap();
        let map = DephasingMap::from_params(&params, 2).unwrap();
        let rho = random_state(seed, 2);
        let out = map.apply(&rho).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-12);
        prop_assert!(out.eigen().unwrap().values.iter().all(|&l| l > -1e-12));
        for j in 0..4 {
            prop_assert!((out.matrix()[(j, j)] - rho.matrix()[(j, j)]).norm() < 1e-15);
        }
        prop_assert!(DensityMatrix::new(out.into_matrix()).is_ok());
    }

    #[test]
    fn dephasing_never_lowers_entropy(g in 0.0..=1.0f64, gamma in 0.0..=1.0f64, seed in any::<u64>()) {
        let map = DephasingMap::from_params(&DephasingParams::from_factors(g, gamma).unwrap(), 2).unwrap();
        let rho = random_state(seed, 2);
        let before = von_neumann_entropy(&rho).unwrap();
        let after = von_neumann_entropy(&map.apply(&rho).unwrap()).unwrap();
        prop_assert!(after >= before - 1e-10);
    }

    #[test]
    fn canonical_kraus_reproduces_overlap_maps(
        i0 in 0.05..2.0f64,
        r1 in -1.0..1.0f64,
        r2 in -1.0..1.0f64,
        seed in any::<u64>(),
    ) {
        // overlaps of a positive kernel: I1, I2 bounded by I0
        let overlaps = [i0, 0.5 * r1 * i0, 0.25 * r2 * i0];
        let Ok(map) = DephasingMap::from_overlaps(1.0, &overlaps) else {
            return Ok(());
        };
        let set = kraus_canonical(&map).unwrap();
        prop_assert!(set.completeness().max_abs_diff(&ComplexMatrix::identity(8)) < 1e-10);
        let rho = random_state(seed, 3);
        prop_assert!(set.apply(&rho, false).unwrap().max_abs_diff(&map.apply(&rho).unwrap()) < 1e-12);
    }

    #[test]
    fn family_metrics_bounds(g in 0.0..=1.0f64, gamma in 0.0..=1.0f64, p in 0.0..=1.0f64) {
        let params = DephasingParams::from_factors(g, gamma).unwrap();
        let input = PqInput::new(p).unwrap();
        let m = two_use_family_metrics(input, &params);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&m.fe));
        prop_assert!(m.se >= -1e-12 && m.se <= 2.0 + 1e-12);
        prop_assert!(m.ic <= m.s_in + 1e-12);
        let s: f64 = two_use_exchange_spectrum(input, &params).iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn family_closed_form_tracks_pipeline(g in 0.01..=1.0f64, gamma in 0.0..=1.0f64, p in 0.0..=1.0f64) {
        let params = DephasingParams::from_factors(g, gamma).unwrap();
        let input = PqInput::new(p).unwrap();
        let closed = two_use_family_metrics(input, &params);
        let map = DephasingMap::from_params(&params, 2).unwrap();
        let direct = pipeline_metrics(&input.state(), &map).unwrap();
        prop_assert!((closed.fe - direct.fe).abs() < 1e-10);
        prop_assert!((closed.se - direct.se).abs() < 1e-9);
    }

    #[test]
    fn purification_reduces_back(seed in any::<u64>(), qubits in 1usize..=3) {
        let rho = random_state(seed, qubits);
        let psi = purify(&rho).unwrap();
        let system: Vec<usize> = (qubits..2 * qubits).collect();
        let back = psi.projector().partial_trace(&system).unwrap();
        prop_assert!(back.max_abs_diff(&rho) < 1e-10);
    }
}
