use num_complex::Complex64;
use proptest::prelude::*;
use qkd_audit_core::dist::{variational_distance, KeyDistribution};
use qkd_audit_core::quantum::{
    cq_distance, independent_coupling, independent_mismatch, interpretation_gap_report,
    maximal_coupling, measure, signal_density_operators, trace_distance, usd_povm, CqEnsemble,
    DensityOperator, Matrix, INCONCLUSIVE,
};
use qkd_audit_core::random::{random_cq_ensemble, random_density, random_distribution, random_povm};
use qkd_audit_oracles as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rows(m: &Matrix) -> &[Complex64] {
    m.as_slice()
}

/// Bell state against `0.7 |ψ⟩⟨ψ| + 0.3 diag(0.1, 0.2, 0.3, 0.4)` with
/// `ψ = (1, i, 0, 0)/√2`; value from a 40-digit eigensolve.
const TWO_QUBIT_TRACE_DISTANCE: f64 = 0.806_648_656_377_727_3;

#[test]
fn frozen_two_qubit_trace_distance() {
    let h = 0.5f64.sqrt();
    let bell = DensityOperator::pure(&[c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap();
    let psi = DensityOperator::pure(&[c(h, 0.0), c(0.0, h), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    let diag = DensityOperator::diagonal(&[0.1, 0.2, 0.3, 0.4]).unwrap();
    let mixed = DensityOperator::mixture(&[0.7, 0.3], &[psi, diag]).unwrap();
    let d = trace_distance(&bell, &mixed).unwrap();
    assert!((d - TWO_QUBIT_TRACE_DISTANCE).abs() < 1e-12, "{d}");
}

#[test]
fn trace_distance_matches_nalgebra_and_helstrom() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let dim = rng.random_range(1..=8);
        let a = random_density(dim, rng.random_range(1..=dim), &mut rng).unwrap();
        let b = random_density(dim, rng.random_range(1..=dim), &mut rng).unwrap();
        let d = trace_distance(&a, &b).unwrap();
        let (ra, rb) = (rows(a.matrix()), rows(b.matrix()));
        assert!((d - oracle::trace_distance(dim, ra, rb)).abs() < 1e-10);
        assert!((d - oracle::helstrom_distance(dim, ra, rb)).abs() < 1e-10);
        assert!(oracle::random_projector_distance(dim, ra, rb, 20, &mut rng) <= d + 1e-10);
    }
}

#[test]
fn data_processing_inequality_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..300 {
        let dim = rng.random_range(1..=8);
        let a = random_density(dim, rng.random_range(1..=dim), &mut rng).unwrap();
        let b = random_density(dim, rng.random_range(1..=dim), &mut rng).unwrap();
        let povm = random_povm(dim, rng.random_range(1..=6), &mut rng).unwrap();
        let pa = measure(&a, &povm).unwrap();
        let pb = measure(&b, &povm).unwrap();
        let elements: Vec<Vec<Complex64>> = povm.elements().iter().map(|e| rows(e).to_vec()).collect();
        for (x, y) in pa.probs().iter().zip(oracle::outcome_probs(dim, rows(a.matrix()), &elements)) {
            assert!((x - y).abs() < 1e-10);
        }
        let delta = pa.variational_distance(&pb).unwrap();
        assert!(delta <= trace_distance(&a, &b).unwrap() + 1e-9);
    }
}

#[test]
fn blockwise_cq_distance_matches_tensor_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..60 {
        let keys = rng.random_range(1..=8);
        let dim = rng.random_range(1..=64 / keys).min(8);
        let e = random_cq_ensemble(keys, dim, i % 2 == 0, &mut rng).unwrap();
        let states: Vec<Vec<Complex64>> = e.states().iter().map(|s| rows(s.matrix()).to_vec()).collect();
        let full = oracle::cq_distance_tensor(e.weights(), &states, dim);
        assert!((cq_distance(&e).unwrap() - full).abs() < 1e-9);
    }
}

#[test]
fn cq_distance_edge_cases() {
    // probe independent of the key and key uniform: zero distance
    let rho = DensityOperator::maximally_mixed(3).unwrap();
    let e = CqEnsemble::uniform(vec![rho.clone(), rho.clone(), rho]).unwrap();
    assert!(cq_distance(&e).unwrap() < 1e-12);
    // orthogonal probes on two uniform keys: Eve reads the key, d = ½
    let zero = DensityOperator::diagonal(&[1.0, 0.0]).unwrap();
    let one = DensityOperator::diagonal(&[0.0, 1.0]).unwrap();
    let e = CqEnsemble::uniform(vec![zero, one]).unwrap();
    assert!((cq_distance(&e).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn usd_never_misidentifies() {
    for k in 0..20 {
        let s = f64::from(k) / 20.0;
        let usd = usd_povm(s).unwrap();
        let [r0, r1] = signal_density_operators(s).unwrap();
        let p0 = measure(&r0, &usd.povm).unwrap().into_vec();
        let p1 = measure(&r1, &usd.povm).unwrap().into_vec();
        assert!(p0[1].abs() < 1e-12 && p1[0].abs() < 1e-12);
        assert!((p0[INCONCLUSIVE] - s).abs() < 1e-12);
        assert!((p1[INCONCLUSIVE] - s).abs() < 1e-12);
        assert!((usd.success_prob - (1.0 - s)).abs() < 1e-12);
    }
}

#[test]
fn couplings_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..300 {
        let n = rng.random_range(1..=6);
        let p = random_distribution(n, &mut rng).unwrap();
        let q = random_distribution(n, &mut rng).unwrap();
        let delta = variational_distance(&p, &q).unwrap();
        let maximal = maximal_coupling(&p, &q).unwrap();
        assert!((maximal.mismatch_probability() - delta).abs() < 1e-12);
        let pd = p.to_dense().unwrap();
        for (a, b) in maximal.first_marginal().iter().zip(&pd) {
            assert!((a - b).abs() < 1e-12);
        }
        let indep = independent_coupling(&p, &q).unwrap();
        let direct: f64 = 1.0 - pd.iter().zip(q.to_dense().unwrap()).map(|(a, b)| a * b).sum::<f64>();
        assert!((indep.mismatch_probability() - direct).abs() < 1e-12);
        assert!(independent_mismatch(&p, &q).unwrap() >= delta - 1e-12);
    }
}

#[test]
fn gap_report_reading() {
    let r = interpretation_gap_report(2f64.powi(-5), 10).unwrap();
    assert!((r.actual_p1 - (2f64.powi(-10) + 2f64.powi(-5))).abs() < 1e-15);
    assert!((r.advantage_ratio - 33.0).abs() < 1e-9);
    assert!(r.max_subset_gap >= 0.0);
    let flat = interpretation_gap_report(0.0, 6).unwrap();
    assert_eq!(flat.actual_p1, flat.uniform_p1);
    assert!(!flat.reading_violated);
}

proptest! {
    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>(), dim in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, m] = [0, 1, 2].map(|_| random_density(dim, dim, &mut rng).unwrap());
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert!((ab - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-10).contains(&ab));
        prop_assert!(trace_distance(&a, &a).unwrap() < 1e-10);
        prop_assert!(ab <= trace_distance(&a, &m).unwrap() + trace_distance(&m, &b).unwrap() + 1e-10);
    }

    #[test]
    fn measured_probabilities_form_a_distribution(seed in any::<u64>(), dim in 1usize..=8, k in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(dim, 1, &mut rng).unwrap();
        let povm = random_povm(dim, k, &mut rng).unwrap();
        let probs = measure(&rho, &povm).unwrap().into_vec();
        prop_assert_eq!(probs.len(), k);
        prop_assert!(probs.iter().all(|&x| x >= 0.0));
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximal_coupling_of_point_masses(n in 1u32..=6, x in 0u32..64, y in 0u32..64) {
        let size = 1u32 << n;
        let p = KeyDistribution::point_mass(n, x % size).unwrap();
        let q = KeyDistribution::point_mass(n, y % size).unwrap();
        let expected = if x % size == y % size { 0.0 } else { 1.0 };
        prop_assert_eq!(maximal_coupling(&p, &q).unwrap().mismatch_probability(), expected);
    }
}

#[test]
fn invalid_quantum_inputs() {
    let bad_trace = Matrix::diagonal(&[0.5, 0.4]);
    assert!(DensityOperator::new(bad_trace).is_err());
    let negative = Matrix::diagonal(&[1.2, -0.2]);
    assert!(DensityOperator::new(negative).is_err());
    let non_hermitian = Matrix::from_row_major(2, vec![c(0.5, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
    assert!(DensityOperator::new(non_hermitian).is_err());
    let rho = DensityOperator::maximally_mixed(2).unwrap();
    let sigma = DensityOperator::maximally_mixed(3).unwrap();
    assert!(trace_distance(&rho, &sigma).is_err());
    assert!(usd_povm(1.0).is_err());
    assert!(CqEnsemble::uniform(vec![]).is_err());
}
