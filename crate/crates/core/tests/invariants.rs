use entq_core::linalg::{eigh, hermitian_part, kron, CMatrix};
use entq_core::measures::{
    dicke_lambda_sq_closed_form, lemma1_bound, rg_bipartite_pure, schmidt, BOUND_SLACK,
};
use entq_core::overlap::{lambda_sq_over_partitions, lambda_sq_pure, OptConfig};
use entq_core::states::{make_dicke, random_state, rng_stream, to_density, PartitionSpec, StateVector};
use entq_core::witness::{build_lemma1_witness, build_pure_witness, certify_witness};
use entq_core::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let vecs = eigh(&hermitian_part(&g)).unwrap().eigenvectors;
    CMatrix::from_columns(&vecs)
}

#[test]
fn local_unitary_invariance() {
    let cfg = OptConfig::default();
    let mut rng = rng_stream(31, 0);
    for trial in 0..100u64 {
        let dims: Vec<usize> = if trial % 2 == 0 { vec![2, 2, 2] } else { vec![2, 3] };
        let psi = random_state(&dims, 1000 + trial).unwrap();
        let u = dims
            .iter()
            .map(|&d| random_unitary(d, &mut rng))
            .reduce(|a, b| kron(&a, &b))
            .unwrap();
        let rotated = StateVector::normalized(dims.clone(), &u * psi.amps()).unwrap();
        let part = PartitionSpec::finest(dims.len());
        let a = lambda_sq_pure(&psi, &part, &cfg).unwrap().value;
        let b = lambda_sq_pure(&rotated, &part, &cfg).unwrap().value;
        assert!((a - b).abs() <= 1e-8, "trial {trial}: {a} vs {b}");
    }
}

#[test]
fn nesting_in_k() {
    let cfg = OptConfig::default();
    for seed in 0..15 {
        let psi = random_state(&[2, 2, 2, 2], 500 + seed).unwrap();
        let values: Vec<f64> = (1..=4)
            .map(|k| lambda_sq_over_partitions(&psi, k, &cfg).unwrap().value)
            .collect();
        for k in 1..4 {
            assert!(values[k] <= values[k - 1] + 1e-10, "seed {seed}: {values:?}");
        }
    }
}

#[test]
fn bipartite_overlap_is_top_schmidt_coefficient() {
    let cfg = OptConfig::default();
    for seed in 0..100 {
        let dims = [2 + seed as usize % 3, 2 + (seed as usize / 3) % 3];
        let psi = random_state(&dims, seed).unwrap();
        let part = PartitionSpec::finest(2);
        let opt = lambda_sq_pure(&psi, &part, &cfg).unwrap().value;
        let c = schmidt(&psi, &part).unwrap().max_coefficient();
        assert!((opt - c * c).abs() <= 1e-8, "seed {seed}: {opt} vs {}", c * c);
    }
}

#[test]
fn dicke_optimizer_matches_closed_form() {
    let cfg = OptConfig::default();
    for n in 2..=5 {
        for zeros in 0..=n {
            let psi = make_dicke(n, zeros).unwrap();
            let opt = lambda_sq_over_partitions(&psi, n, &cfg).unwrap().value;
            let closed = dicke_lambda_sq_closed_form(n, zeros).unwrap();
            assert!((opt - closed).abs() <= 1e-6, "S({n},{zeros}): {opt} vs {closed}");
        }
    }
}

#[test]
fn certified_witness_bounds_never_exceed_exact_robustness() {
    let cfg = OptConfig::default();
    let part = PartitionSpec::finest(2);
    for seed in 0..50 {
        let dims = [2 + seed as usize % 2, 2 + (seed as usize / 2) % 3];
        let psi = random_state(&dims, 70 + seed).unwrap();
        let rho = to_density(&psi);
        let r_g = rg_bipartite_pure(&schmidt(&psi, &part).unwrap());
        let lambda = lambda_sq_pure(&psi, &part, &cfg).unwrap().value;

        let pure = build_pure_witness(&psi, lambda, &part).unwrap();
        assert!(certify_witness(&pure, &cfg).unwrap().is_witness());
        assert!(pure.robustness_lower_bound(&rho) <= r_g + 1e-8);
        // Consistency with the geometric measure.
        assert!((-pure.expectation_pure(&psi) - (1.0 - lambda)).abs() <= 1e-12);

        let bound = lemma1_bound(&rho, &part, &cfg).unwrap();
        let lemma = build_lemma1_witness(&rho, bound.max_overlap, &part).unwrap();
        assert!(certify_witness(&lemma, &cfg).unwrap().is_witness());
        assert!(lemma.robustness_lower_bound(&rho) <= r_g + 1e-8);
        assert!(r_g >= bound.raw - BOUND_SLACK);
        for w in [&pure, &lemma] {
            assert!(w.max_eigenvalue().unwrap() <= 1.0 + 1e-10);
        }
    }
}
