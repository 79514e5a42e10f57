mod common;

use common::*;
use condspec::distances::{
    distance_to_instability, distance_to_singularity, instability_witness, is_stable,
    singularity_witness, SearchOptions,
};
use condspec::linalg::{eigenvalues, spectral_norm, CMatrix};
use condspec::spectra::{check_inclusion, GridSpec, Lemma};
use condspec::{Error, NormKind};
use proptest::prelude::*;
use rand::Rng;

const NORM: NormKind = NormKind::Spectral;

fn stable(seed: u64, n: usize) -> CMatrix {
    let mut r = rng(seed);
    let a = random_matrix(&mut r, n);
    let margin = r.random_range(0.05..1.0);
    a.shifted(c(max_real_eig(&a) + margin, 0.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn singularity_witness_is_optimal(seed in any::<u64>(), n in 1usize..=6) {
        let a = random_matrix(&mut rng(seed), n);
        let rep = distance_to_singularity(&a, NORM).unwrap();
        let e = singularity_witness(&a).unwrap();
        prop_assert!((spectral_norm(&e) - rep.d2).abs() <= 1e-12 * rep.d2.max(1.0));
        let smin = *oracle_singular_values(&a.add(&e).unwrap()).last().unwrap();
        prop_assert!(smin <= 1e-10 * spectral_norm(&a));
    }

    #[test]
    fn instability_witness_reaches_the_axis(seed in any::<u64>(), n in 2usize..=6) {
        let a = stable(seed, n);
        let rep = distance_to_instability(&a, NORM, SearchOptions::default()).unwrap();
        let e = instability_witness(&a, rep.argmin_omega).unwrap();
        prop_assert!((spectral_norm(&e) - rep.d1_estimate).abs() <= 1e-10);
        let target = c(0.0, rep.argmin_omega);
        let eig = eigenvalues(&a.add(&e).unwrap()).unwrap().require_converged().unwrap();
        let closest = eig.iter().min_by(|p, q| (*p - target).norm().total_cmp(&(*q - target).norm())).unwrap();
        prop_assert!((closest - target).norm() <= 1e-6, "{closest} vs {target}");
        prop_assert!(closest.re >= -1e-6);
    }

    #[test]
    fn instability_bounds_bracket_the_estimate(seed in any::<u64>(), n in 2usize..=6) {
        let a = stable(seed, n);
        let search = SearchOptions::default();
        let rep = distance_to_instability(&a, NORM, search).unwrap();
        prop_assert!(rep.lower_bound <= rep.d1_estimate + search.tol);
        prop_assert!(rep.d1_estimate <= rep.upper_bound + search.tol);
        prop_assert!(rep.g > 0.0 && rep.g < 1.0);
    }

    #[test]
    fn axis_search_beats_the_half_plane_grid(seed in any::<u64>(), n in 2usize..=5) {
        let a = stable(seed, n);
        let rep = distance_to_instability(&a, NORM, SearchOptions::default()).unwrap();
        let r = 2.0 * spectral_norm(&a);
        let grid = GridSpec::new(0.0, r, -r, r, 60, 60).unwrap();
        for z in grid.nodes() {
            let k = condspec::spectra::kappa(&a, z, NORM).unwrap();
            prop_assert!(k >= rep.g - 1e-6, "kappa({z}) = {k} < g = {}", rep.g);
        }
    }

    #[test]
    fn origin_equivalence_holds(seed in any::<u64>(), n in 1usize..=6, eps in 1e-3f64..2.0) {
        let a = random_matrix(&mut rng(seed), n);
        let grid = GridSpec::centered(c(0.0, 0.0), 1.0, 3, 3).unwrap();
        for norm in NormKind::ALL {
            let cert = check_inclusion(&a, Lemma::OriginEquivalence, eps, &grid, norm).unwrap();
            prop_assert!(cert.passed());
            prop_assert_eq!(cert.checked_points, 1);
        }
    }
}

#[test]
fn normal_matrix_distance_is_the_spectral_abscissa() {
    let mut r = rng(3);
    for n in 1..=5 {
        let lambdas: Vec<_> = (0..n)
            .map(|k| c(-0.3 - k as f64 * 0.4, 1.5 - k as f64))
            .collect();
        let q = random_unitary(&mut r, n);
        let a = q
            .matmul(&CMatrix::from_diag(&lambdas))
            .unwrap()
            .matmul(&q.conj_transpose())
            .unwrap();
        let rep = distance_to_instability(&a, NORM, SearchOptions::default()).unwrap();
        assert!(
            (rep.d1_estimate - 0.3).abs() < 1e-6,
            "n = {n}: {}",
            rep.d1_estimate
        );
    }
}

#[test]
fn unstable_and_marginal_inputs() {
    let a = CMatrix::from_real_diag(&[-1.0, 0.5]);
    assert!(matches!(
        distance_to_instability(&a, NORM, SearchOptions::default()),
        Err(Error::NotStable { .. })
    ));
    let rot = CMatrix::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
    assert!(is_stable(&rot, 0.0).unwrap());
    let rep = distance_to_instability(&rot, NORM, SearchOptions::default()).unwrap();
    assert!(rep.d1_estimate < 1e-8);
}

#[test]
fn scalar_matrix_is_flagged() {
    let a = CMatrix::identity(3).scaled(c(-2.0, 1.0));
    let rep = distance_to_singularity(&a, NORM).unwrap();
    assert!(rep.scalar_matrix);
    assert!((rep.d2 - 5f64.sqrt()).abs() < 1e-12);
    assert!(matches!(
        distance_to_singularity(&CMatrix::zeros(2, 2), NORM),
        Err(Error::SingularMatrix { .. })
    ));
}
