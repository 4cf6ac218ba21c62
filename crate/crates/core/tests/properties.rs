use proptest::prelude::*;

use telecheck::entanglement::{concurrence, entanglement_of_formation, fully_entangled_fraction};
use telecheck::linalg::{dagger, eig_hermitian, kron, partial_trace, ComplexMatrix, C64};
use telecheck::qchannel::{apply_protocol, dilate, purify, random_local_protocol};
use telecheck::qstate::{
    bloch_from_density, commutator_norm, extreme_decomposition, haar_random_unitary, random_density,
    random_mixed_qubit, seeded_rng, state_fidelity,
};
use telecheck::teleport::{bbcjpw_protocol, maximal_channel, run_teleport};

fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    use rand::Rng;
    let mut rng = seeded_rng(seed);
    let mut m = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            m[(r, c)] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    m.hermitian_part()
}

#[test]
fn eigen_reconstruction_over_random_hermitians() {
    for dim in [2, 4, 8] {
        for seed in 0..120 {
            let h = random_hermitian(dim, seed * 31 + dim as u64);
            let eig = eig_hermitian(&h).unwrap();
            assert!(eig.reconstruct().distance(&h) < 1e-10 * h.frobenius_norm().max(1.0));
            let v = &eig.eigenvectors;
            assert!((&dagger(v) * v).distance(&ComplexMatrix::identity(dim)) < 1e-10);
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_trace_is_multiplicative(s1 in any::<u64>(), s2 in any::<u64>()) {
        let mut rng = seeded_rng(s1);
        let a = random_density(2, 2, &mut rng);
        let mut rng = seeded_rng(s2);
        let b = random_density(4, 3, &mut rng);
        let k = kron(a.matrix(), b.matrix());
        prop_assert!((k.trace() - a.matrix().trace() * b.matrix().trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_traces_compose(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let rho = random_density(8, 8, &mut rng);
        let direct = partial_trace(rho.matrix(), &[2, 2, 2], &[0]).unwrap();
        let staged = partial_trace(&partial_trace(rho.matrix(), &[2, 2, 2], &[0, 1]).unwrap(), &[2, 2], &[0]).unwrap();
        prop_assert!(direct.distance(&staged) < 1e-13);
        prop_assert!((direct.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extreme_decomposition_is_covariant(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let (r1, r2) = (random_mixed_qubit(&mut rng), random_mixed_qubit(&mut rng));
        prop_assume!(commutator_norm(&r1, &r2).unwrap() > 1e-6);
        let d = extreme_decomposition(&r1, &r2).unwrap();
        let (e1, e2) = d.residuals(&r1, &r2);
        prop_assert!(e1 < 1e-10 && e2 < 1e-10);
        prop_assert!(d.overlap() > 1e-10 && d.overlap() < 1.0 - 1e-10);
        prop_assert!((d.lambda1 - d.lambda2).abs() > 0.0);

        let u = haar_random_unitary(2, &mut rng);
        let du = extreme_decomposition(&r1.conjugate_by(&u).unwrap(), &r2.conjugate_by(&u).unwrap()).unwrap();
        let psi_u = d.psi.apply(&u).unwrap();
        let phi_u = d.phi.apply(&u).unwrap();
        prop_assert!((du.psi.overlap(&psi_u).norm() - 1.0).abs() < 1e-9);
        prop_assert!((du.phi.overlap(&phi_u).norm() - 1.0).abs() < 1e-9);
        prop_assert!((du.lambda1 - d.lambda1).abs() < 1e-9 && (du.lambda2 - d.lambda2).abs() < 1e-9);
    }

    #[test]
    fn entanglement_measures_are_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let rho = random_density(4, 2, &mut rng);
        let u = kron(&haar_random_unitary(2, &mut rng), &haar_random_unitary(2, &mut rng));
        let rot = rho.conjugate_by(&u).unwrap();
        prop_assert!((concurrence(&rho).unwrap() - concurrence(&rot).unwrap()).abs() < 1e-8);
        prop_assert!((entanglement_of_formation(&rho).unwrap() - entanglement_of_formation(&rot).unwrap()).abs() < 1e-8);
        let f = fully_entangled_fraction(&rho).unwrap();
        prop_assert!((f - fully_entangled_fraction(&rot).unwrap()).abs() < 1e-8);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn purification_round_trip(seed in any::<u64>(), rank in 1usize..=4) {
        let mut rng = seeded_rng(seed);
        let rho = random_density(4, rank, &mut rng);
        let p = purify(&rho);
        prop_assert!(p.reduced().distance(rho.matrix()) < 1e-10);
    }

    #[test]
    fn dilation_matches_kraus_map(seed in any::<u64>(), outcomes in 1usize..=4) {
        let mut rng = seeded_rng(seed);
        let p = random_local_protocol(4, 4, outcomes, &mut rng).unwrap();
        let d = dilate(&p).unwrap();
        prop_assert!(d.unitarity_residual() < 1e-9);
        let rho = random_density(16, 16, &mut rng);
        prop_assert!(d.apply_channel(rho.matrix()).unwrap().distance(&p.apply_raw(rho.matrix()).unwrap()) < 1e-9);
    }

    #[test]
    fn protocol_output_is_a_state_and_convex(seed in any::<u64>(), w in 0.0f64..1.0) {
        let mut rng = seeded_rng(seed);
        let p = random_local_protocol(4, 4, 3, &mut rng).unwrap();
        let channel = random_density(8, 4, &mut rng);
        let (a, b) = (random_mixed_qubit(&mut rng), random_mixed_qubit(&mut rng));
        let mix = a.mix(&b, w).unwrap();
        let out = |x| apply_protocol(x, &channel, &p).unwrap();
        let lhs = out(&mix);
        let rhs = out(&a).mix(&out(&b), w).unwrap();
        prop_assert!(lhs.distance(&rhs) < 1e-10);
        prop_assert!((lhs.matrix().trace().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn standard_protocol_teleports_any_qubit(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let rho = random_mixed_qubit(&mut rng);
        let out = run_teleport(&rho, &maximal_channel(), &bbcjpw_protocol(), &rho).unwrap();
        prop_assert!(out.fidelity >= 1.0 - 1e-9);
        let r_in = bloch_from_density(&rho).unwrap().r;
        let r_out = bloch_from_density(&out.output).unwrap().r;
        prop_assert!(r_in.iter().zip(&r_out).all(|(x, y)| (x - y).abs() < 1e-9));
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let (a, b) = (random_density(4, 2, &mut rng), random_density(4, 4, &mut rng));
        let f = state_fidelity(&a, &b).unwrap();
        prop_assert!((f - state_fidelity(&b, &a).unwrap()).abs() < 1e-9);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        prop_assert!((state_fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    }
}
