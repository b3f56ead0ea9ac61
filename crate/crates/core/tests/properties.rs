//! Randomized structural invariants of the numerical kernels.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use qbound_core::bounds::{magfield_single_particle_generators, qfim_rdm};
use qbound_core::channels::{
    dephasing_kraus, kraus_derivatives, pauli_split_channel, stinespring_dilation,
    KrausChannel,
};
use qbound_core::linalg::{
    self, alpha_conjugation_integral, bures_fidelity, herm_eig, kron, partial_trace,
    re, unitary_exp, ComplexMatrix,
};
use qbound_core::scenarios::{ginibre_state, random_hermitian_traceless};
use qbound_core::states::DensityMatrix;
use qbound_core::sym::SymMatrix;

fn rng_from(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unitary_exp_produces_unitary_matrices(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = rng_from(seed);
        let h = random_hermitian_traceless(&mut rng, dim);
        let u = unitary_exp(&h).unwrap();
        let gram = u.adjoint().mul(&u);
        let res = gram.sub(&ComplexMatrix::identity(dim)).max_abs();
        prop_assert!(res < 1e-10, "unitarity residual {res:.3e}");
    }

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), dim in 2usize..=8) {
        let mut rng = rng_from(seed);
        let h = random_hermitian_traceless(&mut rng, dim);
        let eig = herm_eig(&h).unwrap();
        let rebuilt = eig.map(re);
        let res = rebuilt.sub(&h).max_abs();
        prop_assert!(res < 1e-10 * h.max_abs().max(1.0), "reconstruction {res:.3e}");
        for w in eig.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-12, "eigenvalues not sorted");
        }
    }

    #[test]
    fn alpha_conjugation_preserves_trace_and_hermiticity(
        seed in any::<u64>(),
        dim in 2usize..=4,
    ) {
        let mut rng = rng_from(seed);
        let h = random_hermitian_traceless(&mut rng, dim);
        let x = random_hermitian_traceless(&mut rng, dim);
        let a = alpha_conjugation_integral(&h, &x).unwrap();
        prop_assert!(a.hermiticity_residual() < 1e-10);
        prop_assert!((a.trace() - x.trace()).norm() < 1e-10);
    }

    #[test]
    fn alpha_conjugation_matches_quadrature(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let h = random_hermitian_traceless(&mut rng, 2);
        let x = random_hermitian_traceless(&mut rng, 2);
        let a = alpha_conjugation_integral(&h, &x).unwrap();
        let steps = 4000;
        let mut acc = ComplexMatrix::zeros(2);
        for i in 0..steps {
            let s = (i as f64 + 0.5) / steps as f64;
            let u = unitary_exp(&h.scale(re(-s))).unwrap();
            acc = acc.add(&u.mul(&x).mul(&u.adjoint()));
        }
        let quad = acc.scale(re(1.0 / steps as f64));
        let gap = a.sub(&quad).max_abs();
        prop_assert!(gap < 1e-6 * x.max_abs().max(1.0), "quadrature gap {gap:.3e}");
    }

    #[test]
    fn partial_trace_preserves_trace_and_positivity(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let rho = ginibre_state(&mut rng, 4).unwrap();
        for keep in [[0usize], [1usize]] {
            let marg = partial_trace(rho.matrix(), &[2, 2], &keep).unwrap();
            prop_assert!((marg.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(marg.hermiticity_residual() < 1e-12);
            let eig = herm_eig(&marg).unwrap();
            prop_assert!(eig.eigenvalues[0] > -1e-12);
        }
    }

    #[test]
    fn fidelity_is_symmetric_bounded_and_reflexive(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let a = ginibre_state(&mut rng, 3).unwrap();
        let b = ginibre_state(&mut rng, 3).unwrap();
        let fab = bures_fidelity(&a, &b).unwrap();
        let fba = bures_fidelity(&b, &a).unwrap();
        prop_assert!((fab - fba).abs() < 1e-9, "asymmetry {:.3e}", (fab - fba).abs());
        prop_assert!((0.0..=1.0).contains(&fab));
        let faa = bures_fidelity(&a, &a).unwrap();
        prop_assert!((faa - 1.0).abs() < 1e-9);
    }

    #[test]
    fn split_channel_derivatives_match_finite_differences(
        t1 in -1.0f64..1.0,
        t2 in -1.0f64..1.0,
        t3 in -1.0f64..1.0,
        k in 0usize..3,
    ) {
        let theta = [t1, t2, t3];
        let ch = pauli_split_channel(&theta).unwrap();
        let analytic = kraus_derivatives(&ch, &theta, k).unwrap();
        let h = 1e-5;
        let mut plus = theta;
        let mut minus = theta;
        plus[k] += h;
        minus[k] -= h;
        let op_p = pauli_split_channel(&plus).unwrap();
        let op_m = pauli_split_channel(&minus).unwrap();
        for (l, da) in analytic.iter().enumerate() {
            let fd = op_p.kraus_ops()[l]
                .sub(&op_m.kraus_ops()[l])
                .scale(re(0.5 / h));
            let gap = da.sub(&fd).max_abs();
            prop_assert!(gap < 1e-7, "slot {l}: gap {gap:.3e}");
        }
    }

    #[test]
    fn noisy_unitary_derivatives_match_finite_differences(
        seed in any::<u64>(),
        t1 in -1.0f64..1.0,
        t2 in -1.0f64..1.0,
    ) {
        let mut rng = rng_from(seed);
        let gens = vec![
            random_hermitian_traceless(&mut rng, 2),
            random_hermitian_traceless(&mut rng, 2),
        ];
        let noise = dephasing_kraus(0.4).unwrap();
        let theta = [t1, t2];
        let ch = KrausChannel::noisy_unitary(
            noise.kraus_ops().to_vec(),
            gens.clone(),
            &theta,
        )
        .unwrap();
        for k in 0..2 {
            let analytic = kraus_derivatives(&ch, &theta, k).unwrap();
            let h = 1e-5;
            let mut plus = theta;
            let mut minus = theta;
            plus[k] += h;
            minus[k] -= h;
            let ch_p = KrausChannel::noisy_unitary(
                noise.kraus_ops().to_vec(), gens.clone(), &plus).unwrap();
            let ch_m = KrausChannel::noisy_unitary(
                noise.kraus_ops().to_vec(), gens.clone(), &minus).unwrap();
            for (l, da) in analytic.iter().enumerate() {
                let fd = ch_p.kraus_ops()[l]
                    .sub(&ch_m.kraus_ops()[l])
                    .scale(re(0.5 / h));
                prop_assert!(da.sub(&fd).max_abs() < 1e-8);
            }
        }
    }

    #[test]
    fn stinespring_isometry_reproduces_channel(lam in 0.05f64..2.0, seed in any::<u64>()) {
        let ch = dephasing_kraus(lam).unwrap();
        let v = stinespring_dilation(&ch).unwrap();
        let gram = v.adjoint().mul(&v).unwrap();
        let sq = gram.into_square().unwrap();
        prop_assert!(sq.sub(&ComplexMatrix::identity(2)).max_abs() < 1e-10);

        let mut rng = rng_from(seed);
        let rho = ginibre_state(&mut rng, 2).unwrap();
        let lifted = v
            .mul(&linalg::RectMatrix::from_square(rho.matrix()))
            .unwrap()
            .mul(&v.adjoint())
            .unwrap()
            .into_square()
            .unwrap();
        let reduced = partial_trace(&lifted, &[2, ch.kraus_count()], &[0]).unwrap();
        let direct = qbound_core::channels::apply_channel(&ch, &rho).unwrap();
        prop_assert!(reduced.sub(direct.matrix()).max_abs() < 1e-10);
    }

    #[test]
    fn rdm_qfim_is_symmetric_and_psd(seed in any::<u64>(), n in 1u64..64) {
        let mut rng = rng_from(seed);
        let theta = [0.3, 0.2, 0.1];
        let b = magfield_single_particle_generators(&theta).unwrap();
        let rho1 = ginibre_state(&mut rng, 2).unwrap();
        // Symmetrized product marginal keeps the exchange structure valid.
        let prod = kron(rho1.matrix(), rho1.matrix()).unwrap();
        let rho2 = DensityMatrix::new(prod, vec![2, 2]).unwrap();
        let j = qfim_rdm(&rho1, &rho2, &b, n).unwrap();
        prop_assert!(j.symmetry_residual() == 0.0);
        let min = j.min_eigenvalue().unwrap();
        prop_assert!(min > -1e-8 * j.max_abs().max(1.0), "min eigenvalue {min:.3e}");
    }

    #[test]
    fn sym_inverse_roundtrips(seed in any::<u64>(), dim in 1usize..=5) {
        let mut rng = rng_from(seed);
        let g = random_hermitian_traceless(&mut rng, dim);
        // SPD construction: H² + I.
        let spd = g.mul(&g).add(&ComplexMatrix::identity(dim));
        let s = SymMatrix::from_fn_symmetrized(dim, |i, j| spd.get(i, j).re);
        let inv = s.inverse().unwrap();
        let prod = s.mul(&inv);
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod.get(i, j) - want).abs());
            }
        }
        prop_assert!(worst < 1e-9, "roundtrip residual {worst:.3e}");
    }

    #[test]
    fn density_constructor_rejects_non_psd(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let h = random_hermitian_traceless(&mut rng, 3);
        // Traceless Hermitian with visible negative spectrum, renormalized
        // to unit trace by adding too little identity.
        let bad = h.scale(re(10.0)).add(&ComplexMatrix::identity(3).scale(re(1.0 / 3.0)));
        if herm_eig(&bad).unwrap().eigenvalues[0] < -1e-6 {
            prop_assert!(DensityMatrix::new(bad, vec![3]).is_err());
        }
    }

    #[test]
    fn kraus_image_of_identity_tracks_unitality(lam in 0.05f64..3.0) {
        let ch = dephasing_kraus(lam).unwrap();
        let img = qbound_core::channels::kraus_image(&ch, &ComplexMatrix::identity(2));
        prop_assert!(img.sub(&ComplexMatrix::identity(2)).max_abs() < 1e-12);
        let (unital, residual) = qbound_core::channels::is_unital(&ch);
        prop_assert!(unital, "dephasing must be unital, residual {residual:.3e}");
    }
}

#[test]
fn gaussian_scenario_probes_are_normalized() {
    let mut rng = rng_from(123);
    for _ in 0..20 {
        let rho = ginibre_state(&mut rng, 4).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!((rho.purity() - 1.0).abs() > 1e-6, "Ginibre draw came out pure");
    }
}

#[test]
fn complex64_layout_assumption() {
    // Row-major complex storage is relied on when serializing matrices.
    assert_eq!(
        std::mem::size_of::<Complex64>(),
        2 * std::mem::size_of::<f64>()
    );
}
