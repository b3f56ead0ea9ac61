//! Timing of the hot numerical kernels: the marginal-assembled information
//! matrix against the brute-force route it replaces, the conjugation
//! integral behind every derivative evaluation, the mixed-state fidelity,
//! and the channel-level bound on a three-particle product register.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qbound_core::bounds::{
    collective_pauli_generators, cq_bound, magfield_single_particle_generators, qfim_rdm,
    qfim_unitary_exact,
};
use qbound_core::channels::{dephasing_kraus, product_channel, GeneratorSet, KrausChannel};
use qbound_core::linalg::{self, pauli, re};
use qbound_core::states::{
    apply_uniform_local_channel, ghz_state, DensityMatrix, PauliAxis,
};

const THETA: [f64; 3] = [0.3, 0.2, 0.1];

fn dephased_ghz(n: usize) -> DensityMatrix {
    let clean = ghz_state(PauliAxis::Z, n).unwrap().projector().unwrap();
    let ch = dephasing_kraus(0.3).unwrap();
    apply_uniform_local_channel(&clean, &ch).unwrap()
}

fn bench_qfim_routes(c: &mut Criterion) {
    let mut group = c.benchmark_group("qfim");
    for n in [3usize, 5] {
        let probe = dephased_ghz(n);
        let gens = GeneratorSet::unitary(collective_pauli_generators(n).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::new("brute_force", n), &n, |b, _| {
            b.iter(|| qfim_unitary_exact(&gens, &probe, &THETA).unwrap())
        });

        let rho1 = probe.marginal(&[0]).unwrap();
        let rho2 = probe.marginal(&[0, 1]).unwrap();
        let b_ops = magfield_single_particle_generators(&THETA).unwrap();
        group.bench_with_input(BenchmarkId::new("marginal_assembly", n), &n, |b, _| {
            b.iter(|| qfim_rdm(&rho1, &rho2, &b_ops, n as u64).unwrap())
        });
    }
    group.finish();
}

fn bench_conjugation_integral(c: &mut Criterion) {
    let mut h = pauli::sx().scale(re(THETA[0]));
    h = h.add(&pauli::sy().scale(re(THETA[1])));
    h = h.add(&pauli::sz().scale(re(THETA[2])));
    c.bench_function("alpha_conjugation_integral_2x2", |b| {
        b.iter(|| linalg::alpha_conjugation_integral(&h, &pauli::sx()).unwrap())
    });
}

fn bench_bures_fidelity(c: &mut Criterion) {
    let rho = dephased_ghz(3);
    let gens = GeneratorSet::unitary(collective_pauli_generators(3).unwrap()).unwrap();
    let shifted = {
        let h = gens.assemble(0, &[0.31, 0.2, 0.1]).unwrap();
        let u = linalg::unitary_exp(&h).unwrap();
        rho.conjugated_by(&u).unwrap()
    };
    c.bench_function("bures_fidelity_8x8", |b| {
        b.iter(|| linalg::bures_fidelity(&rho, &shifted).unwrap())
    });
}

fn bench_cq_product(c: &mut Criterion) {
    let site = KrausChannel::noisy_unitary(
        dephasing_kraus(0.3).unwrap().kraus_ops().to_vec(),
        vec![pauli::sx(), pauli::sy(), pauli::sz()],
        &THETA,
    )
    .unwrap();
    let ch = product_channel(vec![site.clone(), site.clone(), site]).unwrap();
    let probe = ghz_state(PauliAxis::Z, 3).unwrap().projector().unwrap();
    c.bench_function("cq_bound_product_n3", |b| {
        b.iter(|| cq_bound(&ch, &probe, &THETA).unwrap())
    });
}

criterion_group!(
    benches,
    bench_qfim_routes,
    bench_conjugation_integral,
    bench_bures_fidelity,
    bench_cq_product
);
criterion_main!(benches);
