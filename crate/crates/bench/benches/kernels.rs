use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tcm3_core::{
    atomic_density_sym, coherent_amplitudes, concurrence, embed_symmetric, entanglement_sample, evolution_block,
    evolve, initial_amplitudes, q_grid, trace_out_one, AtomicInitState, SymmetricWavefunction, Window, C64,
};

fn evolved_w(tau: f64) -> SymmetricWavefunction {
    let field = coherent_amplitudes(C64::new(10.0, 0.0), 1e-12).unwrap();
    evolve(&initial_amplitudes(&AtomicInitState::w(), &field).unwrap(), tau)
}

fn dynamics(c: &mut Criterion) {
    c.bench_function("evolution_block n=100", |b| b.iter(|| evolution_block(black_box(100), black_box(12.5))));
    let field = coherent_amplitudes(C64::new(10.0, 0.0), 1e-12).unwrap();
    let psi0 = initial_amplitudes(&AtomicInitState::excited(), &field).unwrap();
    c.bench_function("evolve nbar=100", |b| b.iter(|| evolve(black_box(&psi0), black_box(31.4))));
}

fn entanglement(c: &mut Criterion) {
    let psi = evolved_w(40.0);
    let rho_ab = trace_out_one(&embed_symmetric(&atomic_density_sym(&psi)));
    c.bench_function("concurrence", |b| b.iter(|| concurrence(black_box(&rho_ab)).unwrap()));
    c.bench_function("entanglement_sample nbar=100", |b| b.iter(|| entanglement_sample(black_box(&psi)).unwrap()));
}

fn husimi(c: &mut Criterion) {
    let psi = evolved_w(31.4);
    let mut g = c.benchmark_group("q_grid");
    g.sample_size(10);
    g.bench_function("61x61 nbar=100", |b| b.iter(|| q_grid(black_box(&psi), Window::square(15.0), (61, 61))));
    g.finish();
}

criterion_group!(benches, dynamics, entanglement, husimi);
criterion_main!(benches);
