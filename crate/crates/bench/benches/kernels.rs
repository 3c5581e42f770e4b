use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gapscope_bench::{chain, h2_integrals, x0};
use gapscope_core::{
    build_ising_h0, chebyshev_times, compile_trotter_step, execute, fit_sinusoid, initial_state_ising, jordan_wigner,
    run_ap, run_program, ApSchedule, Backend, IsingSpec, NoiseModel, Propagator, Shots, StepProgram, TimeSeries,
    TrotterStep,
};

fn trotter_step(c: &mut Criterion) {
    let mut g = c.benchmark_group("trotter_step");
    for l in [4, 10, 16] {
        let step = TrotterStep::new(&chain(l, 3.0));
        let psi = initial_state_ising(l);
        g.bench_with_input(BenchmarkId::new("fast", l), &l, |b, _| {
            b.iter(|| {
                let mut s = psi.clone();
                step.apply(&mut s, 0.1).unwrap();
                s
            })
        });
        let circ = compile_trotter_step(&chain(l, 3.0), 0.1).unwrap();
        g.bench_with_input(BenchmarkId::new("native", l), &l, |b, _| b.iter(|| execute(&psi, &circ).unwrap()));
    }
    g.finish();
}

fn adiabatic(c: &mut Criterion) {
    let spec = IsingSpec::chain(10, 1.0, 3.0);
    let sched = ApSchedule::new(15, 6.0, build_ising_h0(&spec).unwrap(), chain(10, 3.0)).unwrap();
    let psi = initial_state_ising(10);
    c.bench_function("run_ap_l10_q15", |b| b.iter(|| run_ap(black_box(&psi), &sched).unwrap()));
}

fn density(c: &mut Criterion) {
    let h = chain(4, 7.257);
    let step = Arc::new(TrotterStep::new(&h));
    let mut p = StepProgram::new(4);
    for _ in 0..40 {
        p.push(step.clone(), 0.1);
        p.checkpoint();
    }
    let noise = NoiseModel::trapped_ion(0.9998, 0.99);
    let psi = initial_state_ising(4);
    let o = x0(4);
    c.bench_function("density_l4_40_steps", |b| {
        b.iter(|| run_program(&p, &psi, &o, Some(&noise), Backend::Density).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let h = chain(8, 3.0);
    c.bench_function("propagator_l8", |b| b.iter(|| Propagator::new(black_box(&h)).unwrap()));
    let ints = h2_integrals();
    c.bench_function("jordan_wigner_h2", |b| b.iter(|| jordan_wigner(black_box(&ints)).unwrap()));
}

fn fit(c: &mut Criterion) {
    let t = chebyshev_times(25, 5.0).unwrap();
    let y: Vec<f64> = t.iter().map(|&t| 0.1 + 0.3 * (2.7 * t + 0.4).cos()).collect();
    let s = TimeSeries::new(t, y, vec![0.01; 25], Shots::Finite(8192)).unwrap();
    c.bench_function("fit_sinusoid_25", |b| b.iter(|| fit_sinusoid(black_box(&s), (0.0, 15.0)).unwrap()));
}

criterion_group!(benches, trotter_step, adiabatic, density, oracle, fit);
criterion_main!(benches);
