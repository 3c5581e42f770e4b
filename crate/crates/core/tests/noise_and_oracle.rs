use std::sync::Arc;

use gapscope_core::{
    build_ising, diagonalize, diagonalize_resolved, execute_density, ising_parity, run_program, Backend, CircuitIR,
    DensityMatrix, IsingSpec, NativeGate, NoiseModel, Pauli, PauliString, PauliSum, PauliTerm, StateVector,
    StepProgram, TrotterStep,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn random_state(n: usize, seed: u64) -> StateVector {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..1usize << n).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let mut s = StateVector::from_amplitudes(amps).unwrap();
    s.normalize().unwrap();
    s
}

fn gate(n: usize) -> impl Strategy<Value = NativeGate> {
    let angle = -4.0..4.0f64;
    prop_oneof![
        (0..n, angle.clone()).prop_map(|(q, phi)| NativeGate::Gpi2 { q, phi }),
        (0..n, angle.clone()).prop_map(|(q, theta)| NativeGate::VirtualZ { q, theta }),
        (0..n, 1..n, angle).prop_map(move |(q0, d, theta)| NativeGate::Ms { q0, q1: (q0 + d) % n, phi0: 0.0, phi1: 0.0, theta }),
    ]
}

fn x0(n: usize) -> PauliSum {
    PauliSum::new(n, [PauliTerm::new(1.0, PauliString::single(n, 0, Pauli::X)).unwrap()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn noisy_channels_are_cptp(gates in proptest::collection::vec(gate(3), 1..40), seed: u64, joint: bool) {
        let mut noise = NoiseModel::trapped_ion(0.995, 0.95);
        if joint {
            noise.two_qubit_channel = gapscope_core::TwoQubitChannel::Joint2q;
        }
        let mut rho = DensityMatrix::from_pure(&random_state(3, seed)).unwrap();
        for g in gates {
            let mut c = CircuitIR::new(3);
            c.push(g).unwrap();
            rho = execute_density(&rho, &c, &noise).unwrap();
            prop_assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
        prop_assert!(rho.eigenvalues().iter().all(|&e| e >= -1e-9));
        prop_assert!(rho.hermiticity_error() < 1e-10);
    }

    #[test]
    fn depolarizing_composes(p in 0.0..1.0f64, p2 in 0.0..1.0f64, q in 0usize..3, seed: u64) {
        let psi = random_state(3, seed);
        let mut a = DensityMatrix::from_pure(&psi).unwrap();
        a.apply_depolarizing(q, p).unwrap();
        a.apply_depolarizing(q, p2).unwrap();
        let mut b = DensityMatrix::from_pure(&psi).unwrap();
        b.apply_depolarizing(q, 1.0 - (1.0 - p) * (1.0 - p2)).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                prop_assert!((a.get(r, c) - b.get(r, c)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenpairs_have_small_residuals(coeffs in proptest::collection::vec(-2.0..2.0f64, 8), seed: u64) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let axes = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let terms = coeffs.iter().map(|&c| {
            let s: Vec<Pauli> = (0..4).map(|_| axes[rng.random_range(0..4)]).collect();
            PauliTerm::new(c, PauliString::from_axes(&s)).unwrap()
        });
        let h = PauliSum::new(4, terms).unwrap();
        let m = h.to_dense().unwrap();
        let spec = diagonalize(&h, 16).unwrap();
        let scale = spec.energies.iter().fold(1e-300f64, |a, e| a.max(e.abs()));
        for (e, v) in spec.energies.iter().zip(&spec.eigenvectors) {
            let x = DMatrix::from_column_slice(16, 1, v.amplitudes());
            let r = (&m * &x - x * Complex64::new(*e, 0.0)).norm();
            prop_assert!(r < 1e-9 * scale);
        }
    }
}

#[test]
fn zero_field_pair_spans_the_ghz_subspace() {
    let l = 4;
    let h = build_ising(&IsingSpec::chain(l, 1.0, 0.0)).unwrap();
    let s = diagonalize_resolved(&h, 2, Some(&ising_parity(l))).unwrap();
    let proj = |vs: &[&[Complex64]]| {
        let mut p = DMatrix::<Complex64>::zeros(1 << l, 1 << l);
        for v in vs {
            let x = DMatrix::from_column_slice(1 << l, 1, v);
            p += &x * x.adjoint();
        }
        p
    };
    // |Φ±⟩ = (|+…+⟩ ± |−…−⟩)/√2
    let phi = |sign: f64| -> Vec<Complex64> {
        let norm = 2f64.powf(l as f64 / 2.0) * std::f64::consts::SQRT_2;
        (0..1usize << l)
            .map(|b| {
                let minus = if b.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new((1.0 + sign * minus) / norm, 0.0)
            })
            .collect()
    };
    let (pp, pm) = (phi(1.0), phi(-1.0));
    let target = proj(&[&pp, &pm]);
    let got = proj(&[s.eigenvectors[0].amplitudes(), s.eigenvectors[1].amplitudes()]);
    assert!((target - got).norm() < 1e-9);
}

/// Monte Carlo error of the trajectory mean against the density result,
/// averaged over seeds, falls like n^(-1/2).
#[test]
fn trajectories_converge_to_density() {
    let l = 3;
    let h = build_ising(&IsingSpec::chain(l, 1.0, 2.0)).unwrap();
    let step = Arc::new(TrotterStep::new(&h));
    let mut p = StepProgram::new(l);
    for _ in 0..4 {
        p.push(step.clone(), 0.3);
        p.checkpoint();
    }
    let noise = NoiseModel::trapped_ion(0.99, 0.9);
    let psi = gapscope_core::initial_state_ising(l);
    let o = x0(l);
    let exact = run_program(&p, &psi, &o, Some(&noise), Backend::Density).unwrap().values;
    let ns = [16usize, 64, 256, 1024];
    let rms: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let seeds = 12;
            let mut acc = 0.0;
            for seed in 0..seeds {
                let v = run_program(&p, &psi, &o, Some(&noise), Backend::Trajectories { n, seed }).unwrap().values;
                acc += v.iter().zip(&exact).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / v.len() as f64;
            }
            (acc / seeds as f64).sqrt()
        })
        .collect();
    let lx: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = rms.iter().map(|r| r.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / 4.0, ly.iter().sum::<f64>() / 4.0);
    let slope = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((-0.7..=-0.3).contains(&slope), "slope {slope}, rms {rms:?}");
}

#[test]
fn noise_shrinks_the_signal() {
    let l = 4;
    let h = build_ising(&IsingSpec::chain(l, 1.0, 7.257)).unwrap();
    let step = Arc::new(TrotterStep::new(&h));
    let mut p = StepProgram::new(l);
    for _ in 0..25 {
        p.push(step.clone(), 0.05);
        p.checkpoint();
    }
    let psi = gapscope_core::initial_state_ising(l);
    let o = x0(l);
    let clean = run_program(&p, &psi, &o, None, Backend::Statevector).unwrap().values;
    let noisy = run_program(&p, &psi, &o, Some(&NoiseModel::trapped_ion(0.9998, 0.99)), Backend::Density).unwrap().values;
    let spread = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread(&noisy) < spread(&clean));
}
