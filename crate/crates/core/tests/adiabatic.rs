use gapscope_core::{
    build_ising, build_ising_h0, diagonalize, expectation, ising_parity, prep_report, run_ap, ApSchedule, IsingSpec,
    StateVector,
};
use num_complex::Complex64;
use proptest::prelude::*;

/// `(|+…+⟩ ± |−…−⟩)/√2`, the parity-definite ground states of the zero-field chain.
fn phi(l: usize, sign: f64) -> StateVector {
    let amps = (0..1usize << l)
        .map(|b| {
            // ⟨b|−…−⟩ = (−1)^{popcount b} / 2^{L/2}
            let minus = if b.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(1.0 + sign * minus, 0.0)
        })
        .collect();
    let mut s = StateVector::from_amplitudes(amps).unwrap();
    s.normalize().unwrap();
    s
}

fn schedule(l: usize, h3: f64, q: usize, tau: f64) -> ApSchedule {
    let spec = IsingSpec::chain(l, 1.0, h3);
    ApSchedule::new(q, tau, build_ising_h0(&spec).unwrap(), build_ising(&spec).unwrap()).unwrap()
}

#[test]
fn parity_is_conserved_along_the_schedule() {
    let l = 4;
    let r = ising_parity(l);
    for psi0 in [phi(l, 1.0), phi(l, -1.0), gapscope_core::initial_state_ising(l)] {
        let before = expectation(&r, &psi0).unwrap();
        for q in [15, 30] {
            let after = expectation(&r, &run_ap(&psi0, &schedule(l, 3.0, q, 0.3 * q as f64)).unwrap()).unwrap();
            assert!((after - before).abs() < 1e-2, "Q={q}: {before} → {after}");
        }
    }
}

#[test]
fn phi_pair_flows_to_ground_and_first_excited() {
    let l = 4;
    let h = build_ising(&IsingSpec::chain(l, 1.0, 3.0)).unwrap();
    let spec = diagonalize(&h, 2).unwrap();
    let mut last = (0.0, 0.0);
    for tau in [1.0, 3.0, 9.0] {
        let q = (tau * 10.0) as usize;
        let s = schedule(l, 3.0, q, tau);
        let f0 = run_ap(&phi(l, 1.0), &s).unwrap().fidelity(&spec.eigenvectors[0]).unwrap();
        let f1 = run_ap(&phi(l, -1.0), &s).unwrap().fidelity(&spec.eigenvectors[1]).unwrap();
        assert!(f0 > last.0 && f1 > last.1, "τ={tau}: {f0}, {f1} after {last:?}");
        last = (f0, f1);
    }
    assert!(last.0 > 0.99 && last.1 > 0.99, "{last:?}");
}

proptest! {
    #[test]
    fn prep_report_sums_to_one(seed: u64, h3 in 0.5..6.0f64) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..8).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        let mut psi = StateVector::from_amplitudes(amps).unwrap();
        psi.normalize().unwrap();
        let h = build_ising(&IsingSpec::chain(3, 1.0, h3)).unwrap();
        let r = prep_report(&psi, &h, 0, 1).unwrap();
        prop_assert!((r.fidelity_ground + r.fidelity_excited + r.leakage - 1.0).abs() < 1e-12);
        prop_assert!(r.leakage > -1e-12);
    }
}
