use std::f64::consts::PI;

use gapscope_core::{
    build_ising, chebyshev_times, diagonalize_resolved, exact_gap, exact_series, fit_sinusoid, ising_parity,
    sample_series, IsingSpec, Pauli, PauliString, PauliSum, PauliTerm, Shots, StateVector, TimeSeries,
};
use proptest::prelude::*;

const T_MAX: f64 = 10.0;
const NODES: usize = 25;

fn bounds() -> (f64, f64) {
    (0.0, PI * NODES as f64 / T_MAX)
}

fn synthetic(c: f64, a: f64, w: f64, th: f64) -> TimeSeries {
    let t = chebyshev_times(NODES, T_MAX).unwrap();
    let y = t.iter().map(|&t| c + a * (w * t + th).cos()).collect();
    TimeSeries::new(t, y, vec![0.0; NODES], Shots::Exact).unwrap()
}

fn wrap(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}

/// `(Ω₀ + Ω₁)/√2` and the gap, for the parity-resolved L=4 chain.
fn superposition(h3: f64) -> (PauliSum, StateVector, f64) {
    let h = build_ising(&IsingSpec::chain(4, 1.0, h3)).unwrap();
    let s = diagonalize_resolved(&h, 2, Some(&ising_parity(4))).unwrap();
    let amps = s.eigenvectors[0]
        .amplitudes()
        .iter()
        .zip(s.eigenvectors[1].amplitudes())
        .map(|(a, b)| (a + b) * std::f64::consts::FRAC_1_SQRT_2)
        .collect();
    let gap = exact_gap(&h, 0, 1).unwrap();
    (h, StateVector::from_amplitudes(amps).unwrap(), gap)
}

fn x0() -> PauliSum {
    PauliSum::new(4, [PauliTerm::new(1.0, PauliString::single(4, 0, Pauli::X)).unwrap()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn noiseless_fit_recovers_generators(c in -0.5..0.5f64, a in 0.1..1.0f64, w in 1.0..7.0f64, th in -PI..PI) {
        let f = fit_sinusoid(&synthetic(c, a, w, th), bounds()).unwrap();
        prop_assert!((f.frequency - w).abs() < 1e-6, "ω {} vs {w}", f.frequency);
        prop_assert!((f.amplitude - a).abs() < 1e-6);
        prop_assert!((f.offset - c).abs() < 1e-6);
        prop_assert!(wrap(f.phase - th).abs() < 1e-6);
    }

    #[test]
    fn negative_amplitude_is_canonicalized(c in -0.5..0.5f64, a in 0.1..1.0f64, w in 1.0..7.0f64, th in -PI..PI) {
        let data = synthetic(c, -a, w, th);
        let f = fit_sinusoid(&data, bounds()).unwrap();
        prop_assert!(f.amplitude > 0.0);
        prop_assert!(wrap(f.phase - (th + PI)).abs() < 1e-6);
        for (&t, &y) in data.times.iter().zip(&data.values) {
            prop_assert!((f.eval(t) - y).abs() < 1e-10);
        }
    }
}

#[test]
fn exact_superposition_is_single_frequency() {
    for h3 in [1.5, 3.0, 6.0] {
        let (h, psi, gap) = superposition(h3);
        let t_max = 3.0 * PI / gap;
        let series = exact_series(&h, &x0(), &psi, &chebyshev_times(NODES, t_max).unwrap()).unwrap();
        let f = fit_sinusoid(&series, (0.0, PI * NODES as f64 / t_max)).unwrap();
        assert!(f.residual_rms < 1e-8, "h3={h3}: residual {}", f.residual_rms);
        assert!((f.frequency - gap).abs() < 1e-8, "h3={h3}: {} vs {gap}", f.frequency);
    }
}

#[test]
fn estimates_agree_across_shot_counts() {
    let (h, psi, gap) = superposition(3.0);
    let t_max = 3.0 * PI / gap;
    let times = chebyshev_times(NODES, t_max).unwrap();
    let exact = exact_series(&h, &x0(), &psi, &times).unwrap().values;
    let fits: Vec<(f64, f64)> = [100u64, 500, 1000, 8192]
        .iter()
        .map(|&s| {
            let ts = sample_series(&times, &exact, &x0(), Shots::Finite(s), 42, &[s]).unwrap();
            let f = fit_sinusoid(&ts, (0.0, PI * NODES as f64 / t_max)).unwrap();
            (f.frequency, f.gap_std)
        })
        .collect();
    for (i, a) in fits.iter().enumerate() {
        for b in &fits[i + 1..] {
            assert!((a.0 - b.0).abs() <= 3.0 * a.1.hypot(b.1), "{fits:?}");
        }
    }
}
