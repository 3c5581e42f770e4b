use gapscope_core::{expectation, matrix_element, Pauli, PauliString, PauliSum, PauliTerm, StateVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::I), Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

fn string(n: usize) -> impl Strategy<Value = PauliString> {
    proptest::collection::vec(pauli(), n).prop_map(|a| PauliString::from_axes(&a))
}

fn sum(n: usize) -> impl Strategy<Value = PauliSum> {
    // Small coefficient alphabet so duplicate strings and cancellations occur.
    proptest::collection::vec((string(n), prop_oneof![Just(-1.0), Just(0.5), Just(1.0), -2.0..2.0f64]), 0..12)
        .prop_map(move |ts| PauliSum::new(n, ts.into_iter().map(|(s, c)| PauliTerm::new(c, s).unwrap())).unwrap())
}

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << n).prop_filter_map("zero vector", |v| {
        let mut s = StateVector::from_amplitudes(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).ok()?;
        s.normalize().ok()?;
        Some(s)
    })
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(s in sum(3)) {
        let once = s.canonicalize();
        prop_assert_eq!(once.canonicalize(), once);
    }

    #[test]
    fn dense_matrix_is_linear(p in sum(3), q in sum(3), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let lhs = p.combine(a, &q, b).unwrap().to_dense().unwrap();
        let rhs = p.to_dense().unwrap() * Complex64::new(a, 0.0) + q.to_dense().unwrap() * Complex64::new(b, 0.0);
        prop_assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn pauli_strings_square_to_identity(s in (1usize..=5).prop_flat_map(string)) {
        let n = s.n_qubits();
        let m = PauliSum::new(n, [PauliTerm::new(1.0, s).unwrap()]).unwrap().to_dense().unwrap();
        let sq = &m * &m;
        for r in 0..sq.nrows() {
            for c in 0..sq.ncols() {
                let want = if r == c { 1.0 } else { 0.0 };
                prop_assert!((sq[(r, c)] - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn expectation_is_diagonal_matrix_element(o in sum(3), psi in state(3)) {
        let e = expectation(&o, &psi).unwrap();
        let m = matrix_element(&o, &psi, &psi).unwrap();
        prop_assert!((e - m.re).abs() < 1e-10);
    }

    #[test]
    fn text_format_round_trips(s in sum(4).prop_filter("empty sums have no text form", |s| !s.is_empty())) {
        let back = PauliSum::parse_text(&s.to_text()).unwrap();
        prop_assert_eq!(back.canonicalize(), s.canonicalize());
    }
}
