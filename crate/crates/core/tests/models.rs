use std::path::PathBuf;

use gapscope_core::{
    build_ising, build_ising_h0, compile_trotter_step, jordan_wigner, FermionIntegrals, GateKind, IsingSpec, Pauli,
    PauliString, PauliSum, PauliTerm,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn fixtures() -> Vec<PathBuf> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/molecules");
    let mut out = Vec::new();
    for mol in ["h2", "he2"] {
        for e in std::fs::read_dir(root.join(mol)).unwrap() {
            let p = e.unwrap().path();
            if p.file_name().unwrap() != "index.json" {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

fn hermiticity_error(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().fold(0.0, |a, z| a.max(z.norm()))
}

fn number_parity(n: usize) -> DMatrix<Complex64> {
    PauliSum::new(n, [PauliTerm::new(1.0, PauliString::from_axes(&vec![Pauli::Z; n])).unwrap()])
        .unwrap()
        .to_dense()
        .unwrap()
}

fn commutator_norm(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a * b - b * a).norm()
}

/// Real number-conserving integrals with the symmetries the mapper requires.
fn integrals(n: usize) -> impl Strategy<Value = FermionIntegrals> {
    let one = proptest::collection::vec(-1.0..1.0f64, n * n);
    let two = proptest::collection::vec(((0..n, 0..n, 0..n, 0..n), -0.5..0.5f64), 0..6);
    (one, two, -1.0..1.0f64).prop_map(move |(h1, h2, e0)| {
        let mut one_body = Vec::new();
        for p in 0..n {
            for q in p..n {
                let v = h1[p * n + q];
                one_body.push((p, q, v));
                if p != q {
                    one_body.push((q, p, v));
                }
            }
        }
        let mut two_body = Vec::new();
        for ((p, q, r, s), v) in h2 {
            two_body.push((p, q, r, s, v));
            two_body.push((s, r, q, p, v));
        }
        FermionIntegrals {
            n_orbitals: n,
            nuclear_repulsion: e0,
            one_body,
            two_body,
            molecule: None,
            bond_length_angstrom: None,
            n_electrons: None,
            fci_energy: None,
        }
    })
}

#[test]
fn fixture_hamiltonians_are_hermitian_and_conserve_parity() {
    let files = fixtures();
    assert!(files.len() >= 20);
    for f in files {
        let h = jordan_wigner(&FermionIntegrals::load(&f).unwrap()).unwrap().to_dense().unwrap();
        assert!(hermiticity_error(&h) < 1e-12, "{}", f.display());
        let n = (h.nrows() as f64).log2() as usize;
        assert!(commutator_norm(&h, &number_parity(n)) < 1e-10, "{}", f.display());
    }
}

#[test]
fn zero_field_model_equals_h0() {
    for spec in [IsingSpec::chain(5, 0.7, 0.0), IsingSpec::lattice(2, 3, 1.3, 0.0)] {
        assert_eq!(build_ising(&spec).unwrap(), build_ising_h0(&spec).unwrap());
    }
}

#[test]
fn chain_step_depth_does_not_grow_with_length() {
    let mut per_site = Vec::new();
    for l in [4, 6, 8, 10, 12, 16, 20] {
        let c = compile_trotter_step(&build_ising(&IsingSpec::chain(l, 1.0, 2.0)).unwrap(), 0.1).unwrap();
        assert_eq!(c.two_qubit_depth(), 2, "L={l}");
        per_site.push((c.count(GateKind::Ms) as f64 / l as f64, c.count(GateKind::Gpi2) as f64 / l as f64));
    }
    assert!(per_site.windows(2).all(|w| w[0] == w[1]), "{per_site:?}");
}

proptest! {
    #[test]
    fn ising_splits_into_h0_plus_field(l in 2usize..8, j1 in 0.1..3.0f64, h3 in 0.0..10.0f64, pbc: bool) {
        let spec = IsingSpec { pbc, ..IsingSpec::chain(l, j1, h3) };
        let field = PauliSum::new(l, (0..l).map(|i| PauliTerm::new(-0.5 * h3, PauliString::single(l, i, Pauli::Z)).unwrap())).unwrap();
        let rebuilt = build_ising_h0(&spec).unwrap().combine(1.0, &field, 1.0).unwrap();
        let diff = build_ising(&spec).unwrap().combine(1.0, &rebuilt, -1.0).unwrap();
        prop_assert!(diff.iter().all(|t| t.coefficient.abs() < 1e-12));
    }

    #[test]
    fn jordan_wigner_is_hermitian_and_number_parity_even(ints in integrals(3)) {
        let h = jordan_wigner(&ints).unwrap().to_dense().unwrap();
        prop_assert!(hermiticity_error(&h) < 1e-12);
        prop_assert!(commutator_norm(&h, &number_parity(3)) < 1e-10);
    }
}
