//! Shared inputs for the benchmarks.

use gapscope_core::{build_ising, FermionIntegrals, IsingSpec, Pauli, PauliString, PauliSum, PauliTerm};

pub fn chain(l: usize, h3: f64) -> PauliSum {
    build_ising(&IsingSpec::chain(l, 1.0, h3)).expect("valid chain")
}

/// `X` on qubit 0.
pub fn x0(n: usize) -> PauliSum {
    PauliSum::new(n, [PauliTerm::new(1.0, PauliString::single(n, 0, Pauli::X)).expect("unit term")]).expect("one term")
}

/// The H2 geometry closest to equilibrium shipped with the repository.
pub fn h2_integrals() -> FermionIntegrals {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/molecules/h2/h2_0.740.json");
    FermionIntegrals::load(path).expect("fixture present")
}
