//! Spectral-gap estimation for qubit Hamiltonians.
//!
//! A superposition of two eigenstates is prepared by a Trotterized adiabatic
//! schedule, evolved under the target Hamiltonian, and the oscillation of an
//! observable is fitted; its frequency is the gap. Noiseless, shot-noise and
//! depolarizing-noise backends are provided together with an exact
//! diagonalization oracle for small registers.

pub mod adiabatic;
pub mod circuit;
pub mod error;
pub mod estimator;
pub mod models;
pub mod noise;
pub mod oracle;
pub mod pauli;
pub mod rng;
pub mod state;

pub use adiabatic::{
    compile_ap, diagonal_pair, initial_state_diagonal, initial_state_ising, prep_error_scan, prep_report,
    prep_report_with, run_ap, ApSchedule, PrepErrorRow, PrepReport,
};
pub use circuit::{
    apply_gate, apply_pauli_exponential, compile_trotter_step, execute, gate_matrix, CircuitIR, GateKind, GateMatrix,
    NativeGate, StepProgram, TrotterStep,
};
pub use error::{GapError, Result};
pub use estimator::{
    acquire_series, chebyshev_times, dft_estimate, fit_sinusoid, sample_series, sample_shots, uniform_times,
    FitResult, Shots, TimeSeries,
};
pub use models::{
    build_ising, build_ising_h0, diagonal_part, ising_parity, jordan_wigner, FermionIntegrals, IsingSpec, Topology,
};
pub use noise::{
    apply_readout_flip, depolarizing_p, execute_density, run_program, Backend, DensityMatrix, NoiseModel,
    ProgramOutput, TwoQubitChannel,
};
pub use oracle::{amplitude_scan, diagonalize, diagonalize_resolved, exact_gap, exact_series, Propagator, SpectrumSlice};
pub use pauli::{expectation, matrix_element, Pauli, PauliString, PauliSum, PauliTerm};
pub use state::StateVector;
