//! Discretized adiabatic preparation of a two-eigenstate superposition.
//!
//! Step `q = 1..Q` evolves for `τ/Q` under
//!
//! ```text
//! H̃(s) = H₀ + s (H − H₀),   s = q/(Q+1)
//! ```
//!
//! with one first-order Trotter step each.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitIR, StepProgram, TrotterStep};
use crate::error::{GapError, Result};
use crate::oracle::{diagonalize, Propagator, SpectrumSlice};
use crate::pauli::PauliSum;
use crate::rng::stream_rng;
use crate::state::StateVector;

#[derive(Debug, Clone, PartialEq)]
pub struct ApSchedule {
    pub q_ap: usize,
    pub tau: f64,
    pub h0: PauliSum,
    pub h_target: PauliSum,
}

impl ApSchedule {
    pub fn new(q_ap: usize, tau: f64, h0: PauliSum, h_target: PauliSum) -> Result<Self> {
        if q_ap == 0 {
            return Err(GapError::InvalidArgument("adiabatic schedule needs at least one step".into()));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(GapError::InvalidArgument(format!("adiabatic duration must be positive, got {tau}")));
        }
        if h0.n_qubits() != h_target.n_qubits() {
            return Err(GapError::DimensionMismatch { expected: h_target.n_qubits(), got: h0.n_qubits() });
        }
        Ok(Self { q_ap, tau, h0, h_target })
    }

    /// Per-step duration `τ/Q`.
    pub fn delta_tau(&self) -> f64 {
        self.tau / self.q_ap as f64
    }

    pub fn s(&self, q: usize) -> f64 {
        q as f64 / (self.q_ap + 1) as f64
    }

    /// `H̃(q/(Q+1))`.
    pub fn hamiltonian_at(&self, q: usize) -> PauliSum {
        let s = self.s(q);
        self.h0.combine(1.0 - s, &self.h_target, s).expect("registers checked at construction")
    }

    /// Ordered Trotter steps with their durations.
    pub fn steps(&self) -> Vec<(Arc<TrotterStep>, f64)> {
        let dt = self.delta_tau();
        (1..=self.q_ap).map(|q| (Arc::new(TrotterStep::new(&self.hamiltonian_at(q))), dt)).collect()
    }

    pub fn append_to(&self, program: &mut StepProgram) {
        for (s, dt) in self.steps() {
            program.push(s, dt);
        }
    }
}

/// `|+⟩^⊗L`.
pub fn initial_state_ising(l: usize) -> StateVector {
    StateVector::uniform(l)
}

/// Basis indices at sorted positions `i` and `j` of the diagonal of `h0`;
/// ties go to the lower basis index.
pub fn diagonal_pair(h0: &PauliSum, i: usize, j: usize) -> Result<(usize, usize)> {
    if !h0.is_diagonal() {
        return Err(GapError::NonDiagonal(format!("{} terms, some off-diagonal", h0.len())));
    }
    if i == j {
        return Err(GapError::InvalidArgument("eigen-indices must differ".into()));
    }
    let diag = h0.diagonal_values();
    let mut order: Vec<usize> = (0..diag.len()).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]).then(a.cmp(&b)));
    let pick = |k: usize| {
        order.get(k).copied().ok_or_else(|| GapError::InvalidArgument(format!("eigen-index {k} ≥ dimension {}", diag.len())))
    };
    Ok((pick(i)?, pick(j)?))
}

/// `(|b_i⟩ + |b_j⟩)/√2` from the sorted diagonal of `h0`.
pub fn initial_state_diagonal(h0: &PauliSum, i: usize, j: usize) -> Result<StateVector> {
    let (bi, bj) = diagonal_pair(h0, i, j)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << h0.n_qubits()];
    amps[bi] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[bj] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    StateVector::from_amplitudes(amps)
}

/// Runs the schedule with exact Pauli exponentials and returns the normalized state.
pub fn run_ap(psi0: &StateVector, sched: &ApSchedule) -> Result<StateVector> {
    if psi0.n_qubits() != sched.h_target.n_qubits() {
        return Err(GapError::DimensionMismatch { expected: sched.h_target.n_qubits(), got: psi0.n_qubits() });
    }
    let mut psi = psi0.clone();
    for (step, dt) in sched.steps() {
        step.apply(&mut psi, dt)?;
    }
    psi.normalize()?;
    Ok(psi)
}

/// Native-gate circuit of the whole schedule.
pub fn compile_ap(sched: &ApSchedule) -> Result<CircuitIR> {
    let mut c = CircuitIR::new(sched.h_target.n_qubits());
    for (step, dt) in sched.steps() {
        c.append(&step.compile(dt)?)?;
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrepReport {
    pub fidelity_ground: f64,
    pub fidelity_excited: f64,
    pub leakage: f64,
}

pub fn prep_report(psi: &StateVector, h: &PauliSum, i: usize, j: usize) -> Result<PrepReport> {
    let spec = diagonalize(h, 1usize << h.n_qubits())?;
    prep_report_with(psi, &spec, i, j)
}

/// Fidelities against a precomputed spectrum. A level inside a degenerate
/// cluster counts the whole cluster, unless `i` and `j` share a cluster, in
/// which case the individual (resolved) eigenvectors are used.
pub fn prep_report_with(psi: &StateVector, spec: &SpectrumSlice, i: usize, j: usize) -> Result<PrepReport> {
    let k = spec.energies.len();
    if i >= k || j >= k || i == j {
        return Err(GapError::InvalidArgument(format!("eigen-indices ({i}, {j}) invalid for {k} levels")));
    }
    let ci: Vec<usize> = spec.cluster(i).into_iter().filter(|&x| x < k).collect();
    let cj: Vec<usize> = spec.cluster(j).into_iter().filter(|&x| x < k).collect();
    let (ci, cj) = if ci.contains(&j) { (vec![i], vec![j]) } else { (ci, cj) };
    let weight = |c: &[usize]| -> Result<f64> { c.iter().map(|&x| spec.eigenvectors[x].fidelity(psi)).sum() };
    let norm = psi.norm_sqr();
    let fg = weight(&ci)? / norm;
    let fe = weight(&cj)? / norm;
    Ok(PrepReport { fidelity_ground: fg, fidelity_excited: fe, leakage: 1.0 - fg - fe })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrepErrorRow {
    pub epsilon: f64,
    /// `max_t |⟨ν|O(t)|ν⟩ − ⟨Ψ|O(t)|Ψ⟩|`
    pub deviation: f64,
    /// `1 − |⟨Ψ|ν⟩|²`
    pub infidelity: f64,
}

/// Perturbs the exact superposition `Ψ = (Ω_i + Ω_j)/√2` into
/// `ν(ε) = normalize(Ψ + εχ)` with a seeded unit `χ ⟂ {Ω_i, Ω_j}` and measures
/// how far the observable curve moves.
pub fn prep_error_scan(
    epsilons: &[f64],
    h: &PauliSum,
    o: &PauliSum,
    (i, j): (usize, usize),
    times: &[f64],
    seed: u64,
) -> Result<Vec<PrepErrorRow>> {
    let spec = diagonalize(h, i.max(j) + 1)?;
    let (wi, wj) = (&spec.eigenvectors[i], &spec.eigenvectors[j]);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = StateVector::from_amplitudes(
        wi.amplitudes().iter().zip(wj.amplitudes()).map(|(a, b)| (a + b) * s).collect(),
    )?;

    let mut rng = stream_rng(seed, &[0x70e5]);
    let mut chi: Vec<Complex64> =
        (0..psi.dim()).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    for _ in 0..2 {
        for w in [wi, wj] {
            let ov: Complex64 = w.amplitudes().iter().zip(&chi).map(|(a, b)| a.conj() * b).sum();
            chi.iter_mut().zip(w.amplitudes()).for_each(|(c, a)| *c -= ov * a);
        }
    }
    let mut chi = StateVector::from_amplitudes(chi)?;
    chi.normalize()?;

    let prop = Propagator::new(h)?;
    let base = prop.series_values(o, &psi, times)?;
    epsilons
        .iter()
        .map(|&eps| {
            let mut nu = StateVector::from_amplitudes(
                psi.amplitudes().iter().zip(chi.amplitudes()).map(|(a, b)| a + b * eps).collect(),
            )?;
            nu.normalize()?;
            let vals = prop.series_values(o, &nu, times)?;
            let deviation = vals.iter().zip(&base).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            let infidelity = (1.0 - psi.fidelity(&nu)?).max(0.0);
            Ok(PrepErrorRow { epsilon: eps, deviation, infidelity })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_ising, build_ising_h0, IsingSpec};
    use approx::assert_abs_diff_eq;

    #[test]
    fn schedule_endpoints() {
        let spec = IsingSpec::chain(4, 1.0, 2.0);
        let sched = ApSchedule::new(15, 6.0, build_ising_h0(&spec).unwrap(), build_ising(&spec).unwrap()).unwrap();
        assert_abs_diff_eq!(sched.s(1), 1.0 / 16.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sched.s(15), 15.0 / 16.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sched.delta_tau(), 0.4, epsilon = 1e-15);
        let mid = sched.hamiltonian_at(8);
        assert_abs_diff_eq!(mid.coefficient_of(&"ZIII".parse().unwrap()), -0.5, epsilon = 1e-12);
        assert!(ApSchedule::new(0, 1.0, sched.h0.clone(), sched.h_target.clone()).is_err());
        assert!(ApSchedule::new(3, -1.0, sched.h0.clone(), sched.h_target.clone()).is_err());
    }

    #[test]
    fn diagonal_initial_states() {
        let h0 = PauliSum::from_label(-1.0, "Z").unwrap();
        let s = initial_state_diagonal(&h0, 0, 1).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.amplitudes()[0].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, r, epsilon = 1e-15);
        // all four levels of ZZ are pairwise degenerate: ties by index
        let zz = PauliSum::from_label(1.0, "ZZ").unwrap();
        assert_eq!(diagonal_pair(&zz, 0, 1).unwrap(), (1, 2));
        let x = PauliSum::from_label(1.0, "X").unwrap();
        assert!(matches!(initial_state_diagonal(&x, 0, 1), Err(GapError::NonDiagonal(_))));
    }

    #[test]
    fn constant_schedule_keeps_eigenstate() {
        let h0 = PauliSum::parse_text("-1.0 ZI\n-0.5 IZ\n0.2 ZZ\n").unwrap();
        let psi0 = StateVector::basis(2, 0);
        let sched = ApSchedule::new(5, 2.0, h0.clone(), h0).unwrap();
        let out = run_ap(&psi0, &sched).unwrap();
        assert_abs_diff_eq!(out.fidelity(&psi0).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn report_on_eigenstates() {
        let h = build_ising(&IsingSpec::chain(4, 1.0, 3.0)).unwrap();
        let spec = diagonalize(&h, 16).unwrap();
        let r = prep_report_with(&spec.eigenvectors[0], &spec, 0, 1).unwrap();
        assert_abs_diff_eq!(r.fidelity_ground, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r.leakage, 0.0, epsilon = 1e-10);
    }
}
