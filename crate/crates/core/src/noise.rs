//! Hardware-style noise: depolarizing channels parameterized by average gate
//! fidelity and relaxation times, plus readout bit flips.
//!
//! ```text
//! p = 1 + 3(2ε − 1)/d,   d = e^{−Tg/T1} + 2e^{−Tg/T2},   ε = 1 − F
//! D_p(ρ) = (1 − p)ρ + p · I/2 ⊗ Tr_k ρ
//! ```
//!
//! `D_p` equals the Pauli channel applying X, Y, Z each with probability
//! `p/4`, which is what the trajectory backend samples.
//!
//! A density matrix on `n` qubits is stored row-major as a `2n`-qubit vector:
//! row qubit `k` is register qubit `k`, column qubit `k` is register qubit `n + k`.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{apply_gate_raw, CircuitIR, NativeGate, StepProgram};
use crate::error::{GapError, Result};
use crate::pauli::{expectation, string_expectation, Pauli, PauliString, PauliSum};
use crate::rng::stream_rng;
use crate::state::{kernel_pauli, StateVector};

/// Largest register the density backend accepts.
pub const MAX_DENSITY_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoQubitChannel {
    /// Single-qubit depolarizing on each participating qubit.
    #[default]
    Independent1q,
    /// One two-qubit depolarizing channel on the pair.
    Joint2q,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub t1: f64,
    pub t2: f64,
    pub gate_time_1q: f64,
    pub gate_time_2q: f64,
    pub fidelity_1q: f64,
    pub fidelity_2q: f64,
    pub readout_flip: f64,
    #[serde(default)]
    pub two_qubit_channel: TwoQubitChannel,
}

impl NoiseModel {
    /// Relaxation times, gate times and readout error of the trapped-ion
    /// device model; gate fidelities must be supplied.
    pub fn trapped_ion(fidelity_1q: f64, fidelity_2q: f64) -> Self {
        Self {
            t1: 100.0,
            t2: 1.0,
            gate_time_1q: 135e-6,
            gate_time_2q: 600e-6,
            fidelity_1q,
            fidelity_2q,
            readout_flip: 0.0039,
            two_qubit_channel: TwoQubitChannel::Independent1q,
        }
    }

    /// No gate or readout error at all.
    pub fn ideal() -> Self {
        Self { fidelity_1q: 1.0, fidelity_2q: 1.0, readout_flip: 0.0, gate_time_1q: 1e-300, gate_time_2q: 1e-300, ..Self::trapped_ion(1.0, 1.0) }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(GapError::InvalidArgument(m));
        if !(self.t1 > 0.0) || !(self.t2 > 0.0) || self.t2 > 2.0 * self.t1 {
            return bad(format!("need T1 > 0 and 0 < T2 ≤ 2·T1, got T1={}, T2={}", self.t1, self.t2));
        }
        if !(self.gate_time_1q > 0.0) || !(self.gate_time_2q > 0.0) {
            return bad("gate times must be positive".into());
        }
        if !(self.fidelity_1q > 0.25 && self.fidelity_1q <= 1.0) {
            return bad(format!("1q fidelity must lie in (0.25, 1], got {}", self.fidelity_1q));
        }
        if !(self.fidelity_2q > 0.2 && self.fidelity_2q <= 1.0) {
            return bad(format!("2q fidelity must lie in (0.2, 1], got {}", self.fidelity_2q));
        }
        if !(0.0..=1.0).contains(&self.readout_flip) {
            return bad(format!("readout flip must lie in [0, 1], got {}", self.readout_flip));
        }
        Ok(())
    }

    /// Channel parameters `(p_1q, p_2q)` with any clamping warnings.
    pub fn channel_ps(&self) -> (ChannelP, ChannelP) {
        (
            depolarizing_p_checked(self.fidelity_1q, self.gate_time_1q, self.t1, self.t2),
            depolarizing_p_checked(self.fidelity_2q, self.gate_time_2q, self.t1, self.t2),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelP {
    pub p: f64,
    /// Unclamped formula value when clamping occurred.
    pub clamped_from: Option<f64>,
}

pub fn depolarizing_p_checked(fidelity: f64, gate_time: f64, t1: f64, t2: f64) -> ChannelP {
    let d = (-gate_time / t1).exp() + 2.0 * (-gate_time / t2).exp();
    let eps = 1.0 - fidelity;
    let raw = 1.0 + 3.0 * (2.0 * eps - 1.0) / d;
    if (0.0..=1.0).contains(&raw) {
        ChannelP { p: raw, clamped_from: None }
    } else {
        log::warn!("depolarizing p = {raw} outside [0, 1] (F={fidelity}, Tg={gate_time}); clamped");
        ChannelP { p: raw.clamp(0.0, 1.0), clamped_from: Some(raw) }
    }
}

/// Depolarizing probability for a gate, clamped to `[0, 1]`.
pub fn depolarizing_p(fidelity: f64, gate_time: f64, t1: f64, t2: f64) -> f64 {
    depolarizing_p_checked(fidelity, gate_time, t1, t2).p
}

/// Independent per-qubit bit flips on a basis distribution.
pub fn apply_readout_flip(probabilities: &[f64], flip: f64) -> Vec<f64> {
    let n = probabilities.len().trailing_zeros();
    let mut p = probabilities.to_vec();
    for k in 0..n {
        let bit = 1usize << k;
        for b in 0..p.len() {
            if b & bit == 0 {
                let (a, c) = (p[b], p[b | bit]);
                p[b] = (1.0 - flip) * a + flip * c;
                p[b | bit] = flip * a + (1.0 - flip) * c;
            }
        }
    }
    p
}

/// `⟨O⟩` as seen through readout flips: each string of weight `w` is damped by `(1 − 2f)^w`.
pub fn readout_damped(o: &PauliSum, f: f64, exact_term_values: impl Fn(&PauliString) -> f64) -> f64 {
    o.terms()
        .iter()
        .map(|t| t.coefficient * (1.0 - 2.0 * f).powi(t.string.weight() as i32) * exact_term_values(&t.string))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let n = psi.n_qubits();
        if n > MAX_DENSITY_QUBITS {
            return Err(GapError::Backend(format!("density backend supports at most {MAX_DENSITY_QUBITS} qubits, got {n}")));
        }
        let a = psi.amplitudes();
        let dim = a.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = a[r] * a[c].conj();
            }
        }
        Ok(Self { n_qubits: n, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim() + c]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|k| self.get(k, k)).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut e = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                e = e.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        e
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let dim = self.dim();
        let m = nalgebra::DMatrix::from_fn(dim, dim, |r, c| 0.5 * (self.get(r, c) + self.get(c, r).conj()));
        let mut e: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.get(k, k).re).collect()
    }

    /// `Tr(Pρ) = Σ_r φ(r) ρ_{r, r⊕x}`.
    pub fn pauli_expectation(&self, p: &PauliString) -> f64 {
        let dim = self.dim();
        let x = p.x_mask() as usize;
        (0..dim).map(|r| (p.phase_on(r) * self.get(r, r ^ x)).re).sum()
    }

    pub fn expectation(&self, o: &PauliSum) -> Result<f64> {
        if o.n_qubits() != self.n_qubits {
            return Err(GapError::DimensionMismatch { expected: self.n_qubits, got: o.n_qubits() });
        }
        Ok(o.terms().iter().map(|t| t.coefficient * self.pauli_expectation(&t.string)).sum())
    }

    /// `ρ → UρU†`.
    pub fn apply_gate(&mut self, g: &NativeGate) -> Result<()> {
        g.validate(self.n_qubits)?;
        let n = self.n_qubits;
        apply_gate_raw(&mut self.data, 2 * n, g, false, 0);
        apply_gate_raw(&mut self.data, 2 * n, g, true, n);
        Ok(())
    }

    fn check(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(GapError::QubitOutOfRange { index: q, n_qubits: self.n_qubits });
        }
        Ok(())
    }

    pub fn apply_depolarizing(&mut self, q: usize, p: f64) -> Result<()> {
        self.check(q)?;
        if p == 0.0 {
            return Ok(());
        }
        let dim = self.dim();
        let bit = 1usize << (self.n_qubits - 1 - q);
        for r in (0..dim).filter(|r| r & bit == 0) {
            for c in (0..dim).filter(|c| c & bit == 0) {
                let i00 = r * dim + c;
                let i01 = r * dim + (c | bit);
                let i10 = (r | bit) * dim + c;
                let i11 = (r | bit) * dim + (c | bit);
                let avg = (self.data[i00] + self.data[i11]) * 0.5;
                self.data[i00] = self.data[i00] * (1.0 - p) + avg * p;
                self.data[i11] = self.data[i11] * (1.0 - p) + avg * p;
                self.data[i01] *= 1.0 - p;
                self.data[i10] *= 1.0 - p;
            }
        }
        Ok(())
    }

    /// `(1 − p)ρ + p · I/4 ⊗ Tr_{ab} ρ`.
    pub fn apply_depolarizing_2q(&mut self, a: usize, b: usize, p: f64) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(GapError::InvalidArgument(format!("two-qubit channel on repeated qubit {a}")));
        }
        if p == 0.0 {
            return Ok(());
        }
        let dim = self.dim();
        let ba = 1usize << (self.n_qubits - 1 - a);
        let bb = 1usize << (self.n_qubits - 1 - b);
        let sub = [0, bb, ba, ba | bb];
        for r in (0..dim).filter(|r| r & (ba | bb) == 0) {
            for c in (0..dim).filter(|c| c & (ba | bb) == 0) {
                let tr: Complex64 = sub.iter().map(|&s| self.data[(r | s) * dim + (c | s)]).sum();
                for &sr in &sub {
                    for &sc in &sub {
                        let i = (r | sr) * dim + (c | sc);
                        self.data[i] *= 1.0 - p;
                        if sr == sc {
                            self.data[i] += tr * (0.25 * p);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Basis-state probabilities after readout flips.
    pub fn measured_probabilities(&self, flip: f64) -> Vec<f64> {
        apply_readout_flip(&self.diagonal(), flip)
    }
}

/// Per-gate channel strengths resolved from a model.
#[derive(Debug, Clone, Copy)]
struct Channels {
    p1: f64,
    p2: f64,
    joint: bool,
}

impl Channels {
    fn from(noise: Option<&NoiseModel>) -> Self {
        match noise {
            None => Self { p1: 0.0, p2: 0.0, joint: false },
            Some(m) => {
                let (c1, c2) = m.channel_ps();
                Self { p1: c1.p, p2: c2.p, joint: m.two_qubit_channel == TwoQubitChannel::Joint2q }
            }
        }
    }
}

fn density_gate(rho: &mut DensityMatrix, g: &NativeGate, ch: Channels) -> Result<()> {
    rho.apply_gate(g)?;
    match *g {
        NativeGate::Gpi2 { q, .. } | NativeGate::VirtualZ { q, .. } => rho.apply_depolarizing(q, ch.p1)?,
        NativeGate::Ms { q0, q1, .. } => {
            if ch.joint {
                rho.apply_depolarizing_2q(q0, q1, ch.p2)?;
            } else {
                rho.apply_depolarizing(q0, ch.p2)?;
                rho.apply_depolarizing(q1, ch.p2)?;
            }
        }
    }
    Ok(())
}

/// Runs a circuit on a density matrix with per-gate noise.
pub fn execute_density(rho0: &DensityMatrix, circ: &CircuitIR, noise: &NoiseModel) -> Result<DensityMatrix> {
    noise.validate()?;
    if circ.n_qubits != rho0.n_qubits {
        return Err(GapError::DimensionMismatch { expected: rho0.n_qubits, got: circ.n_qubits });
    }
    let ch = Channels::from(Some(noise));
    let mut rho = rho0.clone();
    for g in &circ.gates {
        density_gate(&mut rho, g, ch)?;
    }
    Ok(rho)
}

const PAULIS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

fn sample_1q<R: Rng>(psi: &mut StateVector, q: usize, p: f64, rng: &mut R) {
    if p == 0.0 {
        return;
    }
    let u: f64 = rng.random();
    // X, Y, Z each with probability p/4
    let k = (u / (0.25 * p)) as usize;
    if k < 3 {
        let n = psi.n_qubits();
        kernel_pauli(psi.amplitudes_mut(), &PauliString::single(n, q, PAULIS[k]));
    }
}

fn sample_2q<R: Rng>(psi: &mut StateVector, a: usize, b: usize, p: f64, rng: &mut R) {
    if p == 0.0 {
        return;
    }
    let u: f64 = rng.random();
    if u < p {
        // uniform over the 16 two-qubit Paulis, identity included
        let k: usize = rng.random_range(0..16);
        let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let s = PauliString::from_sparse(psi.n_qubits(), &[(a, all[k / 4]), (b, all[k % 4])]);
        kernel_pauli(psi.amplitudes_mut(), &s);
    }
}

fn trajectory_gate<R: Rng>(psi: &mut StateVector, g: &NativeGate, ch: Channels, rng: &mut R) -> Result<()> {
    crate::circuit::apply_gate(psi, g)?;
    match *g {
        NativeGate::Gpi2 { q, .. } | NativeGate::VirtualZ { q, .. } => sample_1q(psi, q, ch.p1, rng),
        NativeGate::Ms { q0, q1, .. } => {
            if ch.joint {
                sample_2q(psi, q0, q1, ch.p2, rng);
            } else {
                sample_1q(psi, q0, ch.p2, rng);
                sample_1q(psi, q1, ch.p2, rng);
            }
        }
    }
    Ok(())
}

/// Execution backend for a [`StepProgram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backend {
    /// Exact Pauli exponentials, no noise.
    Statevector,
    /// Native gates on a density matrix.
    Density,
    /// Native gates on sampled Pauli-error trajectories.
    Trajectories { n: usize, seed: u64 },
}

impl Backend {
    pub fn label(&self) -> &'static str {
        match self {
            Backend::Statevector => "statevector",
            Backend::Density => "density",
            Backend::Trajectories { .. } => "trajectories",
        }
    }
}

/// Observable values at each checkpoint, with Monte Carlo standard errors for
/// the trajectory backend.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgramOutput {
    pub values: Vec<f64>,
    pub mc_stderr: Option<Vec<f64>>,
}

/// Order-independent-precision summation.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    match x.len() {
        0 => 0.0,
        1 => x[0],
        n if n <= 8 => x.iter().sum(),
        n => pairwise_sum(&x[..n / 2]) + pairwise_sum(&x[n / 2..]),
    }
}

/// Runs the program from `psi0` and records `⟨O⟩` at every checkpoint
/// (readout flips included when noise is present).
pub fn run_program(
    program: &StepProgram,
    psi0: &StateVector,
    o: &PauliSum,
    noise: Option<&NoiseModel>,
    backend: Backend,
) -> Result<ProgramOutput> {
    if psi0.n_qubits() != program.n_qubits || o.n_qubits() != program.n_qubits {
        return Err(GapError::DimensionMismatch { expected: program.n_qubits, got: psi0.n_qubits() });
    }
    if let Some(m) = noise {
        m.validate()?;
    }
    let flip = noise.map_or(0.0, |m| m.readout_flip);
    let ch = Channels::from(noise);
    let mut checkpoints = program.checkpoints.iter().copied().peekable();

    match backend {
        Backend::Statevector => {
            if noise.is_some() {
                return Err(GapError::Backend("statevector backend is noiseless; use density or trajectories".into()));
            }
            let mut psi = psi0.clone();
            let mut values = Vec::new();
            for k in 0..=program.steps.len() {
                while checkpoints.peek() == Some(&k) {
                    values.push(expectation(o, &psi)?);
                    checkpoints.next();
                }
                if let Some((s, dt)) = program.steps.get(k) {
                    s.apply(&mut psi, *dt)?;
                }
            }
            Ok(ProgramOutput { values, mc_stderr: None })
        }
        Backend::Density => {
            let mut rho = DensityMatrix::from_pure(psi0)?;
            let mut values = Vec::new();
            for k in 0..=program.steps.len() {
                while checkpoints.peek() == Some(&k) {
                    values.push(readout_damped(o, flip, |p| rho.pauli_expectation(p)));
                    checkpoints.next();
                }
                if let Some((s, dt)) = program.steps.get(k) {
                    for g in &s.compile(*dt)?.gates {
                        density_gate(&mut rho, g, ch)?;
                    }
                }
            }
            Ok(ProgramOutput { values, mc_stderr: None })
        }
        Backend::Trajectories { n, seed } => {
            if n == 0 {
                return Err(GapError::Backend("trajectory count must be ≥ 1".into()));
            }
            let circuits = program.steps.iter().map(|(s, dt)| s.compile(*dt)).collect::<Result<Vec<_>>>()?;
            let cps = program.checkpoints.clone();
            let per: Vec<Vec<f64>> = (0..n)
                .into_par_iter()
                .map(|traj| -> Result<Vec<f64>> {
                    let mut rng = stream_rng(seed, &[0x7a1, traj as u64]);
                    let mut psi = psi0.clone();
                    let mut out = Vec::with_capacity(cps.len());
                    let mut cp = cps.iter().copied().peekable();
                    for k in 0..=circuits.len() {
                        while cp.peek() == Some(&k) {
                            out.push(readout_damped(o, flip, |p| string_expectation(p, &psi)));
                            cp.next();
                        }
                        if let Some(c) = circuits.get(k) {
                            for g in &c.gates {
                                trajectory_gate(&mut psi, g, ch, &mut rng)?;
                            }
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()?;
            let m = cps.len();
            let nf = n as f64;
            let mut values = Vec::with_capacity(m);
            let mut errs = Vec::with_capacity(m);
            for c in 0..m {
                let col: Vec<f64> = per.iter().map(|v| v[c]).collect();
                let mean = pairwise_sum(&col) / nf;
                let dev: Vec<f64> = col.iter().map(|x| (x - mean).powi(2)).collect();
                let var = if n > 1 { pairwise_sum(&dev) / (nf - 1.0) } else { 0.0 };
                values.push(mean);
                errs.push((var / nf).sqrt());
            }
            Ok(ProgramOutput { values, mc_stderr: Some(errs) })
        }
    }
}
