//! Native trapped-ion gate set, circuit IR, and the first-order Trotter compiler.
//!
//! ```text
//! GPI2(φ)      = 1/√2 [[1, −i e^{−iφ}], [−i e^{iφ}, 1]]
//! VirtualZ(θ)  = diag(e^{−iθ/2}, e^{iθ/2})
//! MS(φ0,φ1,θ)  : cos(θ/2) on the diagonal, −i e^{∓i(φ0±φ1)} sin(θ/2) on the anti-diagonal
//! MS(0,0,θ)    = cos(θ/2) I − i sin(θ/2) X⊗X
//! ```
//!
//! A term `c·P` evolved for `dt` becomes `exp(−i c dt P)`:
//!
//! ```text
//! Z_k      → VirtualZ(2c·dt)
//! X_i X_j  → MS(0, 0, 2c·dt)
//! X_k      → GPI2(−π/2), VirtualZ(2c·dt), GPI2(π/2)      (time order)
//! ```

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GapError, Result};
use crate::pauli::{max_dense_qubits, Pauli, PauliString, PauliSum, PauliTerm};
use crate::state::{kernel_1q, kernel_1q_diag, kernel_2q, kernel_pauli_exp, Matrix2, Matrix4, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Gpi2,
    VirtualZ,
    Ms,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NativeGate {
    Gpi2 { q: usize, phi: f64 },
    VirtualZ { q: usize, theta: f64 },
    Ms { q0: usize, q1: usize, phi0: f64, phi1: f64, theta: f64 },
}

impl NativeGate {
    pub fn kind(&self) -> GateKind {
        match self {
            NativeGate::Gpi2 { .. } => GateKind::Gpi2,
            NativeGate::VirtualZ { .. } => GateKind::VirtualZ,
            NativeGate::Ms { .. } => GateKind::Ms,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            NativeGate::Gpi2 { q, .. } | NativeGate::VirtualZ { q, .. } => vec![q],
            NativeGate::Ms { q0, q1, .. } => vec![q0, q1],
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            NativeGate::Gpi2 { phi, .. } => vec![phi],
            NativeGate::VirtualZ { theta, .. } => vec![theta],
            NativeGate::Ms { phi0, phi1, theta, .. } => vec![phi0, phi1, theta],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, NativeGate::Ms { .. })
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= n_qubits {
                return Err(GapError::QubitOutOfRange { index: q, n_qubits });
            }
        }
        if let NativeGate::Ms { q0, q1, .. } = *self {
            if q0 == q1 {
                return Err(GapError::InvalidArgument(format!("MS on repeated qubit {q0}")));
            }
        }
        if self.params().iter().any(|p| !p.is_finite()) {
            return Err(GapError::InvalidArgument(format!("non-finite angle in {self}")));
        }
        Ok(())
    }

    /// The gate undoing this one.
    pub fn inverse(&self) -> NativeGate {
        match *self {
            // GPI2(φ)† = GPI2(φ + π)
            NativeGate::Gpi2 { q, phi } => NativeGate::Gpi2 { q, phi: phi + std::f64::consts::PI },
            NativeGate::VirtualZ { q, theta } => NativeGate::VirtualZ { q, theta: -theta },
            NativeGate::Ms { q0, q1, phi0, phi1, theta } => NativeGate::Ms { q0, q1, phi0, phi1, theta: -theta },
        }
    }
}

impl fmt::Display for NativeGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NativeGate::Gpi2 { q, phi } => write!(f, "GPI2 {q} {phi:.17e}"),
            NativeGate::VirtualZ { q, theta } => write!(f, "VZ {q} {theta:.17e}"),
            NativeGate::Ms { q0, q1, phi0, phi1, theta } => {
                write!(f, "MS {q0} {q1} {phi0:.17e} {phi1:.17e} {theta:.17e}")
            }
        }
    }
}

pub enum GateMatrix {
    One(Matrix2),
    Two(Matrix4),
}

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

pub fn gpi2_matrix(phi: f64) -> Matrix2 {
    let s = FRAC_1_SQRT_2;
    let mi = Complex64::new(0.0, -1.0);
    [[Complex64::new(s, 0.0), mi * cis(-phi) * s], [mi * cis(phi) * s, Complex64::new(s, 0.0)]]
}

pub fn virtual_z_matrix(theta: f64) -> Matrix2 {
    let o = Complex64::new(0.0, 0.0);
    [[cis(-theta / 2.0), o], [o, cis(theta / 2.0)]]
}

/// MS matrix with `q0` as the high bit of the row/column index.
pub fn ms_matrix(phi0: f64, phi1: f64, theta: f64) -> Matrix4 {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let ms = Complex64::new(0.0, -(theta / 2.0).sin());
    let o = Complex64::new(0.0, 0.0);
    [
        [c, o, o, ms * cis(-(phi0 + phi1))],
        [o, c, ms * cis(-(phi0 - phi1)), o],
        [o, ms * cis(phi0 - phi1), c, o],
        [ms * cis(phi0 + phi1), o, o, c],
    ]
}

pub fn gate_matrix(g: &NativeGate) -> GateMatrix {
    match *g {
        NativeGate::Gpi2 { phi, .. } => GateMatrix::One(gpi2_matrix(phi)),
        NativeGate::VirtualZ { theta, .. } => GateMatrix::One(virtual_z_matrix(theta)),
        NativeGate::Ms { phi0, phi1, theta, .. } => GateMatrix::Two(ms_matrix(phi0, phi1, theta)),
    }
}

/// Applies `g` to a raw `n`-qubit amplitude slice, optionally with the
/// complex-conjugated matrix (the column side of a density matrix).
pub(crate) fn apply_gate_raw(amps: &mut [Complex64], n: usize, g: &NativeGate, conj: bool, offset: usize) {
    match *g {
        NativeGate::VirtualZ { q, theta } => {
            let (mut d0, mut d1) = (cis(-theta / 2.0), cis(theta / 2.0));
            if conj {
                d0 = d0.conj();
                d1 = d1.conj();
            }
            kernel_1q_diag(amps, n, q + offset, d0, d1);
        }
        NativeGate::Gpi2 { q, phi } => {
            let mut m = gpi2_matrix(phi);
            if conj {
                m.iter_mut().flatten().for_each(|z| *z = z.conj());
            }
            kernel_1q(amps, n, q + offset, &m);
        }
        NativeGate::Ms { q0, q1, phi0, phi1, theta } => {
            let mut m = ms_matrix(phi0, phi1, theta);
            if conj {
                m.iter_mut().flatten().for_each(|z| *z = z.conj());
            }
            kernel_2q(amps, n, q0 + offset, q1 + offset, &m);
        }
    }
}

pub fn apply_gate(psi: &mut StateVector, g: &NativeGate) -> Result<()> {
    g.validate(psi.n_qubits())?;
    let n = psi.n_qubits();
    apply_gate_raw(psi.amplitudes_mut(), n, g, false, 0);
    Ok(())
}

/// `exp(−i·angle·P)` for the unit-coefficient string of `term`.
pub fn apply_pauli_exponential(psi: &mut StateVector, term: &PauliTerm, angle: f64) -> Result<()> {
    if !angle.is_finite() {
        return Err(GapError::InvalidArgument(format!("non-finite angle {angle}")));
    }
    psi.apply_pauli_exponential(&term.string, angle)
}

/// Ordered native gates on a fixed register, with step markers.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CircuitIR {
    pub n_qubits: usize,
    pub gates: Vec<NativeGate>,
    /// Gate counts at which a Trotter step ended.
    pub barriers: Vec<usize>,
}

impl CircuitIR {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new(), barriers: Vec::new() }
    }

    pub fn push(&mut self, g: NativeGate) -> Result<()> {
        g.validate(self.n_qubits)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn barrier(&mut self) {
        self.barriers.push(self.gates.len());
    }

    pub fn append(&mut self, other: &CircuitIR) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(GapError::DimensionMismatch { expected: self.n_qubits, got: other.n_qubits });
        }
        let base = self.gates.len();
        self.gates.extend_from_slice(&other.gates);
        self.barriers.extend(other.barriers.iter().map(|b| b + base));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind() == kind).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.count(GateKind::Ms)
    }

    /// Number of MS layers under as-soon-as-possible scheduling, where a
    /// gate waits only for earlier MS gates sharing one of its qubits.
    pub fn two_qubit_depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for g in &self.gates {
            if let NativeGate::Ms { q0, q1, .. } = *g {
                let l = level[q0].max(level[q1]) + 1;
                level[q0] = l;
                level[q1] = l;
                depth = depth.max(l);
            }
        }
        depth
    }

    /// Reversed sequence of inverted gates.
    pub fn inverse(&self) -> CircuitIR {
        CircuitIR {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(NativeGate::inverse).collect(),
            barriers: Vec::new(),
        }
    }

    /// One gate per line, e.g. `MS 0 1 phi0 phi1 theta`; `BARRIER` marks step ends.
    pub fn dump(&self) -> String {
        let mut out = format!("QUBITS {}\n", self.n_qubits);
        let mut b = self.barriers.iter().peekable();
        for (i, g) in self.gates.iter().enumerate() {
            while b.peek() == Some(&&i) {
                out.push_str("BARRIER\n");
                b.next();
            }
            out.push_str(&g.to_string());
            out.push('\n');
        }
        for _ in b {
            out.push_str("BARRIER\n");
        }
        out
    }

    pub fn parse_dump(text: &str) -> Result<CircuitIR> {
        let mut circ: Option<CircuitIR> = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| GapError::Parse { line: i + 1, msg: msg.to_string() };
            let f: Vec<&str> = line.split_whitespace().collect();
            let num = |k: usize| -> Result<f64> {
                f.get(k).and_then(|s| s.parse().ok()).ok_or_else(|| err("bad angle"))
            };
            let idx = |k: usize| -> Result<usize> {
                f.get(k).and_then(|s| s.parse().ok()).ok_or_else(|| err("bad qubit index"))
            };
            if f[0] == "QUBITS" {
                circ = Some(CircuitIR::new(idx(1)?));
                continue;
            }
            let c = circ.as_mut().ok_or_else(|| err("missing QUBITS header"))?;
            let g = match f[0] {
                "BARRIER" => {
                    c.barrier();
                    continue;
                }
                "GPI2" => NativeGate::Gpi2 { q: idx(1)?, phi: num(2)? },
                "VZ" => NativeGate::VirtualZ { q: idx(1)?, theta: num(2)? },
                "MS" => NativeGate::Ms { q0: idx(1)?, q1: idx(2)?, phi0: num(3)?, phi1: num(4)?, theta: num(5)? },
                other => return Err(err(&format!("unknown gate {other}"))),
            };
            c.push(g).map_err(|e| err(&e.to_string()))?;
        }
        circ.ok_or(GapError::Parse { line: 0, msg: "empty circuit dump".into() })
    }

    /// Dense unitary of the whole circuit (small registers only).
    pub fn unitary(&self) -> Result<DMatrix<Complex64>> {
        let max = max_dense_qubits();
        if self.n_qubits > max {
            return Err(GapError::DenseLimit { n: self.n_qubits, max });
        }
        let dim = 1usize << self.n_qubits;
        let mut u = DMatrix::<Complex64>::zeros(dim, dim);
        for col in 0..dim {
            let mut psi = StateVector::basis(self.n_qubits, col);
            execute_in_place(&mut psi, self)?;
            u.set_column(col, &nalgebra::DVector::from_column_slice(psi.amplitudes()));
        }
        Ok(u)
    }
}

pub fn execute_in_place(psi: &mut StateVector, circ: &CircuitIR) -> Result<()> {
    if psi.n_qubits() != circ.n_qubits {
        return Err(GapError::DimensionMismatch { expected: circ.n_qubits, got: psi.n_qubits() });
    }
    for g in &circ.gates {
        apply_gate(psi, g)?;
    }
    Ok(())
}

pub fn execute(psi0: &StateVector, circ: &CircuitIR) -> Result<StateVector> {
    let mut psi = psi0.clone();
    execute_in_place(&mut psi, circ)?;
    Ok(psi)
}

/// How a term is realized inside a Trotter step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TermShape {
    Identity,
    SingleZ(usize),
    SingleX(usize),
    XX(usize, usize),
    General,
}

fn shape(s: &PauliString) -> TermShape {
    let support = s.support();
    match support.as_slice() {
        [] => TermShape::Identity,
        [k] => match s.get(*k) {
            Pauli::Z => TermShape::SingleZ(*k),
            Pauli::X => TermShape::SingleX(*k),
            _ => TermShape::General,
        },
        [a, b] if s.get(*a) == Pauli::X && s.get(*b) == Pauli::X => TermShape::XX(*a, *b),
        _ => TermShape::General,
    }
}

/// One first-order Trotter step: an ordered term list shared by the exact
/// Pauli-exponential path and the native-gate compiler.
///
/// Order: single-qubit terms, then XX terms packed greedily into layers with no
/// shared qubit (a periodic chain of even length gives two layers), then every
/// other term in input order. Identity terms only contribute a global phase.
#[derive(Debug, Clone, PartialEq)]
pub struct TrotterStep {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
    identity: f64,
    xx_layers: usize,
}

impl TrotterStep {
    pub fn new(h: &PauliSum) -> Self {
        Self::from_terms(h.n_qubits(), h.terms())
    }

    /// Builds from an unmerged term list, so repeated strings stay separate gates.
    pub fn from_terms(n_qubits: usize, terms: &[PauliTerm]) -> Self {
        let mut identity = 0.0;
        let mut single = Vec::new();
        let mut xx: Vec<(PauliTerm, usize, usize)> = Vec::new();
        let mut general = Vec::new();
        for t in terms {
            assert_eq!(t.n_qubits(), n_qubits, "term register mismatch");
            match shape(&t.string) {
                TermShape::Identity => identity += t.coefficient,
                TermShape::SingleZ(_) | TermShape::SingleX(_) => single.push(*t),
                TermShape::XX(a, b) => xx.push((*t, a, b)),
                TermShape::General => general.push(*t),
            }
        }
        let mut layers: Vec<(Vec<PauliTerm>, u64)> = Vec::new();
        for (t, a, b) in xx {
            let mask = (1u64 << a) | (1u64 << b);
            match layers.iter_mut().find(|(_, used)| used & mask == 0) {
                Some((l, used)) => {
                    l.push(t);
                    *used |= mask;
                }
                None => layers.push((vec![t], mask)),
            }
        }
        let xx_layers = layers.len();
        let mut ordered = single;
        ordered.extend(layers.into_iter().flat_map(|(l, _)| l));
        ordered.extend(general);
        Self { n_qubits, terms: ordered, identity, xx_layers }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Non-identity terms in application order.
    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn xx_layers(&self) -> usize {
        self.xx_layers
    }

    /// Exact-exponential fast path. The identity term becomes a global phase.
    pub fn apply(&self, psi: &mut StateVector, dt: f64) -> Result<()> {
        if psi.n_qubits() != self.n_qubits {
            return Err(GapError::DimensionMismatch { expected: self.n_qubits, got: psi.n_qubits() });
        }
        for t in &self.terms {
            kernel_pauli_exp(psi.amplitudes_mut(), &t.string, t.coefficient * dt);
        }
        if self.identity != 0.0 {
            let ph = cis(-self.identity * dt);
            psi.amplitudes_mut().iter_mut().for_each(|a| *a *= ph);
        }
        Ok(())
    }

    /// Native-gate realization; drops the identity phase.
    pub fn compile(&self, dt: f64) -> Result<CircuitIR> {
        let mut c = CircuitIR::new(self.n_qubits);
        for t in &self.terms {
            let theta = 2.0 * t.coefficient * dt;
            match shape(&t.string) {
                TermShape::SingleZ(q) => c.push(NativeGate::VirtualZ { q, theta })?,
                TermShape::SingleX(q) => {
                    c.push(NativeGate::Gpi2 { q, phi: -FRAC_PI_2 })?;
                    c.push(NativeGate::VirtualZ { q, theta })?;
                    c.push(NativeGate::Gpi2 { q, phi: FRAC_PI_2 })?;
                }
                TermShape::XX(q0, q1) => c.push(NativeGate::Ms { q0, q1, phi0: 0.0, phi1: 0.0, theta })?,
                TermShape::Identity => {}
                TermShape::General => return Err(GapError::UnsupportedTerm(t.string.label())),
            }
        }
        c.barrier();
        Ok(c)
    }

    /// Whether every term has a native realization.
    pub fn is_native(&self) -> bool {
        self.terms.iter().all(|t| shape(&t.string) != TermShape::General)
    }
}

pub fn compile_trotter_step(h: &PauliSum, dt: f64) -> Result<CircuitIR> {
    TrotterStep::new(h).compile(dt)
}

/// A sequence of Trotter steps with measurement checkpoints; the common input
/// of every execution backend.
#[derive(Debug, Clone)]
pub struct StepProgram {
    pub n_qubits: usize,
    pub steps: Vec<(Arc<TrotterStep>, f64)>,
    /// Step counts after which the observable is recorded.
    pub checkpoints: Vec<usize>,
}

impl StepProgram {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, steps: Vec::new(), checkpoints: Vec::new() }
    }

    pub fn push(&mut self, step: Arc<TrotterStep>, dt: f64) {
        assert_eq!(step.n_qubits(), self.n_qubits, "step register mismatch");
        self.steps.push((step, dt));
    }

    pub fn checkpoint(&mut self) {
        self.checkpoints.push(self.steps.len());
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    /// Full native circuit (all steps).
    pub fn compile(&self) -> Result<CircuitIR> {
        let mut c = CircuitIR::new(self.n_qubits);
        for (s, dt) in &self.steps {
            c.append(&s.compile(*dt)?)?;
        }
        Ok(c)
    }
}
