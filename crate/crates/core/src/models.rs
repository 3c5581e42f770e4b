//! Model Hamiltonians: the periodic transverse-field Ising model on a chain or
//! square lattice, and second-quantized molecular Hamiltonians mapped to qubits
//! with Jordan–Wigner.
//!
//! Ising:
//!
//! ```text
//! H = −(J1/2) Σ_⟨ij⟩ X_i X_j − (h3/2) Σ_i Z_i
//! ```
//!
//! Molecules (interleaved spin orbitals, `P = 2p + s`):
//!
//! ```text
//! H = E_nuc + Σ h_PQ c†_P c_Q + ½ Σ h_PQRS c†_P c†_Q c_R c_S
//! c_P = Z_0 ⋯ Z_{P−1} (X_P + iY_P)/2      (|1⟩ = occupied)
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GapError, Result};
use crate::pauli::{Pauli, PauliString, PauliSum, PauliTerm, MAX_PAULI_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Topology {
    Chain { l: usize },
    SquareLattice { lx: usize, ly: usize },
}

impl Topology {
    pub fn n_sites(&self) -> usize {
        match *self {
            Topology::Chain { l } => l,
            Topology::SquareLattice { lx, ly } => lx * ly,
        }
    }
}

/// Transverse-field Ising model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingSpec {
    pub topology: Topology,
    pub j1: f64,
    pub h3: f64,
    #[serde(default = "default_pbc")]
    pub pbc: bool,
}

fn default_pbc() -> bool {
    true
}

impl IsingSpec {
    pub fn chain(l: usize, j1: f64, h3: f64) -> Self {
        Self { topology: Topology::Chain { l }, j1, h3, pbc: true }
    }

    pub fn lattice(lx: usize, ly: usize, j1: f64, h3: f64) -> Self {
        Self { topology: Topology::SquareLattice { lx, ly }, j1, h3, pbc: true }
    }

    pub fn n_sites(&self) -> usize {
        self.topology.n_sites()
    }

    pub fn with_h3(&self, h3: f64) -> Self {
        Self { h3, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j1 > 0.0) || !self.j1.is_finite() {
            return Err(GapError::InvalidModel(format!("J1 must be positive, got {}", self.j1)));
        }
        if !(self.h3 >= 0.0) || !self.h3.is_finite() {
            return Err(GapError::InvalidModel(format!("h3 must be non-negative, got {}", self.h3)));
        }
        match self.topology {
            Topology::Chain { l } if l < 2 => {
                return Err(GapError::InvalidModel(format!("chain needs L ≥ 2, got {l}")))
            }
            Topology::SquareLattice { lx, ly } if lx < 2 || ly < 2 => {
                return Err(GapError::InvalidModel(format!("lattice needs Lx, Ly ≥ 2, got {lx}×{ly}")))
            }
            _ => {}
        }
        if self.n_sites() > MAX_PAULI_QUBITS {
            return Err(GapError::InvalidModel(format!("{} sites is too many", self.n_sites())));
        }
        Ok(())
    }

    /// Nearest-neighbor pairs, one per directed bond. Wraparound on an extent-2
    /// axis produces the same pair twice; both copies are kept.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        match self.topology {
            Topology::Chain { l } => {
                let last = if self.pbc { l } else { l - 1 };
                for i in 0..last {
                    out.push((i, (i + 1) % l));
                }
            }
            Topology::SquareLattice { lx, ly } => {
                let site = |x: usize, y: usize| y * lx + x;
                for y in 0..ly {
                    for x in 0..lx {
                        if self.pbc || x + 1 < lx {
                            out.push((site(x, y), site((x + 1) % lx, y)));
                        }
                        if self.pbc || y + 1 < ly {
                            out.push((site(x, y), site(x, (y + 1) % ly)));
                        }
                    }
                }
            }
        }
        out
    }

    /// Unmerged term list: one XX term per bond, then one Z term per site.
    pub fn raw_terms(&self) -> Result<Vec<PauliTerm>> {
        self.validate()?;
        let n = self.n_sites();
        let mut terms = Vec::new();
        for (i, j) in self.bonds() {
            let s = PauliString::from_sparse(n, &[(i, Pauli::X), (j, Pauli::X)]);
            terms.push(PauliTerm::new(-0.5 * self.j1, s)?);
        }
        if self.h3 != 0.0 {
            for i in 0..n {
                terms.push(PauliTerm::new(-0.5 * self.h3, PauliString::single(n, i, Pauli::Z))?);
            }
        }
        Ok(terms)
    }
}

pub fn build_ising(spec: &IsingSpec) -> Result<PauliSum> {
    PauliSum::new(spec.n_sites(), spec.raw_terms()?)
}

/// The `h3 = 0` Hamiltonian used as the adiabatic starting point.
pub fn build_ising_h0(spec: &IsingSpec) -> Result<PauliSum> {
    build_ising(&spec.with_h3(0.0))
}

/// `Z^⊗L`, which commutes with the Ising Hamiltonian for every field.
/// The rotation `⊗R_z(π)` equals `(−i)^L` times this string.
pub fn ising_parity(n: usize) -> PauliSum {
    let s = PauliString::from_axes(&vec![Pauli::Z; n]);
    PauliSum::new(n, [PauliTerm { coefficient: 1.0, string: s }]).expect("unit parity")
}

/// Terms whose axes lie in `{I, Z}^L`.
pub fn diagonal_part(h: &PauliSum) -> PauliSum {
    h.filter(|t| t.string.is_diagonal())
}

/// Spin-orbital integrals with explicit sparse index lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FermionIntegrals {
    pub n_orbitals: usize,
    pub nuclear_repulsion: f64,
    /// `[p, q, h_pq]`
    pub one_body: Vec<(usize, usize, f64)>,
    /// `[p, q, r, s, h_pqrs]`, multiplying `½ c†_p c†_q c_r c_s`.
    pub two_body: Vec<(usize, usize, usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub molecule: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bond_length_angstrom: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_electrons: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fci_energy: Option<f64>,
}

impl FermionIntegrals {
    pub fn from_json(text: &str) -> Result<Self> {
        let ints: Self = serde_json::from_str(text)?;
        ints.validate()?;
        Ok(ints)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_orbitals;
        if n == 0 || n > MAX_PAULI_QUBITS {
            return Err(GapError::InvalidModel(format!("n_orbitals {n} out of range")));
        }
        if !self.nuclear_repulsion.is_finite() {
            return Err(GapError::InvalidModel("nuclear_repulsion is not finite".into()));
        }
        let mut h = vec![0.0; n * n];
        for &(p, q, v) in &self.one_body {
            if p >= n || q >= n {
                return Err(GapError::InvalidModel(format!("one_body index ({p},{q}) ≥ n_orbitals {n}")));
            }
            if !v.is_finite() {
                return Err(GapError::InvalidModel(format!("one_body ({p},{q}) is not finite")));
            }
            h[p * n + q] += v;
        }
        for p in 0..n {
            for q in 0..p {
                let d = (h[p * n + q] - h[q * n + p]).abs();
                if d > 1e-10 {
                    return Err(GapError::InvalidModel(format!("one_body not symmetric at ({p},{q}): |Δ| = {d:e}")));
                }
            }
        }
        for &(p, q, r, s, v) in &self.two_body {
            if p >= n || q >= n || r >= n || s >= n {
                return Err(GapError::InvalidModel(format!(
                    "two_body index ({p},{q},{r},{s}) ≥ n_orbitals {n}"
                )));
            }
            if !v.is_finite() {
                return Err(GapError::InvalidModel(format!("two_body ({p},{q},{r},{s}) is not finite")));
            }
        }
        Ok(())
    }
}

/// Complex polynomial over `X^x Z^z` monomials.
type Poly = Vec<(u64, u64, Complex64)>;

fn bit(n: usize, k: usize) -> u64 {
    1u64 << (n - 1 - k)
}

fn ladder(n: usize, p: usize, dagger: bool) -> Poly {
    // c_p = Z_{<p} X_p (I − Z_p)/2,  c†_p = Z_{<p} X_p (I + Z_p)/2
    let below: u64 = (0..p).map(|k| bit(n, k)).fold(0, |a, b| a | b);
    let xp = bit(n, p);
    let sign = if dagger { 0.5 } else { -0.5 };
    vec![(xp, below, Complex64::new(0.5, 0.0)), (xp, below | xp, Complex64::new(sign, 0.0))]
}

fn multiply(a: &Poly, b: &Poly) -> Poly {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &(x1, z1, c1) in a {
        for &(x2, z2, c2) in b {
            let sign = if (z1 & x2).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out.push((x1 ^ x2, z1 ^ z2, c1 * c2 * sign));
        }
    }
    out
}

/// Maps the integrals to a qubit Hamiltonian on `n_orbitals` qubits.
pub fn jordan_wigner(ints: &FermionIntegrals) -> Result<PauliSum> {
    ints.validate()?;
    let n = ints.n_orbitals;
    let ann: Vec<Poly> = (0..n).map(|p| ladder(n, p, false)).collect();
    let cre: Vec<Poly> = (0..n).map(|p| ladder(n, p, true)).collect();

    let mut acc: BTreeMap<(u64, u64), Complex64> = BTreeMap::new();
    let mut add = |poly: Poly, w: f64| {
        for (x, z, c) in poly {
            *acc.entry((x, z)).or_default() += c * w;
        }
    };
    add(vec![(0, 0, Complex64::new(1.0, 0.0))], ints.nuclear_repulsion);
    for &(p, q, v) in &ints.one_body {
        add(multiply(&cre[p], &ann[q]), v);
    }
    for &(p, q, r, s, v) in &ints.two_body {
        let left = multiply(&cre[p], &cre[q]);
        let right = multiply(&ann[r], &ann[s]);
        add(multiply(&left, &right), 0.5 * v);
    }

    let scale = acc.values().map(|c| c.norm()).sum::<f64>().max(1.0);
    let mut terms = Vec::with_capacity(acc.len());
    for ((x, z), c) in acc {
        // X^x Z^z = (−i)^{|x∧z|} σ
        let phase = match (x & z).count_ones() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        let w = c * phase;
        if w.im.abs() > 1e-10 * scale {
            let label = PauliString::from_masks(n, x, z);
            return Err(GapError::NonHermitian(format!("coefficient of {label} has imaginary part {:e}", w.im)));
        }
        terms.push(PauliTerm::new(w.re, PauliString::from_masks(n, x, z))?);
    }
    PauliSum::new(n, terms)
}
