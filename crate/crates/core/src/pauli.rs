//! Pauli strings and real-weighted Pauli sums.
//!
//! Qubit 0 is the leftmost tensor factor. In a basis-state index the bit for
//! qubit `k` sits at position `n - 1 - k`, so `|b⟩` with `b = 0b1000` on four
//! qubits has qubit 0 set.
//!
//! A string is stored as a pair of bit masks `(x, z)` with
//! `P = i^{|x∧z|} · X^x · Z^z`, which makes application to a basis state a
//! single XOR plus a sign:
//!
//! ```text
//! P|b⟩ = i^{|x∧z|} · (−1)^{|b∧z|} · |b ⊕ x⟩
//! ```

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GapError, Result};
use crate::state::StateVector;

/// Terms whose merged coefficient falls below this magnitude are dropped.
pub const MERGE_TOLERANCE: f64 = 1e-14;

/// Default ceiling on qubit count for dense matrix realizations.
pub const DEFAULT_MAX_DENSE_QUBITS: usize = 12;

/// Largest qubit count a [`PauliString`] can describe.
pub const MAX_PAULI_QUBITS: usize = 64;

/// Dense-realization limit, honoring `GAPSCOPE_MAX_DENSE_QUBITS`.
pub fn max_dense_qubits() -> usize {
    std::env::var("GAPSCOPE_MAX_DENSE_QUBITS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DENSE_QUBITS)
}

/// Single-qubit Pauli operator, `σ⁰ … σ³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Axis code: 0 = I, 1 = X, 2 = Y, 3 = Z.
    pub fn code(self) -> u8 {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Pauli::I),
            1 => Some(Pauli::X),
            2 => Some(Pauli::Y),
            3 => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | 'i' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    /// The 2×2 matrix, row-major.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

/// Tensor product of single-qubit Paulis on `n` qubits (unit coefficient).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_PAULI_QUBITS).contains(&n), "qubit count {n} out of range");
        Self { n, x: 0, z: 0 }
    }

    pub fn from_axes(axes: &[Pauli]) -> Self {
        let mut s = Self::identity(axes.len());
        for (k, p) in axes.iter().enumerate() {
            s.set(k, *p);
        }
        s
    }

    /// A string with `p` on qubit `k` and identity elsewhere.
    pub fn single(n: usize, k: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(k, p);
        s
    }

    /// Built from `(qubit, Pauli)` pairs; unlisted qubits are identity.
    pub fn from_sparse(n: usize, ops: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(n);
        for &(k, p) in ops {
            s.set(k, p);
        }
        s
    }

    /// Built directly from masks in basis-index bit order.
    pub fn from_masks(n: usize, x: u64, z: u64) -> Self {
        let mut s = Self::identity(n);
        let keep = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        s.x = x & keep;
        s.z = z & keep;
        s
    }

    #[inline]
    fn bit(&self, k: usize) -> u64 {
        1u64 << (self.n - 1 - k)
    }

    fn set(&mut self, k: usize, p: Pauli) {
        assert!(k < self.n, "qubit {k} out of range for {} qubits", self.n);
        let b = self.bit(k);
        let (xb, zb) = p.bits();
        self.x = if xb { self.x | b } else { self.x & !b };
        self.z = if zb { self.z | b } else { self.z & !b };
    }

    pub fn get(&self, k: usize) -> Pauli {
        let b = self.bit(k);
        match (self.x & b != 0, self.z & b != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn axes(&self) -> Vec<Pauli> {
        (0..self.n).map(|k| self.get(k)).collect()
    }

    /// Flip mask in basis-index bit order.
    pub fn x_mask(&self) -> u64 {
        self.x
    }

    /// Sign mask in basis-index bit order.
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Qubits carrying a non-identity factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&k| self.get(k) != Pauli::I).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// True when every factor is I or Z.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn label(&self) -> String {
        (0..self.n).map(|k| self.get(k).as_char()).collect()
    }

    /// `i^{|x∧z|}`, the phase converting `X^x Z^z` into this string.
    #[inline]
    pub fn y_phase(&self) -> Complex64 {
        match (self.x & self.z).count_ones() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Phase `φ` with `P|b⟩ = φ|b ⊕ x⟩`.
    #[inline]
    pub fn phase_on(&self, b: usize) -> Complex64 {
        let sign = if (b as u64 & self.z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        self.y_phase() * sign
    }

    /// Whether the two strings commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({})", self.label())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for PauliString {
    type Err = GapError;

    fn from_str(s: &str) -> Result<Self> {
        let axes = s
            .trim()
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| GapError::InvalidArgument(format!("bad Pauli label {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if axes.is_empty() || axes.len() > MAX_PAULI_QUBITS {
            return Err(GapError::InvalidArgument(format!("Pauli string {s:?} has invalid length")));
        }
        Ok(Self::from_axes(&axes))
    }
}

/// A real coefficient times a Pauli string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coefficient: f64, string: PauliString) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(GapError::InvalidArgument(format!(
                "coefficient {coefficient} of {string} is not finite"
            )));
        }
        Ok(Self { coefficient, string })
    }

    /// Parses `"<coeff> <axes>"`, e.g. `"-0.5 XXII"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let (Some(c), Some(a), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(GapError::InvalidArgument(format!("expected '<coeff> <axes>', got {s:?}")));
        };
        let c = c.replace('\u{2212}', "-");
        let coefficient: f64 = c
            .parse()
            .map_err(|_| GapError::InvalidArgument(format!("bad coefficient {c:?}")))?;
        Self::new(coefficient, a.parse()?)
    }

    pub fn axes(&self) -> Vec<Pauli> {
        self.string.axes()
    }

    pub fn n_qubits(&self) -> usize {
        self.string.n_qubits()
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} {}", self.coefficient, self.string)
    }
}

/// Canonical real combination of Pauli strings on a fixed register.
///
/// Construction merges equal strings (first occurrence keeps its position)
/// and drops coefficients below [`MERGE_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_PAULI_QUBITS {
            return Err(GapError::InvalidArgument(format!("qubit count {n_qubits} out of range")));
        }
        let terms: Vec<PauliTerm> = terms.into_iter().collect();
        for t in &terms {
            if t.n_qubits() != n_qubits {
                return Err(GapError::DimensionMismatch { expected: n_qubits, got: t.n_qubits() });
            }
            if !t.coefficient.is_finite() {
                return Err(GapError::InvalidArgument(format!("non-finite coefficient on {}", t.string)));
            }
        }
        Ok(Self { n_qubits, terms: merge(terms) })
    }

    pub fn zero(n_qubits: usize) -> Self {
        Self { n_qubits, terms: Vec::new() }
    }

    /// `c · I`.
    pub fn identity(n_qubits: usize, c: f64) -> Self {
        Self::new(n_qubits, [PauliTerm { coefficient: c, string: PauliString::identity(n_qubits) }])
            .expect("finite identity")
    }

    /// Single-term sum from a label such as `"XIII"`.
    pub fn from_label(coefficient: f64, label: &str) -> Result<Self> {
        let string: PauliString = label.parse()?;
        Self::new(string.n_qubits(), [PauliTerm::new(coefficient, string)?])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PauliTerm> {
        self.terms.iter()
    }

    /// Coefficient of `s`, zero when absent.
    pub fn coefficient_of(&self, s: &PauliString) -> f64 {
        self.terms.iter().find(|t| t.string == *s).map_or(0.0, |t| t.coefficient)
    }

    /// Re-merges the term list. A no-op on any value built through [`PauliSum::new`].
    pub fn canonicalize(&self) -> Self {
        Self { n_qubits: self.n_qubits, terms: merge(self.terms.clone()) }
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: merge(self.terms.iter().map(|t| PauliTerm { coefficient: a * t.coefficient, ..*t })),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &PauliSum, b: f64) -> Result<Self> {
        if other.n_qubits != self.n_qubits {
            return Err(GapError::DimensionMismatch { expected: self.n_qubits, got: other.n_qubits });
        }
        let terms = self
            .terms
            .iter()
            .map(|t| PauliTerm { coefficient: a * t.coefficient, ..*t })
            .chain(other.terms.iter().map(|t| PauliTerm { coefficient: b * t.coefficient, ..*t }));
        Ok(Self { n_qubits: self.n_qubits, terms: merge(terms) })
    }

    pub fn filter(&self, mut keep: impl FnMut(&PauliTerm) -> bool) -> Self {
        Self { n_qubits: self.n_qubits, terms: self.terms.iter().filter(|t| keep(t)).copied().collect() }
    }

    /// `Σ|c_i|`, optionally skipping the identity term.
    pub fn one_norm(&self, include_identity: bool) -> f64 {
        self.terms
            .iter()
            .filter(|t| include_identity || !t.string.is_identity())
            .map(|t| t.coefficient.abs())
            .sum()
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|t| t.string.is_diagonal())
    }

    /// Diagonal of the matrix realization, `⟨b|H|b⟩` for every basis index.
    pub fn diagonal_values(&self) -> Vec<f64> {
        let dim = 1usize << self.n_qubits;
        let diag: Vec<&PauliTerm> = self.terms.iter().filter(|t| t.string.is_diagonal()).collect();
        (0..dim)
            .map(|b| diag.iter().map(|t| t.coefficient * t.string.phase_on(b).re).sum())
            .collect()
    }

    /// Dense `2^L × 2^L` realization `Σ c_i ⊗_j σ^{i_j}`.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let max = max_dense_qubits();
        if self.n_qubits > max {
            return Err(GapError::DenseLimit { n: self.n_qubits, max });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for t in &self.terms {
            let x = t.string.x_mask() as usize;
            for col in 0..dim {
                m[(col ^ x, col)] += t.string.phase_on(col) * t.coefficient;
            }
        }
        Ok(m)
    }

    /// `O|ψ⟩` as a raw amplitude vector (not normalized).
    pub fn apply(&self, psi: &StateVector) -> Result<Vec<Complex64>> {
        self.check_state(psi)?;
        let amps = psi.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for t in &self.terms {
            let x = t.string.x_mask() as usize;
            for (b, a) in amps.iter().enumerate() {
                out[b ^ x] += t.string.phase_on(b) * t.coefficient * a;
            }
        }
        Ok(out)
    }

    fn check_state(&self, psi: &StateVector) -> Result<()> {
        if psi.n_qubits() != self.n_qubits {
            return Err(GapError::DimensionMismatch { expected: self.n_qubits, got: psi.n_qubits() });
        }
        Ok(())
    }

    /// Parses the line-oriented text format (`<coeff> <axes>` per line, `#` comments).
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut n = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let term = PauliTerm::parse(line).map_err(|e| GapError::Parse { line: i + 1, msg: e.to_string() })?;
            match n {
                None => n = Some(term.n_qubits()),
                Some(n) if n != term.n_qubits() => {
                    return Err(GapError::Parse {
                        line: i + 1,
                        msg: format!("term has {} qubits, expected {n}", term.n_qubits()),
                    })
                }
                _ => {}
            }
            terms.push(term);
        }
        let n = n.ok_or(GapError::Parse { line: 0, msg: "no terms".into() })?;
        Self::new(n, terms)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for t in &self.terms {
            s.push_str(&format!("{:.17e} {}\n", t.coefficient, t.string));
        }
        s
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·{}", t.coefficient, t.string)?;
        }
        Ok(())
    }
}

fn merge(terms: impl IntoIterator<Item = PauliTerm>) -> Vec<PauliTerm> {
    let mut out: Vec<PauliTerm> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for t in terms {
        match index.get(&t.string) {
            Some(&i) => {
                let slot: &mut PauliTerm = &mut out[i];
                slot.coefficient += t.coefficient;
            }
            None => {
                index.insert(t.string, out.len());
                out.push(t);
            }
        }
    }
    out.retain(|t| t.coefficient.abs() >= MERGE_TOLERANCE);
    out
}

/// `Re⟨ψ|O|ψ⟩`.
pub fn expectation(o: &PauliSum, psi: &StateVector) -> Result<f64> {
    let norm = psi.norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(GapError::NotNormalized(norm));
    }
    let v = matrix_element(o, psi, psi)?;
    let scale = o.one_norm(true).max(1.0);
    debug_assert!(v.im.abs() < 1e-10 * scale, "imaginary residual {} in expectation", v.im);
    Ok(v.re)
}

/// `Re⟨ψ|P|ψ⟩` for a bare string, with no normalization check.
pub fn string_expectation(p: &PauliString, psi: &StateVector) -> f64 {
    let x = p.x_mask() as usize;
    let a = psi.amplitudes();
    a.iter().enumerate().map(|(b, v)| (a[b ^ x].conj() * p.phase_on(b) * v).re).sum()
}

/// `⟨bra|O|ket⟩`.
pub fn matrix_element(o: &PauliSum, bra: &StateVector, ket: &StateVector) -> Result<Complex64> {
    o.check_state(bra)?;
    o.check_state(ket)?;
    let b_amps = bra.amplitudes();
    let k_amps = ket.amplitudes();
    let mut total = Complex64::new(0.0, 0.0);
    for t in o.terms() {
        let x = t.string.x_mask() as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, a) in k_amps.iter().enumerate() {
            acc += b_amps[b ^ x].conj() * t.string.phase_on(b) * a;
        }
        total += acc * t.coefficient;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_z_is_diag() {
        let m = PauliSum::from_label(1.0, "Z").unwrap().to_dense().unwrap();
        assert_eq!(m[(0, 0)], c(1.0, 0.0));
        assert_eq!(m[(1, 1)], c(-1.0, 0.0));
        assert_eq!(m[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn half_xx_is_antidiagonal() {
        let m = PauliSum::from_label(0.5, "XX").unwrap().to_dense().unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let want = if r + col == 3 { 0.5 } else { 0.0 };
                assert_eq!(m[(r, col)], c(want, 0.0));
            }
        }
    }

    #[test]
    fn y_matrix_matches_convention() {
        let m = PauliSum::from_label(1.0, "Y").unwrap().to_dense().unwrap();
        assert_eq!(m[(0, 1)], c(0.0, -1.0));
        assert_eq!(m[(1, 0)], c(0.0, 1.0));
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        let s: PauliString = "XIII".parse().unwrap();
        assert_eq!(s.x_mask(), 0b1000);
        assert_eq!(s.get(0), Pauli::X);
        assert_eq!(s.support(), vec![0]);
    }

    #[test]
    fn merge_and_drop() {
        let a: PauliString = "XZ".parse().unwrap();
        let b: PauliString = "ZZ".parse().unwrap();
        let s = PauliSum::new(
            2,
            [
                PauliTerm::new(0.5, a).unwrap(),
                PauliTerm::new(1.0, b).unwrap(),
                PauliTerm::new(0.25, a).unwrap(),
                PauliTerm::new(-1.0, b).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms()[0].coefficient, 0.75);
    }

    #[test]
    fn text_round_trip_and_unicode_minus() {
        let s = PauliSum::parse_text("# test\n\u{2212}0.5 XXII\n0.25 IZZI # trailing\n\n").unwrap();
        assert_eq!(s.n_qubits(), 4);
        assert_eq!(s.terms()[0].coefficient, -0.5);
        let back = PauliSum::parse_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = PauliSum::parse_text("1.0 XX\n2.0 XXX\n").unwrap_err();
        assert!(matches!(err, GapError::Parse { line: 2, .. }));
        assert!(PauliSum::parse_text("1.0 XQ").is_err());
        assert!(PauliSum::parse_text("nan XX").is_err());
    }

    #[test]
    fn dense_limit() {
        let s = PauliSum::from_label(1.0, &"Z".repeat(DEFAULT_MAX_DENSE_QUBITS + 1)).unwrap();
        if max_dense_qubits() == DEFAULT_MAX_DENSE_QUBITS {
            assert!(matches!(s.to_dense(), Err(GapError::DenseLimit { .. })));
        }
    }

    #[test]
    fn expectation_on_plus() {
        let plus = StateVector::uniform(1);
        let x = PauliSum::from_label(1.0, "X").unwrap();
        let z = PauliSum::from_label(1.0, "Z").unwrap();
        assert_abs_diff_eq!(expectation(&x, &plus).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(expectation(&z, &plus).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn expectation_rejects_unnormalized() {
        let psi = StateVector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let x = PauliSum::from_label(1.0, "X").unwrap();
        assert!(matches!(expectation(&x, &psi), Err(GapError::NotNormalized(_))));
        let two = StateVector::basis(2, 0);
        assert!(matches!(expectation(&x, &two), Err(GapError::DimensionMismatch { .. })));
    }

    #[test]
    fn matrix_element_x_between_basis_states() {
        let x = PauliSum::from_label(1.0, "X").unwrap();
        let v = matrix_element(&x, &StateVector::basis(1, 0), &StateVector::basis(1, 1)).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    #[test]
    fn odd_x_string_connects_ghz_pair() {
        // |Φ±⟩ = (|+⟩^L ± |−⟩^L)/√2
        let l = 4;
        let dim = 1 << l;
        let plus: Vec<Complex64> = vec![c(0.25, 0.0); dim];
        let minus: Vec<Complex64> = (0..dim)
            .map(|b: usize| c(if b.count_ones() % 2 == 0 { 0.25 } else { -0.25 }, 0.0))
            .collect();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi_p = StateVector::from_amplitudes(plus.iter().zip(&minus).map(|(a, b)| (a + b) * s).collect()).unwrap();
        let phi_m = StateVector::from_amplitudes(plus.iter().zip(&minus).map(|(a, b)| (a - b) * s).collect()).unwrap();
        let o = PauliSum::from_label(1.0, "XXXI").unwrap();
        let v = matrix_element(&o, &phi_p, &phi_m).unwrap();
        assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
        let even = PauliSum::from_label(1.0, "XXII").unwrap();
        assert_abs_diff_eq!(matrix_element(&even, &phi_p, &phi_m).unwrap().norm(), 0.0, epsilon = 1e-12);
    }
}
