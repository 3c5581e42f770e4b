//! Dense statevectors and the in-place kernels shared with the density-matrix
//! backend.
//!
//! Kernels work on a raw amplitude slice over `n` qubits so that a density
//! matrix stored as a `2n`-qubit vector can reuse them (row qubit `k` is
//! register qubit `k`, column qubit `k` is register qubit `n + k`).

use num_complex::Complex64;

use crate::error::{GapError, Result};
use crate::pauli::PauliString;

/// Largest register the noiseless statevector path accepts.
pub const MAX_STATE_QUBITS: usize = 24;

pub type Matrix2 = [[Complex64; 2]; 2];
pub type Matrix4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn check_state_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(GapError::InvalidArgument("state needs at least one qubit".into()));
    }
    if n > MAX_STATE_QUBITS {
        return Err(GapError::StateLimit { n, max: MAX_STATE_QUBITS });
    }
    Ok(())
}

/// Amplitudes over `2^n` computational basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|b⟩`. Panics when `n` exceeds [`MAX_STATE_QUBITS`] or `b` is out of range.
    pub fn basis(n: usize, b: usize) -> Self {
        check_state_size(n).expect("state size");
        let dim = 1usize << n;
        assert!(b < dim, "basis index {b} out of range for {n} qubits");
        let mut amps = vec![ZERO; dim];
        amps[b] = ONE;
        Self { n_qubits: n, amps }
    }

    pub fn zero(n: usize) -> Self {
        Self::basis(n, 0)
    }

    /// `|+⟩^⊗n`.
    pub fn uniform(n: usize) -> Self {
        check_state_size(n).expect("state size");
        let dim = 1usize << n;
        let a = (dim as f64).sqrt().recip();
        Self { n_qubits: n, amps: vec![Complex64::new(a, 0.0); dim] }
    }

    /// Wraps raw amplitudes; the length must be a power of two. No normalization is applied.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(GapError::InvalidArgument(format!("amplitude count {dim} is not a power of two ≥ 2")));
        }
        let n = dim.trailing_zeros() as usize;
        check_state_size(n)?;
        Ok(Self { n_qubits: n, amps })
    }

    /// Real amplitudes, normalized.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        let mut s = Self::from_amplitudes(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())?;
        s.normalize()?;
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(GapError::NotNormalized(n));
        }
        let s = n.sqrt().recip();
        self.amps.iter_mut().for_each(|a| *a *= s);
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(GapError::DimensionMismatch { expected: self.n_qubits, got: other.n_qubits });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Probability that measuring every qubit yields `b`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub(crate) fn check_qubit(&self, k: usize) -> Result<()> {
        if k >= self.n_qubits {
            return Err(GapError::QubitOutOfRange { index: k, n_qubits: self.n_qubits });
        }
        Ok(())
    }

    /// Applies a 2×2 unitary to qubit `k`.
    pub fn apply_1q(&mut self, k: usize, m: &Matrix2) -> Result<()> {
        self.check_qubit(k)?;
        kernel_1q(&mut self.amps, self.n_qubits, k, m);
        Ok(())
    }

    /// Applies a 4×4 unitary to qubits `(a, b)`; `a` is the high bit of the matrix index.
    pub fn apply_2q(&mut self, a: usize, b: usize, m: &Matrix4) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(GapError::InvalidArgument(format!("two-qubit gate on repeated qubit {a}")));
        }
        kernel_2q(&mut self.amps, self.n_qubits, a, b, m);
        Ok(())
    }

    /// Applies `exp(−i·angle·P)` directly on amplitudes.
    pub fn apply_pauli_exponential(&mut self, p: &PauliString, angle: f64) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(GapError::DimensionMismatch { expected: self.n_qubits, got: p.n_qubits() });
        }
        kernel_pauli_exp(&mut self.amps, p, angle);
        Ok(())
    }

    /// Applies the Pauli string itself, `|ψ⟩ → P|ψ⟩`.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(GapError::DimensionMismatch { expected: self.n_qubits, got: p.n_qubits() });
        }
        kernel_pauli(&mut self.amps, p);
        Ok(())
    }
}

#[inline]
fn bitpos(n: usize, k: usize) -> usize {
    n - 1 - k
}

pub(crate) fn kernel_1q(amps: &mut [Complex64], n: usize, k: usize, m: &Matrix2) {
    let stride = 1usize << bitpos(n, k);
    for chunk in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = chunk.split_at_mut(stride);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x0, x1) = (*a0, *a1);
            *a0 = m[0][0] * x0 + m[0][1] * x1;
            *a1 = m[1][0] * x0 + m[1][1] * x1;
        }
    }
}

/// Diagonal single-qubit gate; cheaper than the general kernel.
pub(crate) fn kernel_1q_diag(amps: &mut [Complex64], n: usize, k: usize, d0: Complex64, d1: Complex64) {
    let stride = 1usize << bitpos(n, k);
    for chunk in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = chunk.split_at_mut(stride);
        lo.iter_mut().for_each(|a| *a *= d0);
        hi.iter_mut().for_each(|a| *a *= d1);
    }
}

pub(crate) fn kernel_2q(amps: &mut [Complex64], n: usize, a: usize, b: usize, m: &Matrix4) {
    let ba = 1usize << bitpos(n, a);
    let bb = 1usize << bitpos(n, b);
    let dim = amps.len();
    for base in 0..dim {
        if base & (ba | bb) != 0 {
            continue;
        }
        let idx = [base, base | bb, base | ba, base | ba | bb];
        let x = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (r, &i) in idx.iter().enumerate() {
            amps[i] = m[r][0] * x[0] + m[r][1] * x[1] + m[r][2] * x[2] + m[r][3] * x[3];
        }
    }
}

/// `exp(−iθP) = cos θ·I − i sin θ·P`, applied pairwise on `(b, b ⊕ x)`.
pub(crate) fn kernel_pauli_exp(amps: &mut [Complex64], p: &PauliString, angle: f64) {
    let (s, c) = angle.sin_cos();
    let x = p.x_mask() as usize;
    let mis = Complex64::new(0.0, -s);
    if x == 0 {
        let plus = Complex64::new(c, -s);
        let minus = Complex64::new(c, s);
        let z = p.z_mask() as usize;
        for (b, a) in amps.iter_mut().enumerate() {
            *a *= if (b & z).count_ones() % 2 == 0 { plus } else { minus };
        }
        return;
    }
    let pivot = 1usize << (usize::BITS - 1 - x.leading_zeros());
    for b in 0..amps.len() {
        if b & pivot != 0 {
            continue;
        }
        let bx = b ^ x;
        let (a0, a1) = (amps[b], amps[bx]);
        // P|b⟩ = φ(b)|b⊕x⟩
        amps[b] = a0 * c + mis * p.phase_on(bx) * a1;
        amps[bx] = a1 * c + mis * p.phase_on(b) * a0;
    }
}

pub(crate) fn kernel_pauli(amps: &mut [Complex64], p: &PauliString) {
    let x = p.x_mask() as usize;
    if x == 0 {
        for (b, a) in amps.iter_mut().enumerate() {
            *a *= p.phase_on(b);
        }
        return;
    }
    let pivot = 1usize << (usize::BITS - 1 - x.leading_zeros());
    for b in 0..amps.len() {
        if b & pivot != 0 {
            continue;
        }
        let bx = b ^ x;
        let (a0, a1) = (amps[b], amps[bx]);
        amps[bx] = p.phase_on(b) * a0;
        amps[b] = p.phase_on(bx) * a1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliSum;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_amplitudes() {
        let s = StateVector::uniform(4);
        assert!(s.amplitudes().iter().all(|a| (a.re - 0.25).abs() < 1e-15 && a.im == 0.0));
        let one = StateVector::uniform(1);
        assert_abs_diff_eq!(one.amplitudes()[1].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn exp_x_half_pi() {
        let mut s = StateVector::zero(1);
        s.apply_pauli_exponential(&"X".parse().unwrap(), std::f64::consts::FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].im, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn exp_zz_on_eigenstate() {
        let mut s = StateVector::zero(2);
        s.apply_pauli_exponential(&"ZZ".parse().unwrap(), 0.3).unwrap();
        let want = Complex64::from_polar(1.0, -0.3);
        assert_abs_diff_eq!((s.amplitudes()[0] - want).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn apply_pauli_matches_dense() {
        let p: PauliString = "YXZI".parse().unwrap();
        let mut s = StateVector::from_real(&(0..16).map(|i| (i as f64 * 0.37).sin()).collect::<Vec<_>>()).unwrap();
        let dense = PauliSum::from_label(1.0, "YXZI").unwrap().to_dense().unwrap();
        let want = &dense * nalgebra::DVector::from_column_slice(s.amplitudes());
        s.apply_pauli(&p).unwrap();
        for (a, b) in s.amplitudes().iter().zip(want.iter()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn size_limits() {
        assert!(matches!(check_state_size(MAX_STATE_QUBITS + 1), Err(GapError::StateLimit { .. })));
        assert!(StateVector::from_amplitudes(vec![ONE; 3]).is_err());
        let mut s = StateVector::zero(2);
        assert!(matches!(s.apply_1q(2, &[[ONE, ZERO], [ZERO, ONE]]), Err(GapError::QubitOutOfRange { .. })));
    }
}
