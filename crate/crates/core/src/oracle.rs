//! Dense exact diagonalization: energies, eigenvectors, exact gaps, exact
//! expectation curves and observable amplitudes.
//!
//! Degenerate clusters (spread below `1e−9·‖H‖`) can be resolved against a
//! symmetry operator `S` that commutes with `H`: inside each cluster the basis
//! diagonalizes `S`, ordered by descending eigenvalue of `S`. For the Ising
//! model with `S = Z^⊗L` this fixes `Ω₀ = Φ⁺`, `Ω₁ = Φ⁻` at zero field.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{GapError, Result};
use crate::estimator::{Shots, TimeSeries};
use crate::pauli::{matrix_element, max_dense_qubits, PauliSum};
use crate::state::StateVector;

/// Relative tolerance for grouping degenerate eigenvalues.
pub const DEGENERACY_RTOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SpectrumSlice {
    pub energies: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
    pub degeneracy_tol: f64,
}

impl SpectrumSlice {
    pub fn gap(&self, i: usize, j: usize) -> f64 {
        (self.energies[i] - self.energies[j]).abs()
    }

    /// Indices whose energy lies within `degeneracy_tol` of level `i`.
    pub fn cluster(&self, i: usize) -> Vec<usize> {
        let e = self.energies[i];
        (0..self.energies.len()).filter(|&k| (self.energies[k] - e).abs() <= self.degeneracy_tol).collect()
    }
}

fn check_dense(h: &PauliSum) -> Result<()> {
    let max = max_dense_qubits();
    if h.n_qubits() > max {
        return Err(GapError::DenseLimit { n: h.n_qubits(), max });
    }
    Ok(())
}

fn is_real(m: &DMatrix<Complex64>) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// All eigenvalues, ascending.
pub fn eigenvalues(h: &PauliSum) -> Result<Vec<f64>> {
    check_dense(h)?;
    let m = h.to_dense()?;
    let mut e: Vec<f64> = if is_real(&m) {
        m.map(|z| z.re).symmetric_eigenvalues().iter().copied().collect()
    } else {
        m.symmetric_eigenvalues().iter().copied().collect()
    };
    e.sort_by(f64::total_cmp);
    Ok(e)
}

/// Full eigendecomposition as (ascending energies, column eigenvectors).
fn full_eigen(h: &PauliSum) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    check_dense(h)?;
    let m = h.to_dense()?;
    let (vals, vecs): (DVector<f64>, DMatrix<Complex64>) = if is_real(&m) {
        let eig = SymmetricEigen::new(m.map(|z| z.re));
        (eig.eigenvalues, eig.eigenvectors.map(|x| Complex64::new(x, 0.0)))
    } else {
        let eig = SymmetricEigen::new(m);
        (eig.eigenvalues, eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
    let energies = order.iter().map(|&k| vals[k]).collect();
    let mut sorted = DMatrix::<Complex64>::zeros(vecs.nrows(), vecs.ncols());
    for (dst, &src) in order.iter().enumerate() {
        sorted.set_column(dst, &vecs.column(src));
    }
    Ok((energies, sorted))
}

/// Rotates so the largest-modulus amplitude (first on ties) is real positive.
fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (k, a) in v.iter().enumerate() {
        let n = a.norm();
        if n > best_norm + 1e-12 {
            best = k;
            best_norm = n;
        }
    }
    if best_norm > 0.0 {
        let ph = v[best].conj() / best_norm;
        v.iter_mut().for_each(|a| *a *= ph);
    }
}

/// Lowest `k` eigenpairs.
pub fn diagonalize(h: &PauliSum, k: usize) -> Result<SpectrumSlice> {
    diagonalize_resolved(h, k, None)
}

/// Lowest `k` eigenpairs, with degenerate clusters resolved against `symmetry`.
pub fn diagonalize_resolved(h: &PauliSum, k: usize, symmetry: Option<&PauliSum>) -> Result<SpectrumSlice> {
    let (energies, mut vecs) = full_eigen(h)?;
    let dim = energies.len();
    let k = k.min(dim);
    let scale = energies.iter().fold(0.0f64, |a, e| a.max(e.abs())).max(1e-300);
    let tol = DEGENERACY_RTOL * scale;

    if let Some(sym) = symmetry {
        if sym.n_qubits() != h.n_qubits() {
            return Err(GapError::DimensionMismatch { expected: h.n_qubits(), got: sym.n_qubits() });
        }
        let mut start = 0;
        while start < k {
            let mut end = start + 1;
            while end < dim && (energies[end] - energies[start]).abs() <= tol {
                end += 1;
            }
            if end - start > 1 {
                resolve_cluster(&mut vecs, start, end, sym)?;
            }
            start = end;
        }
    }

    let eigenvectors = (0..k)
        .map(|c| {
            let mut v: Vec<Complex64> = vecs.column(c).iter().copied().collect();
            fix_phase(&mut v);
            StateVector::from_amplitudes(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumSlice { energies: energies[..k].to_vec(), eigenvectors, degeneracy_tol: tol })
}

fn resolve_cluster(vecs: &mut DMatrix<Complex64>, start: usize, end: usize, sym: &PauliSum) -> Result<()> {
    let m = end - start;
    let cols: Vec<StateVector> = (start..end)
        .map(|c| StateVector::from_amplitudes(vecs.column(c).iter().copied().collect()))
        .collect::<Result<_>>()?;
    let mut s = DMatrix::<Complex64>::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            s[(a, b)] = matrix_element(sym, &cols[a], &cols[b])?;
        }
    }
    let eig = SymmetricEigen::new(s);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let dim = vecs.nrows();
    let mut rotated = DMatrix::<Complex64>::zeros(dim, m);
    for (dst, &src) in order.iter().enumerate() {
        for (a, col) in cols.iter().enumerate() {
            let w = eig.eigenvectors[(a, src)];
            for r in 0..dim {
                rotated[(r, dst)] += col.amplitudes()[r] * w;
            }
        }
    }
    for c in 0..m {
        vecs.set_column(start + c, &rotated.column(c));
    }
    Ok(())
}

/// `|E_i − E_j|` with ascending ordering.
pub fn exact_gap(h: &PauliSum, i: usize, j: usize) -> Result<f64> {
    let e = eigenvalues(h)?;
    let n = e.len();
    if i >= n || j >= n {
        return Err(GapError::InvalidArgument(format!("eigen-index out of range (dimension {n})")));
    }
    Ok((e[i] - e[j]).abs())
}

/// Exact time evolution through a full eigendecomposition, reusable across
/// many initial states.
#[derive(Debug, Clone)]
pub struct Propagator {
    energies: Vec<f64>,
    vecs: DMatrix<Complex64>,
    n_qubits: usize,
}

impl Propagator {
    pub fn new(h: &PauliSum) -> Result<Self> {
        let (energies, vecs) = full_eigen(h)?;
        Ok(Self { energies, vecs, n_qubits: h.n_qubits() })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `e^{−iHt}|ψ⟩`.
    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if psi.n_qubits() != self.n_qubits {
            return Err(GapError::DimensionMismatch { expected: self.n_qubits, got: psi.n_qubits() });
        }
        let coeffs = self.vecs.adjoint() * DVector::from_column_slice(psi.amplitudes());
        let phased = DVector::from_iterator(
            coeffs.len(),
            coeffs.iter().zip(&self.energies).map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t)),
        );
        StateVector::from_amplitudes((&self.vecs * phased).iter().copied().collect())
    }

    /// `⟨ψ|O(t)|ψ⟩` at each time.
    pub fn series_values(&self, o: &PauliSum, psi: &StateVector, times: &[f64]) -> Result<Vec<f64>> {
        if psi.n_qubits() != self.n_qubits {
            return Err(GapError::DimensionMismatch { expected: self.n_qubits, got: psi.n_qubits() });
        }
        let coeffs = self.vecs.adjoint() * DVector::from_column_slice(psi.amplitudes());
        times
            .iter()
            .map(|&t| {
                let phased = DVector::from_iterator(
                    coeffs.len(),
                    coeffs.iter().zip(&self.energies).map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t)),
                );
                let state = StateVector::from_amplitudes((&self.vecs * phased).iter().copied().collect())?;
                Ok(matrix_element(o, &state, &state)?.re)
            })
            .collect()
    }
}

/// `⟨ψ|e^{iHt} O e^{−iHt}|ψ⟩` by spectral decomposition, no Trotter error.
pub fn exact_series(h: &PauliSum, o: &PauliSum, psi: &StateVector, times: &[f64]) -> Result<TimeSeries> {
    let values = Propagator::new(h)?.series_values(o, psi, times)?;
    TimeSeries::new(times.to_vec(), values, vec![0.0; times.len()], Shots::Exact)
}

/// `|⟨Ω₁|O|Ω₀⟩|` along a parameter grid.
pub fn amplitude_scan<F>(family: F, o: &PauliSum, grid: &[f64], symmetry: Option<&PauliSum>) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<PauliSum>,
{
    grid.iter()
        .map(|&g| {
            let h = family(g)?;
            let spec = diagonalize_resolved(&h, 2, symmetry)?;
            let a = matrix_element(o, &spec.eigenvectors[1], &spec.eigenvectors[0])?.norm();
            Ok((g, a))
        })
        .collect()
}
