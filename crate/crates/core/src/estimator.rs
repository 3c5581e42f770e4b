//! Time grids, series acquisition, shot sampling, and frequency estimation.
//!
//! The signal of a two-level superposition is
//!
//! ```text
//! ⟨O(t)⟩ = c + A cos(ΔE·t + θ)
//! ```
//!
//! `fit_sinusoid` scans ω over the bounds, solving the weighted linear problem
//! in `(c, A cos θ, −A sin θ)` at each candidate, then refines all four
//! parameters with Levenberg–Marquardt.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rustfft::FftPlanner;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::circuit::TrotterStep;
use crate::error::{GapError, Result};
use crate::pauli::{expectation, PauliString, PauliSum};
use crate::rng::stream_rng;
use crate::state::StateVector;

/// Shot count per expectation value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shots {
    Exact,
    Finite(u64),
}

impl Shots {
    pub fn is_exact(&self) -> bool {
        matches!(self, Shots::Exact)
    }
}

impl fmt::Display for Shots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shots::Exact => f.write_str("exact"),
            Shots::Finite(n) => write!(f, "{n}"),
        }
    }
}

impl std::str::FromStr for Shots {
    type Err = GapError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(Shots::Exact),
            t => match t.parse::<u64>() {
                Ok(n) if n >= 1 => Ok(Shots::Finite(n)),
                _ => Err(GapError::InvalidArgument(format!("shots must be a positive integer or \"exact\", got {s:?}"))),
            },
        }
    }
}

impl Serialize for Shots {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Shots::Exact => s.serialize_str("exact"),
            Shots::Finite(n) => s.serialize_u64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for Shots {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Count(u64),
            Label(String),
        }
        match Repr::deserialize(d)? {
            Repr::Count(0) => Err(serde::de::Error::custom("shots must be ≥ 1")),
            Repr::Count(n) => Ok(Shots::Finite(n)),
            Repr::Label(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Sampled `⟨O(t_r)⟩` with one-sigma uncertainties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub shots: Shots,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, sigmas: Vec<f64>, shots: Shots) -> Result<Self> {
        if times.len() != values.len() || times.len() != sigmas.len() {
            return Err(GapError::InvalidArgument(format!(
                "series lengths differ: {} times, {} values, {} sigmas",
                times.len(),
                values.len(),
                sigmas.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(GapError::InvalidArgument("times must be strictly increasing".into()));
        }
        if times.iter().chain(&values).any(|x| !x.is_finite()) || sigmas.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
            return Err(GapError::InvalidArgument("series contains non-finite values or negative sigmas".into()));
        }
        Ok(Self { times, values, sigmas, shots })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Keeps only the listed node indices.
    pub fn subset(&self, idx: &[usize]) -> Result<Self> {
        let mut idx = idx.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.len()) {
            return Err(GapError::InvalidArgument(format!("node index {bad} out of range ({} nodes)", self.len())));
        }
        Self::new(
            idx.iter().map(|&i| self.times[i]).collect(),
            idx.iter().map(|&i| self.values[i]).collect(),
            idx.iter().map(|&i| self.sigmas[i]).collect(),
            self.shots,
        )
    }
}

/// `t_r = (t_max/2)(1 − cos((2r−1)π/(2R)))`, r = 1..R.
pub fn chebyshev_times(r: usize, t_max: f64) -> Result<Vec<f64>> {
    if r == 0 || !(t_max > 0.0) || !t_max.is_finite() {
        return Err(GapError::InvalidArgument(format!("need R ≥ 1 and t_max > 0, got R={r}, t_max={t_max}")));
    }
    let rf = r as f64;
    Ok((1..=r).map(|k| 0.5 * t_max * (1.0 - ((2 * k - 1) as f64 * PI / (2.0 * rf)).cos())).collect())
}

/// `[dt, 2dt, …, R·dt]`.
pub fn uniform_times(r: usize, dt: f64) -> Result<Vec<f64>> {
    if r == 0 || !(dt > 0.0) || !dt.is_finite() {
        return Err(GapError::InvalidArgument(format!("need R ≥ 1 and dt > 0, got R={r}, dt={dt}")));
    }
    Ok((1..=r).map(|k| k as f64 * dt).collect())
}

/// Draws `k ~ Binomial(S, p₊)` and returns `((2k − S)/S, σ)` with
/// `σ = √(max(1 − est², 1/S²)/S)`.
pub fn sample_shots_with<R: Rng + ?Sized>(p_plus: f64, shots: u64, rng: &mut R) -> (f64, f64) {
    assert!(shots >= 1, "shots must be positive");
    let p = p_plus.clamp(0.0, 1.0);
    let k = Binomial::new(shots, p).expect("valid binomial").sample(rng);
    let s = shots as f64;
    let est = (2.0 * k as f64 - s) / s;
    let sigma = ((1.0 - est * est).max(1.0 / (s * s)) / s).sqrt();
    (est, sigma)
}

pub fn sample_shots(p_plus: f64, shots: u64, seed: u64) -> (f64, f64) {
    sample_shots_with(p_plus, shots, &mut stream_rng(seed, &[]))
}

/// The single `±1`-valued string behind a sampleable observable, with its sign.
pub fn sampleable_string(o: &PauliSum) -> Result<(PauliString, f64)> {
    match o.terms() {
        [t] if (t.coefficient.abs() - 1.0).abs() < 1e-12 && !t.string.is_identity() => {
            Ok((t.string, t.coefficient.signum()))
        }
        _ => Err(GapError::ObservableNotSampleable),
    }
}

/// Turns exact expectations into a series, sampling shots when finite.
/// Node `r` draws from the stream keyed `(seed, key…, r)`.
pub fn sample_series(times: &[f64], exact: &[f64], o: &PauliSum, shots: Shots, seed: u64, key: &[u64]) -> Result<TimeSeries> {
    match shots {
        Shots::Exact => TimeSeries::new(times.to_vec(), exact.to_vec(), vec![0.0; exact.len()], Shots::Exact),
        Shots::Finite(s) => {
            let (_, sign) = sampleable_string(o)?;
            let mut values = Vec::with_capacity(exact.len());
            let mut sigmas = Vec::with_capacity(exact.len());
            for (r, &m) in exact.iter().enumerate() {
                let mut k = key.to_vec();
                k.push(r as u64);
                // outcome +1 of the bare string has probability (1 + ⟨P⟩)/2
                let p_plus = 0.5 * (1.0 + sign * m);
                let (est, sig) = sample_shots_with(p_plus, s, &mut stream_rng(seed, &k));
                values.push(sign * est);
                sigmas.push(sig);
            }
            TimeSeries::new(times.to_vec(), values, sigmas, shots)
        }
    }
}

/// Evolves `psi` through the nodes with `steps_per_node` Trotter steps of `h`
/// between consecutive nodes (starting from t = 0) and records `⟨O⟩` at each.
pub fn evolve_and_measure(psi: &StateVector, h: &PauliSum, o: &PauliSum, times: &[f64], steps_per_node: usize) -> Result<Vec<f64>> {
    if steps_per_node == 0 {
        return Err(GapError::InvalidArgument("steps_per_node must be ≥ 1".into()));
    }
    let step = TrotterStep::new(h);
    let mut state = psi.clone();
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let dt = (t - prev) / steps_per_node as f64;
        for _ in 0..steps_per_node {
            step.apply(&mut state, dt)?;
        }
        prev = t;
        out.push(expectation(o, &state)?);
    }
    Ok(out)
}

/// Noiseless statevector acquisition of the whole series.
pub fn acquire_series(
    psi: &StateVector,
    h: &PauliSum,
    o: &PauliSum,
    times: &[f64],
    steps_per_node: usize,
    shots: Shots,
    seed: u64,
) -> Result<TimeSeries> {
    if !shots.is_exact() {
        sampleable_string(o)?;
    }
    let exact = evolve_and_measure(psi, h, o, times, steps_per_node)?;
    sample_series(times, &exact, o, shots, seed, &[])
}

/// Parameters ordered `(offset, amplitude, frequency, phase)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub offset: f64,
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
    pub covariance: [[f64; 4]; 4],
    pub gap_std: f64,
    pub residual_rms: f64,
    /// False when local refinement failed and the scan optimum is returned.
    pub refined: bool,
}

impl FitResult {
    pub fn eval(&self, t: f64) -> f64 {
        model(&[self.offset, self.amplitude, self.frequency, self.phase], t)
    }
}

fn model(p: &[f64; 4], t: f64) -> f64 {
    p[0] + p[1] * (p[2] * t + p[3]).cos()
}

struct Prepared<'a> {
    t: &'a [f64],
    y: &'a [f64],
    w: Vec<f64>,
}

impl Prepared<'_> {
    fn chi2(&self, p: &[f64; 4]) -> f64 {
        self.t.iter().zip(self.y).zip(&self.w).map(|((&t, &y), &w)| w * (y - model(p, t)).powi(2)).sum()
    }

    /// Weighted linear solve at fixed ω; returns (chi², c, A, θ).
    fn profile(&self, omega: f64) -> Option<(f64, [f64; 4])> {
        let mut a = Matrix3::<f64>::zeros();
        let mut b = Vector3::<f64>::zeros();
        for ((&t, &y), &w) in self.t.iter().zip(self.y).zip(&self.w) {
            let row = Vector3::new(1.0, (omega * t).cos(), (omega * t).sin());
            a += w * row * row.transpose();
            b += w * y * row;
        }
        let x = a.cholesky()?.solve(&b);
        if !x.iter().all(|v| v.is_finite()) {
            return None;
        }
        // c + u cos ωt + v sin ωt = c + A cos(ωt + θ) with A = |(u, v)|, θ = atan2(−v, u)
        let amp = x[1].hypot(x[2]);
        let p = [x[0], amp, omega, (-x[2]).atan2(x[1])];
        Some((self.chi2(&p), p))
    }

    fn jtj(&self, p: &[f64; 4]) -> (Matrix4<f64>, Vector4<f64>) {
        let mut jtj = Matrix4::<f64>::zeros();
        let mut jtr = Vector4::<f64>::zeros();
        for ((&t, &y), &w) in self.t.iter().zip(self.y).zip(&self.w) {
            let arg = p[2] * t + p[3];
            let (s, c) = arg.sin_cos();
            let j = Vector4::new(1.0, c, -p[1] * t * s, -p[1] * s);
            let r = y - model(p, t);
            jtj += w * j * j.transpose();
            jtr += w * r * j;
        }
        (jtj, jtr)
    }
}

const LM_MAX_ITER: usize = 200;

fn levenberg_marquardt(data: &Prepared<'_>, start: [f64; 4]) -> Option<[f64; 4]> {
    let mut p = start;
    let mut chi = data.chi2(&p);
    let mut lambda = 1e-3;
    for _ in 0..LM_MAX_ITER {
        let (jtj, jtr) = data.jtj(&p);
        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj;
            for k in 0..4 {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-300);
            }
            let Some(delta) = a.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let trial = [p[0] + delta[0], p[1] + delta[1], p[2] + delta[2], p[3] + delta[3]];
            let tc = data.chi2(&trial);
            if tc.is_finite() && tc <= chi {
                let small = delta.iter().zip(&trial).all(|(d, x)| d.abs() <= 1e-14 * x.abs().max(1e-8));
                let flat = chi - tc <= 1e-15 * chi.max(1e-300);
                p = trial;
                chi = tc;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if small || flat {
                    return Some(p);
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e16 {
                break;
            }
        }
        if !improved {
            // no downhill step left: at a minimum to working precision
            return Some(p);
        }
    }
    None
}

/// Weighted sinusoid fit with `ω` searched over `[lo, hi]`.
pub fn fit_sinusoid(series: &TimeSeries, freq_bounds: (f64, f64)) -> Result<FitResult> {
    let n = series.len();
    if n < 5 {
        return Err(GapError::InvalidArgument(format!("fit needs at least 5 points, got {n}")));
    }
    let (lo, hi) = freq_bounds;
    if !(lo >= 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(GapError::InvalidArgument(format!("invalid frequency bounds [{lo}, {hi}]")));
    }
    let y = &series.values;
    let (ymin, ymax) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let mean = y.iter().sum::<f64>() / n as f64;
    if ymax - ymin <= 1e-12 * mean.abs().max(1.0) {
        return Err(GapError::FrequencyUndefined);
    }

    let smax = series.sigmas.iter().fold(0.0f64, |a, &s| a.max(s));
    let w: Vec<f64> = if smax > 0.0 {
        let floor = (1e-3 * smax).max(1e-12);
        series.sigmas.iter().map(|&s| 1.0 / s.max(floor).powi(2)).collect()
    } else {
        vec![1.0; n]
    };
    let data = Prepared { t: &series.times, y, w };

    let span = series.times[n - 1] - series.times[0].min(0.0);
    let step = PI / (16.0 * span.max(1e-12));
    let count = (((hi - lo) / step).ceil() as usize).clamp(64, 200_000);
    let dw = (hi - lo) / count as f64;
    let mut best: Option<(f64, [f64; 4])> = None;
    for k in 0..=count {
        let omega = lo + k as f64 * dw;
        if omega <= 1e-9 * hi {
            continue;
        }
        if let Some((chi, p)) = data.profile(omega) {
            if best.as_ref().is_none_or(|(bc, _)| chi < *bc) {
                best = Some((chi, p));
            }
        }
    }
    let (_, start) = best.ok_or(GapError::FrequencyUndefined)?;

    let (mut p, mut refined) = match levenberg_marquardt(&data, start) {
        Some(p) if p.iter().all(|x| x.is_finite()) => (p, true),
        _ => (start, false),
    };
    if refined && (p[2].abs() < lo - dw || p[2].abs() > hi + dw) {
        log::debug!("refined frequency {} left [{lo}, {hi}]; keeping scan optimum", p[2]);
        p = start;
        refined = false;
    }

    let (jtj, _) = data.jtj(&p);
    let chi = data.chi2(&p);
    let mut cov = jtj.try_inverse().unwrap_or_else(|| Matrix4::from_element(f64::NAN));
    if series.shots.is_exact() || smax == 0.0 {
        cov *= chi / (n as f64 - 4.0);
    }

    // canonical signs: A ≥ 0, ω ≥ 0, θ ∈ [0, 2π)
    let mut flip = [1.0f64; 4];
    if p[1] < 0.0 {
        p[1] = -p[1];
        p[3] += PI;
        flip[1] = -1.0;
    }
    if p[2] < 0.0 {
        p[2] = -p[2];
        p[3] = -p[3];
        flip[2] = -flip[2];
        flip[3] = -flip[3];
    }
    p[3] = p[3].rem_euclid(TAU);
    if p[3] >= TAU {
        p[3] = 0.0;
    }
    let mut covariance = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            covariance[a][b] = cov[(a, b)] * flip[a] * flip[b];
        }
    }
    let rss: f64 = series.times.iter().zip(y).map(|(&t, &v)| (v - model(&p, t)).powi(2)).sum();
    Ok(FitResult {
        offset: p[0],
        amplitude: p[1],
        frequency: p[2],
        phase: p[3],
        gap_std: covariance[2][2].max(0.0).sqrt(),
        covariance,
        residual_rms: (rss / n as f64).sqrt(),
        refined,
    })
}

/// Peak non-DC DFT bin of a uniformly sampled series: `(frequency, bin width)`.
pub fn dft_estimate(series: &TimeSeries) -> Result<(f64, f64)> {
    let n = series.len();
    if n < 4 {
        return Err(GapError::InvalidArgument(format!("DFT needs at least 4 points, got {n}")));
    }
    let t = &series.times;
    let dt = (t[n - 1] - t[0]) / (n - 1) as f64;
    if t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.max(1e-300)) {
        return Err(GapError::NonUniformGrid);
    }
    let mean = series.values.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<rustfft::num_complex::Complex<f64>> =
        series.values.iter().map(|&v| rustfft::num_complex::Complex::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let (k, peak) = (1..=n / 2).map(|k| (k, buf[k].norm())).fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
    if peak <= 1e-12 * (n as f64) {
        return Err(GapError::FrequencyUndefined);
    }
    let resolution = TAU / (n as f64 * dt);
    Ok((k as f64 * resolution, resolution))
}
