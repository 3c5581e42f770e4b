//! Sweep orchestration: one independent pipeline per sweep value.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use gapscope_core::estimator::{evolve_and_measure, sampleable_string};
use gapscope_core::noise::MAX_DENSITY_QUBITS;
use gapscope_core::pauli::max_dense_qubits;
use gapscope_core::rng::derive_seed;
use gapscope_core::{
    build_ising, build_ising_h0, chebyshev_times, diagonal_part, dft_estimate, fit_sinusoid, initial_state_diagonal,
    initial_state_ising, ising_parity, jordan_wigner, run_ap, run_program, sample_series, uniform_times, ApSchedule,
    Backend, CircuitIR, GapError, IsingSpec, Pauli, PauliString, PauliSum, PauliTerm, Propagator, Shots, StateVector,
    StepProgram, TimeSeries, TrotterStep,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{
    Estimator, ExperimentConfig, Grid, InitialState, ModelConfig, NoiseBackend, ObservableConfig, TMax, PAPER_BUDGET,
};
use crate::molecule::MoleculeIndex;

type Result<T> = std::result::Result<T, GapError>;

/// Points on the dense fitted/exact curves written for the waves plot.
const CURVE_POINTS: usize = 400;
/// Pilot passes allowed to stretch the window until it holds enough periods.
const PILOT_PASSES: usize = 3;
const PILOT_MIN_PERIODS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub sweep_value: f64,
    pub status: String,
    pub gap_est: Option<f64>,
    pub gap_std: Option<f64>,
    pub amplitude: Option<f64>,
    pub phase: Option<f64>,
    pub offset: Option<f64>,
    pub gap_exact: Option<f64>,
    pub rel_err: Option<f64>,
    pub shots: Shots,
    pub backend: String,
    pub delta_tau: Option<f64>,
    pub t_max: Option<f64>,
    pub refined: Option<bool>,
    pub residual_rms: Option<f64>,
    pub runtime_s: Option<f64>,
    pub error: Option<String>,
}

impl ResultRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub sweep_value: f64,
    pub t: f64,
    pub value: f64,
    pub sigma: f64,
    /// Whether the node entered the fit.
    pub used: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub sweep_value: f64,
    pub t: f64,
    pub fit: Option<f64>,
    pub exact: Option<f64>,
}

/// Planning decisions for one sweep point, kept for the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointInfo {
    pub sweep_value: f64,
    pub delta_tau: Option<f64>,
    pub t_max: Option<f64>,
    pub pilot_frequency: Option<f64>,
    /// `(δτ, residual/amplitude of the pilot fit)` per candidate tried.
    pub pilot_scores: Vec<(f64, Option<f64>)>,
    pub trotter_steps: Option<usize>,
    pub n_qubits: Option<usize>,
    pub runtime_s: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
    pub series: Vec<SeriesRow>,
    pub curves: Vec<CurveRow>,
    pub points: Vec<PointInfo>,
    pub warnings: Vec<String>,
    /// Native circuit of the first point, when requested and compilable.
    pub circuit: Option<std::result::Result<CircuitIR, String>>,
}

impl RunOutput {
    pub fn failed(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_ok()).count()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub dump_circuit: bool,
}

/// Everything needed to run one point, independent of backend.
pub struct Problem {
    pub h: PauliSum,
    pub h0: PauliSum,
    pub psi0: StateVector,
    pub o: PauliSum,
}

pub fn build_problem(cfg: &ExperimentConfig, x: f64, molecules: Option<&MoleculeIndex>) -> Result<Problem> {
    let (h, h0) = match &cfg.model {
        ModelConfig::Ising { topology, j1, pbc } => {
            let spec = IsingSpec { topology: *topology, j1: *j1, h3: x * j1, pbc: *pbc };
            (build_ising(&spec)?, build_ising_h0(&spec)?)
        }
        ModelConfig::Molecule { path } => {
            let ints = match molecules {
                Some(idx) => idx.load(x)?,
                None => MoleculeIndex::open(path)?.load(x)?,
            };
            let h = jordan_wigner(&ints)?;
            let h0 = diagonal_part(&h);
            (h, h0)
        }
    };
    let n = h.n_qubits();
    let (i, j) = cfg.ap.pair;
    let init = cfg.ap.initial_state.clone().unwrap_or(match cfg.model {
        ModelConfig::Ising { .. } => InitialState::PlusAll,
        ModelConfig::Molecule { .. } => InitialState::DiagonalPair,
    });
    let psi0 = match &init {
        InitialState::PlusAll => initial_state_ising(n),
        InitialState::DiagonalPair => initial_state_diagonal(&h0, i, j)?,
        InitialState::CustomFile(p) => load_state(p, n)?,
    };
    let o = match &cfg.observable {
        ObservableConfig::Label(l) => PauliSum::new(n, [PauliTerm::new(1.0, l.parse()?)?])?,
        ObservableConfig::File(p) => PauliSum::parse_text(&std::fs::read_to_string(p)?)?,
        ObservableConfig::Default => match cfg.model {
            ModelConfig::Ising { .. } => PauliSum::new(n, [PauliTerm::new(1.0, PauliString::single(n, 0, Pauli::X))?])?,
            ModelConfig::Molecule { .. } => linking_observable(&h0, i, j)?,
        },
    };
    if o.n_qubits() != n {
        return Err(GapError::DimensionMismatch { expected: n, got: o.n_qubits() });
    }
    Ok(Problem { h, h0, psi0, o })
}

/// `X` on every qubit where the two diagonal basis states differ, so that
/// `⟨b_j|O|b_i⟩ = 1`.
pub fn linking_observable(h0: &PauliSum, i: usize, j: usize) -> Result<PauliSum> {
    let n = h0.n_qubits();
    let (bi, bj) = gapscope_core::diagonal_pair(h0, i, j)?;
    let diff = (bi ^ bj) as u64;
    PauliSum::new(n, [PauliTerm::new(1.0, PauliString::from_masks(n, diff, 0))?])
}

fn load_state(path: &std::path::Path, n: usize) -> Result<StateVector> {
    let v: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let amps = v
        .iter()
        .map(|a| match a {
            serde_json::Value::Number(x) => x.as_f64().map(|re| Complex64::new(re, 0.0)),
            serde_json::Value::Array(p) if p.len() == 2 => Some(Complex64::new(p[0].as_f64()?, p[1].as_f64()?)),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| GapError::InvalidArgument(format!("{}: amplitudes must be numbers or [re, im]", path.display())))?;
    let psi = StateVector::from_amplitudes(amps)?;
    if psi.n_qubits() != n {
        return Err(GapError::DimensionMismatch { expected: n, got: psi.n_qubits() });
    }
    if (psi.norm_sqr() - 1.0).abs() > 1e-10 {
        return Err(GapError::NotNormalized(psi.norm_sqr()));
    }
    Ok(psi)
}

struct Pilot {
    frequency: f64,
    purity: f64,
}

/// Noiseless look at the prepared state on a uniform grid: dominant
/// frequency and how far the signal is from a single sinusoid.
fn pilot(psi: &StateVector, h: &PauliSum, o: &PauliSum, points: usize) -> Result<Pilot> {
    let norm = h.one_norm(false);
    if !(norm > 0.0) {
        return Err(GapError::FrequencyUndefined);
    }
    let mut dt = PI / (2.0 * norm);
    let mut last = None;
    for _ in 0..PILOT_PASSES {
        let times = uniform_times(points, dt)?;
        let values = evolve_and_measure(psi, h, o, &times, 1)?;
        let series = TimeSeries::new(times, values, vec![0.0; points], Shots::Exact)?;
        let (g, _) = dft_estimate(&series)?;
        let fit = fit_sinusoid(&series, (0.0, (2.0 * g).min(PI / dt)))?;
        if !(fit.amplitude > 0.0) || !(fit.frequency > 0.0) {
            return Err(GapError::FrequencyUndefined);
        }
        let p = Pilot { frequency: fit.frequency, purity: fit.residual_rms / fit.amplitude };
        let window = points as f64 * dt;
        if p.frequency * window >= 2.0 * PI * PILOT_MIN_PERIODS {
            return Ok(p);
        }
        dt = 2.0 * PI * (PILOT_MIN_PERIODS + 1.0) / (p.frequency * points as f64);
        last = Some(p);
    }
    last.ok_or(GapError::FrequencyUndefined)
}

pub struct PointOutcome {
    pub row: ResultRow,
    pub series: Vec<SeriesRow>,
    pub curves: Vec<CurveRow>,
    pub info: PointInfo,
    pub circuit: Option<std::result::Result<CircuitIR, String>>,
}

fn backend_for(cfg: &ExperimentConfig, x: f64) -> Backend {
    if !cfg.noise.enabled {
        return Backend::Statevector;
    }
    match cfg.noise.backend {
        NoiseBackend::Density => Backend::Density,
        NoiseBackend::Trajectories => {
            Backend::Trajectories { n: cfg.noise.trajectories, seed: derive_seed(cfg.seed, &[0x7a1, x.to_bits()]) }
        }
    }
}

/// Runs the full pipeline at sweep value `x`. Errors land in the row.
pub fn run_point(cfg: &ExperimentConfig, x: f64, molecules: Option<&MoleculeIndex>, opts: RunOptions) -> PointOutcome {
    let start = Instant::now();
    let backend = backend_for(cfg, x);
    let mut row = ResultRow {
        sweep_value: x,
        status: "ok".into(),
        gap_est: None,
        gap_std: None,
        amplitude: None,
        phase: None,
        offset: None,
        gap_exact: None,
        rel_err: None,
        shots: cfg.shots,
        backend: backend.label().into(),
        delta_tau: None,
        t_max: None,
        refined: None,
        residual_rms: None,
        runtime_s: None,
        error: None,
    };
    let mut info = PointInfo {
        sweep_value: x,
        delta_tau: None,
        t_max: None,
        pilot_frequency: None,
        pilot_scores: Vec::new(),
        trotter_steps: None,
        n_qubits: None,
        runtime_s: 0.0,
        error: None,
    };
    let mut series = Vec::new();
    let mut curves = Vec::new();
    let mut circuit = None;

    let result = (|| -> Result<()> {
        let prob = build_problem(cfg, x, molecules)?;
        let n = prob.h.n_qubits();
        info.n_qubits = Some(n);
        let (i, j) = cfg.ap.pair;

        // The oracle is independent of the estimate and fills its columns
        // even when the pipeline later fails.
        let prop = if n <= max_dense_qubits() { Some(Propagator::new(&prob.h)?) } else { None };
        if let Some(p) = &prop {
            let e = p.energies();
            if i >= e.len() || j >= e.len() {
                return Err(GapError::InvalidArgument(format!("ap.pair ({i}, {j}) exceeds dimension {}", e.len())));
            }
            row.gap_exact = Some((e[j] - e[i]).abs());
        }

        if !cfg.shots.is_exact() {
            sampleable_string(&prob.o)?;
        }
        let q_ap = cfg.ap.steps;
        let nodes = cfg.evo.n_nodes();
        let candidates = cfg.ap.delta_tau.candidates(x);
        let need_pilot = candidates.len() > 1 || matches!(cfg.evo.t_max, TMax::Auto(_));

        let mut chosen: Option<(f64, StateVector, Option<Pilot>)> = None;
        let mut best = f64::INFINITY;
        let mut last_err = None;
        for &dtau in &candidates {
            let sched = ApSchedule::new(q_ap, dtau * q_ap as f64, prob.h0.clone(), prob.h.clone())?;
            let psi = run_ap(&prob.psi0, &sched)?;
            if !need_pilot {
                chosen = Some((dtau, psi, None));
                break;
            }
            match pilot(&psi, &prob.h, &prob.o, cfg.evo.pilot_points) {
                Ok(p) => {
                    info.pilot_scores.push((dtau, Some(p.purity)));
                    if p.purity < best {
                        best = p.purity;
                        chosen = Some((dtau, psi, Some(p)));
                    }
                }
                Err(e) => {
                    info.pilot_scores.push((dtau, None));
                    last_err = Some(e);
                }
            }
        }
        let (dtau, psi_prepared, pilot) = chosen.ok_or_else(|| last_err.unwrap_or(GapError::FrequencyUndefined))?;
        row.delta_tau = Some(dtau);
        info.delta_tau = Some(dtau);
        info.pilot_frequency = pilot.as_ref().map(|p| p.frequency);

        let t_max = match cfg.evo.t_max {
            TMax::Fixed(t) => t,
            TMax::Auto(_) => 2.0 * PI * cfg.evo.periods / pilot.as_ref().expect("pilot ran").frequency,
        };
        row.t_max = Some(t_max);
        info.t_max = Some(t_max);

        let times = match cfg.evo.grid {
            Grid::Chebyshev => chebyshev_times(nodes, t_max)?,
            Grid::Uniform => uniform_times(nodes, t_max / nodes as f64)?,
        };
        let spn = cfg.evo.steps / nodes;

        let mut program = StepProgram::new(n);
        ApSchedule::new(q_ap, dtau * q_ap as f64, prob.h0.clone(), prob.h.clone())?.append_to(&mut program);
        let step = Arc::new(TrotterStep::new(&prob.h));
        let mut prev = 0.0;
        for &t in &times {
            for _ in 0..spn {
                program.push(step.clone(), (t - prev) / spn as f64);
            }
            program.checkpoint();
            prev = t;
        }
        if program.n_steps() != cfg.budget() {
            return Err(GapError::Backend(format!(
                "compiled {} Trotter steps, budget is {}",
                program.n_steps(),
                cfg.budget()
            )));
        }
        info.trotter_steps = Some(program.n_steps());
        if opts.dump_circuit {
            circuit = Some(program.compile().map_err(|e| e.to_string()));
        }

        let noise = cfg.noise.enabled.then(|| cfg.noise.model());
        if matches!(backend, Backend::Density) && n > MAX_DENSITY_QUBITS {
            return Err(GapError::StateLimit { n, max: MAX_DENSITY_QUBITS });
        }
        let out = run_program(&program, &prob.psi0, &prob.o, noise.as_ref(), backend)?;
        let mut ts = sample_series(&times, &out.values, &prob.o, cfg.shots, cfg.seed, &[0x5a0, x.to_bits()])?;
        if let Some(mc) = &out.mc_stderr {
            for (s, m) in ts.sigmas.iter_mut().zip(mc) {
                *s = s.hypot(*m);
            }
        }
        let used: Vec<usize> = cfg.evo.node_subset.clone().unwrap_or_else(|| (0..nodes).collect());
        for (r, (&t, (&v, &s))) in ts.times.iter().zip(ts.values.iter().zip(&ts.sigmas)).enumerate() {
            series.push(SeriesRow { sweep_value: x, t, value: v, sigma: s, used: used.contains(&r) });
        }
        let fit_series = ts.subset(&used)?;

        let lo = cfg.fit.freq_lo.unwrap_or(0.0);
        let hi = cfg.fit.freq_hi.unwrap_or(PI * nodes as f64 / t_max);
        let fit = match cfg.fit.estimator {
            Estimator::Fit => {
                let f = fit_sinusoid(&fit_series, (lo, hi))?;
                row.gap_est = Some(f.frequency);
                row.gap_std = Some(f.gap_std);
                row.amplitude = Some(f.amplitude);
                row.phase = Some(f.phase);
                row.offset = Some(f.offset);
                row.refined = Some(f.refined);
                row.residual_rms = Some(f.residual_rms);
                Some(f)
            }
            Estimator::Dft => {
                let (f, res) = dft_estimate(&fit_series)?;
                row.gap_est = Some(f);
                row.gap_std = Some(0.5 * res);
                None
            }
        };
        if let (Some(est), Some(ex)) = (row.gap_est, row.gap_exact) {
            if ex != 0.0 {
                row.rel_err = Some((est - ex).abs() / ex);
            }
        }

        let dense: Vec<f64> = (0..CURVE_POINTS).map(|k| t_max * k as f64 / (CURVE_POINTS - 1) as f64).collect();
        let exact = match &prop {
            Some(p) => Some(p.series_values(&prob.o, &psi_prepared, &dense)?),
            None => None,
        };
        for (k, &t) in dense.iter().enumerate() {
            curves.push(CurveRow {
                sweep_value: x,
                t,
                fit: fit.as_ref().map(|f| f.eval(t)),
                exact: exact.as_ref().map(|e| e[k]),
            });
        }
        Ok(())
    })();

    if let Err(e) = result {
        row.status = "failed".into();
        row.error = Some(e.to_string());
        info.error = Some(e.to_string());
        log::warn!("sweep value {x}: {e}");
    }
    let elapsed = start.elapsed().as_secs_f64();
    info.runtime_s = elapsed;
    if cfg.output.record_runtime {
        row.runtime_s = Some(elapsed);
    }
    PointOutcome { row, series, curves, info, circuit }
}

/// Runs every sweep point on a worker pool and gathers rows in ascending
/// sweep order.
pub fn run_experiment(cfg: &ExperimentConfig, opts: RunOptions) -> std::result::Result<RunOutput, crate::config::ConfigError> {
    let xs = cfg.sweep_values()?;
    let molecules = match &cfg.model {
        ModelConfig::Molecule { path } => Some(
            MoleculeIndex::open(path).map_err(|e| crate::config::ConfigError::Invalid(format!("model.path: {e}")))?,
        ),
        _ => None,
    };
    let mut warnings = Vec::new();
    if cfg.budget() != PAPER_BUDGET {
        warnings.push(format!(
            "Trotter budget {} (ap {} + evo {}) differs from the reference {PAPER_BUDGET}",
            cfg.budget(),
            cfg.ap.steps,
            cfg.evo.steps
        ));
    }
    if cfg.noise.enabled {
        let (p1, p2) = cfg.noise.model().channel_ps();
        for (name, c) in [("1q", p1), ("2q", p2)] {
            if let Some(raw) = c.clamped_from {
                warnings.push(format!("{name} depolarizing p = {raw} clamped to {}", c.p));
            }
        }
    }

    let work = |k: usize, x: f64| run_point(cfg, x, molecules.as_ref(), RunOptions { dump_circuit: opts.dump_circuit && k == 0 });
    let outcomes: Vec<PointOutcome> = match cfg.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| crate::config::ConfigError::Invalid(format!("workers: {e}")))?;
            pool.install(|| xs.par_iter().enumerate().map(|(k, &x)| work(k, x)).collect())
        }
        None => xs.par_iter().enumerate().map(|(k, &x)| work(k, x)).collect(),
    };

    let mut out = RunOutput {
        config: cfg.clone(),
        rows: Vec::with_capacity(outcomes.len()),
        series: Vec::new(),
        curves: Vec::new(),
        points: Vec::with_capacity(outcomes.len()),
        warnings,
        circuit: None,
    };
    for o in outcomes {
        if out.circuit.is_none() {
            out.circuit = o.circuit;
        }
        out.rows.push(o.row);
        out.series.extend(o.series);
        out.curves.extend(o.curves);
        out.points.push(o.info);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub sweep_value: f64,
    pub gap_exact: f64,
    pub amplitude: Option<f64>,
}

/// Dense-oracle gaps (and optionally `|⟨Ω_j|O|Ω_i⟩|`) at the given values.
pub fn oracle_rows(cfg: &ExperimentConfig, xs: &[f64], with_amplitude: bool) -> Result<Vec<BenchRow>> {
    let molecules = match &cfg.model {
        ModelConfig::Molecule { path } => Some(MoleculeIndex::open(path)?),
        _ => None,
    };
    let (i, j) = cfg.ap.pair;
    xs.par_iter()
        .map(|&x| {
            let prob = build_problem(cfg, x, molecules.as_ref())?;
            let n = prob.h.n_qubits();
            if n > max_dense_qubits() {
                return Err(GapError::DenseLimit { n, max: max_dense_qubits() });
            }
            if with_amplitude {
                let sym = matches!(cfg.model, ModelConfig::Ising { .. }).then(|| ising_parity(n));
                let spec = gapscope_core::diagonalize_resolved(&prob.h, i.max(j) + 1, sym.as_ref())?;
                let a = gapscope_core::matrix_element(&prob.o, &spec.eigenvectors[j], &spec.eigenvectors[i])?.norm();
                Ok(BenchRow { sweep_value: x, gap_exact: spec.gap(i, j), amplitude: Some(a) })
            } else {
                let e = gapscope_core::oracle::eigenvalues(&prob.h)?;
                if i >= e.len() || j >= e.len() {
                    return Err(GapError::InvalidArgument(format!("pair ({i}, {j}) exceeds dimension {}", e.len())));
                }
                Ok(BenchRow { sweep_value: x, gap_exact: (e[j] - e[i]).abs(), amplitude: None })
            }
        })
        .collect()
}

/// Sweep values plus midpoints, the grid of the benchmark curve.
pub fn refined_grid(xs: &[f64], between: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for w in xs.windows(2) {
        for k in 0..=between {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / (between + 1) as f64);
        }
    }
    if let Some(&last) = xs.last() {
        out.push(last);
    }
    out
}
