//! Experiment configuration: JSON files deep-merged over named presets.

use std::path::{Path, PathBuf};

use gapscope_core::{Shots, Topology, TwoQubitChannel};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::molecule::MoleculeIndex;

/// Trotter steps per circuit in the reference experiments.
pub const PAPER_BUDGET: usize = 40;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown preset '{0}' (available: ising-paper, molecule-paper)")]
    UnknownPreset(String),
    #[error("{0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub model: ModelConfig,
    pub sweep: SweepConfig,
    pub ap: ApConfig,
    pub evo: EvoConfig,
    #[serde(default)]
    pub fit: FitConfig,
    #[serde(default)]
    pub observable: ObservableConfig,
    pub shots: Shots,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub seed: u64,
    /// Parameter ranges shaded on the sweep plot.
    #[serde(default)]
    pub bands: Vec<Band>,
    #[serde(default)]
    pub output: OutputConfig,
    /// Worker threads for the sweep; `None` uses the rayon default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Ising {
        topology: Topology,
        #[serde(default = "one")]
        j1: f64,
        #[serde(default = "yes")]
        pbc: bool,
    },
    /// Either a single integral file or an index of geometries.
    Molecule { path: PathBuf },
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    H3OverJ1,
    BondLengthAngstrom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<Range>,
}

/// Per-step adiabatic duration `δτ = τ/Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaTau {
    Fixed(f64),
    /// `values[k]` applies below `breakpoints[k]`; the last value beyond.
    Table { breakpoints: Vec<f64>, values: Vec<f64> },
    /// Pick, per sweep point, the candidate whose noiseless pilot signal is
    /// closest to a single sinusoid.
    Auto { auto: Vec<f64> },
}

impl DeltaTau {
    pub fn candidates(&self, x: f64) -> Vec<f64> {
        match self {
            DeltaTau::Fixed(v) => vec![*v],
            DeltaTau::Table { breakpoints, values } => {
                let k = breakpoints.iter().position(|&b| x < b).unwrap_or(breakpoints.len());
                vec![values[k]]
            }
            DeltaTau::Auto { auto } => auto.clone(),
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let all: Vec<f64> = match self {
            DeltaTau::Fixed(v) => vec![*v],
            DeltaTau::Table { breakpoints, values } => {
                if values.len() != breakpoints.len() + 1 {
                    return invalid("ap.delta_tau table needs exactly one more value than breakpoints");
                }
                if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
                    return invalid("ap.delta_tau breakpoints must be strictly increasing");
                }
                values.clone()
            }
            DeltaTau::Auto { auto } => {
                if auto.is_empty() {
                    return invalid("ap.delta_tau.auto needs at least one candidate");
                }
                auto.clone()
            }
        };
        if all.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return invalid("ap.delta_tau values must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    PlusAll,
    DiagonalPair,
    /// JSON array of amplitudes, each a real number or `[re, im]`.
    CustomFile(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApConfig {
    pub steps: usize,
    pub delta_tau: DeltaTau,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<InitialState>,
    /// Eigen-indices `(i, j)` whose gap is measured.
    #[serde(default = "default_pair")]
    pub pair: (usize, usize),
}

fn default_pair() -> (usize, usize) {
    (0, 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TMax {
    Fixed(f64),
    Auto(AutoTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoTag {
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grid {
    Chebyshev,
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvoConfig {
    /// Total Trotter steps of the evolution part.
    pub steps: usize,
    /// Measurement nodes; `steps` must be a multiple. Defaults to `steps`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default = "auto_tmax")]
    pub t_max: TMax,
    /// Oscillation periods inside the window when `t_max` is automatic.
    #[serde(default = "default_periods")]
    pub periods: f64,
    #[serde(default = "default_pilot")]
    pub pilot_points: usize,
    #[serde(default = "default_grid")]
    pub grid: Grid,
    /// Zero-based node indices kept for the fit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_subset: Option<Vec<usize>>,
}

fn auto_tmax() -> TMax {
    TMax::Auto(AutoTag::Auto)
}
fn default_periods() -> f64 {
    1.5
}
fn default_pilot() -> usize {
    128
}
fn default_grid() -> Grid {
    Grid::Chebyshev
}

impl EvoConfig {
    pub fn n_nodes(&self) -> usize {
        self.nodes.unwrap_or(self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    #[default]
    Fit,
    Dft,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    #[serde(default)]
    pub estimator: Estimator,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freq_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freq_hi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableConfig {
    /// `X` on qubit 0 for spin models; for molecules the `X` string linking
    /// the two diagonal basis states.
    #[default]
    Default,
    Label(String),
    /// Text file of `<coeff> <label>` lines.
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseBackend {
    #[default]
    Density,
    Trajectories,
}

/// Missing fields take the trapped-ion defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub enabled: bool,
    pub t1_s: f64,
    pub t2_s: f64,
    pub tg1_s: f64,
    pub tg2_s: f64,
    pub f1: f64,
    pub f2: f64,
    pub readout_flip: f64,
    pub backend: NoiseBackend,
    pub trajectories: usize,
    pub two_qubit_channel: TwoQubitChannel,
}

fn default_trajectories() -> usize {
    500
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            t1_s: 100.0,
            t2_s: 1.0,
            tg1_s: 135e-6,
            tg2_s: 600e-6,
            // Gate fidelities are assumptions, not device data.
            f1: 0.9998,
            f2: 0.99,
            readout_flip: 0.0039,
            backend: NoiseBackend::Density,
            trajectories: default_trajectories(),
            two_qubit_channel: TwoQubitChannel::Independent1q,
        }
    }
}

impl NoiseConfig {
    pub fn model(&self) -> gapscope_core::NoiseModel {
        gapscope_core::NoiseModel {
            t1: self.t1_s,
            t2: self.t2_s,
            gate_time_1q: self.tg1_s,
            gate_time_2q: self.tg2_s,
            fidelity_1q: self.f1,
            fidelity_2q: self.f2,
            readout_flip: self.readout_flip,
            two_qubit_channel: self.two_qubit_channel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
    #[serde(default)]
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "d_csv")]
    pub csv: String,
    #[serde(default = "d_series")]
    pub series_csv: String,
    #[serde(default = "d_curves")]
    pub curves_csv: String,
    #[serde(default = "d_bench")]
    pub benchmark_csv: String,
    #[serde(default = "d_manifest")]
    pub manifest: String,
    #[serde(default = "d_plot")]
    pub plot: String,
    #[serde(default = "d_waves")]
    pub waves_plot: String,
    /// Wall-clock seconds in the CSV make reruns differ byte-wise, so they
    /// are opt-in; the manifest always has them.
    #[serde(default)]
    pub record_runtime: bool,
}

fn d_csv() -> String {
    "estimates.csv".into()
}
fn d_series() -> String {
    "series.csv".into()
}
fn d_curves() -> String {
    "curves.csv".into()
}
fn d_bench() -> String {
    "benchmark.csv".into()
}
fn d_manifest() -> String {
    "manifest.json".into()
}
fn d_plot() -> String {
    "gaps.svg".into()
}
fn d_waves() -> String {
    "waves.svg".into()
}

impl Default for OutputConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all output fields have defaults")
    }
}

const ISING_PAPER: &str = r#"{
  "model": {"kind": "ising", "topology": {"kind": "chain", "l": 4}, "j1": 1.0, "pbc": true},
  "sweep": {"parameter": "h3_over_j1", "range": {"start": 2.0, "stop": 6.5, "count": 10}},
  "ap": {"steps": 15, "delta_tau": {"auto": [0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6]}, "initial_state": "plus_all", "pair": [0, 1]},
  "evo": {"steps": 25, "nodes": 25, "t_max": "auto", "periods": 1.5, "pilot_points": 128, "grid": "chebyshev"},
  "shots": 8192,
  "seed": 0,
  "bands": [
    {"lo": 0.0, "hi": 1.5, "label": "infrared limit"},
    {"lo": 7.0, "hi": 10.0, "label": "adiabatic limit"}
  ]
}"#;

const MOLECULE_PAPER: &str = r#"{
  "model": {"kind": "molecule", "path": "fixtures/molecules/h2/index.json"},
  "sweep": {"parameter": "bond_length_angstrom"},
  "ap": {"steps": 5, "delta_tau": {"auto": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0, 1.2, 1.5, 2.0]}, "initial_state": "diagonal_pair", "pair": [0, 1]},
  "evo": {"steps": 35, "nodes": 35, "t_max": "auto", "periods": 1.5, "pilot_points": 128, "grid": "chebyshev"},
  "shots": 8192,
  "seed": 0
}"#;

pub fn preset(name: &str) -> Result<Value, ConfigError> {
    let text = match name {
        "ising-paper" => ISING_PAPER,
        "molecule-paper" => MOLECULE_PAPER,
        other => return Err(ConfigError::UnknownPreset(other.to_string())),
    };
    Ok(serde_json::from_str(text)?)
}

/// Keys whose value is replaced wholesale rather than merged, because their
/// alternative forms do not mix.
const ATOMIC: &[&str] = &["delta_tau", "t_max", "observable", "sweep", "initial_state", "bands", "node_subset"];

/// Recursive object merge; `over` wins. Objects with different `kind` tags
/// are replaced, not merged.
pub fn deep_merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            let kinds_differ = matches!((b.get("kind"), o.get("kind")), (Some(x), Some(y)) if x != y);
            if kinds_differ {
                *b = o;
                return;
            }
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) if !ATOMIC.contains(&k.as_str()) => deep_merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

impl ExperimentConfig {
    /// Parses a config document. A `preset` key pulls in a named preset
    /// underneath; a manifest is accepted and its recorded config is used.
    pub fn from_value(mut v: Value) -> Result<Self, ConfigError> {
        if let Some(cfg) = v.get("config").filter(|_| v.get("manifest_version").is_some()) {
            v = cfg.clone();
        }
        let merged = match v.get("preset").and_then(Value::as_str) {
            Some(name) => {
                let mut base = preset(name)?;
                deep_merge(&mut base, v);
                base
            }
            None => v,
        };
        let cfg: ExperimentConfig = serde_json::from_value(merged)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Self::from_value(serde_json::from_str(text)?)
    }

    /// Like [`from_json`](Self::from_json) with relative paths resolved
    /// against `dir`.
    pub fn from_json_in(text: &str, dir: &Path) -> Result<Self, ConfigError> {
        let mut cfg = Self::from_json(text)?;
        cfg.rebase(dir);
        Ok(cfg)
    }

    /// Loads a file and resolves relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read { path: path.to_path_buf(), source: e })?;
        Self::from_json_in(&text, path.parent().unwrap_or(Path::new("")))
    }

    pub fn from_preset(name: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::from_value(preset(name)?)?;
        cfg.rebase(Path::new(""));
        Ok(cfg)
    }

    /// Resolves relative file paths: first against `dir` (the config file's
    /// directory), then the working directory, then the workspace root that
    /// ships the fixtures. Found files are canonicalized so a manifest replays
    /// from anywhere.
    fn rebase(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_absolute() {
                return;
            }
            let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
            let found = [dir.join(&*p), p.clone(), root.join(&*p)].into_iter().find(|c| c.exists());
            match found {
                Some(c) => *p = c.canonicalize().unwrap_or(c),
                None if !dir.as_os_str().is_empty() => *p = dir.join(&*p),
                None => {}
            }
        };
        if let ModelConfig::Molecule { path } = &mut self.model {
            fix(path);
        }
        if let ObservableConfig::File(p) = &mut self.observable {
            fix(p);
        }
        if let Some(InitialState::CustomFile(p)) = &mut self.ap.initial_state {
            fix(p);
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match (&self.model, self.sweep.parameter) {
            (ModelConfig::Ising { topology, j1, .. }, SweepParameter::H3OverJ1) => {
                let spec = gapscope_core::IsingSpec { topology: *topology, j1: *j1, h3: 0.0, pbc: true };
                spec.validate().map_err(|e| ConfigError::Invalid(format!("model: {e}")))?;
                if *j1 == 0.0 {
                    return invalid("model.j1 must be nonzero for an h3/J1 sweep");
                }
                if self.sweep.values.is_none() && self.sweep.range.is_none() {
                    return invalid("sweep needs `values` or `range`");
                }
            }
            (ModelConfig::Molecule { .. }, SweepParameter::BondLengthAngstrom) => {}
            _ => return invalid("sweep.parameter does not match the model kind"),
        }
        if self.sweep.values.is_some() && self.sweep.range.is_some() {
            return invalid("sweep takes either `values` or `range`, not both");
        }
        if let Some(r) = &self.sweep.range {
            if r.count == 0 || !r.start.is_finite() || !r.stop.is_finite() {
                return invalid("sweep.range needs finite ends and count ≥ 1");
            }
        }
        if let Some(v) = &self.sweep.values {
            if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                return invalid("sweep.values must be a non-empty list of finite numbers");
            }
        }
        if self.ap.steps == 0 {
            return invalid("ap.steps must be ≥ 1");
        }
        self.ap.delta_tau.validate()?;
        if self.ap.pair.0 == self.ap.pair.1 {
            return invalid("ap.pair must name two different levels");
        }
        let nodes = self.evo.n_nodes();
        if self.evo.steps == 0 || nodes == 0 || self.evo.steps % nodes != 0 {
            return invalid(format!("evo.steps ({}) must be a positive multiple of evo.nodes ({nodes})", self.evo.steps));
        }
        if nodes < 5 {
            return invalid("the fit needs at least 5 nodes");
        }
        match self.evo.t_max {
            TMax::Fixed(t) if !(t > 0.0) || !t.is_finite() => return invalid("evo.t_max must be positive or \"auto\""),
            _ => {}
        }
        if !(self.evo.periods > 0.0) || self.evo.pilot_points < 8 {
            return invalid("evo.periods must be positive and evo.pilot_points ≥ 8");
        }
        if let Some(sub) = &self.evo.node_subset {
            if sub.len() < 5 || sub.iter().any(|&k| k >= nodes) || sub.windows(2).any(|w| w[0] >= w[1]) {
                return invalid(format!("evo.node_subset must be ≥ 5 strictly increasing indices below {nodes}"));
            }
        }
        if self.fit.estimator == Estimator::Dft && self.evo.grid != Grid::Uniform {
            return invalid("the DFT estimator needs evo.grid = \"uniform\"");
        }
        if let (Some(lo), Some(hi)) = (self.fit.freq_lo, self.fit.freq_hi) {
            if !(hi > lo) {
                return invalid("fit.freq_hi must exceed fit.freq_lo");
            }
        }
        if self.fit.freq_lo.is_some_and(|lo| lo < 0.0) {
            return invalid("fit.freq_lo must be ≥ 0");
        }
        if let ObservableConfig::Label(l) = &self.observable {
            l.parse::<gapscope_core::PauliString>().map_err(|e| ConfigError::Invalid(format!("observable: {e}")))?;
        }
        if self.noise.enabled {
            self.noise.model().validate().map_err(|e| ConfigError::Invalid(format!("noise: {e}")))?;
            if self.noise.backend == NoiseBackend::Trajectories && self.noise.trajectories == 0 {
                return invalid("noise.trajectories must be ≥ 1");
            }
        }
        for b in &self.bands {
            if !(b.hi > b.lo) {
                return invalid(format!("band '{}' has hi ≤ lo", b.label));
            }
        }
        if self.workers == Some(0) {
            return invalid("workers must be ≥ 1");
        }
        Ok(())
    }

    pub fn budget(&self) -> usize {
        self.ap.steps + self.evo.steps
    }

    /// Sweep values in ascending order.
    pub fn sweep_values(&self) -> Result<Vec<f64>, ConfigError> {
        let mut v = if let Some(v) = &self.sweep.values {
            v.clone()
        } else if let Some(r) = &self.sweep.range {
            if r.count == 1 {
                vec![r.start]
            } else {
                (0..r.count).map(|k| r.start + (r.stop - r.start) * k as f64 / (r.count - 1) as f64).collect()
            }
        } else {
            match &self.model {
                ModelConfig::Molecule { path } => match MoleculeIndex::open(path) {
                    Ok(idx) => idx.bond_lengths(),
                    Err(e) => return invalid(format!("model.path: {e}")),
                },
                _ => return invalid("sweep needs `values` or `range`"),
            }
        };
        v.sort_by(f64::total_cmp);
        v.dedup();
        Ok(v)
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_validate() {
        let c = ExperimentConfig::from_preset("ising-paper").unwrap();
        assert_eq!(c.budget(), PAPER_BUDGET);
        assert_eq!(c.sweep_values().unwrap().len(), 10);
        let m = ExperimentConfig::from_preset("molecule-paper").unwrap();
        assert_eq!((m.ap.steps, m.evo.steps), (5, 35));
    }

    #[test]
    fn merge_overrides_leaves_and_replaces_atomic_keys() {
        let c = ExperimentConfig::from_json(
            r#"{"preset": "ising-paper", "ap": {"delta_tau": 0.3}, "sweep": {"parameter": "h3_over_j1", "values": [3.0]},
                "model": {"topology": {"kind": "chain", "l": 6}}}"#,
        )
        .unwrap();
        assert_eq!(c.ap.delta_tau, DeltaTau::Fixed(0.3));
        assert_eq!(c.ap.steps, 15);
        assert_eq!(c.sweep_values().unwrap(), vec![3.0]);
        assert!(matches!(c.model, ModelConfig::Ising { topology: Topology::Chain { l: 6 }, .. }));
    }

    #[test]
    fn helpful_errors() {
        let e = ExperimentConfig::from_json(r#"{"preset": "ising-paper", "evo": {"steps": 24}}"#).unwrap_err();
        assert!(e.to_string().contains("multiple"), "{e}");
        let e = ExperimentConfig::from_json(r#"{"preset": "ising-paper", "evo": {"stepz": 24}}"#).unwrap_err();
        assert!(e.to_string().contains("stepz"), "{e}");
        assert!(matches!(ExperimentConfig::from_json(r#"{"preset": "nope"}"#), Err(ConfigError::UnknownPreset(_))));
    }

    #[test]
    fn delta_tau_table_lookup() {
        let t = DeltaTau::Table { breakpoints: vec![3.6, 5.0], values: vec![0.4, 0.3, 0.2] };
        assert_eq!(t.candidates(1.0), vec![0.4]);
        assert_eq!(t.candidates(3.6), vec![0.3]);
        assert_eq!(t.candidates(9.0), vec![0.2]);
    }
}
