//! Run manifest: the resolved configuration plus everything needed to audit
//! or replay a run. Passing a manifest back as `--config` reruns it.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::PAPER_BUDGET;
use crate::runner::{PointInfo, RunOutput};

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub ap_steps: usize,
    pub evo_steps: usize,
    pub total: usize,
    pub reference: usize,
    pub non_default: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub os: String,
    pub arch: String,
    pub threads: usize,
    pub max_dense_qubits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub manifest_version: u32,
    pub version: String,
    pub config: Value,
    pub budget: Budget,
    pub points: Vec<PointInfo>,
    pub failed_points: usize,
    pub warnings: Vec<String>,
    pub environment: Environment,
    /// File name to SHA-256 of the bytes written.
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Manifest {
    pub fn new(run: &RunOutput) -> Self {
        let c = &run.config;
        Self {
            manifest_version: MANIFEST_VERSION,
            version: env!("CARGO_PKG_VERSION").into(),
            config: c.to_value(),
            budget: Budget {
                ap_steps: c.ap.steps,
                evo_steps: c.evo.steps,
                total: c.budget(),
                reference: PAPER_BUDGET,
                non_default: c.budget() != PAPER_BUDGET,
            },
            points: run.points.clone(),
            failed_points: run.failed(),
            warnings: run.warnings.clone(),
            environment: Environment {
                os: std::env::consts::OS.into(),
                arch: std::env::consts::ARCH.into(),
                threads: c.workers.unwrap_or_else(rayon::current_num_threads),
                max_dense_qubits: gapscope_core::pauli::max_dense_qubits(),
            },
            outputs: BTreeMap::new(),
        }
    }

    pub fn record_output(&mut self, name: &str, bytes: &[u8]) {
        self.outputs.insert(name.into(), sha256_hex(bytes));
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        std::fs::write(path, text + "\n")
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        serde_json::from_str(&std::fs::read_to_string(path)?).map_err(std::io::Error::other)
    }
}
