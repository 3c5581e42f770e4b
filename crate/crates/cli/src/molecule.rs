//! Lookup of integral files by bond length.

use std::path::{Path, PathBuf};

use gapscope_core::{FermionIntegrals, GapError};
use serde::Deserialize;

/// Bond lengths closer than this are the same geometry.
const BOND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Deserialize)]
struct Entry {
    bond_length_angstrom: f64,
    file: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
struct IndexFile {
    #[serde(default)]
    molecule: Option<String>,
    geometries: Vec<Entry>,
}

/// Either an `index.json` listing geometries or a single integral file.
#[derive(Debug, Clone)]
pub struct MoleculeIndex {
    pub molecule: Option<String>,
    entries: Vec<(f64, PathBuf)>,
}

impl MoleculeIndex {
    pub fn open(path: &Path) -> Result<Self, GapError> {
        let text = std::fs::read_to_string(path)?;
        let v: serde_json::Value = serde_json::from_str(&text)?;
        if v.get("geometries").is_some() {
            let idx: IndexFile = serde_json::from_value(v)?;
            let dir = path.parent().unwrap_or(Path::new(""));
            let mut entries: Vec<(f64, PathBuf)> =
                idx.geometries.into_iter().map(|e| (e.bond_length_angstrom, dir.join(e.file))).collect();
            entries.sort_by(|a, b| a.0.total_cmp(&b.0));
            Ok(Self { molecule: idx.molecule, entries })
        } else {
            let ints = FermionIntegrals::from_json(&text)?;
            let r = ints.bond_length_angstrom.ok_or_else(|| {
                GapError::InvalidModel(format!("{} has no bond_length_angstrom", path.display()))
            })?;
            Ok(Self { molecule: ints.molecule.clone(), entries: vec![(r, path.to_path_buf())] })
        }
    }

    pub fn bond_lengths(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn file_for(&self, r: f64) -> Result<&Path, GapError> {
        self.entries
            .iter()
            .find(|e| (e.0 - r).abs() <= BOND_TOL)
            .map(|e| e.1.as_path())
            .ok_or_else(|| GapError::InvalidArgument(format!("no integral file for bond length {r} Å")))
    }

    pub fn load(&self, r: f64) -> Result<FermionIntegrals, GapError> {
        FermionIntegrals::load(self.file_for(r)?)
    }
}
