//! Experiment driver built on `gapscope-core`.

pub use gapscope_core as core;

pub mod config;
pub mod csvio;
pub mod manifest;
pub mod molecule;
pub mod plot;
pub mod runner;
