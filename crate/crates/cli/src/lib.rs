//! Std companion to `vqss-core`: statevector simulation, circuit and
//! transcript file formats, the experiment harness and the CLI.

pub mod circuit_text;
pub mod config;
pub mod experiments;
pub mod report;
pub mod statevector;
pub mod stats;
pub mod xval;
