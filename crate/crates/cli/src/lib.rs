//! Configuration, orchestration and output for the `pairzeta` binary.

pub mod config;
pub mod error;
pub mod run;
