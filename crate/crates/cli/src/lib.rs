//! Batch driver: dimension sweeps, per-level Hecke runs, persistence and
//! verification suites.

pub mod commands;
pub mod compare;
pub mod config;
pub mod record;
pub mod verify;

pub use commands::{cmd_dims, cmd_export, cmd_hecke, CliError, ExportFormat, ExportTable};
pub use config::RunConfig;
