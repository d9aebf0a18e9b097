//! File formats, configuration and parallel sweeps on top of `ratball_core`.

pub mod config;
pub mod dot;
pub mod formats;
pub mod sweep;
