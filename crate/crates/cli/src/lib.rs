//! Command-line front end: scenario configs, figure presets and sweep runs.

pub mod config;
pub mod error;
pub mod presets;
pub mod runner;
