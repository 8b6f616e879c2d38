//! CLI harness for the two-qubit squeezed-bath simulator: experiment
//! configuration, figure presets, parameter sweeps, and CSV/SVG emission.
//!
//! - [`config`] — JSON-serializable experiment description
//! - [`presets`] — named figure presets
//! - [`runner`] — trajectory execution and file output
//! - [`sweep`] — concurrent parameter sweeps with a summary CSV
//! - [`verify`] — per-preset acceptance checks (JSON report)
//! - [`plot`] — lossless SVG line plots

pub mod config;
pub mod plot;
pub mod presets;
pub mod runner;
pub mod sweep;
pub mod verify;
