//! Job configuration, task dispatch and report rendering for the `utgrade` binary.

pub mod config;
pub mod job;
pub mod render;

pub use config::{load, validate, Diagnostic, JobConfig, Task};
pub use job::{run, Outcome, Report, RunOptions};
