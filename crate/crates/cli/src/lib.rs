//! Command-line driver for boxtract: the extraction pipeline, artifact
//! emission and differential testing.

pub mod difftest;
pub mod gen;
pub mod pipeline;
pub mod rustc;

pub use difftest::{run_difftest, DifftestConfig, Report};
pub use pipeline::{run_pipeline, Artifacts, Emit, PipelineConfig, PipelineError, Stage};
