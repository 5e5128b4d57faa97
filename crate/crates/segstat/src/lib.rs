//! Batch pipeline around `segstat-core`: split manifests, score exported
//! segmentations of two training regimes, compare them statistically, fuse
//! their masks and render overlays.
//!
//! Each subcommand reads only files written by earlier stages, so stages can
//! be rerun independently and always produce identical bytes for identical
//! inputs.

pub mod commands;
pub mod config;
pub mod error;
pub mod files;
pub mod tables;

use std::path::PathBuf;

pub use config::PipelineConfig;
pub use error::{CliError, Result};

/// Resolved settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Context {
    pub config: PipelineConfig,
    pub output: PathBuf,
    pub seed: u64,
    /// `None` lets commands that can cover every split do so.
    pub split_index: Option<u32>,
    pub jobs: usize,
}

impl Context {
    pub fn new(config: PipelineConfig) -> Self {
        Self {
            output: config.output.clone(),
            seed: config.seed,
            split_index: None,
            jobs: 1,
            config,
        }
    }

    /// Runs `f` on a worker pool of `self.jobs` threads.
    pub fn pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs.max(1))
            .build()
            .map_err(|e| CliError::Internal(format!("worker pool: {e}")))?;
        Ok(pool.install(f))
    }
}
