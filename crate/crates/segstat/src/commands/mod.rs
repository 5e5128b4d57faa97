pub mod compare;
pub mod evaluate;
pub mod fuse;
pub mod render;
pub mod split;

use std::path::{Path, PathBuf};

use segstat_core::Regime;

use crate::Context;

pub fn run_dir(ctx: &Context, kind: &str, model: Regime, run: usize) -> PathBuf {
    ctx.config
        .root
        .join(kind)
        .join(ctx.config.model_dir(model))
        .join(format!("run_{run}"))
}

pub fn png(dir: &Path, image_id: &str) -> PathBuf {
    dir.join(format!("{image_id}.png"))
}

pub fn aggregated_mask(output: &Path, model: Regime, image_id: &str) -> PathBuf {
    png(&output.join("aggregated").join(model.label()), image_id)
}

pub fn metrics_path(output: &Path) -> PathBuf {
    output.join("metrics.csv")
}

/// Paths that do not exist, in the given order.
pub fn missing(paths: impl IntoIterator<Item = PathBuf>) -> Vec<PathBuf> {
    paths.into_iter().filter(|p| !p.is_file()).collect()
}
