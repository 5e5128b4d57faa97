//! Pipeline configuration, read from a TOML file.
//!
//! Relative paths are resolved against the directory holding the config file.
//! Every key is optional except `dataset.manifest`; defaults follow the
//! published protocol (five 80:20 splits, intersection of five runs, strict
//! "above the grand median" counting, 5% superiority margin, 0.9 threshold).

use std::fs;
use std::path::{Path, PathBuf};

use segstat_core::ensemble::FusionThresholds;
use segstat_core::io::ChannelReduction;
use segstat_core::metrics::DegenerateAuroc;
use segstat_core::splits::{DEPLETION_SCHEDULE, Ratio};
use segstat_core::stats::{CompareOptions, MoodOptions, TieRule};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dataset: RawDataset,
    #[serde(default)]
    models: RawModels,
    #[serde(default)]
    split: RawSplit,
    #[serde(default)]
    metrics: RawMetrics,
    #[serde(default)]
    stats: RawStats,
    #[serde(default)]
    fusion: RawFusion,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    #[serde(default = "default_name")]
    name: String,
    manifest: PathBuf,
    #[serde(default = "default_root")]
    root: PathBuf,
}

fn default_name() -> String {
    "dataset".into()
}

fn default_root() -> PathBuf {
    PathBuf::from(".")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawModels {
    transfer: String,
    medical: String,
    runs: usize,
}

impl Default for RawModels {
    fn default() -> Self {
        Self {
            transfer: "T_II".into(),
            medical: "L_MI".into(),
            runs: 5,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawSplit {
    seed: u64,
    count: u32,
    ratio: String,
    stratified: bool,
    depletion: Vec<String>,
}

impl Default for RawSplit {
    fn default() -> Self {
        Self {
            seed: 42,
            count: 5,
            ratio: Ratio::DEFAULT.to_string(),
            stratified: false,
            depletion: DEPLETION_SCHEDULE.iter().map(|r| r.to_string()).collect(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawMetrics {
    degenerate_auroc: String,
    replicate_aggregation: String,
    gt_channel_rule: String,
    images: String,
}

impl Default for RawMetrics {
    fn default() -> Self {
        Self {
            degenerate_auroc: "missing".into(),
            replicate_aggregation: "intersection".into(),
            gt_channel_rule: "any_non_black".into(),
            images: "test".into(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawStats {
    alpha: f64,
    ties: String,
    yates: bool,
    superiority: f64,
    threshold: f64,
}

impl Default for RawStats {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            ties: "below".into(),
            yates: false,
            superiority: 0.05,
            threshold: 0.9,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawFusion {
    fpr_hi: f64,
    fnr_hi: f64,
}

impl Default for RawFusion {
    fn default() -> Self {
        let t = FusionThresholds::default();
        Self {
            fpr_hi: t.fpr_hi,
            fnr_hi: t.fnr_hi,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawOutput {
    dir: PathBuf,
}

impl Default for RawOutput {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

/// How the replicate masks of one model are combined before scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    /// Pixel kept only where every run marks it; scores take the per-pixel minimum.
    Intersection,
    /// Pixel kept where most runs mark it; scores take the per-pixel mean.
    /// Not part of the published protocol.
    Majority,
}

/// Which manifest images `evaluate` scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageSelection {
    /// The test side of the selected split.
    Test,
    /// Every manifest entry.
    All,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub path: PathBuf,
    pub dataset_name: String,
    pub manifest: PathBuf,
    pub root: PathBuf,
    pub transfer_dir: String,
    pub medical_dir: String,
    pub runs: usize,
    pub seed: u64,
    pub split_count: u32,
    pub ratio: Ratio,
    pub stratified: bool,
    pub depletion: Vec<Ratio>,
    pub degenerate_auroc: DegenerateAuroc,
    pub aggregation: Aggregation,
    pub gt_rule: Option<ChannelReduction>,
    pub images: ImageSelection,
    pub compare: CompareOptions,
    pub fusion: FusionThresholds,
    pub output: PathBuf,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&text, path)
    }

    /// Parses `text` as if it had been read from `path`.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let bad = |message: String| CliError::Config {
            path: path.to_path_buf(),
            message,
        };
        let raw: RawConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new("")).to_path_buf();
        let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };

        let ratio = Ratio::parse(&raw.split.ratio).map_err(|e| bad(e.to_string()))?;
        let depletion = raw
            .split
            .depletion
            .iter()
            .map(|r| Ratio::parse(r))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(e.to_string()))?;
        let degenerate_auroc = raw
            .metrics
            .degenerate_auroc
            .parse()
            .map_err(|e: segstat_core::Error| bad(e.to_string()))?;
        let aggregation = match raw.metrics.replicate_aggregation.as_str() {
            "intersection" => Aggregation::Intersection,
            "majority" => Aggregation::Majority,
            other => {
                return Err(bad(format!(
                    "replicate_aggregation must be intersection or majority, got {other:?}"
                )));
            }
        };
        let gt_rule = match raw.metrics.gt_channel_rule.as_str() {
            "any_non_black" => Some(ChannelReduction::AnyNonBlack),
            "reject" => None,
            other => {
                return Err(bad(format!(
                    "gt_channel_rule must be any_non_black or reject, got {other:?}"
                )));
            }
        };
        let images = match raw.metrics.images.as_str() {
            "test" => ImageSelection::Test,
            "all" => ImageSelection::All,
            other => return Err(bad(format!("images must be test or all, got {other:?}"))),
        };
        let ties: TieRule = raw
            .stats
            .ties
            .parse()
            .map_err(|e: segstat_core::Error| bad(e.to_string()))?;
        for (key, v) in [
            ("stats.alpha", raw.stats.alpha),
            ("stats.superiority", raw.stats.superiority),
            ("fusion.fpr_hi", raw.fusion.fpr_hi),
            ("fusion.fnr_hi", raw.fusion.fnr_hi),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(bad(format!("{key} must lie strictly between 0 and 1, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&raw.stats.threshold) {
            return Err(bad(format!(
                "stats.threshold must lie in [0, 1], got {}",
                raw.stats.threshold
            )));
        }
        if raw.models.runs == 0 {
            return Err(bad("models.runs must be positive".into()));
        }
        if raw.split.count == 0 {
            return Err(bad("split.count must be positive".into()));
        }
        if raw.models.transfer == raw.models.medical {
            return Err(bad("models.transfer and models.medical name the same directory".into()));
        }

        let manifest = resolve(&raw.dataset.manifest);
        if !manifest.is_file() {
            return Err(bad(format!("manifest {} does not exist", manifest.display())));
        }
        let root = resolve(&raw.dataset.root);
        if !root.is_dir() {
            return Err(bad(format!("dataset root {} does not exist", root.display())));
        }

        Ok(Self {
            path: path.to_path_buf(),
            dataset_name: raw.dataset.name,
            manifest,
            root,
            transfer_dir: raw.models.transfer,
            medical_dir: raw.models.medical,
            runs: raw.models.runs,
            seed: raw.split.seed,
            split_count: raw.split.count,
            ratio,
            stratified: raw.split.stratified,
            depletion,
            degenerate_auroc,
            aggregation,
            gt_rule,
            images,
            compare: CompareOptions {
                mood: MoodOptions {
                    ties,
                    yates: raw.stats.yates,
                    alpha: raw.stats.alpha,
                },
                margin: raw.stats.superiority,
                threshold: raw.stats.threshold,
            },
            fusion: FusionThresholds {
                fpr_hi: raw.fusion.fpr_hi,
                fnr_hi: raw.fusion.fnr_hi,
            },
            output: resolve(&raw.output.dir),
        })
    }

    pub fn model_dir(&self, model: segstat_core::Regime) -> &str {
        match model {
            segstat_core::Regime::TransferLearned => &self.transfer_dir,
            segstat_core::Regime::MedicalOnly => &self.medical_dir,
        }
    }
}
