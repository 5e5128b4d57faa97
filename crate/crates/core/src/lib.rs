//! Evaluation, statistical comparison, and fusion of binary segmentation
//! outputs produced by two competing training regimes.
//!
//! The crate is split along the stages of an analysis:
//!
//! - [`mask`] and [`io`]: pixel containers, confusion counts, overlays, PNG codecs
//! - [`colormap`]: the blue-to-red table used for saliency rendering
//! - [`metrics`]: per-image sensitivity, specificity, Dice, AUROC and the Δ statistic
//! - [`stats`]: summaries, Shapiro-Wilk, Yeo-Johnson, Mood's median test
//! - [`splits`]: seeded train/test manifests and the depletion schedule
//! - [`ensemble`]: replicate aggregation, heatmap averaging, mask fusion
//!
//! Everything here is a pure function of its inputs. File formats other than
//! PNG live in the `segstat` crate.

pub mod colormap;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod mask;
pub mod metrics;
pub mod regime;
pub mod splits;
pub mod stats;

pub use error::{Error, Result};
pub use mask::{BinaryMask, ConfusionCounts, Heatmap, ProbabilityMap};
pub use metrics::{MetricKind, MetricRecord, MetricValue};
pub use regime::Regime;
