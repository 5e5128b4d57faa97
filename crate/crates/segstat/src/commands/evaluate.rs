use std::path::PathBuf;

use rayon::prelude::*;
use segstat_core::ensemble::{RunSet, majority_vote, probability_min, run_intersection};
use segstat_core::io::{MaskKind, load_mask, load_probability_map, save_mask};
use segstat_core::metrics::{MetricRecord, evaluate as score};
use segstat_core::splits::ManifestEntry;
use segstat_core::{BinaryMask, ProbabilityMap, Regime};

use super::{aggregated_mask, metrics_path, missing, png, run_dir};
use crate::config::{Aggregation, ImageSelection};
use crate::files::{create_parent, metrics_to_csv, read_manifest, read_split, split_path, write_file};
use crate::{CliError, Context, Result};

/// The manifest entries `evaluate` covers, in manifest order.
pub fn selected_images(ctx: &Context) -> Result<Vec<ManifestEntry>> {
    let cfg = &ctx.config;
    let m = read_manifest(&cfg.manifest, &cfg.root)?;
    match cfg.images {
        ImageSelection::All => Ok(m.entries().to_vec()),
        ImageSelection::Test => {
            let s = read_split(&split_path(&ctx.output, ctx.split_index.unwrap_or(1)), &m)?;
            Ok(s.test.iter().map(|e| m.entries()[e.position].clone()).collect())
        }
    }
}

fn mean_map(maps: &[ProbabilityMap]) -> Result<ProbabilityMap> {
    let first = &maps[0];
    let mut sum = vec![0.0; first.values().len()];
    for m in maps {
        if m.dims() != first.dims() {
            return Err(segstat_core::Error::DimensionMismatch {
                left_w: first.width(),
                left_h: first.height(),
                right_w: m.width(),
                right_h: m.height(),
            }
            .into());
        }
        for (s, v) in sum.iter_mut().zip(m.values()) {
            *s += v;
        }
    }
    let n = maps.len() as f64;
    Ok(ProbabilityMap::new(
        first.width(),
        first.height(),
        sum.into_iter().map(|s| (s / n).min(1.0)).collect(),
    )?)
}

struct Scored {
    records: Vec<MetricRecord>,
    masks: Vec<(Regime, BinaryMask)>,
}

fn score_image(ctx: &Context, entry: &ManifestEntry) -> Result<Scored> {
    let cfg = &ctx.config;
    let gt = load_mask(&PathBuf::from(&entry.gt_path), MaskKind::GroundTruth, cfg.gt_rule)?;
    let mut records = Vec::new();
    let mut masks = Vec::new();
    for model in Regime::ALL {
        let mut runs = Vec::with_capacity(cfg.runs);
        let mut probs = Vec::with_capacity(cfg.runs);
        for k in 1..=cfg.runs {
            runs.push(load_mask(
                &png(&run_dir(ctx, "predictions", model, k), &entry.image_id),
                MaskKind::Prediction,
                None,
            )?);
            probs.push(load_probability_map(&png(
                &run_dir(ctx, "probabilities", model, k),
                &entry.image_id,
            ))?);
        }
        let rs = RunSet::new(entry.image_id.clone(), model, runs, vec![], cfg.runs)?;
        let (mask, prob) = match cfg.aggregation {
            Aggregation::Intersection => (run_intersection(&rs)?, probability_min(&probs)?),
            Aggregation::Majority => (majority_vote(&rs)?, mean_map(&probs)?),
        };
        for (kind, value) in score(&gt, &mask, Some(&prob), cfg.degenerate_auroc)? {
            records.push(MetricRecord::new(entry.image_id.clone(), model, kind, value));
        }
        masks.push((model, mask));
    }
    Ok(Scored { records, masks })
}

/// Scores every selected image; writes `metrics.csv` and the aggregated masks.
pub fn evaluate(ctx: &Context) -> Result<Vec<PathBuf>> {
    let cfg = &ctx.config;
    let images = selected_images(ctx)?;
    if images.is_empty() {
        return Err(CliError::Input("no images selected for evaluation".into()));
    }
    let expected = images.iter().flat_map(|e| {
        let mut paths = vec![PathBuf::from(&e.gt_path)];
        for model in Regime::ALL {
            for k in 1..=cfg.runs {
                paths.push(png(&run_dir(ctx, "predictions", model, k), &e.image_id));
                paths.push(png(&run_dir(ctx, "probabilities", model, k), &e.image_id));
            }
        }
        paths
    });
    let absent = missing(expected);
    if !absent.is_empty() {
        return Err(CliError::MissingFiles(absent));
    }

    let scored: Vec<Scored> = ctx.pool(|| {
        images
            .par_iter()
            .map(|e| score_image(ctx, e))
            .collect::<Result<Vec<_>>>()
    })??;

    let mut written = Vec::new();
    let mut records = Vec::new();
    for (entry, s) in images.iter().zip(scored) {
        for (model, mask) in &s.masks {
            let path = aggregated_mask(&ctx.output, *model, &entry.image_id);
            create_parent(&path)?;
            save_mask(mask, &path)?;
            written.push(path);
        }
        records.extend(s.records);
    }
    records.sort_by(|a, b| (&a.image_id, a.model.label(), a.kind).cmp(&(&b.image_id, b.model.label(), b.kind)));
    let path = metrics_path(&ctx.output);
    write_file(&path, metrics_to_csv(&records))?;
    written.push(path);
    Ok(written)
}
