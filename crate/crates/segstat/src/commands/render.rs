use std::path::{Path, PathBuf};

use rayon::prelude::*;
use segstat_core::Regime;
use segstat_core::colormap::render_heatmap;
use segstat_core::ensemble::average_heatmaps;
use segstat_core::io::{MaskKind, RgbImage, load_heatmap, load_mask, save_heatmap, save_rgb};
use segstat_core::mask::overlay;
use segstat_core::metrics::{MetricKind, MetricRecord};
use segstat_core::stats::{MetricDistribution, histogram, qq_points};

use super::fuse::{FUSION_OPS, evaluated_images};
use super::{aggregated_mask, metrics_path, missing, png, run_dir};
use crate::files::{create_parent, csv_string, fmt_value, read_metrics, write_file};
use crate::{CliError, Context, Result};

pub const HISTOGRAM_BINS: usize = 20;

fn heatmap_paths(ctx: &Context, model: Regime, class: u8, id: &str) -> Vec<PathBuf> {
    (1..=ctx.config.runs)
        .map(|k| png(&run_dir(ctx, "heatmaps", model, k).join(class.to_string()), id))
        .collect()
}

fn render_image(ctx: &Context, id: &str, gt_path: &Path) -> Result<Vec<PathBuf>> {
    let out = ctx.output.join("render");
    let gt = load_mask(gt_path, MaskKind::GroundTruth, ctx.config.gt_rule)?;
    let mut written = Vec::new();
    let mut emit_rgb = |path: PathBuf, img: &RgbImage| -> Result<()> {
        create_parent(&path)?;
        save_rgb(img, &path)?;
        written.push(path);
        Ok(())
    };
    for model in Regime::ALL {
        let pred = load_mask(&aggregated_mask(&ctx.output, model, id), MaskKind::Prediction, None)?;
        emit_rgb(png(&out.join("overlay").join(model.label()), id), &overlay(&gt, &pred)?)?;
    }
    for op in &FUSION_OPS[..2] {
        let fused = load_mask(
            &png(&ctx.output.join("fusion").join(op), id),
            MaskKind::Prediction,
            None,
        )?;
        emit_rgb(png(&out.join("fusion").join(op), id), &overlay(&gt, &fused)?)?;
    }
    let mut heatmaps_written = Vec::new();
    for model in Regime::ALL {
        for class in [0u8, 1] {
            let paths = heatmap_paths(ctx, model, class, id);
            if paths.iter().all(|p| !p.is_file()) {
                continue;
            }
            let maps = paths
                .iter()
                .map(|p| load_heatmap(p, class))
                .collect::<segstat_core::Result<Vec<_>>>()?;
            let mean = average_heatmaps(&maps)?;
            let sub = Path::new(model.label()).join(format!("class_{class}"));
            let mean_path = png(&out.join("heatmap_mean").join(&sub), id);
            create_parent(&mean_path)?;
            save_heatmap(&mean, &mean_path)?;
            heatmaps_written.push(mean_path);
            emit_rgb(png(&out.join("heatmap").join(&sub), id), &render_heatmap(&mean)?)?;
        }
    }
    written.extend(heatmaps_written);
    Ok(written)
}

fn distributions(records: &[MetricRecord]) -> Result<Vec<(Regime, MetricKind, Vec<f64>)>> {
    let mut out = Vec::new();
    for model in [Regime::MedicalOnly, Regime::TransferLearned] {
        for kind in MetricKind::ALL {
            let values = MetricDistribution::from_records(model, kind, records)?.values();
            if !values.is_empty() {
                out.push((model, kind, values));
            }
        }
    }
    Ok(out)
}

/// Equal-width histograms of every metric distribution on `[0, 1]`.
pub fn histogram_csv(records: &[MetricRecord]) -> Result<String> {
    let mut rows = Vec::new();
    for (model, kind, values) in distributions(records)? {
        for bin in histogram(&values, 0.0, 1.0, HISTOGRAM_BINS) {
            rows.push([
                model.label().to_string(),
                kind.label().to_string(),
                fmt_value(bin.lo),
                fmt_value(bin.hi),
                bin.count.to_string(),
            ]);
        }
    }
    Ok(csv_string(&["model", "metric", "bin_lo", "bin_hi", "count"], rows))
}

/// Normal Q-Q coordinates of every metric distribution.
pub fn qq_csv(records: &[MetricRecord]) -> Result<String> {
    let mut rows = Vec::new();
    for (model, kind, values) in distributions(records)? {
        for (i, p) in qq_points(&values)?.into_iter().enumerate() {
            rows.push([
                model.label().to_string(),
                kind.label().to_string(),
                (i + 1).to_string(),
                format!("{:.6}", p.theoretical),
                format!("{:.6}", p.sample),
            ]);
        }
    }
    Ok(csv_string(&["model", "metric", "rank", "theoretical", "sample"], rows))
}

fn plot_data(ctx: &Context) -> Result<Vec<PathBuf>> {
    let records = read_metrics(&metrics_path(&ctx.output))?;
    let dir = ctx.output.join("render");
    let hist = dir.join("histograms.csv");
    write_file(&hist, histogram_csv(&records)?)?;
    let qq = dir.join("qq.csv");
    write_file(&qq, qq_csv(&records)?)?;
    Ok(vec![hist, qq])
}

/// Overlays, fusion overlays, averaged heatmaps and the plot-data tables.
pub fn render(ctx: &Context) -> Result<Vec<PathBuf>> {
    let images = evaluated_images(ctx)?;
    let absent = missing(images.iter().flat_map(|(id, gt)| {
        let mut p = vec![gt.clone()];
        for model in Regime::ALL {
            p.push(aggregated_mask(&ctx.output, model, id));
        }
        for op in &FUSION_OPS[..2] {
            p.push(png(&ctx.output.join("fusion").join(op), id));
        }
        p
    }));
    if !absent.is_empty() {
        return Err(CliError::MissingFiles(absent));
    }
    let per_image: Vec<Vec<PathBuf>> = ctx.pool(|| {
        images
            .par_iter()
            .map(|(id, gt)| render_image(ctx, id, gt))
            .collect::<Result<Vec<_>>>()
    })??;
    let mut written: Vec<PathBuf> = per_image.into_iter().flatten().collect();
    written.extend(plot_data(ctx)?);
    Ok(written)
}
