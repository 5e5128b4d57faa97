use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use segstat_core::ensemble::{FuseOp, Recommendation, best_fusion_oracle, fuse as fuse_masks, recommend_fusion};
use segstat_core::io::{MaskKind, load_mask, save_mask};
use segstat_core::mask::confusion;
use segstat_core::{BinaryMask, Regime};

use super::{aggregated_mask, metrics_path, missing, png};
use crate::files::{create_parent, csv_string, fmt_value, read_manifest, read_metrics, write_file};
use crate::{CliError, Context, Result};

pub const FUSION_OPS: [&str; 3] = ["union", "intersection", "recommended"];

/// Image ids scored by `evaluate`, sorted, with their ground-truth paths.
pub fn evaluated_images(ctx: &Context) -> Result<Vec<(String, PathBuf)>> {
    let path = metrics_path(&ctx.output);
    if !path.is_file() {
        return Err(CliError::MissingFiles(vec![path]));
    }
    let records = read_metrics(&path)?;
    let m = read_manifest(&ctx.config.manifest, &ctx.config.root)?;
    let gt: BTreeMap<&str, &str> = m
        .entries()
        .iter()
        .map(|e| (e.image_id.as_str(), e.gt_path.as_str()))
        .collect();
    let mut ids: Vec<&str> = records.iter().map(|r| r.image_id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.into_iter()
        .map(|id| {
            gt.get(id).map(|p| (id.to_string(), PathBuf::from(p))).ok_or_else(|| {
                CliError::Input(format!(
                    "{} lists image {id}, which is not in the manifest",
                    path.display()
                ))
            })
        })
        .collect()
}

struct Fused {
    row: [String; 7],
    masks: [BinaryMask; 3],
}

fn fuse_image(ctx: &Context, id: &str, gt_path: &Path) -> Result<Fused> {
    let gt = load_mask(gt_path, MaskKind::GroundTruth, ctx.config.gt_rule)?;
    let a = load_mask(
        &aggregated_mask(&ctx.output, Regime::TransferLearned, id),
        MaskKind::Prediction,
        None,
    )?;
    let b = load_mask(
        &aggregated_mask(&ctx.output, Regime::MedicalOnly, id),
        MaskKind::Prediction,
        None,
    )?;
    let rec = recommend_fusion(&confusion(&gt, &a)?, &confusion(&gt, &b)?, ctx.config.fusion);
    let oracle = best_fusion_oracle(&gt, &a, &b)?;
    let union = fuse_masks(&a, &b, FuseOp::Union)?;
    let inter = fuse_masks(&a, &b, FuseOp::Intersection)?;
    let recommended = match rec {
        Recommendation::Fuse(FuseOp::Union) => union.clone(),
        Recommendation::Fuse(FuseOp::Intersection) => inter.clone(),
        Recommendation::None => a.clone(),
    };
    Ok(Fused {
        row: [
            id.to_string(),
            fmt_value(oracle.dice[0]),
            fmt_value(oracle.dice[1]),
            fmt_value(oracle.dice[2]),
            fmt_value(oracle.dice[3]),
            rec.label().to_string(),
            oracle.best.label().to_string(),
        ],
        masks: [union, inter, recommended],
    })
}

/// Fuses the aggregated masks of both regimes for every evaluated image.
/// Model a is T_II and model b is L_MI; "recommended" keeps a when no fusion fires.
pub fn fuse(ctx: &Context) -> Result<Vec<PathBuf>> {
    let images = evaluated_images(ctx)?;
    let absent = missing(images.iter().flat_map(|(id, gt)| {
        [
            gt.clone(),
            aggregated_mask(&ctx.output, Regime::TransferLearned, id),
            aggregated_mask(&ctx.output, Regime::MedicalOnly, id),
        ]
    }));
    if !absent.is_empty() {
        return Err(CliError::MissingFiles(absent));
    }
    let fused: Vec<Fused> = ctx.pool(|| {
        images
            .par_iter()
            .map(|(id, gt)| fuse_image(ctx, id, gt))
            .collect::<Result<Vec<_>>>()
    })??;

    let dir = ctx.output.join("fusion");
    let mut written = Vec::new();
    for ((id, _), f) in images.iter().zip(&fused) {
        for (op, mask) in FUSION_OPS.iter().zip(&f.masks) {
            let path = png(&dir.join(op), id);
            create_parent(&path)?;
            save_mask(mask, &path)?;
            written.push(path);
        }
    }
    let report = dir.join("fusion_report.csv");
    write_file(
        &report,
        csv_string(
            &[
                "image_id",
                "dice_a",
                "dice_b",
                "dice_union",
                "dice_intersection",
                "recommended_op",
                "oracle_op",
            ],
            fused.iter().map(|f| f.row.clone()),
        ),
    )?;
    written.push(report);
    Ok(written)
}
