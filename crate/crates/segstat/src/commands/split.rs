use std::path::PathBuf;

use segstat_core::splits::{SplitManifest, class_report, deplete, make_splits};

use crate::files::{
    csv_string, fmt_value, read_manifest, read_split, split_file_name, split_path, split_to_csv, write_file,
};
use crate::tables::class_table;
use crate::{Context, Result};

fn write_reports(dir: &std::path::Path, title: &str, splits: &[SplitManifest]) -> Result<Vec<PathBuf>> {
    let mut rows = Vec::new();
    let mut text_rows = Vec::new();
    for s in splits {
        let report = class_report(s);
        for r in &report {
            rows.push([
                s.split_index.to_string(),
                s.stage.to_string(),
                s.ratio.to_string(),
                r.clinical_class.clone(),
                r.train.to_string(),
                fmt_value(r.train_pct),
                r.test.to_string(),
                fmt_value(r.test_pct),
            ]);
        }
        let label = if s.stage == 0 {
            s.split_index.to_string()
        } else {
            format!("{} ({})", s.split_index, s.ratio)
        };
        text_rows.push((label, report));
    }
    let csv = csv_string(
        &[
            "split_index",
            "stage",
            "ratio",
            "clinical_class",
            "train",
            "train_pct",
            "test",
            "test_pct",
        ],
        rows,
    );
    let (csv_path, txt_path) = (dir.join("class_report.csv"), dir.join("class_report.txt"));
    write_file(&csv_path, csv)?;
    write_file(&txt_path, class_table(title, &text_rows))?;
    Ok(vec![csv_path, txt_path])
}

/// Writes `splits/split_<i>.csv` for every split plus the class report.
pub fn split(ctx: &Context) -> Result<Vec<PathBuf>> {
    let cfg = &ctx.config;
    let m = read_manifest(&cfg.manifest, &cfg.root)?;
    let splits = make_splits(&m, ctx.seed, cfg.split_count, cfg.ratio, cfg.stratified)?;
    let dir = ctx.output.join("splits");
    let mut written = Vec::new();
    for s in &splits {
        let path = dir.join(split_file_name(s));
        write_file(&path, split_to_csv(s))?;
        written.push(path);
    }
    let title = format!(
        "Clinical classes per split ({}, seed {}, {})",
        cfg.dataset_name, ctx.seed, cfg.ratio
    );
    written.extend(write_reports(&dir, &title, &splits)?);
    Ok(written)
}

/// Depletes the selected split (or every split) along the configured schedule.
pub fn deplete_splits(ctx: &Context) -> Result<Vec<PathBuf>> {
    let cfg = &ctx.config;
    let m = read_manifest(&cfg.manifest, &cfg.root)?;
    let indices: Vec<u32> = match ctx.split_index {
        Some(i) => vec![i],
        None => (1..=cfg.split_count).collect(),
    };
    let mut written = Vec::new();
    for i in indices {
        let s = read_split(&split_path(&ctx.output, i), &m)?;
        let stages = deplete(&s, &cfg.depletion, ctx.seed)?;
        let dir = ctx.output.join("depletion").join(format!("split_{i}"));
        for st in &stages {
            let path = dir.join(split_file_name(st));
            write_file(&path, split_to_csv(st))?;
            written.push(path);
        }
        let title = format!(
            "Clinical classes after depletion ({}, split {i}, seed {})",
            cfg.dataset_name, ctx.seed
        );
        written.extend(write_reports(&dir, &title, &stages)?);
    }
    Ok(written)
}
