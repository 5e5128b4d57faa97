use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use segstat_core::Regime;
use segstat_core::metrics::{MetricKind, MetricRecord};
use segstat_core::stats::{
    Comparison, MetricDistribution, compare_records, shapiro_wilk_seeded, yeo_johnson, yeo_johnson_mle,
};

use super::metrics_path;
use crate::files::{csv_string, fmt_opt, read_manifest, read_metrics, write_file};
use crate::tables::{sets_table, table1, table2};
use crate::{CliError, Context, Result};

fn fmt_p(p: f64) -> String {
    format!("{p:.6e}")
}

fn dagger_label(r: Option<Regime>) -> String {
    r.map(|r| r.label().to_string()).unwrap_or_default()
}

pub struct Report {
    /// Each comparison with the number of images it covers.
    pub comparisons: Vec<(Comparison, usize)>,
}

fn check_coverage(records: &[MetricRecord], path: &Path) -> Result<()> {
    for model in Regime::ALL {
        if !records.iter().any(|r| r.model == model) {
            return Err(CliError::Input(format!("{} has no {model} rows", path.display())));
        }
    }
    Ok(())
}

pub fn build_report(ctx: &Context, records: &[MetricRecord]) -> Result<Report> {
    let mut comparisons = Vec::new();
    for kind in MetricKind::ALL {
        if !records.iter().any(|r| r.kind == kind) {
            continue;
        }
        let c = compare_records(records, kind, ctx.config.compare)?;
        let n = records
            .iter()
            .filter(|r| r.kind == kind && r.model == Regime::TransferLearned)
            .count();
        comparisons.push((c, n));
    }
    Ok(Report { comparisons })
}

fn stats_csv(report: &Report) -> String {
    csv_string(
        &[
            "metric",
            "model_a_median",
            "model_b_median",
            "delta_median",
            "p_value",
            "significant",
            "dagger",
            "n_gt",
            "n_eq",
            "n_lt",
            "n_a_ge_0.9",
            "n_b_ge_0.9",
        ],
        report.comparisons.iter().map(|(c, _)| {
            [
                c.kind.label().to_string(),
                fmt_opt(c.transfer.map(|s| s.median)),
                fmt_opt(c.medical.map(|s| s.median)),
                fmt_opt(c.delta_median),
                c.mood.map(|m| fmt_p(m.p_value)).unwrap_or_default(),
                u8::from(c.significant()).to_string(),
                dagger_label(c.median_dagger),
                c.counts.gt.to_string(),
                c.counts.eq.to_string(),
                c.counts.lt.to_string(),
                c.transfer_at_or_above.to_string(),
                c.medical_at_or_above.to_string(),
            ]
        }),
    )
}

fn normality_csv(ctx: &Context, records: &[MetricRecord]) -> Result<String> {
    let mut rows = Vec::new();
    for model in [Regime::MedicalOnly, Regime::TransferLearned] {
        for kind in MetricKind::ALL {
            let d = MetricDistribution::from_records(model, kind, records)?;
            let values = d.values();
            if values.is_empty() {
                continue;
            }
            let mut row = vec![
                model.label().to_string(),
                kind.label().to_string(),
                values.len().to_string(),
            ];
            match shapiro_wilk_seeded(&values, ctx.seed) {
                Ok(sw) => {
                    row.push(format!("{:.6}", sw.w));
                    row.push(fmt_p(sw.p_value));
                    row.push(sw.subsampled_from.map(|n| n.to_string()).unwrap_or_default());
                }
                Err(_) => row.extend([String::new(), String::new(), String::new()]),
            }
            match yeo_johnson_mle(&values) {
                Ok(lambda) => {
                    row.push(format!("{lambda:.6}"));
                    match shapiro_wilk_seeded(&yeo_johnson(&values, lambda), ctx.seed) {
                        Ok(sw) => {
                            row.push(format!("{:.6}", sw.w));
                            row.push(fmt_p(sw.p_value));
                        }
                        Err(_) => row.extend([String::new(), String::new()]),
                    }
                }
                Err(_) => row.extend([String::new(), String::new(), String::new()]),
            }
            rows.push(row);
        }
    }
    Ok(csv_string(
        &[
            "model",
            "metric",
            "n",
            "w",
            "p_value",
            "subsampled_from",
            "yj_lambda",
            "yj_w",
            "yj_p_value",
        ],
        rows,
    ))
}

fn by_class_csv(ctx: &Context, records: &[MetricRecord]) -> Result<String> {
    let m = read_manifest(&ctx.config.manifest, &ctx.config.root)?;
    let class_of: BTreeMap<&str, &str> = m
        .entries()
        .iter()
        .map(|e| (e.image_id.as_str(), e.clinical_class.as_str()))
        .collect();
    let classes: BTreeSet<&str> = records
        .iter()
        .filter_map(|r| class_of.get(r.image_id.as_str()).copied())
        .collect();
    let mut rows = Vec::new();
    for class in classes {
        let subset: Vec<MetricRecord> = records
            .iter()
            .filter(|r| class_of.get(r.image_id.as_str()) == Some(&class))
            .cloned()
            .collect();
        for (c, n) in build_report(ctx, &subset)?.comparisons {
            rows.push([
                class.to_string(),
                c.kind.label().to_string(),
                n.to_string(),
                fmt_opt(c.transfer.map(|s| s.median)),
                fmt_opt(c.medical.map(|s| s.median)),
                fmt_opt(c.transfer.map(|s| s.mean)),
                fmt_opt(c.medical.map(|s| s.mean)),
                fmt_opt(c.delta_median),
                c.mood.map(|m| fmt_p(m.p_value)).unwrap_or_default(),
                u8::from(c.significant()).to_string(),
                dagger_label(c.median_dagger),
                dagger_label(c.mean_dagger),
            ]);
        }
    }
    Ok(csv_string(
        &[
            "clinical_class",
            "metric",
            "n",
            "model_a_median",
            "model_b_median",
            "model_a_mean",
            "model_b_mean",
            "delta_median",
            "p_value",
            "significant",
            "median_dagger",
            "mean_dagger",
        ],
        rows,
    ))
}

fn write_report(ctx: &Context, dir: &Path, label: &str, records: &[MetricRecord]) -> Result<(Vec<PathBuf>, Report)> {
    let report = build_report(ctx, records)?;
    let n = report.comparisons.first().map(|c| c.1).unwrap_or(0);
    let title = format!("{label} (n = {n})");
    let comps: Vec<Comparison> = report.comparisons.iter().map(|c| c.0.clone()).collect();
    let outputs = [
        ("stats_report.csv", stats_csv(&report)),
        ("table1.txt", table1(&title, &comps)),
        (
            "table2.txt",
            table2(&title, &report.comparisons, ctx.config.compare.threshold),
        ),
        ("normality.csv", normality_csv(ctx, records)?),
        ("by_class.csv", by_class_csv(ctx, records)?),
    ];
    let mut written = Vec::new();
    for (name, body) in outputs {
        let path = dir.join(name);
        write_file(&path, body)?;
        written.push(path);
    }
    Ok((written, report))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "metrics".into())
}

/// Compares the two regimes on one or more metric tables. With several
/// tables each gets its own report directory plus a side-by-side summary.
pub fn compare(ctx: &Context, inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let inputs = if inputs.is_empty() {
        vec![metrics_path(&ctx.output)]
    } else {
        inputs.to_vec()
    };
    let dir = ctx.output.join("compare");
    let mut tables = Vec::new();
    for path in &inputs {
        if !path.is_file() {
            return Err(CliError::MissingFiles(vec![path.clone()]));
        }
        let records = read_metrics(path)?;
        check_coverage(&records, path)?;
        tables.push((stem(path), records));
    }
    let labels: BTreeSet<&str> = tables.iter().map(|t| t.0.as_str()).collect();
    if labels.len() != tables.len() {
        return Err(CliError::Input("metric tables must have distinct file names".into()));
    }

    if let [(_, records)] = tables.as_slice() {
        return Ok(write_report(ctx, &dir, &ctx.config.dataset_name, records)?.0);
    }
    let mut written = Vec::new();
    let mut sets = Vec::new();
    for (label, records) in &tables {
        let (paths, report) = write_report(
            ctx,
            &dir.join(label),
            &format!("{} / {label}", ctx.config.dataset_name),
            records,
        )?;
        written.extend(paths);
        sets.push((
            label.clone(),
            report.comparisons.into_iter().map(|c| c.0).collect::<Vec<_>>(),
        ));
    }
    let mut rows = Vec::new();
    for (label, comps) in &sets {
        for c in comps {
            rows.push([
                label.clone(),
                c.kind.label().to_string(),
                fmt_opt(c.transfer.map(|s| s.median)),
                fmt_opt(c.medical.map(|s| s.median)),
                fmt_opt(c.delta_median),
                c.mood.map(|m| fmt_p(m.p_value)).unwrap_or_default(),
                u8::from(c.significant()).to_string(),
                dagger_label(c.median_dagger),
            ]);
        }
    }
    let csv_path = dir.join("sets.csv");
    write_file(
        &csv_path,
        csv_string(
            &[
                "set",
                "metric",
                "model_a_median",
                "model_b_median",
                "delta_median",
                "p_value",
                "significant",
                "dagger",
            ],
            rows,
        ),
    )?;
    let txt_path = dir.join("sets.txt");
    write_file(
        &txt_path,
        sets_table(&format!("{} medians by set", ctx.config.dataset_name), &sets),
    )?;
    written.extend([csv_path, txt_path]);
    Ok(written)
}
