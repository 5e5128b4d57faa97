//! CSV formats shared by the subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use segstat_core::Regime;
use segstat_core::metrics::{MetricKind, MetricRecord};
use segstat_core::splits::{DatasetManifest, ManifestEntry, Ratio, SplitEntry, SplitManifest};

use crate::error::{CliError, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SHUFFLE_METHOD: &str = "splitmix64-fisher-yates";

pub fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    }
    Ok(())
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    create_parent(path)?;
    fs::write(path, contents).map_err(CliError::io(path))
}

/// Serialises rows with a header, `\n` line endings and minimal quoting.
pub fn csv_string<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for row in rows {
        w.write_record(row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
}

/// Shortest representation that reads back to the same `f64`.
pub fn fmt_value(v: f64) -> String {
    format!("{v}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_value).unwrap_or_default()
}

fn reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(CliError::csv(path))
}

fn column(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| CliError::format(path, format!("missing column {name:?}")))
}

/// Reads `image_id,clinical_class,gt_path[,...]`; `gt_path` is resolved against `root`.
pub fn read_manifest(path: &Path, root: &Path) -> Result<DatasetManifest> {
    let mut rdr = reader(path)?;
    let headers = rdr.headers().map_err(CliError::csv(path))?.clone();
    let id = column(&headers, "image_id", path)?;
    let class = column(&headers, "clinical_class", path)?;
    let gt = column(&headers, "gt_path", path)?;
    let mut entries = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(CliError::csv(path))?;
        let extra = rec
            .iter()
            .enumerate()
            .filter(|(i, _)| ![id, class, gt].contains(i))
            .map(|(_, v)| v.to_string())
            .collect();
        entries.push(ManifestEntry {
            image_id: rec[id].trim().to_string(),
            clinical_class: rec[class].trim().to_string(),
            gt_path: root.join(rec[gt].trim()).to_string_lossy().into_owned(),
            extra,
        });
    }
    DatasetManifest::new(entries).map_err(|e| CliError::format(path, e.to_string()))
}

pub fn split_file_name(s: &SplitManifest) -> String {
    if s.stage == 0 {
        format!("split_{}.csv", s.split_index)
    } else {
        format!("train{}_test{}.csv", s.ratio.train_pct, s.ratio.test_pct)
    }
}

/// `# key=value` header lines, then `image_id,clinical_class,side` in manifest order.
pub fn split_to_csv(s: &SplitManifest) -> String {
    let mut out = String::new();
    let mut meta = vec![
        ("tool_version", TOOL_VERSION.to_string()),
        ("seed", s.seed.to_string()),
        ("ratio", s.ratio.to_string()),
        ("split_index", s.split_index.to_string()),
        ("stage", s.stage.to_string()),
        ("shuffle", SHUFFLE_METHOD.to_string()),
        ("stratified", s.stratified.to_string()),
    ];
    if s.stage > 0 {
        meta.push(("pooling", "seeded-uniform-from-train".to_string()));
    }
    for (k, v) in meta {
        out.push_str(&format!("# {k}={v}\n"));
    }
    let mut rows: Vec<(&SplitEntry, &str)> = s
        .train
        .iter()
        .map(|e| (e, "train"))
        .chain(s.test.iter().map(|e| (e, "test")))
        .collect();
    rows.sort_by_key(|(e, _)| e.position);
    out.push_str(&csv_string(
        &["image_id", "clinical_class", "side"],
        rows.into_iter()
            .map(|(e, side)| [e.image_id.as_str(), e.clinical_class.as_str(), side]),
    ));
    out
}

/// Reads a split file back, taking positions and classes from `manifest`.
pub fn read_split(path: &Path, manifest: &DatasetManifest) -> Result<SplitManifest> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut meta = BTreeMap::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some((k, v)) = line.trim_start_matches('#').trim().split_once('=') {
            meta.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    let get = |key: &str| {
        meta.get(key)
            .ok_or_else(|| CliError::format(path, format!("header lacks {key}")))
    };
    let parse_err = |key: &str| CliError::format(path, format!("bad {key} in header"));
    let seed: u64 = get("seed")?.parse().map_err(|_| parse_err("seed"))?;
    let ratio = Ratio::parse(get("ratio")?).map_err(|_| parse_err("ratio"))?;
    let split_index: u32 = get("split_index")?.parse().map_err(|_| parse_err("split_index"))?;
    let stage: u32 = get("stage")?.parse().map_err(|_| parse_err("stage"))?;
    let stratified = get("stratified")? == "true";

    let positions: BTreeMap<&str, usize> = manifest
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.image_id.as_str(), i))
        .collect();
    let mut rdr = reader(path)?;
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(CliError::csv(path))?;
        let id = rec.get(0).unwrap_or_default();
        let position = *positions
            .get(id)
            .ok_or_else(|| CliError::format(path, format!("image {id} is not in the manifest")))?;
        let entry = SplitEntry {
            image_id: id.to_string(),
            clinical_class: manifest.entries()[position].clinical_class.clone(),
            position,
        };
        match rec.get(2) {
            Some("train") => train.push(entry),
            Some("test") => test.push(entry),
            other => return Err(CliError::format(path, format!("image {id}: side {other:?}"))),
        }
    }
    if train.len() + test.len() != manifest.len() {
        return Err(CliError::format(
            path,
            format!(
                "covers {} of {} manifest images",
                train.len() + test.len(),
                manifest.len()
            ),
        ));
    }
    Ok(SplitManifest::from_sides(
        seed,
        ratio,
        split_index,
        stage,
        stratified,
        train,
        test,
    )?)
}

pub fn split_path(output: &Path, split_index: u32) -> PathBuf {
    output.join("splits").join(format!("split_{split_index}.csv"))
}

pub const METRIC_HEADER: [&str; 5] = ["image_id", "model", "metric", "value", "degenerate"];

pub fn metrics_to_csv(records: &[MetricRecord]) -> String {
    csv_string(
        &METRIC_HEADER,
        records.iter().map(|r| {
            [
                r.image_id.clone(),
                r.model.label().to_string(),
                r.kind.label().to_string(),
                fmt_opt(r.value),
                u8::from(r.degenerate).to_string(),
            ]
        }),
    )
}

pub fn read_metrics(path: &Path) -> Result<Vec<MetricRecord>> {
    let mut rdr = reader(path)?;
    let headers = rdr.headers().map_err(CliError::csv(path))?.clone();
    let cols: Vec<usize> = METRIC_HEADER
        .iter()
        .map(|c| column(&headers, c, path))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(CliError::csv(path))?;
        let bad = |what: &str| CliError::format(path, format!("row {}: bad {what}", line + 2));
        let model: Regime = rec[cols[1]].trim().parse().map_err(|_| bad("model"))?;
        let kind: MetricKind = rec[cols[2]].trim().parse().map_err(|_| bad("metric"))?;
        let raw = rec[cols[3]].trim();
        let value = if raw.is_empty() {
            None
        } else {
            let v: f64 = raw.parse().map_err(|_| bad("value"))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(bad("value (outside [0, 1])"));
            }
            Some(v)
        };
        let degenerate = match rec[cols[4]].trim() {
            "0" | "" => false,
            "1" => true,
            _ => return Err(bad("degenerate flag")),
        };
        out.push(MetricRecord {
            image_id: rec[cols[0]].trim().to_string(),
            model,
            kind,
            value,
            degenerate,
        });
    }
    Ok(out)
}
