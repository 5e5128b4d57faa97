//! Helpers for driving the `segstat` binary against the fixture dataset and
//! for planting per-image metric tables with prescribed counts.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const STAGES: [&str; 6] = ["split", "deplete", "evaluate", "compare", "fuse", "render"];

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixture")
}

pub fn golden_dir() -> PathBuf {
    fixture_dir().join("golden")
}

pub fn segstat(config: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segstat"))
        .arg("--config")
        .arg(config)
        .args(args)
        .env_remove("SEGSTAT_JOBS")
        .output()
        .expect("segstat runs")
}

/// Runs `segstat` and panics with its stderr unless it exits 0.
pub fn segstat_ok(config: &Path, args: &[&str]) -> String {
    let out = segstat(config, args);
    assert!(
        out.status.success(),
        "segstat {args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Every pipeline stage over the fixture, written to `output`.
pub fn run_pipeline(output: &Path, extra: &[&str]) {
    let config = fixture_dir().join("segstat.toml");
    let out = output.to_str().unwrap();
    for stage in STAGES {
        let mut args = vec![stage, "--output", out];
        args.extend_from_slice(extra);
        segstat_ok(&config, &args);
    }
}

/// Relative path to contents for every file below `root`.
pub fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

/// Files that are missing, extra, or different between two trees.
pub fn tree_diff(want: &BTreeMap<PathBuf, Vec<u8>>, got: &BTreeMap<PathBuf, Vec<u8>>) -> Vec<String> {
    let mut diffs = Vec::new();
    for (path, bytes) in want {
        match got.get(path) {
            None => diffs.push(format!("missing {}", path.display())),
            Some(b) if b != bytes => diffs.push(format!("differs {}", path.display())),
            Some(_) => {}
        }
    }
    for path in got.keys().filter(|p| !want.contains_key(*p)) {
        diffs.push(format!("extra {}", path.display()));
    }
    diffs
}

/// One CSV row as a header-keyed map.
pub fn csv_rows(text: &str) -> Vec<BTreeMap<String, String>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    rdr.records()
        .map(|r| {
            headers
                .iter()
                .zip(r.unwrap().iter())
                .map(|(h, v)| (h.to_string(), v.to_string()))
                .collect()
        })
        .collect()
}

/// Writes a dataset directory with a config and a manifest listing `ids`;
/// the ground-truth paths are never opened by `compare`.
pub fn compare_workspace(dir: &Path, name: &str, ids: &[String]) -> PathBuf {
    let mut manifest = String::from("image_id,clinical_class,gt_path\n");
    for id in ids {
        manifest.push_str(&format!("{id},all,gt/{id}.png\n"));
    }
    fs::write(dir.join("manifest.csv"), manifest).unwrap();
    let config = dir.join("segstat.toml");
    fs::write(
        &config,
        format!("[dataset]\nname = \"{name}\"\nmanifest = \"manifest.csv\"\n"),
    )
    .unwrap();
    config
}

/// Sign and threshold counts for one metric column of the per-image comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Planted {
    pub gt: usize,
    pub eq: usize,
    pub lt: usize,
    /// Images with `L_MI >= 0.9`.
    pub lmi_high: usize,
    /// Images with `T_II >= 0.9`.
    pub tii_high: usize,
}

/// Per-image `(L_MI, T_II)` pairs realising `p`, or `None` if no assignment exists.
///
/// With `s` images high under both models, the `L_MI`-only highs must sit in
/// the `lt` column and the `T_II`-only highs in the `gt` column.
pub fn plant(p: Planted) -> Option<Vec<(f64, f64)>> {
    let n = p.gt + p.eq + p.lt;
    for s in 0..=p.lmi_high.min(p.tii_high) {
        let (lmi_only, tii_only) = (p.lmi_high - s, p.tii_high - s);
        if lmi_only > p.lt || tii_only > p.gt {
            continue;
        }
        let caps = [p.eq, p.gt - tii_only, p.lt - lmi_only];
        if caps.iter().sum::<usize>() < s {
            continue;
        }
        let mut left = s;
        let both: Vec<usize> = caps
            .iter()
            .map(|&c| {
                let take = c.min(left);
                left -= take;
                take
            })
            .collect();
        let u = |i: usize| i as f64 / n as f64;
        let mut pairs = Vec::with_capacity(n);
        for i in 0..p.eq {
            let v = if i < both[0] {
                0.9 + 0.09 * u(i)
            } else {
                0.4 + 0.45 * u(i)
            };
            pairs.push((v, v));
        }
        for i in 0..p.gt {
            let x = u(i);
            pairs.push(if i < both[1] {
                (0.9 + 0.04 * x, 0.95 + 0.04 * x)
            } else if i < both[1] + tii_only {
                (0.4 + 0.45 * x, 0.9 + 0.09 * x)
            } else {
                (0.4 + 0.2 * x, 0.65 + 0.2 * x)
            });
        }
        for i in 0..p.lt {
            let x = u(i);
            pairs.push(if i < both[2] {
                (0.95 + 0.04 * x, 0.9 + 0.04 * x)
            } else if i < both[2] + lmi_only {
                (0.9 + 0.09 * x, 0.4 + 0.45 * x)
            } else {
                (0.65 + 0.2 * x, 0.4 + 0.2 * x)
            });
        }
        return Some(pairs);
    }
    None
}

/// A metrics CSV with one `(L_MI, T_II)` column per metric, image ids `prefix00000...`.
pub fn metrics_csv(prefix: &str, columns: &[(&str, Vec<(f64, f64)>)]) -> String {
    let n = columns[0].1.len();
    let mut out = String::from("image_id,model,metric,value,degenerate\n");
    for i in 0..n {
        for (model, pick) in [("L_MI", 0), ("T_II", 1)] {
            for (metric, pairs) in columns {
                let v = if pick == 0 { pairs[i].0 } else { pairs[i].1 };
                out.push_str(&format!("{prefix}{i:05},{model},{metric},{v},0\n"));
            }
        }
    }
    out
}
