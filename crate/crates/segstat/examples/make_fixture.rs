//! Writes the 12-image fixture dataset used by the integration and acceptance
//! tests: `cargo run -p segstat --example make_fixture -- <dir>`.

use std::fs;
use std::path::{Path, PathBuf};

use segstat_core::io::{save_heatmap, save_mask, save_probability_map};
use segstat_core::{BinaryMask, Heatmap, ProbabilityMap};

const W: usize = 16;
const H: usize = 16;
const RUNS: usize = 5;
const MODELS: [&str; 2] = ["T_II", "L_MI"];

type Rect = (usize, usize, usize, usize);

fn rects(parts: &[Rect]) -> BinaryMask {
    BinaryMask::from_fn(W, H, |x, y| {
        parts
            .iter()
            .any(|&(x0, y0, x1, y1)| (x0..x1).contains(&x) && (y0..y1).contains(&y))
    })
    .unwrap()
}

fn disc(cx: f64, cy: f64, r: f64) -> BinaryMask {
    BinaryMask::from_fn(W, H, |x, y| {
        let (dx, dy) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
        dx * dx + dy * dy <= r * r
    })
    .unwrap()
}

fn union(a: &BinaryMask, b: &BinaryMask) -> BinaryMask {
    a.zip_with(b, |p, q| p || q).unwrap()
}

/// Small integer hash in `0..64`, used for run-specific noise and score jitter.
fn hash(x: usize, y: usize, salt: usize) -> usize {
    let mut v = (x as u64) * 73_856_093 ^ (y as u64) * 19_349_663 ^ (salt as u64) * 83_492_791;
    v ^= v >> 13;
    v = v.wrapping_mul(0x5bd1_e995);
    v ^= v >> 15;
    (v % 64) as usize
}

/// The aggregated mask plus a few pixels only this run marks.
fn run_mask(base: &BinaryMask, run: usize, salt: usize, spread: usize) -> BinaryMask {
    let extra = BinaryMask::from_fn(W, H, |x, y| hash(x, y, salt * 10 + run) < spread).unwrap();
    union(base, &extra)
}

/// Scores at or above 0.5 exactly where the run marks a pixel, quantised so ties occur.
fn run_probability(mask: &BinaryMask, run: usize, salt: usize) -> ProbabilityMap {
    let values = (0..H)
        .flat_map(|y| (0..W).map(move |x| (x, y)))
        .map(|(x, y)| {
            let j = hash(x, y, 1000 + salt * 10 + run) as f64 / 64.0;
            let q = (j * 16.0).floor() / 16.0;
            if mask.get(x, y) { 0.5625 + 0.375 * q } else { 0.4375 * q }
        })
        .collect();
    ProbabilityMap::new(W, H, values).unwrap()
}

fn heatmap(gt: &BinaryMask, class: u8, run: usize, model: usize) -> Heatmap {
    let n = gt.count_ones().max(1) as f64;
    let (mut cx, mut cy) = (W as f64 / 2.0, H as f64 / 2.0);
    if gt.count_ones() > 0 {
        cx = (0..H)
            .flat_map(|y| (0..W).map(move |x| (x, y)))
            .filter(|&(x, y)| gt.get(x, y))
            .map(|p| p.0 as f64 + 0.5)
            .sum::<f64>()
            / n;
        cy = (0..H)
            .flat_map(|y| (0..W).map(move |x| (x, y)))
            .filter(|&(x, y)| gt.get(x, y))
            .map(|p| p.1 as f64 + 0.5)
            .sum::<f64>()
            / n;
    }
    let shift = (run as f64 - 2.0) * 0.5 + model as f64;
    let sigma = 3.0 + run as f64 * 0.25;
    let values = (0..H)
        .flat_map(|y| (0..W).map(move |x| (x, y)))
        .map(|(x, y)| {
            let (dx, dy) = (x as f64 + 0.5 - cx - shift, y as f64 + 0.5 - cy);
            let g = (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp();
            if class == 1 { g } else { 1.0 - g }
        })
        .collect();
    Heatmap::new(W, H, values, class).unwrap()
}

struct Case {
    id: &'static str,
    class: &'static str,
    gt: BinaryMask,
    /// Aggregated masks for T_II and L_MI.
    pred: [BinaryMask; 2],
}

fn cases() -> Vec<Case> {
    let empty = rects(&[]);
    let full = rects(&[(0, 0, W, H)]);
    let square = rects(&[(4, 4, 12, 12)]);
    vec![
        Case {
            id: "f01_perfect",
            class: "benign",
            gt: square.clone(),
            pred: [square.clone(), square.clone()],
        },
        Case {
            id: "f02_empty_gt",
            class: "benign",
            gt: empty.clone(),
            pred: [empty.clone(), rects(&[(2, 2, 5, 5)])],
        },
        Case {
            id: "f03_full_gt",
            class: "benign",
            gt: full.clone(),
            pred: [full.clone(), rects(&[(0, 0, W, 12)])],
        },
        Case {
            id: "f04_disjoint_halves",
            class: "malignant",
            gt: rects(&[(0, 0, 8, H)]),
            pred: [rects(&[(8, 0, W, H)]), rects(&[(0, 0, 8, H)])],
        },
        Case {
            id: "f05_both_high_fp",
            class: "benign",
            gt: rects(&[(6, 6, 10, 10)]),
            pred: [rects(&[(1, 4, 10, 12)]), rects(&[(6, 2, 14, 14)])],
        },
        Case {
            id: "f06_both_high_fn",
            class: "malignant",
            gt: rects(&[(3, 3, 13, 13)]),
            pred: [rects(&[(3, 3, 8, 13)]), rects(&[(8, 3, 13, 13)])],
        },
        Case {
            id: "f07_transfer_closer",
            class: "benign",
            gt: disc(8.0, 8.0, 5.0),
            pred: [disc(8.0, 8.5, 5.0), disc(10.5, 9.0, 4.0)],
        },
        Case {
            id: "f08_medical_closer",
            class: "benign",
            gt: disc(7.0, 9.0, 4.0),
            pred: [disc(4.0, 11.0, 3.0), disc(7.0, 9.0, 4.5)],
        },
        Case {
            id: "f09_fp_against_fn",
            class: "malignant",
            gt: rects(&[(4, 4, 12, 12)]),
            pred: [rects(&[(2, 2, 14, 14)]), rects(&[(4, 4, 12, 8)])],
        },
        Case {
            id: "f10_small_lesion",
            class: "benign",
            gt: rects(&[(7, 7, 9, 9)]),
            pred: [rects(&[(7, 7, 10, 10)]), rects(&[(6, 6, 9, 9)])],
        },
        Case {
            id: "f11_ring",
            class: "benign",
            gt: disc(8.0, 8.0, 6.0)
                .zip_with(&disc(8.0, 8.0, 3.0), |a, b| a && !b)
                .unwrap(),
            pred: [
                disc(8.0, 8.0, 6.0),
                disc(8.0, 8.0, 5.0)
                    .zip_with(&disc(8.0, 8.0, 2.0), |a, b| a && !b)
                    .unwrap(),
            ],
        },
        Case {
            id: "f12_border",
            class: "malignant",
            gt: rects(&[(0, 10, 6, H), (12, 0, W, 3)]),
            pred: [rects(&[(0, 9, 6, H), (12, 0, W, 4)]), rects(&[(0, 11, 5, H)])],
        },
    ]
}

fn write(path: PathBuf, save: impl FnOnce(&Path) -> segstat_core::Result<()>) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    save(&path).unwrap();
}

const CONFIG: &str = "\
[dataset]
name = \"fixture\"
manifest = \"manifest.csv\"

[models]
transfer = \"T_II\"
medical = \"L_MI\"
runs = 5

[split]
seed = 42
count = 5
ratio = \"80:20\"

[metrics]
images = \"all\"

[output]
dir = \"out\"
";

fn main() {
    let root = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "crates/segstat/tests/fixture".into()),
    );
    let mut manifest = String::from("image_id,clinical_class,gt_path\n");
    for (salt, case) in cases().iter().enumerate() {
        manifest.push_str(&format!("{},{},gt/{}.png\n", case.id, case.class, case.id));
        write(root.join("gt").join(format!("{}.png", case.id)), |p| {
            save_mask(&case.gt, p)
        });
        for (m, model) in MODELS.iter().enumerate() {
            for run in 1..=RUNS {
                let spread = if case.id == "f11_ring" { 12 } else { 2 };
                let mask = run_mask(&case.pred[m], run, salt * 2 + m, spread);
                let prob = run_probability(&mask, run, salt * 2 + m);
                let dir = |kind: &str| root.join(kind).join(model).join(format!("run_{run}"));
                write(dir("predictions").join(format!("{}.png", case.id)), |p| {
                    save_mask(&mask, p)
                });
                write(dir("probabilities").join(format!("{}.png", case.id)), |p| {
                    save_probability_map(&prob, p)
                });
                for class in [0u8, 1] {
                    let h = heatmap(&case.gt, class, run, m);
                    write(
                        dir("heatmaps").join(class.to_string()).join(format!("{}.png", case.id)),
                        |p| save_heatmap(&h, p),
                    );
                }
            }
        }
    }
    fs::write(root.join("manifest.csv"), manifest).unwrap();
    fs::write(root.join("segstat.toml"), CONFIG).unwrap();
}
