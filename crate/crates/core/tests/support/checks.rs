//! One function per acceptance criterion that the core library answers on its
//! own. Each returns a short detail line on success and the first failure
//! otherwise.

use std::collections::HashSet;

use segstat_core::Regime;
use segstat_core::ensemble::{FuseOp, RunSet, fuse, gradcam_average, run_intersection};
use segstat_core::mask::confusion;
use segstat_core::metrics::{DegenerateAuroc, Verdict, auroc, delta_m, dice, sensitivity, specificity, superior};
use segstat_core::splits::{DEPLETION_SCHEDULE, DatasetManifest, ManifestEntry, Ratio, deplete, make_splits};
use segstat_core::stats::{
    MoodOptions, TieRule, moods_median_test, shapiro_wilk, yeo_johnson_inverse, yeo_johnson_mle,
};

use super::published::{KNOWN_MARKER_ERRATA, ROWS};
use super::{
    Stream, enumerate_cells, random_heatmap, random_mask, random_probability, reference, sample, stratified_gaussian,
    sweep_auroc,
};

pub type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

/// Differences of the published summaries reproduce every printed marker.
pub fn delta_reproduction() -> Check {
    let skin = delta_m(0.9282, 0.8544);
    ensure(
        (skin.value * 1e4).round() == 738.0 && skin.verdict == Verdict::TransferBetter,
        || format!("skin AUROC median delta {:?}", skin),
    )?;
    ensure(superior(0.9282, 0.8544, 0.05) == Some(Regime::TransferLearned), || {
        "skin AUROC dagger missing".into()
    })?;
    let prostate = delta_m(0.9059, 0.9520);
    ensure(
        (prostate.value * 1e4).round() == -461.0 && prostate.verdict == Verdict::MedicalBetter,
        || format!("prostate sensitivity median delta {:?}", prostate),
    )?;
    ensure(superior(0.9059, 0.9520, 0.05).is_none(), || {
        "prostate sensitivity has a dagger".into()
    })?;

    let mut disagreements = Vec::new();
    for r in ROWS {
        let d = delta_m(r.tii, r.lmi);
        let expected = if r.tii > r.lmi {
            Verdict::TransferBetter
        } else if r.tii < r.lmi {
            Verdict::MedicalBetter
        } else {
            Verdict::Tie
        };
        ensure(d.verdict == expected, || {
            format!("table {} {}: verdict {:?}", r.table, r.label, d.verdict)
        })?;
        let dagger = superior(r.tii, r.lmi, 0.05);
        if let Some(winner) = dagger {
            ensure(d.verdict.favoured() == Some(winner), || {
                format!("table {} {}: dagger on the loser", r.table, r.label)
            })?;
        }
        if dagger.is_some() != r.dagger {
            disagreements.push(r.label);
        }
    }
    ensure(disagreements == KNOWN_MARKER_ERRATA, || {
        format!("printed daggers not reproduced for {disagreements:?}")
    })?;
    Ok(format!(
        "{} published rows, {} printed-marker erratum",
        ROWS.len(),
        KNOWN_MARKER_ERRATA.len()
    ))
}

/// Metrics on random masks equal per-pixel enumeration; AUROC equals the threshold sweep.
pub fn metric_oracles(pairs: usize) -> Check {
    let mut rng = Stream::new(0xACCE_0002);
    let mut auroc_checked = 0;
    let mut worst = 0.0f64;
    for k in 0..pairs {
        let w = 1 + rng.below(32) as usize;
        let h = 1 + rng.below(32) as usize;
        let density = [0.0, 0.05, 0.3, 0.5, 0.9, 1.0][rng.below(6) as usize];
        let gt = random_mask(&mut rng, w, h, density);
        let density = rng.uniform();
        let pred = random_mask(&mut rng, w, h, density);
        let prob = random_probability(&mut rng, w, h);
        let c = confusion(&gt, &pred).map_err(|e| e.to_string())?;
        let (tp, fp, tn, fn_) = enumerate_cells(&gt, &pred);
        ensure((c.tp, c.fp, c.tn, c.fn_) == (tp, fp, tn, fn_), || {
            format!("pair {k}: confusion {c:?}")
        })?;
        let (tp, fp, tn, fn_) = (tp as f64, fp as f64, tn as f64, fn_ as f64);
        let want_sens = if tp + fn_ == 0.0 { 1.0 } else { tp / (tp + fn_) };
        let want_spec = if tn + fp == 0.0 { 1.0 } else { tn / (tn + fp) };
        let want_dice = if 2.0 * tp + fp + fn_ == 0.0 {
            1.0
        } else {
            2.0 * tp / (2.0 * tp + fp + fn_)
        };
        ensure(sensitivity(&c).value == Some(want_sens), || {
            format!("pair {k}: sensitivity")
        })?;
        ensure(specificity(&c).value == Some(want_spec), || {
            format!("pair {k}: specificity")
        })?;
        ensure(dice(&c).value == Some(want_dice), || format!("pair {k}: dice"))?;

        let got = auroc(&gt, &prob, DegenerateAuroc::Missing).map_err(|e| e.to_string())?;
        match (got.value, sweep_auroc(&gt, &prob)) {
            (Some(a), Some(b)) => {
                worst = worst.max((a - b).abs());
                ensure((a - b).abs() <= 1e-9, || format!("pair {k}: auroc {a} vs sweep {b}"))?;
                auroc_checked += 1;
            }
            (None, None) => {}
            (a, b) => return Err(format!("pair {k}: auroc {a:?} vs sweep {b:?}")),
        }
    }
    Ok(format!(
        "{pairs} pairs, {auroc_checked} AUROC comparisons, max |diff| {worst:.1e}"
    ))
}

fn tie_rule(name: &str) -> TieRule {
    name.parse().unwrap()
}

/// Mood, Shapiro-Wilk and Yeo-Johnson agree with the frozen reference values.
pub fn stats_parity() -> Check {
    let reference = reference();
    let mut mood_pairs = 0;
    let mut worst_p = 0.0f64;
    for entry in reference["mood_same_distribution"].as_array().unwrap() {
        let (a, b) = (sample(&entry["a"]), sample(&entry["b"]));
        for ties in ["below", "above", "ignore"] {
            for yates in [false, true] {
                let key = format!("{ties}_{}", if yates { "yates" } else { "plain" });
                let want = &entry[&key];
                let opts = MoodOptions {
                    ties: tie_rule(ties),
                    yates,
                    alpha: 0.05,
                };
                let got = moods_median_test(&a, &b, opts).map_err(|e| format!("{key}: {e}"))?;
                let p = want["p_value"].as_f64().unwrap();
                worst_p = worst_p.max((got.p_value - p).abs());
                ensure((got.p_value - p).abs() <= 1e-6, || {
                    format!("mood seed {} {key}: p {} vs {p}", entry["a"]["seed"], got.p_value)
                })?;
            }
        }
        mood_pairs += 1;
    }
    ensure(mood_pairs == 20, || {
        format!("expected 20 Mood pairs, found {mood_pairs}")
    })?;

    let mut worst_w = 0.0f64;
    let mut sw_cases = 0;
    for entry in reference["shapiro"].as_array().unwrap() {
        let n = entry["sample"]["n"].as_u64().unwrap();
        if ![10, 100, 2000].contains(&n) {
            continue;
        }
        let got = shapiro_wilk(&sample(&entry["sample"])).map_err(|e| e.to_string())?;
        let w = entry["w"].as_f64().unwrap();
        worst_w = worst_w.max((got.w - w).abs());
        ensure((got.w - w).abs() <= 1e-4, || {
            format!("shapiro seed {}: W {} vs {w}", entry["sample"]["seed"], got.w)
        })?;
        sw_cases += 1;
    }

    let mut worst_lambda = 0.0f64;
    for (i, &lambda) in [-1.0, 0.0, 0.5, 1.0, 2.0].iter().enumerate() {
        let got = yeo_johnson_mle(&planted_yeo_johnson(lambda, 9000 + i as u64)).map_err(|e| e.to_string())?;
        worst_lambda = worst_lambda.max((got - lambda).abs());
        ensure((got - lambda).abs() <= 0.05, || {
            format!("planted lambda {lambda} recovered as {got}")
        })?;
    }
    Ok(format!(
        "Mood {mood_pairs} pairs x 6 variants max |dp| {worst_p:.1e}; Shapiro-Wilk {sw_cases} samples max |dW| {worst_w:.1e}; Yeo-Johnson max |dlambda| {worst_lambda:.3}"
    ))
}

/// 2000 values whose Yeo-Johnson transform at `lambda` is Gaussian. The
/// latent spread for negative exponents is narrowed so that every latent value
/// lies inside the transform's image.
pub fn planted_yeo_johnson(lambda: f64, seed: u64) -> Vec<f64> {
    let (mu, sigma) = if lambda < 0.0 { (-0.6, 0.4) } else { (0.0, 1.0) };
    stratified_gaussian(seed, 2000, mu, sigma)
        .into_iter()
        .map(|x| yeo_johnson_inverse(x, lambda))
        .collect()
}

pub fn skin_manifest() -> DatasetManifest {
    let entries = (0..13_786)
        .map(|i| {
            let id = format!("ISIC_{i:07}");
            ManifestEntry {
                gt_path: format!("gt/{id}.png"),
                clinical_class: if i < 12_668 { "benign" } else { "malignant" }.to_string(),
                image_id: id,
                extra: vec![],
            }
        })
        .collect();
    DatasetManifest::new(entries).unwrap()
}

/// Five 80:20 splits of a 13,786-image two-class manifest and their depletion stages.
pub fn split_protocol(seed: u64) -> Check {
    let m = skin_manifest();
    let splits = make_splits(&m, seed, 5, Ratio::DEFAULT, false).map_err(|e| e.to_string())?;
    ensure(
        splits == make_splits(&m, seed, 5, Ratio::DEFAULT, false).unwrap(),
        || "split replay differs".into(),
    )?;
    let mut worst = 0.0f64;
    for s in &splits {
        ensure(s.train.len() == 11_028 && s.test.len() == 2_758, || {
            format!("split {}: {} / {}", s.split_index, s.train.len(), s.test.len())
        })?;
        for (class, target) in [("benign", 92.0), ("malignant", 8.0)] {
            let c = s.class_counts[class];
            for (count, side) in [(c.train, s.train.len()), (c.test, s.test.len())] {
                let pct = 100.0 * count as f64 / side as f64;
                worst = worst.max((pct - target).abs());
                ensure((pct - target).abs() <= 1.0, || {
                    format!("split {}: {class} at {pct:.2}%", s.split_index)
                })?;
            }
        }
        let stages = deplete(s, &DEPLETION_SCHEDULE, seed).map_err(|e| e.to_string())?;
        ensure(stages == deplete(s, &DEPLETION_SCHEDULE, seed).unwrap(), || {
            "depletion replay differs".into()
        })?;
        let mut previous: HashSet<&str> = s.test_ids().collect();
        for (stage, ratio) in stages.iter().zip(DEPLETION_SCHEDULE) {
            let n = stage.len();
            ensure(
                n == m.len() && stage.train.len() == n * ratio.train_pct as usize / 100,
                || format!("split {} stage {ratio}: train {}", s.split_index, stage.train.len()),
            )?;
            let current: HashSet<&str> = stage.test_ids().collect();
            ensure(previous.is_subset(&current), || {
                format!("split {} stage {ratio}: test sets not nested", s.split_index)
            })?;
            ensure(stage.counts_consistent(), || {
                format!("split {} stage {ratio}: class counts", s.split_index)
            })?;
            previous = current;
        }
    }
    Ok(format!(
        "5 splits of 11028/2758, worst class share off by {worst:.2} points, 4 nested depletion stages each"
    ))
}

/// Aggregation and fusion invariants on random run sets.
pub fn ensemble_invariants(sets: usize) -> Check {
    let mut rng = Stream::new(0xACCE_0005);
    let mut worst = 0.0f64;
    for k in 0..sets {
        let w = 1 + rng.below(16) as usize;
        let h = 1 + rng.below(16) as usize;
        let runs: Vec<_> = (0..5).map(|_| random_mask(&mut rng, w, h, 0.7)).collect();
        let heatmaps: Vec<_> = (0..5).map(|_| random_heatmap(&mut rng, w, h, 1)).collect();
        let rs = RunSet::new(
            format!("img{k}"),
            Regime::TransferLearned,
            runs.clone(),
            heatmaps.clone(),
            5,
        )
        .map_err(|e| e.to_string())?;
        let mo = run_intersection(&rs).map_err(|e| e.to_string())?;
        ensure(runs.iter().all(|r| mo.is_subset_of(r)), || {
            format!("set {k}: intersection escapes a run")
        })?;

        let avg = gradcam_average(&rs, 1).map_err(|e| e.to_string())?;
        for (i, &v) in avg.values().iter().enumerate() {
            let mut sum = 0.0;
            for hm in &heatmaps {
                sum += hm.values()[i];
            }
            let want = sum / 5.0;
            worst = worst.max((v - want).abs());
            ensure((v - want).abs() <= 1e-12, || {
                format!("set {k}: pixel {i} mean {v} vs {want}")
            })?;
        }

        let density = rng.uniform();
        let gt = random_mask(&mut rng, w, h, density);
        let (a, b) = (&runs[0], &runs[1]);
        let u = fuse(a, b, FuseOp::Union).map_err(|e| e.to_string())?;
        let i = fuse(a, b, FuseOp::Intersection).map_err(|e| e.to_string())?;
        let (ca, cb) = (confusion(&gt, a).unwrap(), confusion(&gt, b).unwrap());
        ensure(confusion(&gt, &u).unwrap().fn_ <= ca.fn_.min(cb.fn_), || {
            format!("set {k}: union FN")
        })?;
        ensure(confusion(&gt, &i).unwrap().fp <= ca.fp.min(cb.fp), || {
            format!("set {k}: intersection FP")
        })?;
        let fp_mo = confusion(&gt, &mo).unwrap().fp;
        ensure(runs.iter().all(|r| fp_mo <= confusion(&gt, r).unwrap().fp), || {
            format!("set {k}: run intersection FP")
        })?;
    }
    Ok(format!("{sets} run sets, max heatmap mean error {worst:.1e}"))
}
