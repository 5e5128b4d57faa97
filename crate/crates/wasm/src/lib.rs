//! Browser bindings for three interactive operations on small hand-drawn
//! inputs: scoring a predicted mask, advising on fusing two predictions, and
//! comparing two samples of per-image scores.
//!
//! Masks cross the boundary as row-major byte slices (non-zero is class 1).
//! The plain functions are usable natively; the `#[wasm_bindgen]` wrappers
//! turn their errors into JavaScript exceptions.

use segstat_core::ensemble::{FusionThresholds, best_fusion_oracle, recommend_fusion};
use segstat_core::mask::{confusion, overlay};
use segstat_core::metrics::{DegenerateAuroc, SUPERIORITY_MARGIN, delta_m, evaluate, superior};
use segstat_core::stats::{MoodOptions, moods_median_test, shapiro_wilk, summarize, yeo_johnson, yeo_johnson_mle};
use segstat_core::{BinaryMask, ProbabilityMap};
use thiserror::Error;
use wasm_bindgen::prelude::*;

#[derive(Debug, Error)]
pub enum DemoError {
    #[error(transparent)]
    Core(#[from] segstat_core::Error),
    #[error("{what} has {got} values, expected {width}x{height}")]
    Size {
        what: &'static str,
        got: usize,
        width: usize,
        height: usize,
    },
    #[error("could not read {0:?} as a number")]
    Number(String),
}

fn mask(what: &'static str, bits: &[u8], width: usize, height: usize) -> Result<BinaryMask, DemoError> {
    if bits.len() != width * height {
        return Err(DemoError::Size {
            what,
            got: bits.len(),
            width,
            height,
        });
    }
    Ok(BinaryMask::new(
        width,
        height,
        bits.iter().map(|&b| u8::from(b != 0)).collect(),
    )?)
}

/// Metrics of one predicted mask plus its colour-coded overlay as RGBA bytes.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct MaskScore {
    auroc: Option<f64>,
    dice: Option<f64>,
    sensitivity: Option<f64>,
    specificity: Option<f64>,
    counts: [u64; 4],
    degenerate: bool,
    overlay: Vec<u8>,
}

#[wasm_bindgen]
impl MaskScore {
    /// `NaN` when undefined (AUROC of a single-class ground truth).
    #[wasm_bindgen(getter)]
    pub fn auroc(&self) -> f64 {
        self.auroc.unwrap_or(f64::NAN)
    }

    #[wasm_bindgen(getter)]
    pub fn dice(&self) -> f64 {
        self.dice.unwrap_or(f64::NAN)
    }

    #[wasm_bindgen(getter)]
    pub fn sensitivity(&self) -> f64 {
        self.sensitivity.unwrap_or(f64::NAN)
    }

    #[wasm_bindgen(getter)]
    pub fn specificity(&self) -> f64 {
        self.specificity.unwrap_or(f64::NAN)
    }

    /// `[tp, fp, tn, fn]`.
    #[wasm_bindgen(getter)]
    pub fn counts(&self) -> Vec<u64> {
        self.counts.to_vec()
    }

    /// True when any metric fell back to its 0/0 policy value.
    #[wasm_bindgen(getter)]
    pub fn degenerate(&self) -> bool {
        self.degenerate
    }

    #[wasm_bindgen(getter)]
    pub fn overlay(&self) -> Vec<u8> {
        self.overlay.clone()
    }
}

/// Scores `pred` against `gt`; `prob` (one score per pixel, or empty) drives AUROC.
pub fn score(gt: &[u8], pred: &[u8], prob: &[f64], width: usize, height: usize) -> Result<MaskScore, DemoError> {
    let gt = mask("ground truth", gt, width, height)?;
    let pred = mask("prediction", pred, width, height)?;
    let prob = if prob.is_empty() {
        None
    } else if prob.len() != width * height {
        return Err(DemoError::Size {
            what: "score map",
            got: prob.len(),
            width,
            height,
        });
    } else {
        Some(ProbabilityMap::new(width, height, prob.to_vec())?)
    };
    let m = evaluate(&gt, &pred, prob.as_ref(), DegenerateAuroc::Missing)?;
    let c = confusion(&gt, &pred)?;
    let rgb = overlay(&gt, &pred)?;
    Ok(MaskScore {
        auroc: m[0].1.value,
        dice: m[1].1.value,
        sensitivity: m[2].1.value,
        specificity: m[3].1.value,
        counts: [c.tp, c.fp, c.tn, c.fn_],
        degenerate: m.iter().any(|(_, v)| v.degenerate),
        overlay: rgb.pixels().flat_map(|p| [p[0], p[1], p[2], 255]).collect(),
    })
}

#[wasm_bindgen(js_name = scoreMask)]
pub fn score_mask(gt: &[u8], pred: &[u8], prob: &[f64], width: usize, height: usize) -> Result<MaskScore, JsError> {
    score(gt, pred, prob, width, height).map_err(|e| JsError::new(&e.to_string()))
}

/// Fusion advice for two predictions of the same image.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct FusionAdvice {
    recommendation: String,
    oracle: String,
    dice: [f64; 4],
    rates: [f64; 4],
}

#[wasm_bindgen]
impl FusionAdvice {
    /// `"union"`, `"intersection"` or `"none"`.
    #[wasm_bindgen(getter)]
    pub fn recommendation(&self) -> String {
        self.recommendation.clone()
    }

    /// The candidate with the highest Dice against the ground truth.
    #[wasm_bindgen(getter)]
    pub fn oracle(&self) -> String {
        self.oracle.clone()
    }

    /// Dice of a, b, union and intersection.
    #[wasm_bindgen(getter)]
    pub fn dice(&self) -> Vec<f64> {
        self.dice.to_vec()
    }

    /// `[fpr_a, fnr_a, fpr_b, fnr_b]`.
    #[wasm_bindgen(getter)]
    pub fn rates(&self) -> Vec<f64> {
        self.rates.to_vec()
    }
}

pub fn advise(
    gt: &[u8],
    a: &[u8],
    b: &[u8],
    width: usize,
    height: usize,
    fpr_hi: f64,
    fnr_hi: f64,
) -> Result<FusionAdvice, DemoError> {
    let gt = mask("ground truth", gt, width, height)?;
    let a = mask("prediction a", a, width, height)?;
    let b = mask("prediction b", b, width, height)?;
    let (ca, cb) = (confusion(&gt, &a)?, confusion(&gt, &b)?);
    let rec = recommend_fusion(&ca, &cb, FusionThresholds { fpr_hi, fnr_hi });
    let oracle = best_fusion_oracle(&gt, &a, &b)?;
    Ok(FusionAdvice {
        recommendation: rec.label().to_string(),
        oracle: oracle.best.label().to_string(),
        dice: oracle.dice,
        rates: [
            ca.false_positive_rate(),
            ca.false_negative_rate(),
            cb.false_positive_rate(),
            cb.false_negative_rate(),
        ],
    })
}

#[wasm_bindgen(js_name = adviseFusion)]
pub fn advise_fusion(
    gt: &[u8],
    a: &[u8],
    b: &[u8],
    width: usize,
    height: usize,
    fpr_hi: f64,
    fnr_hi: f64,
) -> Result<FusionAdvice, JsError> {
    advise(gt, a, b, width, height, fpr_hi, fnr_hi).map_err(|e| JsError::new(&e.to_string()))
}

/// Two samples of per-image scores, `T_II` first, compared the way the batch tool does.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct SampleComparison {
    medians: [f64; 2],
    delta: f64,
    verdict: String,
    dagger: String,
    p_value: f64,
    contingency: [u64; 4],
    normality: [f64; 4],
}

#[wasm_bindgen]
impl SampleComparison {
    /// Medians of `T_II` and `L_MI`.
    #[wasm_bindgen(getter)]
    pub fn medians(&self) -> Vec<f64> {
        self.medians.to_vec()
    }

    #[wasm_bindgen(getter)]
    pub fn delta(&self) -> f64 {
        self.delta
    }

    #[wasm_bindgen(getter)]
    pub fn verdict(&self) -> String {
        self.verdict.clone()
    }

    /// The regime whose median leads by more than five points, or empty.
    #[wasm_bindgen(getter)]
    pub fn dagger(&self) -> String {
        self.dagger.clone()
    }

    /// Mood's median test; `NaN` when a margin of the 2x2 table is empty.
    #[wasm_bindgen(js_name = pValue, getter)]
    pub fn p_value(&self) -> f64 {
        self.p_value
    }

    /// `[T_II above, T_II not above, L_MI above, L_MI not above]`.
    #[wasm_bindgen(getter)]
    pub fn contingency(&self) -> Vec<u64> {
        self.contingency.to_vec()
    }

    /// Shapiro-Wilk W of `T_II` raw, `T_II` after Yeo-Johnson, then the same for `L_MI`;
    /// `NaN` where the sample is too small.
    #[wasm_bindgen(getter)]
    pub fn normality(&self) -> Vec<f64> {
        self.normality.to_vec()
    }
}

/// Numbers separated by commas, whitespace or semicolons.
pub fn parse_values(text: &str) -> Result<Vec<f64>, DemoError> {
    text.split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| DemoError::Number(t.to_string()))
        })
        .collect()
}

fn normality(values: &[f64]) -> [f64; 2] {
    let raw = shapiro_wilk(values).map(|s| s.w).unwrap_or(f64::NAN);
    let transformed = yeo_johnson_mle(values)
        .and_then(|l| shapiro_wilk(&yeo_johnson(values, l)))
        .map(|s| s.w)
        .unwrap_or(f64::NAN);
    [raw, transformed]
}

pub fn compare(transfer: &[f64], medical: &[f64]) -> Result<SampleComparison, DemoError> {
    let (st, sm) = (summarize(transfer)?, summarize(medical)?);
    let d = delta_m(st.median, sm.median);
    let (p_value, contingency) = match moods_median_test(transfer, medical, MoodOptions::default()) {
        Ok(m) => (
            m.p_value,
            [
                m.contingency[0][0],
                m.contingency[0][1],
                m.contingency[1][0],
                m.contingency[1][1],
            ],
        ),
        Err(_) => (f64::NAN, [0; 4]),
    };
    let [nt, nt_yj] = normality(transfer);
    let [nm, nm_yj] = normality(medical);
    Ok(SampleComparison {
        medians: [st.median, sm.median],
        delta: d.value,
        verdict: d.verdict.label().to_string(),
        dagger: superior(st.median, sm.median, SUPERIORITY_MARGIN)
            .map(|r| r.label().to_string())
            .unwrap_or_default(),
        p_value,
        contingency,
        normality: [nt, nt_yj, nm, nm_yj],
    })
}

#[wasm_bindgen(js_name = compareSamples)]
pub fn compare_samples(transfer: &str, medical: &str) -> Result<SampleComparison, JsError> {
    let run = || compare(&parse_values(transfer)?, &parse_values(medical)?);
    run().map_err(|e| JsError::new(&e.to_string()))
}
