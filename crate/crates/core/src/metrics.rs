//! Per-image segmentation metrics and the T_II − L_MI difference statistic.
//!
//! Single-class ground truth makes some ratios 0/0. Those cases resolve as:
//!
//! | metric      | empty denominator             | result                    |
//! |-------------|-------------------------------|---------------------------|
//! | sensitivity | no ground-truth positives     | 1.0, flagged degenerate   |
//! | specificity | no ground-truth negatives     | 1.0, flagged degenerate   |
//! | Dice        | empty ground truth and prediction | 1.0, flagged degenerate |
//! | AUROC       | ground truth has one class    | per [`DegenerateAuroc`]   |

use std::fmt;
use std::str::FromStr;

use crate::mask::{BinaryMask, ConfusionCounts, ProbabilityMap, confusion, ensure_same_dims};
use crate::regime::Regime;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetricKind {
    Auroc,
    Dice,
    Sensitivity,
    Specificity,
}

impl MetricKind {
    /// Reporting order used throughout the tables.
    pub const ALL: [MetricKind; 4] = [
        MetricKind::Auroc,
        MetricKind::Dice,
        MetricKind::Sensitivity,
        MetricKind::Specificity,
    ];

    pub fn label(self) -> &'static str {
        match self {
            MetricKind::Auroc => "AUROC",
            MetricKind::Dice => "Dice",
            MetricKind::Sensitivity => "Sensitivity",
            MetricKind::Specificity => "Specificity",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricKind::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown metric {s:?}")))
    }
}

/// A metric value, possibly missing, with a flag for the 0/0 policy cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    pub value: Option<f64>,
    pub degenerate: bool,
}

impl MetricValue {
    pub fn regular(v: f64) -> Self {
        Self {
            value: Some(v),
            degenerate: false,
        }
    }

    pub fn vacuous(v: f64) -> Self {
        Self {
            value: Some(v),
            degenerate: true,
        }
    }

    pub fn missing() -> Self {
        Self {
            value: None,
            degenerate: true,
        }
    }
}

/// One row of the per-image metric table.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRecord {
    pub image_id: String,
    pub model: Regime,
    pub kind: MetricKind,
    pub value: Option<f64>,
    pub degenerate: bool,
}

impl MetricRecord {
    pub fn new(image_id: impl Into<String>, model: Regime, kind: MetricKind, v: MetricValue) -> Self {
        Self {
            image_id: image_id.into(),
            model,
            kind,
            value: v.value,
            degenerate: v.degenerate,
        }
    }
}

fn ratio_or_vacuous(num: u64, den: u64) -> MetricValue {
    if den == 0 {
        MetricValue::vacuous(1.0)
    } else {
        MetricValue::regular(num as f64 / den as f64)
    }
}

pub fn sensitivity(c: &ConfusionCounts) -> MetricValue {
    ratio_or_vacuous(c.tp, c.tp + c.fn_)
}

pub fn specificity(c: &ConfusionCounts) -> MetricValue {
    ratio_or_vacuous(c.tn, c.tn + c.fp)
}

/// `tp / (tp + fp)`; `None` when nothing was predicted.
pub fn precision(c: &ConfusionCounts) -> Option<f64> {
    let den = c.tp + c.fp;
    (den > 0).then(|| c.tp as f64 / den as f64)
}

pub fn dice(c: &ConfusionCounts) -> MetricValue {
    ratio_or_vacuous(2 * c.tp, 2 * c.tp + c.fp + c.fn_)
}

/// What to report for AUROC when the ground truth holds a single class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DegenerateAuroc {
    /// Leave the value empty.
    #[default]
    Missing,
    /// Report pixel accuracy of the map thresholded at 0.5.
    AccuracyAtThreshold,
}

impl FromStr for DegenerateAuroc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "missing" => Ok(Self::Missing),
            "accuracy_at_threshold" => Ok(Self::AccuracyAtThreshold),
            other => Err(Error::InvalidArgument(format!(
                "unknown degenerate AUROC policy {other:?}"
            ))),
        }
    }
}

/// Area under the ROC curve of `prob` as a detector of `gt`.
///
/// Computed as the Mann-Whitney statistic with tied scores counted one half,
/// which equals trapezoidal integration over every distinct threshold.
pub fn auroc(gt: &BinaryMask, prob: &ProbabilityMap, policy: DegenerateAuroc) -> Result<MetricValue> {
    ensure_same_dims(gt.dims(), prob.dims())?;
    let positives = gt.count_ones() as u128;
    let negatives = gt.len() as u128 - positives;
    if positives == 0 || negatives == 0 {
        return Ok(match policy {
            DegenerateAuroc::Missing => MetricValue::missing(),
            DegenerateAuroc::AccuracyAtThreshold => {
                let hits = gt
                    .pixels()
                    .iter()
                    .zip(prob.values())
                    .filter(|&(&g, &p)| (p >= 0.5) == (g == 1))
                    .count();
                MetricValue::vacuous(hits as f64 / gt.len() as f64)
            }
        });
    }

    let mut scored: Vec<(f64, u8)> = prob.values().iter().copied().zip(gt.pixels().iter().copied()).collect();
    scored.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    // 2 * (pairs ranked correctly + half the tied pairs), kept integral
    let mut twice_wins: u128 = 0;
    let mut negatives_below: u128 = 0;
    let mut i = 0;
    while i < scored.len() {
        let score = scored[i].0;
        let (mut pos, mut neg) = (0u128, 0u128);
        while i < scored.len() && scored[i].0 == score {
            if scored[i].1 == 1 {
                pos += 1;
            } else {
                neg += 1;
            }
            i += 1;
        }
        twice_wins += 2 * pos * negatives_below + pos * neg;
        negatives_below += neg;
    }
    let value = twice_wins as f64 / (2 * positives * negatives) as f64;
    Ok(MetricValue::regular(value))
}

/// All four metrics for one image. AUROC needs a score map; without one it
/// is scored on the binary prediction itself.
pub fn evaluate(
    gt: &BinaryMask,
    pred: &BinaryMask,
    prob: Option<&ProbabilityMap>,
    policy: DegenerateAuroc,
) -> Result<[(MetricKind, MetricValue); 4]> {
    let c = confusion(gt, pred)?;
    let auc = match prob {
        Some(p) => auroc(gt, p, policy)?,
        None => auroc(gt, &ProbabilityMap::from_mask(pred), policy)?,
    };
    Ok([
        (MetricKind::Auroc, auc),
        (MetricKind::Dice, dice(&c)),
        (MetricKind::Sensitivity, sensitivity(&c)),
        (MetricKind::Specificity, specificity(&c)),
    ])
}

/// Which regime a difference favours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    TransferBetter,
    Tie,
    MedicalBetter,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::TransferBetter => "TII_better",
            Verdict::Tie => "tie",
            Verdict::MedicalBetter => "LMI_better",
        }
    }

    pub fn favoured(self) -> Option<Regime> {
        match self {
            Verdict::TransferBetter => Some(Regime::TransferLearned),
            Verdict::Tie => None,
            Verdict::MedicalBetter => Some(Regime::MedicalOnly),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta {
    pub value: f64,
    pub verdict: Verdict,
}

/// `s_tii - s_lmi`, classified by sign.
pub fn delta_m(s_tii: f64, s_lmi: f64) -> Delta {
    let value = s_tii - s_lmi;
    let verdict = if value > 0.0 {
        Verdict::TransferBetter
    } else if value < 0.0 {
        Verdict::MedicalBetter
    } else {
        Verdict::Tie
    };
    Delta { value, verdict }
}

/// Default superiority margin: five points on the unit metric scale.
pub const SUPERIORITY_MARGIN: f64 = 0.05;

// Decimal inputs such as 0.95 - 0.90 do not subtract exactly in binary.
const MARGIN_SLACK: f64 = 1e-12;

/// The regime whose summary beats the other's by more than `margin`.
pub fn superior(s_tii: f64, s_lmi: f64, margin: f64) -> Option<Regime> {
    let d = delta_m(s_tii, s_lmi);
    if d.value.abs() > margin + MARGIN_SLACK {
        d.verdict.favoured()
    } else {
        None
    }
}

/// Number of records whose value is present and `>= tau`.
pub fn threshold_count<'a>(records: impl IntoIterator<Item = &'a MetricRecord>, tau: f64) -> usize {
    records
        .into_iter()
        .filter(|r| r.value.is_some_and(|v| v >= tau))
        .count()
}
