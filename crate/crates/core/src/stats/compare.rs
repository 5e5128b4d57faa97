use std::collections::BTreeMap;

use super::{MoodOptions, MoodResult, Summary, moods_median_test, summarize};
use crate::metrics::{MetricKind, MetricRecord, SUPERIORITY_MARGIN, Verdict, delta_m, superior};
use crate::regime::Regime;
use crate::{Error, Result};

/// Per-image values of one metric for one model, ordered by image id.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricDistribution {
    pub model: Regime,
    pub kind: MetricKind,
    pub entries: Vec<(String, Option<f64>)>,
    /// Summary over the present values; `None` when every value is missing.
    pub summary: Option<Summary>,
}

impl MetricDistribution {
    /// Collects the records matching `model` and `kind`. Duplicate image ids are an error.
    pub fn from_records<'a>(
        model: Regime,
        kind: MetricKind,
        records: impl IntoIterator<Item = &'a MetricRecord>,
    ) -> Result<Self> {
        let mut by_id: BTreeMap<String, Option<f64>> = BTreeMap::new();
        for r in records {
            if r.model != model || r.kind != kind {
                continue;
            }
            if by_id.insert(r.image_id.clone(), r.value).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate {kind} record for image {} and model {model}",
                    r.image_id
                )));
            }
        }
        let entries: Vec<(String, Option<f64>)> = by_id.into_iter().collect();
        let values: Vec<f64> = entries.iter().filter_map(|e| e.1).collect();
        let summary = if values.is_empty() {
            None
        } else {
            Some(summarize(&values)?)
        };
        Ok(Self {
            model,
            kind,
            entries,
            summary,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().filter_map(|e| e.1).collect()
    }

    pub fn missing(&self) -> usize {
        self.entries.iter().filter(|e| e.1.is_none()).count()
    }

    pub fn count_at_or_above(&self, tau: f64) -> usize {
        self.entries.iter().filter(|e| e.1.is_some_and(|v| v >= tau)).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    pub mood: MoodOptions,
    pub margin: f64,
    pub threshold: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            mood: MoodOptions::default(),
            margin: SUPERIORITY_MARGIN,
            threshold: 0.9,
        }
    }
}

/// Per-image sign counts of `T_II - L_MI`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DeltaCounts {
    pub gt: usize,
    pub eq: usize,
    pub lt: usize,
    /// Images where either value is missing.
    pub skipped: usize,
}

impl DeltaCounts {
    pub fn compared(&self) -> usize {
        self.gt + self.eq + self.lt
    }
}

/// Everything one row of the summary and count tables needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub kind: MetricKind,
    pub transfer: Option<Summary>,
    pub medical: Option<Summary>,
    /// Difference of medians, `T_II - L_MI`.
    pub delta_median: Option<f64>,
    pub delta_mean: Option<f64>,
    /// `None` when the test is undefined (e.g. all pooled values equal).
    pub mood: Option<MoodResult>,
    pub median_dagger: Option<Regime>,
    pub mean_dagger: Option<Regime>,
    pub counts: DeltaCounts,
    pub transfer_at_or_above: usize,
    pub medical_at_or_above: usize,
}

impl Comparison {
    pub fn significant(&self) -> bool {
        self.mood.is_some_and(|m| m.significant)
    }

    pub fn verdict(&self) -> Option<Verdict> {
        self.delta_median.map(|d| delta_m(d, 0.0).verdict)
    }
}

/// Compares the two regimes on one metric over the same image set.
pub fn compare_models(
    transfer: &MetricDistribution,
    medical: &MetricDistribution,
    opts: CompareOptions,
) -> Result<Comparison> {
    if transfer.kind != medical.kind {
        return Err(Error::InvalidArgument(format!(
            "cannot compare {} with {}",
            transfer.kind, medical.kind
        )));
    }
    if transfer.model != Regime::TransferLearned || medical.model != Regime::MedicalOnly {
        return Err(Error::InvalidArgument(
            "expected T_II as the first distribution and L_MI as the second".into(),
        ));
    }
    let ids_a: Vec<&str> = transfer.entries.iter().map(|e| e.0.as_str()).collect();
    let ids_b: Vec<&str> = medical.entries.iter().map(|e| e.0.as_str()).collect();
    if ids_a != ids_b {
        let only_a: Vec<&str> = ids_a.iter().filter(|id| !ids_b.contains(id)).copied().collect();
        let only_b: Vec<&str> = ids_b.iter().filter(|id| !ids_a.contains(id)).copied().collect();
        return Err(Error::ImageSetMismatch(format!(
            "{} only in T_II {:?}, {} only in L_MI {:?}",
            only_a.len(),
            only_a.iter().take(5).collect::<Vec<_>>(),
            only_b.len(),
            only_b.iter().take(5).collect::<Vec<_>>()
        )));
    }

    let mut counts = DeltaCounts::default();
    for ((_, a), (_, b)) in transfer.entries.iter().zip(&medical.entries) {
        match (a, b) {
            (Some(a), Some(b)) => match delta_m(*a, *b).verdict {
                Verdict::TransferBetter => counts.gt += 1,
                Verdict::Tie => counts.eq += 1,
                Verdict::MedicalBetter => counts.lt += 1,
            },
            _ => counts.skipped += 1,
        }
    }

    let (va, vb) = (transfer.values(), medical.values());
    let mood = if va.is_empty() || vb.is_empty() {
        None
    } else {
        moods_median_test(&va, &vb, opts.mood).ok()
    };
    let (ta, tb) = (transfer.summary, medical.summary);
    let pair = ta.zip(tb);
    Ok(Comparison {
        kind: transfer.kind,
        transfer: ta,
        medical: tb,
        delta_median: pair.map(|(a, b)| delta_m(a.median, b.median).value),
        delta_mean: pair.map(|(a, b)| delta_m(a.mean, b.mean).value),
        mood,
        median_dagger: pair.and_then(|(a, b)| superior(a.median, b.median, opts.margin)),
        mean_dagger: pair.and_then(|(a, b)| superior(a.mean, b.mean, opts.margin)),
        counts,
        transfer_at_or_above: transfer.count_at_or_above(opts.threshold),
        medical_at_or_above: medical.count_at_or_above(opts.threshold),
    })
}

/// Shorthand for building both distributions from one record table and comparing them.
pub fn compare_records(records: &[MetricRecord], kind: MetricKind, opts: CompareOptions) -> Result<Comparison> {
    let a = MetricDistribution::from_records(Regime::TransferLearned, kind, records)?;
    let b = MetricDistribution::from_records(Regime::MedicalOnly, kind, records)?;
    compare_models(&a, &b, opts)
}
