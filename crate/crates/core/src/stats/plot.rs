//! Plot data: histograms of metric distributions and normal Q-Q coordinates.

use statrs::distribution::{ContinuousCDF, Normal};

use super::summarize;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Equal-width bins over `[lo, hi]`; the last bin is closed on the right.
/// Values outside the range are not counted.
pub fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<HistogramBin> {
    assert!(bins > 0 && hi > lo, "histogram needs a non-empty range");
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        if !(lo..=hi).contains(&v) {
            continue;
        }
        let idx = (((v - lo) / width).floor() as usize).min(bins - 1);
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            lo: lo + i as f64 * width,
            hi: if i + 1 == bins { hi } else { lo + (i + 1) as f64 * width },
            count,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QqPoint {
    /// Standard normal quantile at Blom's plotting position `(i - 0.375) / (n + 0.25)`.
    pub theoretical: f64,
    /// The i-th smallest value, standardised by the sample mean and sd.
    pub sample: f64,
}

pub fn qq_points(values: &[f64]) -> Result<Vec<QqPoint>> {
    let s = summarize(values)?;
    let scale = if s.sd > 0.0 { s.sd } else { 1.0 };
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let norm = Normal::new(0.0, 1.0).expect("unit normal");
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &v)| QqPoint {
            theoretical: norm.inverse_cdf((i as f64 + 1.0 - 0.375) / (n + 0.25)),
            sample: (v - s.mean) / scale,
        })
        .collect())
}
