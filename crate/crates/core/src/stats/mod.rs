//! Distribution summaries and the hypothesis tests applied to per-image metrics.

mod compare;
mod mood;
mod plot;
mod shapiro;
mod yeo_johnson;

pub use compare::{CompareOptions, Comparison, DeltaCounts, MetricDistribution, compare_models, compare_records};
pub use mood::{MoodOptions, MoodResult, TieRule, moods_median_test};
pub use plot::{HistogramBin, QqPoint, histogram, qq_points};
pub use shapiro::{SHAPIRO_WILK_MAX_N, ShapiroWilk, shapiro_wilk, shapiro_wilk_seeded};
pub use yeo_johnson::{yeo_johnson, yeo_johnson_inverse, yeo_johnson_llf, yeo_johnson_mle, yeo_johnson_value};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n − 1 denominator); 0 for a single value.
    pub sd: f64,
}

pub fn summarize(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::TooFewValues { required: 1, actual: 0 });
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = if n > 1 {
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(Summary {
        n,
        mean,
        median: median(values),
        sd,
    })
}

/// Median with the midpoint convention for even lengths. Panics on empty input.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    median_sorted(&v)
}

pub(crate) fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    assert!(n > 0, "median of an empty slice");
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_summaries() {
        let s = summarize(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.median, s.sd), (2.0, 2.0, 1.0));
        assert_eq!(summarize(&[1.0, 2.0, 3.0, 4.0]).unwrap().median, 2.5);
        assert_eq!(summarize(&[0.7]).unwrap().sd, 0.0);
        assert!(summarize(&[]).is_err());
    }

    proptest! {
        #[test]
        fn median_stable_under_duplicating_it(mut v in prop::collection::vec(-1e3f64..1e3, 1..40)) {
            if v.len() % 2 == 0 {
                v.pop();
            }
            let m = summarize(&v).unwrap().median;
            v.push(m);
            prop_assert_eq!(summarize(&v).unwrap().median, m);
        }
    }
}
