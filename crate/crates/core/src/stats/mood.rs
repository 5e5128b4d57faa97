//! Mood's median test for two independent samples.

use std::str::FromStr;

use statrs::function::erf::erfc;

use super::median;
use crate::{Error, Result};

/// Where values equal to the grand median are counted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TieRule {
    /// Ties count as "not above" (the strictly-above convention).
    #[default]
    Below,
    /// Ties count as "above".
    Above,
    /// Ties are dropped from the table.
    Ignore,
}

impl FromStr for TieRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "below" => Ok(Self::Below),
            "above" => Ok(Self::Above),
            "ignore" => Ok(Self::Ignore),
            other => Err(Error::InvalidArgument(format!("unknown tie rule {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoodOptions {
    pub ties: TieRule,
    /// Apply Yates' continuity correction to the 2x2 chi-square.
    pub yates: bool,
    pub alpha: f64,
}

impl Default for MoodOptions {
    fn default() -> Self {
        Self {
            ties: TieRule::Below,
            yates: false,
            alpha: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoodResult {
    pub grand_median: f64,
    /// Rows are the two samples; columns are `[above, not above]`.
    pub contingency: [[u64; 2]; 2],
    pub statistic: f64,
    pub p_value: f64,
    pub significant: bool,
}

fn tally(values: &[f64], grand: f64, ties: TieRule) -> [u64; 2] {
    let mut row = [0u64; 2];
    for &v in values {
        let above = match ties {
            TieRule::Below => v > grand,
            TieRule::Above => v >= grand,
            TieRule::Ignore => {
                if v == grand {
                    continue;
                }
                v > grand
            }
        };
        row[usize::from(!above)] += 1;
    }
    row
}

/// Pearson chi-square of a 2x2 table, optionally with Yates' correction
/// (each |observed - expected| shrunk by at most 0.5).
fn chi_square(table: &[[u64; 2]; 2], yates: bool) -> f64 {
    let rows = [table[0][0] + table[0][1], table[1][0] + table[1][1]];
    let cols = [table[0][0] + table[1][0], table[0][1] + table[1][1]];
    let total = (rows[0] + rows[1]) as f64;
    let row_term = |r: usize| {
        (0..2)
            .map(|c| {
                let expected = rows[r] as f64 * cols[c] as f64 / total;
                let mut diff = (table[r][c] as f64 - expected).abs();
                if yates {
                    diff -= diff.min(0.5);
                }
                diff * diff / expected
            })
            .sum::<f64>()
    };
    row_term(0) + row_term(1)
}

/// Tests whether two samples share a median.
///
/// Pooled values are split at the pooled (grand) median into a 2x2 table
/// that is scored with a 1-degree-of-freedom chi-square.
pub fn moods_median_test(a: &[f64], b: &[f64], opts: MoodOptions) -> Result<MoodResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::TooFewValues {
            required: 1,
            actual: a.len().min(b.len()),
        });
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let first = pooled[0];
    if pooled.iter().all(|&v| v == first) {
        return Err(Error::ConstantInput("Mood's median test"));
    }
    let grand_median = median(&pooled);
    let contingency = [tally(a, grand_median, opts.ties), tally(b, grand_median, opts.ties)];
    let above = contingency[0][0] + contingency[1][0];
    let below = contingency[0][1] + contingency[1][1];
    if above == 0 || below == 0 {
        return Err(Error::InvalidArgument(format!(
            "every pooled value falls on one side of the grand median {grand_median} under the {:?} tie rule",
            opts.ties
        )));
    }
    if contingency[0][0] + contingency[0][1] == 0 || contingency[1][0] + contingency[1][1] == 0 {
        return Err(Error::InvalidArgument(
            "a sample has no values left after dropping ties".into(),
        ));
    }
    let statistic = chi_square(&contingency, opts.yates);
    // upper tail of chi-square with one degree of freedom
    let p_value = erfc((statistic / 2.0).sqrt()).clamp(0.0, 1.0);
    Ok(MoodResult {
        grand_median,
        contingency,
        statistic,
        p_value,
        significant: p_value < opts.alpha,
    })
}
