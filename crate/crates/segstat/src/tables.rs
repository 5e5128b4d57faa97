//! Plain-text renderings laid out like the published tables.

use segstat_core::Regime;
use segstat_core::splits::{ClassReportRow, round_half_up};
use segstat_core::stats::Comparison;

pub const STAR: &str = "*";
pub const DAGGER: &str = "\u{2020}";

/// Left-aligned columns separated by two spaces, trailing blanks trimmed.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let header: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    for row in std::iter::once(&header).chain(rows) {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            line.push_str(cell);
            if i + 1 < row.len() {
                let pad = widths[i] - cell.chars().count() + 2;
                line.extend(std::iter::repeat_n(' ', pad));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn count_pct(count: usize, total: usize) -> String {
    let pct = if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    };
    format!("{count} ({})", round_half_up(pct))
}

fn share(count: usize, total: usize) -> f64 {
    if total == 0 { 0.0 } else { count as f64 / total as f64 }
}

fn cell(v: Option<f64>, marks: &[&str]) -> String {
    match v {
        Some(v) => format!("{v:.4}{}", marks.concat()),
        None => "n/a".into(),
    }
}

fn dagger_for(winner: Option<Regime>, model: Regime) -> &'static str {
    if winner == Some(model) { DAGGER } else { "" }
}

/// Median, mean and SD per metric for both regimes. `*` marks a significant
/// Mood test on both medians; a dagger marks a summary ahead by more than the margin.
pub fn table1(title: &str, comparisons: &[Comparison]) -> String {
    let mut rows = Vec::new();
    for c in comparisons {
        let star = if c.significant() { STAR } else { "" };
        let stat = |model: Regime| match model {
            Regime::TransferLearned => c.transfer,
            Regime::MedicalOnly => c.medical,
        };
        let median = |m: Regime| cell(stat(m).map(|s| s.median), &[star, dagger_for(c.median_dagger, m)]);
        let mean = |m: Regime| cell(stat(m).map(|s| s.mean), &[dagger_for(c.mean_dagger, m)]);
        let sd = |m: Regime| cell(stat(m).map(|s| s.sd), &[]);
        let (l, t) = (Regime::MedicalOnly, Regime::TransferLearned);
        rows.push(vec![c.kind.label().to_string(), "Median".into(), median(l), median(t)]);
        rows.push(vec![String::new(), "Mean".into(), mean(l), mean(t)]);
        rows.push(vec![String::new(), "SD".into(), sd(l), sd(t)]);
    }
    format!(
        "{title}\n{}",
        text_table(&["Metric", "Statistic", "L_MI", "T_II"], &rows)
    )
}

/// Which regime's share at or above the threshold leads by more than five points.
pub fn threshold_dagger(c: &Comparison, n: usize) -> Option<Regime> {
    let (a, b) = (share(c.transfer_at_or_above, n), share(c.medical_at_or_above, n));
    if (a - b).abs() > 0.05 + 1e-12 {
        Some(if a > b {
            Regime::TransferLearned
        } else {
            Regime::MedicalOnly
        })
    } else {
        None
    }
}

/// Per-image sign counts of `T_II - L_MI` and counts at or above the threshold.
pub fn table2(title: &str, comparisons: &[(Comparison, usize)], threshold: f64) -> String {
    let rows: Vec<Vec<String>> = comparisons
        .iter()
        .map(|(c, n)| {
            let compared = c.counts.compared();
            let dagger = threshold_dagger(c, *n);
            vec![
                c.kind.label().to_string(),
                count_pct(c.counts.gt, compared),
                count_pct(c.counts.eq, compared),
                count_pct(c.counts.lt, compared),
                count_pct(c.medical_at_or_above, *n) + dagger_for(dagger, Regime::MedicalOnly),
                count_pct(c.transfer_at_or_above, *n) + dagger_for(dagger, Regime::TransferLearned),
            ]
        })
        .collect();
    let lmi = format!("L_MI >= {threshold}");
    let tii = format!("T_II >= {threshold}");
    format!(
        "{title}\n{}",
        text_table(&["Metric", "Delta > 0", "Delta = 0", "Delta < 0", &lmi, &tii], &rows)
    )
}

/// Medians of several image sets side by side (one block per metric).
pub fn sets_table(title: &str, sets: &[(String, Vec<Comparison>)]) -> String {
    let mut rows = Vec::new();
    let kinds: Vec<_> = sets
        .first()
        .map(|s| s.1.iter().map(|c| c.kind).collect())
        .unwrap_or_default();
    for (k, kind) in kinds.iter().enumerate() {
        for (i, (label, comps)) in sets.iter().enumerate() {
            let c = &comps[k];
            let star = if c.significant() { STAR } else { "" };
            rows.push(vec![
                if i == 0 {
                    kind.label().to_string()
                } else {
                    String::new()
                },
                label.clone(),
                cell(
                    c.medical.map(|s| s.median),
                    &[star, dagger_for(c.median_dagger, Regime::MedicalOnly)],
                ),
                cell(
                    c.transfer.map(|s| s.median),
                    &[star, dagger_for(c.median_dagger, Regime::TransferLearned)],
                ),
            ]);
        }
    }
    format!("{title}\n{}", text_table(&["Metric", "Set", "L_MI", "T_II"], &rows))
}

/// Per-class counts with side shares, like the clinical label distribution table.
pub fn class_table(title: &str, rows: &[(String, Vec<ClassReportRow>)]) -> String {
    let mut out = Vec::new();
    for (label, report) in rows {
        for (i, r) in report.iter().enumerate() {
            out.push(vec![
                if i == 0 { label.clone() } else { String::new() },
                r.clinical_class.clone(),
                format!("{} ({})", r.train, r.train_pct_display()),
                format!("{} ({})", r.test, r.test_pct_display()),
            ]);
        }
    }
    format!("{title}\n{}", text_table(&["Split", "Class", "Train", "Test"], &out))
}
