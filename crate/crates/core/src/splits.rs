//! Seeded train/test splitting and the training-set depletion schedule.
//!
//! All randomness comes from SplitMix64 (the reference generator published
//! with the xoshiro family) so manifests can be reproduced bit-for-bit in any
//! language:
//!
//! - split `k` of a run with seed `s` draws from `SplitMix64(s ^ k)`
//! - depletion stage `j` (1-based) of split `k` draws from `SplitMix64(s ^ k ^ (j << 32))`
//! - a uniform integer below `b` is `r % b` for the first draw `r` with
//!   `r >= 2^64 mod b` (rejection removes modulo bias)
//! - shuffling is Fisher-Yates from the last position down: for `i = n-1..1`,
//!   swap `i` with `uniform_below(i + 1)`
//!
//! The training side of a split is the first `floor(n * train_pct / 100)`
//! entries of the shuffled manifest; everything else is test.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::{Error, Result};

/// Unbiased integer in `0..bound`.
pub fn uniform_below<R: Rng + ?Sized>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0, "empty range");
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let r = rng.next_u64();
        if r >= threshold {
            return r % bound;
        }
    }
}

pub fn shuffle<T, R: Rng + ?Sized>(items: &mut [T], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = uniform_below(rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub image_id: String,
    pub clinical_class: String,
    pub gt_path: String,
    /// Any further columns, kept verbatim.
    pub extra: Vec<String>,
}

/// The full image list with one clinical class per image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetManifest {
    entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn new(entries: Vec<ManifestEntry>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (row, e) in entries.iter().enumerate() {
            if e.image_id.trim().is_empty() {
                return Err(Error::Manifest(format!("row {}: empty image_id", row + 1)));
            }
            if e.image_id.contains([',', '\n', '\r', '"', '/', '\\']) {
                return Err(Error::Manifest(format!(
                    "row {}: image_id {:?} contains a reserved character",
                    row + 1,
                    e.image_id
                )));
            }
            if e.clinical_class.trim().is_empty() {
                return Err(Error::Manifest(format!(
                    "row {}: image {} has no clinical class",
                    row + 1,
                    e.image_id
                )));
            }
            if !seen.insert(e.image_id.as_str()) {
                return Err(Error::Manifest(format!(
                    "row {}: duplicate image_id {:?}",
                    row + 1,
                    e.image_id
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, image_id: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.image_id == image_id)
    }
}

/// A train:test percentage pair summing to 100.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub train_pct: u32,
    pub test_pct: u32,
}

impl Ratio {
    pub const DEFAULT: Ratio = Ratio {
        train_pct: 80,
        test_pct: 20,
    };

    pub fn new(train_pct: u32, test_pct: u32) -> Result<Self> {
        if train_pct + test_pct != 100 {
            return Err(Error::InvalidArgument(format!(
                "ratio {train_pct}:{test_pct} does not sum to 100"
            )));
        }
        Ok(Self { train_pct, test_pct })
    }

    pub fn train_size(self, n: usize) -> usize {
        n * self.train_pct as usize / 100
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("ratio {s:?} is not train:test")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidArgument(format!("ratio {s:?} is not train:test")))
        };
        Self::new(parse(a)?, parse(b)?)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.train_pct, self.test_pct)
    }
}

/// The depletion schedule applied after an 80:20 split.
pub const DEPLETION_SCHEDULE: [Ratio; 4] = [
    Ratio {
        train_pct: 60,
        test_pct: 40,
    },
    Ratio {
        train_pct: 40,
        test_pct: 60,
    },
    Ratio {
        train_pct: 20,
        test_pct: 80,
    },
    Ratio {
        train_pct: 10,
        test_pct: 90,
    },
];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitEntry {
    pub image_id: String,
    pub clinical_class: String,
    /// Row in the source manifest; both sides are kept in this order.
    pub position: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SideCounts {
    pub train: usize,
    pub test: usize,
}

/// One seeded assignment of manifest images to train and test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitManifest {
    pub seed: u64,
    pub ratio: Ratio,
    pub split_index: u32,
    /// 0 for the initial split, `j` for the j-th depletion stage.
    pub stage: u32,
    pub stratified: bool,
    pub train: Vec<SplitEntry>,
    pub test: Vec<SplitEntry>,
    pub class_counts: BTreeMap<String, SideCounts>,
}

fn count_classes(train: &[SplitEntry], test: &[SplitEntry]) -> BTreeMap<String, SideCounts> {
    let mut counts: BTreeMap<String, SideCounts> = BTreeMap::new();
    for e in train {
        counts.entry(e.clinical_class.clone()).or_default().train += 1;
    }
    for e in test {
        counts.entry(e.clinical_class.clone()).or_default().test += 1;
    }
    counts
}

fn split_rng(seed: u64, split_index: u32, stage: u32) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed ^ u64::from(split_index) ^ (u64::from(stage) << 32))
}

impl SplitManifest {
    /// Builds a manifest from explicit sides, recounting classes.
    pub fn from_sides(
        seed: u64,
        ratio: Ratio,
        split_index: u32,
        stage: u32,
        stratified: bool,
        mut train: Vec<SplitEntry>,
        mut test: Vec<SplitEntry>,
    ) -> Result<Self> {
        train.sort_by_key(|e| e.position);
        test.sort_by_key(|e| e.position);
        let mut ids = HashSet::new();
        for e in train.iter().chain(&test) {
            if !ids.insert(e.image_id.as_str()) {
                return Err(Error::Manifest(format!(
                    "image {} appears twice in split {split_index}",
                    e.image_id
                )));
            }
        }
        let class_counts = count_classes(&train, &test);
        Ok(Self {
            seed,
            ratio,
            split_index,
            stage,
            stratified,
            train,
            test,
            class_counts,
        })
    }

    pub fn len(&self) -> usize {
        self.train.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn train_ids(&self) -> impl Iterator<Item = &str> {
        self.train.iter().map(|e| e.image_id.as_str())
    }

    pub fn test_ids(&self) -> impl Iterator<Item = &str> {
        self.test.iter().map(|e| e.image_id.as_str())
    }

    /// True when the stored class counts agree with a recount of the ids.
    pub fn counts_consistent(&self) -> bool {
        self.class_counts == count_classes(&self.train, &self.test)
    }
}

fn entries_of(m: &DatasetManifest) -> Vec<SplitEntry> {
    m.entries()
        .iter()
        .enumerate()
        .map(|(position, e)| SplitEntry {
            image_id: e.image_id.clone(),
            clinical_class: e.clinical_class.clone(),
            position,
        })
        .collect()
}

/// Per-class training quotas by largest remainder, summing to `total_train`.
/// Remainder ties go to the class that sorts first.
fn stratified_quotas(
    classes: &BTreeMap<String, Vec<SplitEntry>>,
    n: usize,
    total_train: usize,
) -> BTreeMap<String, usize> {
    let mut quotas: BTreeMap<String, usize> = BTreeMap::new();
    let mut remainders: Vec<(usize, &String)> = Vec::new();
    let mut assigned = 0;
    for (class, members) in classes {
        let exact = members.len() * total_train;
        quotas.insert(class.clone(), exact / n);
        assigned += exact / n;
        remainders.push((exact % n, class));
    }
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    for (_, class) in remainders.into_iter().take(total_train - assigned) {
        *quotas.get_mut(class).expect("class present") += 1;
    }
    quotas
}

/// Generates `k` independent splits, indices `1..=k`.
pub fn make_splits(
    m: &DatasetManifest,
    seed: u64,
    k: u32,
    ratio: Ratio,
    stratified: bool,
) -> Result<Vec<SplitManifest>> {
    if m.is_empty() {
        return Err(Error::Manifest("manifest has no entries".into()));
    }
    if ratio.train_pct == 0 || ratio.train_pct >= 100 {
        return Err(Error::InvalidArgument(format!(
            "train share must be strictly between 0 and 100, got {ratio}"
        )));
    }
    let all = entries_of(m);
    let cut = ratio.train_size(all.len());
    (1..=k)
        .map(|split_index| {
            let mut rng = split_rng(seed, split_index, 0);
            let (train, test) = if stratified {
                let mut classes: BTreeMap<String, Vec<SplitEntry>> = BTreeMap::new();
                for e in &all {
                    classes.entry(e.clinical_class.clone()).or_default().push(e.clone());
                }
                let quotas = stratified_quotas(&classes, all.len(), cut);
                let (mut train, mut test) = (Vec::new(), Vec::new());
                for (class, mut members) in classes {
                    shuffle(&mut members, &mut rng);
                    let q = quotas[&class];
                    test.extend(members.split_off(q));
                    train.extend(members);
                }
                (train, test)
            } else {
                let mut shuffled = all.clone();
                shuffle(&mut shuffled, &mut rng);
                let test = shuffled.split_off(cut);
                (shuffled, test)
            };
            SplitManifest::from_sides(seed, ratio, split_index, 0, stratified, train, test)
        })
        .collect()
}

/// Moves seeded random training images into the test set, one stage per
/// schedule entry, so every stage hits its ratio of the full manifest and each
/// test set contains the previous one.
pub fn deplete(s: &SplitManifest, schedule: &[Ratio], seed: u64) -> Result<Vec<SplitManifest>> {
    if s.ratio != Ratio::DEFAULT {
        return Err(Error::InvalidArgument(format!(
            "depletion starts from an 80:20 split, got {}",
            s.ratio
        )));
    }
    let mut previous = s.ratio.train_pct;
    for r in schedule {
        if r.train_pct >= previous {
            return Err(Error::InvalidArgument(format!(
                "depletion schedule must strictly decrease the train share ({previous} -> {})",
                r.train_pct
            )));
        }
        previous = r.train_pct;
    }

    let n = s.len();
    let mut train = s.train.clone();
    let mut test = s.test.clone();
    let mut out = Vec::with_capacity(schedule.len());
    for (j, &ratio) in schedule.iter().enumerate() {
        let stage = j as u32 + 1;
        let target = ratio.train_size(n);
        let moving = train.len().saturating_sub(target);
        let mut rng = split_rng(seed, s.split_index, stage);
        shuffle(&mut train, &mut rng);
        let kept = train.split_off(moving);
        test.append(&mut train);
        train = kept;
        let m = SplitManifest::from_sides(
            seed,
            ratio,
            s.split_index,
            stage,
            s.stratified,
            train.clone(),
            test.clone(),
        )?;
        train = m.train.clone();
        test = m.test.clone();
        out.push(m);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassReportRow {
    pub clinical_class: String,
    pub train: usize,
    /// Share of the training side, in percent.
    pub train_pct: f64,
    pub test: usize,
    pub test_pct: f64,
}

impl ClassReportRow {
    pub fn train_pct_display(&self) -> u32 {
        round_half_up(self.train_pct)
    }

    pub fn test_pct_display(&self) -> u32 {
        round_half_up(self.test_pct)
    }
}

pub fn round_half_up(pct: f64) -> u32 {
    (pct + 0.5).floor() as u32
}

fn pct(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

/// Per-class counts and side shares of one split.
pub fn class_report(s: &SplitManifest) -> Vec<ClassReportRow> {
    let (ntrain, ntest) = (s.train.len(), s.test.len());
    s.class_counts
        .iter()
        .map(|(class, c)| ClassReportRow {
            clinical_class: class.clone(),
            train: c.train,
            train_pct: pct(c.train, ntrain),
            test: c.test,
            test_pct: pct(c.test, ntest),
        })
        .collect()
}
