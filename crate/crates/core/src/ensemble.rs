//! Replicate aggregation and two-model mask fusion.

use std::fmt;
use std::str::FromStr;

use crate::mask::{BinaryMask, ConfusionCounts, Heatmap, ProbabilityMap, confusion, ensure_same_dims};
use crate::metrics::dice;
use crate::regime::Regime;
use crate::{Error, Result};

pub const DEFAULT_RUNS: usize = 5;

/// The outputs of repeated training runs of one model on one image.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSet {
    pub image_id: String,
    pub model: Regime,
    runs: Vec<BinaryMask>,
    /// Heatmaps per target class, indexed by class (0 or 1).
    heatmaps: [Vec<Heatmap>; 2],
}

impl RunSet {
    /// Checks that there are `expected_runs` masks and that every mask and
    /// heatmap shares the first mask's dimensions.
    pub fn new(
        image_id: impl Into<String>,
        model: Regime,
        runs: Vec<BinaryMask>,
        heatmaps: Vec<Heatmap>,
        expected_runs: usize,
    ) -> Result<Self> {
        if expected_runs == 0 {
            return Err(Error::InvalidArgument("run count must be positive".into()));
        }
        if runs.len() != expected_runs {
            return Err(Error::InvalidArgument(format!(
                "expected {expected_runs} runs, got {}",
                runs.len()
            )));
        }
        let dims = runs[0].dims();
        for r in &runs[1..] {
            ensure_same_dims(dims, r.dims())?;
        }
        let mut by_class: [Vec<Heatmap>; 2] = [Vec::new(), Vec::new()];
        for h in heatmaps {
            ensure_same_dims(dims, h.dims())?;
            by_class[usize::from(h.target_class())].push(h);
        }
        Ok(Self {
            image_id: image_id.into(),
            model,
            runs,
            heatmaps: by_class,
        })
    }

    pub fn runs(&self) -> &[BinaryMask] {
        &self.runs
    }

    pub fn heatmaps(&self, target_class: u8) -> &[Heatmap] {
        &self.heatmaps[usize::from(target_class.min(1))]
    }

    pub fn dims(&self) -> (usize, usize) {
        self.runs[0].dims()
    }
}

/// Pixel is 1 only where every run marks it.
pub fn run_intersection(rs: &RunSet) -> Result<BinaryMask> {
    intersect_all(rs.runs())
}

pub fn intersect_all(masks: &[BinaryMask]) -> Result<BinaryMask> {
    let (first, rest) = masks
        .split_first()
        .ok_or(Error::TooFewValues { required: 1, actual: 0 })?;
    rest.iter()
        .try_fold(first.clone(), |acc, m| acc.zip_with(m, |a, b| a && b))
}

/// Pixel is 1 where more than half of the runs mark it.
///
/// Not part of the published method; offered as an alternative to
/// [`run_intersection`] for comparison.
pub fn majority_vote(rs: &RunSet) -> Result<BinaryMask> {
    let runs = rs.runs();
    let (w, h) = rs.dims();
    let mut votes = vec![0usize; w * h];
    for r in runs {
        for (v, &p) in votes.iter_mut().zip(r.pixels()) {
            *v += usize::from(p);
        }
    }
    let bits: Vec<bool> = votes.iter().map(|&v| 2 * v > runs.len()).collect();
    BinaryMask::from_bools(w, h, &bits)
}

/// Per-pixel minimum of replicate probability maps.
pub fn probability_min(maps: &[ProbabilityMap]) -> Result<ProbabilityMap> {
    let (first, rest) = maps
        .split_first()
        .ok_or(Error::TooFewValues { required: 1, actual: 0 })?;
    let mut acc = first.values().to_vec();
    for m in rest {
        ensure_same_dims(first.dims(), m.dims())?;
        for (a, &v) in acc.iter_mut().zip(m.values()) {
            *a = a.min(v);
        }
    }
    ProbabilityMap::new(first.width(), first.height(), acc)
}

/// Per-pixel arithmetic mean of the run heatmaps for one target class.
pub fn gradcam_average(rs: &RunSet, target_class: u8) -> Result<Heatmap> {
    if target_class > 1 {
        return Err(Error::InvalidArgument(format!(
            "target class must be 0 or 1, got {target_class}"
        )));
    }
    let maps = rs.heatmaps(target_class);
    if maps.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "image {} has no class-{target_class} heatmaps for {}",
            rs.image_id, rs.model
        )));
    }
    if maps.len() != rs.runs().len() {
        return Err(Error::InvalidArgument(format!(
            "image {} has {} class-{target_class} heatmaps for {} runs",
            rs.image_id,
            maps.len(),
            rs.runs().len()
        )));
    }
    average_heatmaps(maps)
}

pub fn average_heatmaps(maps: &[Heatmap]) -> Result<Heatmap> {
    let (first, rest) = maps
        .split_first()
        .ok_or(Error::TooFewValues { required: 1, actual: 0 })?;
    let mut sum = first.values().to_vec();
    for m in rest {
        ensure_same_dims(first.dims(), m.dims())?;
        if m.target_class() != first.target_class() {
            return Err(Error::InvalidArgument("heatmaps target different classes".into()));
        }
        for (s, &v) in sum.iter_mut().zip(m.values()) {
            *s += v;
        }
    }
    let n = maps.len() as f64;
    let mean: Vec<f64> = sum.into_iter().map(|s| (s / n).clamp(0.0, 1.0)).collect();
    Heatmap::new(first.width(), first.height(), mean, first.target_class())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FuseOp {
    Union,
    Intersection,
}

impl FuseOp {
    pub fn label(self) -> &'static str {
        match self {
            Self::Union => "union",
            Self::Intersection => "intersection",
        }
    }
}

impl fmt::Display for FuseOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FuseOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "union" => Ok(Self::Union),
            "intersection" => Ok(Self::Intersection),
            other => Err(Error::InvalidArgument(format!("unknown fusion {other:?}"))),
        }
    }
}

pub fn fuse(a: &BinaryMask, b: &BinaryMask, op: FuseOp) -> Result<BinaryMask> {
    match op {
        FuseOp::Union => a.zip_with(b, |x, y| x || y),
        FuseOp::Intersection => a.zip_with(b, |x, y| x && y),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionThresholds {
    pub fpr_hi: f64,
    pub fnr_hi: f64,
}

impl Default for FusionThresholds {
    fn default() -> Self {
        Self {
            fpr_hi: 0.1,
            fnr_hi: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Recommendation {
    Fuse(FuseOp),
    None,
}

impl Recommendation {
    pub fn label(self) -> &'static str {
        match self {
            Self::Fuse(op) => op.label(),
            Self::None => "none",
        }
    }

    pub fn op(self) -> Option<FuseOp> {
        match self {
            Self::Fuse(op) => Some(op),
            Self::None => None,
        }
    }
}

impl fmt::Display for Recommendation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Intersection when both models over-segment, union when both
/// under-segment, otherwise no fusion. Rates with an empty denominator are 0.
pub fn recommend_fusion(a: &ConfusionCounts, b: &ConfusionCounts, t: FusionThresholds) -> Recommendation {
    if a.false_positive_rate() > t.fpr_hi && b.false_positive_rate() > t.fpr_hi {
        Recommendation::Fuse(FuseOp::Intersection)
    } else if a.false_negative_rate() > t.fnr_hi && b.false_negative_rate() > t.fnr_hi {
        Recommendation::Fuse(FuseOp::Union)
    } else {
        Recommendation::None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Candidate {
    A,
    B,
    Union,
    Intersection,
}

impl Candidate {
    pub const ALL: [Candidate; 4] = [Self::A, Self::B, Self::Union, Self::Intersection];

    pub fn label(self) -> &'static str {
        match self {
            Self::A => "a",
            Self::B => "b",
            Self::Union => "union",
            Self::Intersection => "intersection",
        }
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleChoice {
    pub best: Candidate,
    /// Dice of a, b, union and intersection, in that order.
    pub dice: [f64; 4],
}

fn dice_against(gt: &BinaryMask, m: &BinaryMask) -> Result<f64> {
    Ok(dice(&confusion(gt, m)?).value.expect("dice is always defined"))
}

/// Evaluates all four candidates; the first maximum in (a, b, union, intersection) order wins.
pub fn best_fusion_oracle(gt: &BinaryMask, a: &BinaryMask, b: &BinaryMask) -> Result<OracleChoice> {
    ensure_same_dims(gt.dims(), a.dims())?;
    let masks = [
        a.clone(),
        b.clone(),
        fuse(a, b, FuseOp::Union)?,
        fuse(a, b, FuseOp::Intersection)?,
    ];
    let mut scores = [0.0; 4];
    for (s, m) in scores.iter_mut().zip(&masks) {
        *s = dice_against(gt, m)?;
    }
    let mut best = 0;
    for i in 1..4 {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    Ok(OracleChoice {
        best: Candidate::ALL[best],
        dice: scores,
    })
}

/// Which fusion produced a [`FusionResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FusionKind {
    Union,
    Intersection,
    /// Whatever [`recommend_fusion`] chose; `None` leaves model a's mask.
    Recommended(Recommendation),
}

impl FusionKind {
    pub fn label(self) -> String {
        match self {
            Self::Union => "union".into(),
            Self::Intersection => "intersection".into(),
            Self::Recommended(r) => format!("recommended:{}", r.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionResult {
    pub kind: FusionKind,
    pub fused: BinaryMask,
    pub dice_before_a: f64,
    pub dice_before_b: f64,
    pub dice_after: f64,
}

/// Fuses `a` and `b` and scores inputs and output against `gt`.
pub fn fuse_against(gt: &BinaryMask, a: &BinaryMask, b: &BinaryMask, kind: FusionKind) -> Result<FusionResult> {
    ensure_same_dims(gt.dims(), a.dims())?;
    ensure_same_dims(a.dims(), b.dims())?;
    let fused = match kind {
        FusionKind::Union => fuse(a, b, FuseOp::Union)?,
        FusionKind::Intersection => fuse(a, b, FuseOp::Intersection)?,
        FusionKind::Recommended(r) => match r.op() {
            Some(op) => fuse(a, b, op)?,
            None => a.clone(),
        },
    };
    Ok(FusionResult {
        kind,
        dice_before_a: dice_against(gt, a)?,
        dice_before_b: dice_against(gt, b)?,
        dice_after: dice_against(gt, &fused)?,
        fused,
    })
}
