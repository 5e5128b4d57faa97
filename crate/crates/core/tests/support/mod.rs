//! Shared helpers for the integration and acceptance tests: seeded sample
//! generation matching `oracle/reference.py`, brute-force metric oracles and
//! the published summary values.
#![allow(dead_code)]

pub mod checks;
pub mod published;

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use segstat_core::{BinaryMask, Heatmap, ProbabilityMap};
use serde_json::Value;
use statrs::distribution::{ContinuousCDF, Normal};

pub const REFERENCE_JSON: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../core/tests/data/reference.json"
));

pub fn reference() -> Value {
    serde_json::from_str(REFERENCE_JSON).expect("reference.json parses")
}

pub struct Stream(SplitMix64);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on (0, 1), never exactly 0.
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * 2f64.powi(-53)
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    pub fn bit(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}

/// Regenerates a sample described by a `{"seed","n","dist","shift","quant"}` object.
pub fn sample(spec: &Value) -> Vec<f64> {
    let mut rng = Stream::new(spec["seed"].as_u64().unwrap());
    let n = spec["n"].as_u64().unwrap() as usize;
    let shift = spec["shift"].as_f64().unwrap_or(0.0);
    let quant = spec["quant"].as_f64();
    (0..n)
        .map(|_| {
            let v = match spec["dist"].as_str().unwrap() {
                "normal" => shift + rng.normal(),
                "uniform4" => rng.uniform().powi(4),
                "metric" => 1.0 - rng.uniform().powi(3),
                other => panic!("unknown dist {other}"),
            };
            match quant {
                Some(q) => (v * q).floor() / q,
                None => v,
            }
        })
        .collect()
}

/// `n` Gaussian values with one seeded draw inside each of `n` equal
/// probability strata, in shuffled order.
pub fn stratified_gaussian(seed: u64, n: usize, mu: f64, sigma: f64) -> Vec<f64> {
    let norm = Normal::new(mu, sigma).unwrap();
    let mut rng = Stream::new(seed);
    let mut v: Vec<f64> = (0..n)
        .map(|i| norm.inverse_cdf((i as f64 + 0.1 + 0.8 * rng.uniform()) / n as f64))
        .collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        v.swap(i, j);
    }
    v
}

pub fn random_mask(rng: &mut Stream, w: usize, h: usize, density: f64) -> BinaryMask {
    let bits: Vec<bool> = (0..w * h).map(|_| rng.uniform() < density).collect();
    BinaryMask::from_bools(w, h, &bits).unwrap()
}

/// Scores on a coarse grid half of the time so that ties are common.
pub fn random_probability(rng: &mut Stream, w: usize, h: usize) -> ProbabilityMap {
    let coarse = rng.bit();
    let values = (0..w * h)
        .map(|_| {
            let u = rng.uniform();
            if coarse { (u * 8.0).floor() / 7.0 } else { u }
        })
        .map(|v: f64| v.min(1.0))
        .collect();
    ProbabilityMap::new(w, h, values).unwrap()
}

pub fn random_heatmap(rng: &mut Stream, w: usize, h: usize, class: u8) -> Heatmap {
    Heatmap::new(w, h, (0..w * h).map(|_| rng.uniform()).collect(), class).unwrap()
}

/// Confusion cells counted one pixel at a time: `(tp, fp, tn, fn)`.
pub fn enumerate_cells(gt: &BinaryMask, pred: &BinaryMask) -> (u64, u64, u64, u64) {
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for y in 0..gt.height() {
        for x in 0..gt.width() {
            match (gt.get(x, y), pred.get(x, y)) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (false, false) => tn += 1,
                (true, false) => fn_ += 1,
            }
        }
    }
    (tp, fp, tn, fn_)
}

/// ROC area by sweeping every distinct score as a threshold (predict positive
/// when score >= t) and integrating the (FPR, TPR) polyline with trapezoids.
pub fn sweep_auroc(gt: &BinaryMask, prob: &ProbabilityMap) -> Option<f64> {
    let labels: Vec<bool> = gt.pixels().iter().map(|&p| p == 1).collect();
    let pos = labels.iter().filter(|&&l| l).count() as f64;
    let neg = labels.len() as f64 - pos;
    if pos == 0.0 || neg == 0.0 {
        return None;
    }
    // walk pixels from the highest score down; each distinct score closes one threshold
    let mut order: Vec<(f64, bool)> = prob.values().iter().copied().zip(labels).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0.0, 0.0);
    for (i, &(s, l)) in order.iter().enumerate() {
        if l {
            tp += 1.0;
        } else {
            fp += 1.0;
        }
        if order.get(i + 1).is_none_or(|next| next.0 != s) {
            points.push((fp / neg, tp / pos));
        }
    }
    Some(
        points
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
            .sum(),
    )
}
