//! Pixel containers and the per-pixel comparisons built on them.

use image::{Rgb, RgbImage};

use crate::{Error, Result};

/// Overlay colour for pixels where ground truth and prediction are both 1.
pub const TP_COLOR: [u8; 3] = [0, 255, 0];
/// Overlay colour for pixels where both are 0.
pub const TN_COLOR: [u8; 3] = [0, 0, 0];
/// Overlay colour for predicted-1, ground-truth-0 pixels.
pub const FP_COLOR: [u8; 3] = [255, 0, 0];
/// Overlay colour for predicted-0, ground-truth-1 pixels.
pub const FN_COLOR: [u8; 3] = [255, 255, 0];

fn check_area(width: usize, height: usize) -> Result<usize> {
    if width == 0 || height == 0 {
        return Err(Error::ZeroArea { width, height });
    }
    Ok(width * height)
}

fn check_dims(a: (usize, usize), b: (usize, usize)) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            left_w: a.0,
            left_h: a.1,
            right_w: b.0,
            right_h: b.1,
        });
    }
    Ok(())
}

fn check_unit(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !(0.0..=1.0).contains(v)) {
        Some(index) => Err(Error::OutOfUnitRange {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

/// A two-class mask stored row-major; 1 marks the target class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        let expected = check_area(width, height)?;
        if pixels.len() != expected {
            return Err(Error::BufferLength {
                expected,
                actual: pixels.len(),
            });
        }
        if let Some(index) = pixels.iter().position(|&p| p > 1) {
            return Err(Error::NotBinary {
                index,
                value: pixels[index],
            });
        }
        Ok(Self { width, height, pixels })
    }

    pub fn from_bools(width: usize, height: usize, bits: &[bool]) -> Result<Self> {
        Self::new(width, height, bits.iter().map(|&b| u8::from(b)).collect())
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Result<Self> {
        let n = check_area(width, height)?;
        Ok(Self {
            width,
            height,
            pixels: vec![u8::from(value); n],
        })
    }

    /// Builds a mask by evaluating `f(x, y)` for every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        check_area(width, height)?;
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(u8::from(f(x, y)));
            }
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.pixels[y * self.width + x] == 1
    }

    pub fn count_ones(&self) -> usize {
        self.pixels.iter().filter(|&&p| p == 1).count()
    }

    /// True when every pixel belongs to one class.
    pub fn is_single_class(&self) -> bool {
        let ones = self.count_ones();
        ones == 0 || ones == self.len()
    }

    /// Pixel-wise combination of two equally sized masks.
    pub fn zip_with(&self, other: &BinaryMask, f: impl Fn(bool, bool) -> bool) -> Result<BinaryMask> {
        check_dims(self.dims(), other.dims())?;
        let pixels = self
            .pixels
            .iter()
            .zip(&other.pixels)
            .map(|(&a, &b)| u8::from(f(a == 1, b == 1)))
            .collect();
        Ok(BinaryMask {
            width: self.width,
            height: self.height,
            pixels,
        })
    }

    /// True when every 1-pixel of `self` is also 1 in `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.dims() == other.dims() && self.pixels.iter().zip(&other.pixels).all(|(&a, &b)| a <= b)
    }
}

/// Per-pixel class-1 scores in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ProbabilityMap {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        let expected = check_area(width, height)?;
        if values.len() != expected {
            return Err(Error::BufferLength {
                expected,
                actual: values.len(),
            });
        }
        check_unit(&values)?;
        Ok(Self { width, height, values })
    }

    /// Scores of exactly 0 and 1 taken from a mask.
    pub fn from_mask(mask: &BinaryMask) -> Self {
        Self {
            width: mask.width,
            height: mask.height,
            values: mask.pixels.iter().map(|&p| f64::from(p)).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Pixels with score `>= threshold` become class 1.
    pub fn threshold(&self, threshold: f64) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            pixels: self.values.iter().map(|&v| u8::from(v >= threshold)).collect(),
        }
    }
}

/// A saliency map for one target class, activations in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    width: usize,
    height: usize,
    values: Vec<f64>,
    target_class: u8,
}

impl Heatmap {
    pub fn new(width: usize, height: usize, values: Vec<f64>, target_class: u8) -> Result<Self> {
        let expected = check_area(width, height)?;
        if values.len() != expected {
            return Err(Error::BufferLength {
                expected,
                actual: values.len(),
            });
        }
        if target_class > 1 {
            return Err(Error::InvalidArgument(format!(
                "target class {target_class} is not 0 or 1"
            )));
        }
        check_unit(&values)?;
        Ok(Self {
            width,
            height,
            values,
            target_class,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn target_class(&self) -> u8 {
        self.target_class
    }
}

/// Pixel tallies for one (ground truth, prediction) pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// Ground-truth positives, `tp + fn`.
    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    /// Ground-truth negatives, `tn + fp`.
    pub fn negatives(&self) -> u64 {
        self.tn + self.fp
    }

    /// `fp / (fp + tn)`, zero when there are no ground-truth negatives.
    pub fn false_positive_rate(&self) -> f64 {
        ratio_or_zero(self.fp, self.negatives())
    }

    /// `fn / (fn + tp)`, zero when there are no ground-truth positives.
    pub fn false_negative_rate(&self) -> f64 {
        ratio_or_zero(self.fn_, self.positives())
    }
}

fn ratio_or_zero(num: u64, den: u64) -> f64 {
    if den == 0 { 0.0 } else { num as f64 / den as f64 }
}

pub fn confusion(gt: &BinaryMask, pred: &BinaryMask) -> Result<ConfusionCounts> {
    check_dims(gt.dims(), pred.dims())?;
    // index = 2*gt + pred
    let mut tally = [0u64; 4];
    for (&g, &p) in gt.pixels.iter().zip(&pred.pixels) {
        tally[usize::from(2 * g + p)] += 1;
    }
    Ok(ConfusionCounts {
        tn: tally[0],
        fp: tally[1],
        fn_: tally[2],
        tp: tally[3],
    })
}

/// Colours each pixel by its confusion cell: TP green, TN black, FP red, FN yellow.
pub fn overlay(gt: &BinaryMask, pred: &BinaryMask) -> Result<RgbImage> {
    check_dims(gt.dims(), pred.dims())?;
    let mut img = RgbImage::new(gt.width as u32, gt.height as u32);
    for (i, px) in img.pixels_mut().enumerate() {
        let color = match (gt.pixels[i], pred.pixels[i]) {
            (1, 1) => TP_COLOR,
            (0, 0) => TN_COLOR,
            (0, 1) => FP_COLOR,
            _ => FN_COLOR,
        };
        *px = Rgb(color);
    }
    Ok(img)
}

pub(crate) fn ensure_same_dims(a: (usize, usize), b: (usize, usize)) -> Result<()> {
    check_dims(a, b)
}
