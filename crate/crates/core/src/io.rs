//! PNG codecs for masks, score maps, heatmaps, and RGB renderings.
//!
//! - Binary masks: 8-bit grayscale, value `>= 128` is class 1. Written as 0/255.
//! - Probability maps and heatmaps: 16-bit grayscale, `v / 65535`. 8-bit input
//!   is accepted as `v / 255`.
//! - Overlays and rendered heatmaps: 8-bit RGB.
//!
//! Multi-channel masks are rejected unless a [`ChannelReduction`] is given.

use std::path::Path;

use image::{DynamicImage, GrayImage, ImageBuffer, Luma};

pub use image::RgbImage;

use crate::mask::{BinaryMask, Heatmap, ProbabilityMap};
use crate::{Error, Result};

/// Grey levels at or above this value binarise to class 1.
pub const MASK_THRESHOLD: u8 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskKind {
    GroundTruth,
    Prediction,
}

impl MaskKind {
    fn describe(self) -> &'static str {
        match self {
            MaskKind::GroundTruth => "ground-truth mask",
            MaskKind::Prediction => "prediction mask",
        }
    }
}

/// How to collapse colour masks (e.g. red/blue organ labels) to one class bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelReduction {
    /// Any pixel with a non-zero colour channel is class 1; alpha is ignored.
    AnyNonBlack,
}

fn open(path: &Path) -> Result<DynamicImage> {
    image::open(path).map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_mask(path: &Path, kind: MaskKind, rule: Option<ChannelReduction>) -> Result<BinaryMask> {
    decode_mask(open(path)?, path, kind, rule)
}

/// Binarises an already decoded image; `origin` is only used in errors.
pub fn decode_mask(
    img: DynamicImage,
    origin: &Path,
    kind: MaskKind,
    rule: Option<ChannelReduction>,
) -> Result<BinaryMask> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    if w == 0 || h == 0 {
        return Err(Error::ZeroArea { width: w, height: h });
    }
    let channels = img.color().channel_count();
    let pixels: Vec<u8> = match img {
        DynamicImage::ImageLuma8(buf) => buf
            .into_raw()
            .into_iter()
            .map(|v| u8::from(v >= MASK_THRESHOLD))
            .collect(),
        other if channels > 1 => match rule {
            Some(ChannelReduction::AnyNonBlack) => {
                let colour_channels = if other.color().has_alpha() {
                    channels as usize - 1
                } else {
                    channels as usize
                };
                match other {
                    DynamicImage::ImageLumaA8(_) | DynamicImage::ImageRgb8(_) | DynamicImage::ImageRgba8(_) => {
                        let raw = other.as_bytes();
                        raw.chunks_exact(channels as usize)
                            .map(|px| u8::from(px[..colour_channels].iter().any(|&c| c > 0)))
                            .collect()
                    }
                    o => {
                        return Err(Error::UnsupportedFormat {
                            path: origin.to_path_buf(),
                            what: kind.describe(),
                            format: format!("{:?}", o.color()),
                        });
                    }
                }
            }
            None => {
                return Err(Error::MultiChannel {
                    path: origin.to_path_buf(),
                    what: kind.describe(),
                    channels,
                });
            }
        },
        other => {
            return Err(Error::UnsupportedFormat {
                path: origin.to_path_buf(),
                what: kind.describe(),
                format: format!("{:?}", other.color()),
            });
        }
    };
    BinaryMask::new(w, h, pixels)
}

fn decode_unit_values(img: DynamicImage, origin: &Path, what: &'static str) -> Result<(usize, usize, Vec<f64>)> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    if w == 0 || h == 0 {
        return Err(Error::ZeroArea { width: w, height: h });
    }
    let values = match img {
        DynamicImage::ImageLuma16(buf) => buf.into_raw().into_iter().map(|v| f64::from(v) / 65535.0).collect(),
        DynamicImage::ImageLuma8(buf) => buf.into_raw().into_iter().map(|v| f64::from(v) / 255.0).collect(),
        other if other.color().channel_count() > 1 => {
            return Err(Error::MultiChannel {
                path: origin.to_path_buf(),
                what,
                channels: other.color().channel_count(),
            });
        }
        other => {
            return Err(Error::UnsupportedFormat {
                path: origin.to_path_buf(),
                what,
                format: format!("{:?}", other.color()),
            });
        }
    };
    Ok((w, h, values))
}

pub fn load_probability_map(path: &Path) -> Result<ProbabilityMap> {
    let (w, h, values) = decode_unit_values(open(path)?, path, "probability map")?;
    ProbabilityMap::new(w, h, values)
}

pub fn load_heatmap(path: &Path, target_class: u8) -> Result<Heatmap> {
    let (w, h, values) = decode_unit_values(open(path)?, path, "heatmap")?;
    Heatmap::new(w, h, values, target_class)
}

pub fn mask_to_gray(mask: &BinaryMask) -> GrayImage {
    let raw = mask.pixels().iter().map(|&p| p * 255).collect();
    GrayImage::from_raw(mask.width() as u32, mask.height() as u32, raw).expect("buffer sized from mask")
}

/// Quantises `[0, 1]` values to 16-bit grey, `round(v * 65535)`.
pub fn unit_values_to_gray16(width: usize, height: usize, values: &[f64]) -> ImageBuffer<Luma<u16>, Vec<u16>> {
    let raw = values
        .iter()
        .map(|&v| (v.clamp(0.0, 1.0) * 65535.0).round() as u16)
        .collect();
    ImageBuffer::from_raw(width as u32, height as u32, raw).expect("buffer sized from map")
}

fn save<P, C>(buf: &ImageBuffer<P, C>, path: &Path) -> Result<()>
where
    P: image::PixelWithColorType,
    [P::Subpixel]: image::EncodableLayout,
    C: std::ops::Deref<Target = [P::Subpixel]>,
{
    buf.save_with_format(path, image::ImageFormat::Png)
        .map_err(|source| Error::Encode {
            path: path.to_path_buf(),
            source,
        })
}

pub fn save_mask(mask: &BinaryMask, path: &Path) -> Result<()> {
    save(&mask_to_gray(mask), path)
}

pub fn save_probability_map(map: &ProbabilityMap, path: &Path) -> Result<()> {
    save(&unit_values_to_gray16(map.width(), map.height(), map.values()), path)
}

pub fn save_heatmap(map: &Heatmap, path: &Path) -> Result<()> {
    save(&unit_values_to_gray16(map.width(), map.height(), map.values()), path)
}

pub fn save_rgb(img: &RgbImage, path: &Path) -> Result<()> {
    save(img, path)
}
