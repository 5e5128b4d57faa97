//! Blue-to-red saliency colormap.
//!
//! 256 rows; row `i` holds the colour for activation `i / 255`:
//!
//! ```text
//! r = clamp(1.5 - |4v - 3|), g = clamp(1.5 - |4v - 2|), b = clamp(1.5 - |4v - 1|)
//! ```
//!
//! scaled by 255 and rounded. Row 0 is the deepest blue `(0, 0, 128)`,
//! row 255 the deepest red `(128, 0, 0)`. An activation `v` is drawn with row
//! `round(v * 255)`. The same table ships as `data/colormap.csv`.

use std::fmt::Write as _;
use std::sync::OnceLock;

use image::{Rgb, RgbImage};

use crate::mask::Heatmap;
use crate::{Error, Result};

pub const ROWS: usize = 256;

fn channel(v: f64, centre: f64) -> u8 {
    let c = (1.5 - (4.0 * v - centre).abs()).clamp(0.0, 1.0);
    (c * 255.0).round() as u8
}

pub fn table() -> &'static [[u8; 3]; ROWS] {
    static TABLE: OnceLock<[[u8; 3]; ROWS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[0u8; 3]; ROWS];
        for (i, row) in t.iter_mut().enumerate() {
            let v = i as f64 / (ROWS - 1) as f64;
            *row = [channel(v, 3.0), channel(v, 2.0), channel(v, 1.0)];
        }
        t
    })
}

pub fn row_index(v: f64) -> usize {
    (v.clamp(0.0, 1.0) * (ROWS - 1) as f64).round() as usize
}

pub fn color(v: f64) -> [u8; 3] {
    table()[row_index(v)]
}

/// The table as CSV with header `value,r,g,b`.
pub fn to_csv() -> String {
    let mut out = String::from("value,r,g,b\n");
    for (i, [r, g, b]) in table().iter().enumerate() {
        let v = i as f64 / (ROWS - 1) as f64;
        writeln!(out, "{v:.6},{r},{g},{b}").unwrap();
    }
    out
}

pub fn render_heatmap(h: &Heatmap) -> Result<RgbImage> {
    if let Some(index) = h.values().iter().position(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::OutOfUnitRange {
            index,
            value: h.values()[index],
        });
    }
    let mut img = RgbImage::new(h.width() as u32, h.height() as u32);
    for (px, &v) in img.pixels_mut().zip(h.values()) {
        *px = Rgb(color(v));
    }
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        assert_eq!(table()[0], [0, 0, 128]);
        assert_eq!(table()[255], [128, 0, 0]);
    }

    fn hue(rgb: [u8; 3]) -> f64 {
        let [r, g, b] = rgb.map(f64::from);
        let max = r.max(g).max(b);
        let min = r.min(g).min(b);
        let d = max - min;
        let h = if max == r {
            60.0 * ((g - b) / d)
        } else if max == g {
            60.0 * ((b - r) / d + 2.0)
        } else {
            60.0 * ((r - g) / d + 4.0)
        };
        if h < 0.0 { h + 360.0 } else { h }
    }

    #[test]
    fn hue_runs_monotonically_from_blue_to_red() {
        let hues: Vec<f64> = table().iter().map(|&c| hue(c)).collect();
        assert_eq!(hues[0], 240.0);
        assert_eq!(hues[255], 0.0);
        for w in hues.windows(2) {
            assert!(w[1] <= w[0], "{w:?}");
        }
    }

    #[test]
    fn constant_maps() {
        let h = Heatmap::new(2, 2, vec![0.0; 4], 1).unwrap();
        assert!(render_heatmap(&h).unwrap().pixels().all(|p| p.0 == [0, 0, 128]));
        let h = Heatmap::new(2, 2, vec![1.0; 4], 1).unwrap();
        assert!(render_heatmap(&h).unwrap().pixels().all(|p| p.0 == [128, 0, 0]));
    }

    #[test]
    fn shipped_csv_matches_table() {
        let shipped = include_str!("../data/colormap.csv");
        assert_eq!(shipped, to_csv());
    }
}
