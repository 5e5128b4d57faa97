// Shapiro-Wilk W test, Royston's approximation (Applied Statistics AS R94).
//
// Coefficients come from normal scores refined by Royston's polynomials; the
// p-value uses a normalising transform of log(1 - W) whose form changes at
// n = 11. Valid for 3 <= n <= 5000.

use rand_core::SeedableRng;
use rand_xoshiro::SplitMix64;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::splits::uniform_below;
use crate::{Error, Result};

pub const SHAPIRO_WILK_MAX_N: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapiroWilk {
    pub w: f64,
    pub p_value: f64,
    /// Original sample size when the input was subsampled to the valid range.
    pub subsampled_from: Option<usize>,
}

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Antisymmetric weights for the lower half of the ordered sample.
fn coefficients(n: usize) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let norm = std_normal();
    let an = n as f64;
    let m: Vec<f64> = (1..=half)
        .map(|i| -norm.inverse_cdf((i as f64 - 0.375) / (an + 0.25)))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();

    let mut a = vec![0.0; half];
    let a1 = poly(&C1, rsn) + m[0] / ssumm2;
    let (first_scaled, fac) = if n > 5 {
        let a2 = m[1] / ssumm2 + poly(&C2, rsn);
        let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2)).sqrt();
        a[1] = a2;
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    a[0] = a1;
    for i in first_scaled..half {
        a[i] = m[i] / fac;
    }
    a
}

fn p_value(w: f64, n: usize) -> f64 {
    if n == 3 {
        // exact null distribution for three observations
        let pi6 = 6.0 / std::f64::consts::PI;
        let stqr = std::f64::consts::FRAC_PI_3;
        return (pi6 * (w.sqrt().asin() - stqr)).clamp(0.0, 1.0);
    }
    let an = n as f64;
    let mut y = (1.0 - w).ln();
    let (mean, sd) = if n <= 11 {
        let gamma = poly(&G, an);
        if y >= gamma {
            return 1e-99;
        }
        y = -(gamma - y).ln();
        (poly(&C3, an), poly(&C4, an).exp())
    } else {
        let xx = an.ln();
        (poly(&C5, xx), poly(&C6, xx).exp())
    };
    Normal::new(mean, sd).expect("positive sd").sf(y)
}

/// W statistic and p-value. Requires `3 <= n <= 5000` and non-constant data.
pub fn shapiro_wilk(values: &[f64]) -> Result<ShapiroWilk> {
    let n = values.len();
    if n < 3 {
        return Err(Error::TooFewValues { required: 3, actual: n });
    }
    if n > SHAPIRO_WILK_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "Shapiro-Wilk supports at most {SHAPIRO_WILK_MAX_N} values, got {n}"
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite value in sample".into()));
    }
    let mut x = values.to_vec();
    x.sort_unstable_by(f64::total_cmp);
    let range = x[n - 1] - x[0];
    if range <= 0.0 {
        return Err(Error::ConstantInput("the Shapiro-Wilk W statistic"));
    }

    let a = coefficients(n);
    let weight = |i: usize| -> f64 {
        let j = n - 1 - i;
        if i < j {
            -a[i]
        } else if i > j {
            a[j]
        } else {
            0.0
        }
    };

    // (x - min) / range: W no longer depends on location or scale.
    let scaled: Vec<f64> = x.iter().map(|v| (v - x[0]) / range).collect();
    let mean_x = scaled.iter().sum::<f64>() / n as f64;
    let mean_a = (0..n).map(weight).sum::<f64>() / n as f64;
    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (i, &xi) in scaled.iter().enumerate() {
        let da = weight(i) - mean_a;
        let dx = xi - mean_x;
        ssa += da * da;
        ssx += dx * dx;
        sax += da * dx;
    }
    let root = (ssa * ssx).sqrt();
    let w1 = (root - sax) * (root + sax) / (ssa * ssx);
    let w = (1.0 - w1).min(1.0);

    Ok(ShapiroWilk {
        w,
        p_value: p_value(w, n),
        subsampled_from: None,
    })
}

/// Like [`shapiro_wilk`], but samples above 5000 values are reduced to a
/// seeded uniform subsample of 5000 (partial Fisher-Yates over SplitMix64).
pub fn shapiro_wilk_seeded(values: &[f64], seed: u64) -> Result<ShapiroWilk> {
    if values.len() <= SHAPIRO_WILK_MAX_N {
        return shapiro_wilk(values);
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut pool = values.to_vec();
    let n = pool.len();
    for i in 0..SHAPIRO_WILK_MAX_N {
        let j = i + uniform_below(&mut rng, (n - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(SHAPIRO_WILK_MAX_N);
    let mut r = shapiro_wilk(&pool)?;
    r.subsampled_from = Some(n);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(shapiro_wilk(&[1.0, 2.0]), Err(Error::TooFewValues { .. })));
        assert!(matches!(shapiro_wilk(&[2.0; 8]), Err(Error::ConstantInput(_))));
        assert!(shapiro_wilk(&vec![0.0; 5001]).is_err());
    }

    #[test]
    fn coefficients_are_unit_norm() {
        for n in [4, 5, 6, 11, 12, 50, 999, 5000] {
            let a = coefficients(n);
            let ss: f64 = 2.0 * a.iter().map(|v| v * v).sum::<f64>();
            assert!((ss - 1.0).abs() < 1e-12, "n={n} ss={ss}");
        }
    }

    #[test]
    fn three_points_evenly_spaced_is_perfect() {
        let r = shapiro_wilk(&[1.0, 2.0, 3.0]).unwrap();
        assert!((r.w - 1.0).abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn large_samples_are_subsampled_deterministically() {
        let v: Vec<f64> = (0..6000).map(|i| ((i * 7919) % 6007) as f64).collect();
        let a = shapiro_wilk_seeded(&v, 9).unwrap();
        let b = shapiro_wilk_seeded(&v, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.subsampled_from, Some(6000));
        assert!(a.w > 0.0 && a.w <= 1.0);
    }
}
