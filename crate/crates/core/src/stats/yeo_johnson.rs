//! Yeo-Johnson power transform and maximum-likelihood choice of its exponent.

use crate::{Error, Result};

/// Search interval for the exponent.
pub const LAMBDA_RANGE: (f64, f64) = (-5.0, 5.0);
const LAMBDA_TOL: f64 = 1e-6;

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12
}

/// Transform of a single value.
pub fn yeo_johnson_value(y: f64, lambda: f64) -> f64 {
    if y >= 0.0 {
        if near(lambda, 0.0) {
            y.ln_1p()
        } else {
            (lambda * y.ln_1p()).exp_m1() / lambda
        }
    } else if near(lambda, 2.0) {
        -(-y).ln_1p()
    } else {
        let p = 2.0 - lambda;
        -(p * (-y).ln_1p()).exp_m1() / p
    }
}

pub fn yeo_johnson(values: &[f64], lambda: f64) -> Vec<f64> {
    values.iter().map(|&y| yeo_johnson_value(y, lambda)).collect()
}

/// Inverse of [`yeo_johnson_value`]; `NaN` outside the transform's image.
pub fn yeo_johnson_inverse(x: f64, lambda: f64) -> f64 {
    if x >= 0.0 {
        if near(lambda, 0.0) {
            x.exp_m1()
        } else {
            ((lambda * x).ln_1p() / lambda).exp_m1()
        }
    } else if near(lambda, 2.0) {
        -(-x).exp_m1()
    } else {
        let p = 2.0 - lambda;
        -((-p * x).ln_1p() / p).exp_m1()
    }
}

/// Profile Gaussian log-likelihood of the transformed sample, up to an
/// additive constant: `-n/2 ln σ²(λ) + (λ - 1) Σ sign(y) ln(1 + |y|)`,
/// with σ² the maximum-likelihood (1/n) variance.
pub fn yeo_johnson_llf(values: &[f64], lambda: f64) -> f64 {
    let n = values.len() as f64;
    let t = yeo_johnson(values, lambda);
    let mean = t.iter().sum::<f64>() / n;
    let var = t.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let jacobian: f64 = values.iter().map(|y| y.signum() * y.abs().ln_1p()).sum();
    -0.5 * n * var.ln() + (lambda - 1.0) * jacobian
}

/// Exponent maximising [`yeo_johnson_llf`], by golden-section search over
/// [`LAMBDA_RANGE`] to a bracket width of 1e-6.
pub fn yeo_johnson_mle(values: &[f64]) -> Result<f64> {
    if values.len() < 3 {
        return Err(Error::TooFewValues {
            required: 3,
            actual: values.len(),
        });
    }
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        return Err(Error::ConstantInput("the Yeo-Johnson likelihood"));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = LAMBDA_RANGE;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = yeo_johnson_llf(values, c);
    let mut fd = yeo_johnson_llf(values, d);
    while hi - lo > LAMBDA_TOL {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = yeo_johnson_llf(values, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = yeo_johnson_llf(values, d);
        }
    }
    Ok((lo + hi) / 2.0)
}
