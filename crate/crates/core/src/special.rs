//! Real dilogarithm.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const PI2_6: f64 = PI * PI / 6.0;

fn series(x: f64) -> f64 {
    // |x| <= 1/2: terms fall like 2^{-k}/k²
    let mut term = x;
    let mut sum = 0.0f64;
    let mut k = 1.0f64;
    while term.abs() > 1e-18 * sum.abs().max(1e-300) || k < 2.0 {
        sum += term / (k * k);
        term *= x;
        k += 1.0;
        if k > 200.0 {
            break;
        }
    }
    sum
}

/// `Li₂(x) = Σ_{k≥1} xᵏ/k²` on the real axis `x ≤ 1`.
///
/// The series is only summed for `|x| ≤ 1/2`; other arguments are mapped there by
/// reflection (`1/2 < x ≤ 1`), Landen (`−1 ≤ x < −1/2`) and inversion (`x < −1`).
pub fn dilog(x: f64) -> Result<f64> {
    if x.is_nan() || x > 1.0 {
        return Err(Error::Domain(format!("Li2({x}) is complex")));
    }
    Ok(dilog_real(x))
}

fn dilog_real(x: f64) -> f64 {
    if x == 1.0 {
        PI2_6
    } else if x.abs() <= 0.5 {
        series(x)
    } else if x > 0.5 {
        PI2_6 - x.ln() * (1.0 - x).ln() - series(1.0 - x)
    } else if x >= -1.0 {
        let y = x / (x - 1.0);
        -series(y) - 0.5 * (1.0 - x).ln().powi(2)
    } else {
        let l = (-x).ln();
        -PI2_6 - 0.5 * l * l - dilog_real(1.0 / x)
    }
}
