//! Complete elliptic integral of the second kind.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Result, SteerError};

const MAX_ITER: usize = 64;

/// `E(m) = ∫₀^{π/2} √(1 - m sin²t) dt` for parameter `m = e²` in `[0, 1]`.
///
/// Arithmetic–geometric mean with the Legendre sum
/// `E = K · (1 - Σ 2^{n-1} c_n²)`, `c₀² = m`, `K = π / (2·AGM(1, √(1-m)))`.
pub fn elliptic_e(m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(SteerError::Domain(format!("elliptic parameter m = {m} outside [0, 1]")));
    }
    if m == 0.0 {
        return Ok(FRAC_PI_2);
    }
    if m == 1.0 {
        return Ok(1.0);
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    let mut sum = 0.5 * m;
    let mut weight = 0.5;
    for _ in 0..MAX_ITER {
        let c = 0.5 * (a - b);
        weight *= 2.0;
        sum += weight * c * c;
        let next_b = (a * b).sqrt();
        a = 0.5 * (a + b);
        b = next_b;
        if c.abs() <= f64::EPSILON * a {
            break;
        }
    }
    Ok(FRAC_PI_2 / a * (1.0 - sum))
}
