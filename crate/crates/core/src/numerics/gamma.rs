use crate::error::{Error, Result};

/// Upper incomplete gamma `Γ(s, x)` for positive integer order.
///
/// Uses `Γ(s, x) = (s-1)! e^{-x} Σ_{k<s} x^k / k!`, which is exact for integer `s`
/// and stays valid for negative `x`.
pub fn upper_incomplete_gamma_int(s: f64, x: f64) -> Result<f64> {
    if !(s >= 1.0) || s.fract() != 0.0 || !s.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "incomplete gamma order must be a positive integer (got {s})"
        )));
    }
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "incomplete gamma argument must be finite (got {x})"
        )));
    }
    Ok(upper_gamma_u(s as u32, x))
}

pub(crate) fn upper_gamma_u(s: u32, x: f64) -> f64 {
    debug_assert!(s >= 1);
    // Σ_{k<s} x^k (s-1)!/k!, built from (s-1)! downwards in the factorial.
    let mut sum = 0.0;
    let mut term = factorial(s - 1);
    for k in 0..s {
        sum += term;
        term *= x / f64::from(k + 1);
    }
    (-x).exp() * sum
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * f64::from(k))
}
