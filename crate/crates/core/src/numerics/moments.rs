use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Scaled complementary error function `e^{x²} erfc(x)` for `x ≥ 0`.
pub fn erfcx(x: f64) -> f64 {
    if x < 5.0 {
        (x * x).exp() * libm::erfc(x)
    } else {
        // Continued fraction x + (1/2)/(x + 1/(x + (3/2)/(x + ...))).
        let mut k = x;
        for n in (1..=60).rev() {
            k = x + (f64::from(n) / 2.0) / k;
        }
        1.0 / (PI.sqrt() * k)
    }
}

/// `∫₀^∞ r^s exp(-(a/√b) r - √b r²) dr`.
///
/// Completing the square gives the exponent shift `a²/(4 b^{3/2})` and a shifted
/// Gaussian tail starting at `a/(2b)`. Integer orders use the tail's closed form
/// (`erfc`) and the integration-by-parts recurrence
/// `2√b M(s+2) = (s+1) M(s) - (a/√b) M(s+1)`; other orders normalise the
/// continued-fraction ratios of that recurrence against the pure Gaussian moment.
pub fn gaussian_linear_moment(s: f64, a: f64, b: f64) -> Result<f64> {
    if !(b > 0.0) || !(a >= 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "gaussian moment needs b > 0 and a ≥ 0 (got a = {a}, b = {b})"
        )));
    }
    if !(s > -1.0) || !s.is_finite() {
        return Err(Error::DivergentMoment {
            exponent: s,
            context: "gaussian_linear_moment".into(),
        });
    }
    let lambda = a / b.sqrt();
    let gamma = b.sqrt();
    if s.fract() == 0.0 {
        Ok(integer_moment(s as u32, lambda, gamma))
    } else {
        Ok(series_moment(s, lambda, gamma))
    }
}

/// Moments `M(0..=max)` of the weight `exp(-λ r - γ r²)`.
///
/// The upward recurrence cancels once `λ ≳ √γ`; there the ratios `M(j+1)/M(j)`
/// come from the backward continued fraction instead.
pub(crate) fn integer_moments(max: u32, lambda: f64, gamma: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let m0 = 0.5 * (PI / gamma).sqrt() * erfcx(lambda / (2.0 * gamma.sqrt()));
    out.push(m0);
    if max == 0 {
        return out;
    }
    if lambda >= gamma.sqrt() {
        let rho = converged_ratios(0.0, max as usize, lambda, gamma);
        for r in rho.iter().take(max as usize) {
            let last = *out.last().expect("non-empty");
            out.push(last * r);
        }
        return out;
    }
    out.push((1.0 - lambda * m0) / (2.0 * gamma));
    for s in 0..max.saturating_sub(1) as usize {
        let next = (f64::from(s as u32 + 1) * out[s] - lambda * out[s + 1]) / (2.0 * gamma);
        out.push(next);
    }
    out
}

/// `ρ_j = M(s+j+1)/M(s+j)` for `j < depth`, run backwards from the large-order
/// root of `2γρ² + λρ = s+j+1`.
fn backward_ratios(s: f64, depth: usize, lambda: f64, gamma: f64) -> Vec<f64> {
    let order = |j: usize| s + j as f64 + 1.0;
    let mut rho = vec![0.0; depth];
    let mut next = (-lambda + (lambda * lambda + 8.0 * gamma * order(depth)).sqrt()) / (4.0 * gamma);
    for j in (0..depth).rev() {
        next = order(j) / (lambda + 2.0 * gamma * next);
        rho[j] = next;
    }
    rho
}

/// Backward ratios with the depth doubled until the first `count` are stable.
fn converged_ratios(s: f64, count: usize, lambda: f64, gamma: f64) -> Vec<f64> {
    let mut depth = 2 * count + 64;
    let mut prev = backward_ratios(s, depth, lambda, gamma);
    loop {
        depth *= 2;
        let rho = backward_ratios(s, depth, lambda, gamma);
        let stable = rho.iter().zip(&prev).take(count).all(|(a, b)| (a - b).abs() <= 1e-16 * a);
        if stable || depth > 1 << 22 {
            return rho;
        }
        prev = rho;
    }
}

fn integer_moment(s: u32, lambda: f64, gamma: f64) -> f64 {
    integer_moments(s, lambda, gamma)[s as usize]
}

/// `Σ_k (-λ)^k / k! · Γ((s+k+1)/2) / (2 γ^{(s+k+1)/2})`, or `None` when the
/// alternating terms cancel by more than three digits.
fn alternating_moment(s: f64, lambda: f64, gamma: f64) -> Option<f64> {
    let mut sum = 0.0;
    let ln_lambda = lambda.ln();
    let ln_gamma = gamma.ln();
    let mut ln_fact = 0.0;
    let mut largest = 0.0_f64;
    for k in 0..400u32 {
        if k > 0 {
            ln_fact += f64::from(k).ln();
        }
        let half = 0.5 * (s + f64::from(k) + 1.0);
        let ln_power = if k == 0 { 0.0 } else { f64::from(k) * ln_lambda };
        let magnitude = 0.5 * (ln_power - ln_fact + libm::lgamma(half) - half * ln_gamma).exp();
        sum += if k % 2 == 0 { magnitude } else { -magnitude };
        largest = largest.max(magnitude);
        if lambda == 0.0 || (k > 4 && magnitude < 1e-18 * largest) {
            return (largest <= 1e3 * sum.abs()).then_some(sum);
        }
    }
    None
}

/// `M(s)` for any `s > -1` without cancellation.
///
/// The ratios `ρ_j = M(s+j+1)/M(s+j)` satisfy `ρ_j = (s+j+1)/(λ + 2γ ρ_{j+1})`. Expanding `e^{λr}`
/// under the integral gives `Σ_k λ^k/k! M(s+k) = ½ γ^{-(s+1)/2} Γ((s+1)/2)`, a sum
/// of positive terms that fixes the normalisation.
fn series_moment(s: f64, lambda: f64, gamma: f64) -> f64 {
    if let Some(m) = alternating_moment(s, lambda, gamma) {
        return m;
    }
    let half = 0.5 * (s + 1.0);
    let ln_gauss = (0.5_f64).ln() + libm::lgamma(half) - half * gamma.ln();
    let peak = lambda * lambda / (2.0 * gamma);
    // The ratio recursion forgets its start like exp(-λ √(2 j / γ)).
    let mut depth = (2.0 * peak + 10.0 * peak.sqrt() + 60.0).max(1600.0 / peak).ceil() as usize;
    loop {
        let rho = backward_ratios(s, depth, lambda, gamma);
        // Σ_k w_k with w_0 = 1, w_k = w_{k-1} λ ρ_{k-1} / k, kept in range by rescaling.
        let mut w = 1.0_f64;
        let mut sum = 1.0_f64;
        let mut ln_scale = 0.0_f64;
        let mut last = 1.0_f64;
        for (k, r) in rho.iter().enumerate() {
            w *= lambda * r / (k as f64 + 1.0);
            sum += w;
            last = w / sum;
            if sum > 1e250 {
                sum *= 1e-250;
                w *= 1e-250;
                ln_scale += 250.0 * std::f64::consts::LN_10;
            }
        }
        if last < 1e-18 || depth > 1 << 22 {
            return (ln_gauss - sum.ln() - ln_scale).exp();
        }
        depth *= 2;
    }
}

/// Half-line Gaussian moment `∫₀^∞ r^s e^{-√b r²} dr = ½ b^{-(s+1)/4} Γ((s+1)/2)`.
pub fn half_gaussian_moment(s: f64, b: f64) -> f64 {
    0.5 * b.powf(-(s + 1.0) / 4.0) * libm::tgamma((s + 1.0) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_gaussian_fixtures() {
        let m0 = gaussian_linear_moment(0.0, 0.0, 1.0).unwrap();
        assert!((m0 - PI.sqrt() / 2.0).abs() < 1e-15);
        let m2 = gaussian_linear_moment(2.0, 0.0, 1.0).unwrap();
        assert!((m2 - PI.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn erfcx_reference_values() {
        // e^{x²} erfc(x) at 30 digits.
        for (x, expected) in [(5.0, 0.110_704_637_733_068_63), (4.999, 0.110_725_974_564_275_40), (12.0, 0.046_854_221_014_893_763)] {
            assert!((erfcx(x) - expected).abs() < 2e-15 * expected, "{x}: {}", erfcx(x));
        }
        assert!((erfcx(0.0) - 1.0).abs() < 1e-16);
    }

    #[test]
    fn integer_and_series_paths_agree() {
        for (a, b) in [(0.0, 1.0), (0.5, 2.0), (2.0, 1.0)] {
            let lambda = a / f64::sqrt(b);
            let gamma = f64::sqrt(b);
            for s in 0..5 {
                let exact = integer_moment(s, lambda, gamma);
                let series = series_moment(f64::from(s), lambda, gamma);
                assert!((exact - series).abs() < 1e-12 * exact, "{a} {b} {s}");
            }
        }
    }

    #[test]
    fn strong_linear_decay_non_integer_order() {
        // Laplace regime: M(s) ≈ Γ(s+1)/λ^{s+1} (1 - γ(s+1)(s+2)/λ² + ...).
        let (s, lambda, gamma) = (5.5, 40.0, 0.5);
        let m = series_moment(s, lambda, gamma);
        let lead = libm::tgamma(s + 1.0) / lambda.powf(s + 1.0);
        let corr = 1.0 - gamma * (s + 1.0) * (s + 2.0) / (lambda * lambda);
        assert!((m / (lead * corr) - 1.0).abs() < 5e-4, "{m} vs {}", lead * corr);
    }

    #[test]
    fn strong_linear_decay_integer_orders() {
        let (lambda, gamma) = (40.0, 0.5);
        let m = integer_moments(6, lambda, gamma);
        for (s, v) in m.iter().enumerate() {
            let sf = s as f64;
            let lead = libm::tgamma(sf + 1.0) / lambda.powf(sf + 1.0);
            let corr = 1.0 - gamma * (sf + 1.0) * (sf + 2.0) / (lambda * lambda);
            assert!((v / (lead * corr) - 1.0).abs() < 5e-4, "s = {s}: {v} vs {}", lead * corr);
        }
        let series = series_moment(5.0, lambda, gamma);
        assert!((m[5] - series).abs() < 1e-12 * series);
    }

    #[test]
    fn a_zero_matches_half_gaussian() {
        for s in [0.0, 0.5, 1.0, 2.5, 4.0] {
            let m = gaussian_linear_moment(s, 0.0, 3.0).unwrap();
            assert!((m - half_gaussian_moment(s, 3.0)).abs() < 1e-13 * m);
        }
    }

    #[test]
    fn precondition_violations() {
        assert!(gaussian_linear_moment(-1.0, 1.0, 1.0).is_err());
        assert!(gaussian_linear_moment(0.0, -1.0, 1.0).is_err());
        assert!(gaussian_linear_moment(0.0, 1.0, 0.0).is_err());
    }
}
