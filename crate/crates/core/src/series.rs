//! Power-series solution of the commutative radial equation.
//!
//! Substituting `R = r^m exp(-(a r + b r²)/(2√b)) Σ a_p r^p` into
//! `R'' + R'/r + [E - m²/r² - V(r)] R = 0` and collecting powers of `r` gives the
//! three-term recurrence
//!
//! ```text
//! (p+1)(p+1+2m) a_{p+1} = [κ(2p+2m+1) + c] a_p + [2√b(p-1) - ε] a_{p-1}
//! ```
//!
//! with `κ = a/(2√b)` and `ε = E + κ² - 2√b(m+1)`. The series stops at order `n`
//! only if `a_{n+1} = a_{n+2} = 0`, which fixes `ε = 2√b n` and leaves a degree
//! `n+1` polynomial condition on `c`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PotentialParams;
use crate::numerics::{integer_moments, integrate_semi_infinite, Integral, Polynomial, QuadratureSpec};

/// Imaginary-part tolerance used to accept companion-matrix roots as real.
pub const ROOT_IMAG_TOL: f64 = 1e-10;

/// Residual below which a solution counts as terminated.
pub const CONSTRAINT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceRelation {
    params: PotentialParams,
    m: u32,
}

pub fn build_recurrence(params: PotentialParams, m: u32) -> Result<RecurrenceRelation> {
    let params = params.validated()?;
    Ok(RecurrenceRelation { params, m })
}

impl RecurrenceRelation {
    /// Number of coefficients coupled by one relation.
    pub fn order(&self) -> usize {
        3
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn params(&self) -> PotentialParams {
        self.params
    }

    fn kappa(&self) -> f64 {
        self.params.linear_decay()
    }

    /// `ε = E + κ² - 2√b(m+1)`.
    pub fn reduced_energy(&self, energy: f64) -> f64 {
        let k = self.kappa();
        energy + k * k - 2.0 * self.params.sqrt_b() * (f64::from(self.m) + 1.0)
    }

    /// Coefficient of `a_{p+1}`.
    pub fn lead(&self, p: u32) -> f64 {
        f64::from(p + 1) * f64::from(p + 1 + 2 * self.m)
    }

    /// Coefficient of `a_p`.
    pub fn diagonal(&self, p: u32, c: f64) -> f64 {
        self.kappa() * f64::from(2 * p + 2 * self.m + 1) + c
    }

    /// Coefficient of `a_{p-1}`.
    pub fn lower(&self, p: u32, energy: f64) -> f64 {
        2.0 * self.params.sqrt_b() * (f64::from(p) - 1.0) - self.reduced_energy(energy)
    }

    /// `a_0 = 1, a_1, …` generated forward from the recurrence.
    pub fn coefficients(&self, energy: f64, c: f64, count: usize) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::with_capacity(count);
        for p in 0..count {
            if p == 0 {
                out.push(1.0);
                continue;
            }
            let q = (p - 1) as u32;
            let prev = out[p - 1];
            let prev2 = if p >= 2 { out[p - 2] } else { 0.0 };
            out.push((self.diagonal(q, c) * prev + self.lower(q, energy) * prev2) / self.lead(q));
        }
        out
    }

    /// Residual of the relation at order `p`; coefficients beyond the list count as zero.
    pub fn residual(&self, coeffs: &[f64], energy: f64, c: f64, p: u32) -> f64 {
        let get = |k: i64| -> f64 {
            if k < 0 {
                0.0
            } else {
                coeffs.get(k as usize).copied().unwrap_or(0.0)
            }
        };
        let p_i = i64::from(p);
        self.lead(p) * get(p_i + 1) - self.diagonal(p, c) * get(p_i) - self.lower(p, energy) * get(p_i - 1)
    }

    /// Energy at which a series of order `n` can terminate: `2√b(n+m+1) - a²/(4b)`.
    pub fn termination_energy(&self, n: u32) -> f64 {
        let k = self.kappa();
        2.0 * self.params.sqrt_b() * f64::from(n + self.m + 1) - k * k
    }

    /// `lead(n) · a_{n+1}` as a polynomial in `c`, evaluated at the termination energy.
    pub fn termination_polynomial(&self, n: u32) -> Polynomial {
        let energy = self.termination_energy(n);
        let mut prev2 = Polynomial(vec![0.0]);
        let mut prev = Polynomial(vec![1.0]);
        for p in 0..n {
            let next = prev
                .mul_linear(self.kappa() * f64::from(2 * p + 2 * self.m + 1))
                .add(&prev2.scale(self.lower(p, energy)))
                .scale(1.0 / self.lead(p));
            prev2 = prev;
            prev = next;
        }
        prev.mul_linear(self.kappa() * f64::from(2 * n + 2 * self.m + 1))
            .add(&prev2.scale(self.lower(n, energy)))
    }
}

/// Admissible Coulomb coefficients for a series terminating at order `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminationConstraint {
    pub n: u32,
    pub m: u32,
    pub energy: f64,
    pub c_values: Vec<f64>,
    relation: RecurrenceRelation,
}

impl TerminationConstraint {
    /// Leftover `max(|a_{n+1}|, |a_{n+2}|) / max_{p≤n} |a_p|` for arbitrary `(E, c)`.
    pub fn residual(&self, energy: f64, c: f64) -> f64 {
        let n = self.n as usize;
        let coeffs = self.relation.coefficients(energy, c, n + 3);
        let scale = coeffs[..=n].iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        coeffs[n + 1].abs().max(coeffs[n + 2].abs()) / scale
    }

    pub fn relation(&self) -> &RecurrenceRelation {
        &self.relation
    }
}

pub fn termination_constraints(a: f64, b: f64, n: u32, m: u32) -> Result<TerminationConstraint> {
    // c does not enter the validity conditions; any finite placeholder works.
    let relation = build_recurrence(PotentialParams::new(a, b, 0.0), m)?;
    let c_values = relation.termination_polynomial(n).real_roots(ROOT_IMAG_TOL);
    Ok(TerminationConstraint {
        n,
        m,
        energy: relation.termination_energy(n),
        c_values,
        relation,
    })
}

/// Terminated series solution, normalised to `∫ R² r dr = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSolution {
    pub params: PotentialParams,
    pub n: u32,
    pub m: u32,
    /// Leading small-r exponent of the polar radial function (equals `m`).
    pub delta: f64,
    /// Ansatz exponent `α r + β r²/2` with `β = -√b` and `2αβ = a`.
    pub alpha: f64,
    pub beta: f64,
    pub coeffs: Vec<f64>,
    /// Termination-derived eigenvalue.
    pub energy: f64,
    /// The oscillator-type formula `2√b(1+m+n)`, kept for comparison.
    pub paper_energy: f64,
    pub constraint_residual: f64,
    /// Closest admissible Coulomb coefficient.
    pub termination_c: f64,
    /// Positive zeros of the polynomial factor.
    pub nodes: u32,
}

pub fn solve_quasi_exact(params: PotentialParams, n: u32, m: u32) -> Result<SeriesSolution> {
    let params = params.validated()?;
    let constraint = termination_constraints(params.a, params.b, n, m)?;
    let termination_c = constraint
        .c_values
        .iter()
        .copied()
        .min_by(|x, y| (x - params.c).abs().total_cmp(&(y - params.c).abs()))
        .ok_or(Error::NoTerminationRoot { n, m })?;
    let energy = constraint.energy;
    let mut coeffs = constraint.relation.coefficients(energy, params.c, n as usize + 1);
    let constraint_residual = constraint.residual(energy, params.c);

    let sqrt_b = params.sqrt_b();
    let mut solution = SeriesSolution {
        params,
        n,
        m,
        delta: f64::from(m),
        alpha: -params.a / (2.0 * sqrt_b),
        beta: -sqrt_b,
        coeffs: coeffs.clone(),
        energy,
        paper_energy: 2.0 * sqrt_b * f64::from(1 + m + n),
        constraint_residual,
        termination_c,
        nodes: 0,
    };
    let norm = solution.moment(1.0, &normalization_spec())?;
    assert!(norm.value.is_finite() && norm.value > 0.0, "normalisation integral must be finite for b > 0");
    let scale = norm.value.sqrt().recip();
    coeffs.iter_mut().for_each(|x| *x *= scale);
    solution.coeffs = coeffs;
    solution.nodes = Polynomial(solution.coeffs.clone())
        .real_roots(ROOT_IMAG_TOL)
        .into_iter()
        .filter(|&x| x > 0.0)
        .count() as u32;
    Ok(solution)
}

fn normalization_spec() -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-13,
        ..QuadratureSpec::default()
    }
}

pub fn evaluate_radial(solution: &SeriesSolution, r: f64) -> f64 {
    solution.radial(r)
}

impl SeriesSolution {
    /// Indicial exponent of the rescaled function `(z z̄)^{1/4} R`.
    pub fn complex_delta(&self) -> f64 {
        self.delta + 0.5
    }

    pub fn is_terminated(&self) -> bool {
        self.constraint_residual <= CONSTRAINT_TOL
    }

    pub fn polynomial(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
    }

    /// `r^m exp(α r + β r²/2) Σ a_p r^p`.
    pub fn radial(&self, r: f64) -> f64 {
        let envelope = (self.alpha * r + 0.5 * self.beta * r * r).exp();
        let power = if self.m == 0 { 1.0 } else { r.powi(self.m as i32) };
        power * envelope * self.polynomial(r)
    }

    /// `√r R(r)`, the radial factor in complex coordinates.
    pub fn radial_rescaled(&self, r: f64) -> f64 {
        r.sqrt() * self.radial(r)
    }

    /// Cauchy square `C_p = Σ_k a_k a_{p-k}` of the coefficients.
    pub fn square_coeffs(&self) -> Vec<f64> {
        cauchy_square(&self.coeffs)
    }

    /// `∫₀^∞ R² r^k dr` by adaptive quadrature.
    pub fn moment(&self, k: f64, spec: &QuadratureSpec) -> Result<Integral> {
        let exponent = 2.0 * f64::from(self.m) + k;
        if exponent <= -1.0 {
            return Err(Error::DivergentMoment {
                exponent,
                context: format!("∫ R² r^{k} dr with m = {}", self.m),
            });
        }
        integrate_semi_infinite(
            |r| {
                let v = self.radial(r);
                v * v * r.powf(k)
            },
            spec,
        )
    }

    /// `∫₀^∞ R² r^k dr` for integer `k` from completed-square Gaussian moments.
    pub fn moment_closed_form(&self, k: i32) -> Result<f64> {
        let base = 2 * self.m as i32 + k;
        if base <= -1 {
            return Err(Error::DivergentMoment {
                exponent: f64::from(base),
                context: format!("∫ R² r^{k} dr with m = {}", self.m),
            });
        }
        let squares = self.square_coeffs();
        let lambda = self.params.a / self.params.sqrt_b();
        let gamma = self.params.sqrt_b();
        let moments = integer_moments(base as u32 + squares.len() as u32, lambda, gamma);
        Ok(squares
            .iter()
            .enumerate()
            .map(|(q, c)| c * moments[base as usize + q])
            .sum())
    }
}

pub fn cauchy_square(coeffs: &[f64]) -> Vec<f64> {
    if coeffs.is_empty() {
        return Vec::new();
    }
    let len = 2 * coeffs.len() - 1;
    (0..len)
        .map(|p| {
            (0..=p)
                .filter(|&k| k < coeffs.len() && p - k < coeffs.len())
                .map(|k| coeffs[k] * coeffs[p - k])
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64, c: f64) -> PotentialParams {
        PotentialParams::new(a, b, c)
    }

    #[test]
    fn a_zero_decouples_parity() {
        let rel = build_recurrence(p(0.0, 1.0, 0.0), 2).unwrap();
        let coeffs = rel.coefficients(7.3, 0.0, 6);
        assert_eq!(coeffs[1], 0.0);
        assert_eq!(coeffs[3], 0.0);
        assert_eq!(coeffs[5], 0.0);
    }

    #[test]
    fn ground_state_coulomb_constraint() {
        let tc = termination_constraints(2.0, 1.0, 0, 0).unwrap();
        assert_eq!(tc.c_values.len(), 1);
        assert!((tc.c_values[0] + 1.0).abs() < 1e-14);
        let tc = termination_constraints(2.0, 1.0, 0, 1).unwrap();
        assert!((tc.c_values[0] + 3.0).abs() < 1e-14);
        let tc = termination_constraints(0.0, 1.0, 0, 0).unwrap();
        assert!(tc.c_values[0].abs() < 1e-14);
    }

    #[test]
    fn first_excited_roots() {
        // n = 1, m = 0, a = 2, b = 1: c² + 4c + 1 = 0.
        let tc = termination_constraints(2.0, 1.0, 1, 0).unwrap();
        let s3 = 3.0_f64.sqrt();
        assert_eq!(tc.c_values.len(), 2);
        assert!((tc.c_values[0] - (-2.0 - s3)).abs() < 1e-13);
        assert!((tc.c_values[1] - (-2.0 + s3)).abs() < 1e-13);
        assert!((tc.energy - 3.0).abs() < 1e-15);
    }

    #[test]
    fn root_count_bounded() {
        for n in 0..5 {
            let tc = termination_constraints(1.3, 0.7, n, 2).unwrap();
            assert!(tc.c_values.len() <= n as usize + 1);
            for &c in &tc.c_values {
                assert!(tc.residual(tc.energy, c) < 1e-10, "n={n} c={c}");
            }
        }
    }

    #[test]
    fn oscillator_ground_state() {
        let s = solve_quasi_exact(p(0.0, 1.0, 0.0), 0, 0).unwrap();
        assert_eq!(s.energy, 2.0);
        let ratio = s.radial(1.0) / s.radial(0.0);
        assert!((ratio - (-0.5_f64).exp()).abs() < 1e-15);
        assert!(s.is_terminated());
    }

    #[test]
    fn linear_coulomb_ground_state_energy() {
        let s = solve_quasi_exact(p(2.0, 1.0, -1.0), 0, 0).unwrap();
        assert!((s.energy - 1.0).abs() < 1e-15);
        assert_eq!(s.paper_energy, 2.0);
        assert!(s.constraint_residual < 1e-14);
    }

    #[test]
    fn harmonic_m1() {
        let s = solve_quasi_exact(p(0.0, 4.0, 0.0), 0, 1).unwrap();
        assert_eq!(s.energy, 8.0);
        assert_eq!(s.radial(0.0), 0.0);
    }

    #[test]
    fn ansatz_constants() {
        let params = p(2.5, 3.0, 0.0);
        let s = solve_quasi_exact(params, 0, 0).unwrap();
        assert!((s.beta * s.beta - params.b).abs() < 4.0 * f64::EPSILON * params.b);
        assert!((2.0 * s.alpha * s.beta - params.a).abs() < 4.0 * f64::EPSILON * params.a);
        assert_eq!(s.complex_delta(), 0.5);
    }

    #[test]
    fn mismatched_coulomb_records_residual() {
        let s = solve_quasi_exact(p(2.0, 1.0, -2.0), 0, 0).unwrap();
        assert!(s.constraint_residual > 0.1);
        assert!(!s.is_terminated());
        assert_eq!(s.termination_c, -1.0);
    }

    #[test]
    fn normalized() {
        let s = solve_quasi_exact(p(1.0, 2.0, -1.5 / 2.0_f64.sqrt()), 0, 1).unwrap();
        let n = s.moment(1.0, &QuadratureSpec::default()).unwrap();
        assert!((n.value - 1.0).abs() < 1e-10);
        assert!((s.moment_closed_form(1).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn divergent_moment_rejected() {
        let s = solve_quasi_exact(p(2.0, 1.0, -1.0), 0, 0).unwrap();
        assert!(matches!(
            s.moment(-2.0, &QuadratureSpec::default()),
            Err(Error::DivergentMoment { .. })
        ));
        assert!(s.moment_closed_form(-1).is_err());
    }

    #[test]
    fn cauchy_square_fixture() {
        assert_eq!(cauchy_square(&[1.0, 2.0]), vec![1.0, 4.0, 4.0]);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(solve_quasi_exact(p(1.0, 0.0, 0.0), 0, 0).is_err());
        assert!(build_recurrence(p(-1.0, 1.0, 0.0), 0).is_err());
    }
}
