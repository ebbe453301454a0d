//! θ-deformed potentials and first-order noncommutative energy levels.
//!
//! To first order, `r̂ = r - θ L_z / (2r)`. Every variant reduces to
//!
//! ```text
//! V(r̂) = V(r) + θ L (term_L + term_Lr / r + term_Lr3 / r³)
//! ```
//!
//! with `L = m` in the canonical plane and `L = m - 2 s_z` in complex coordinates.
//! The constant part is absorbed exactly into the zeroth-order energy; the
//! `1/r` and `1/r³` parts are treated as a first-order perturbation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    ATermMode, BranchSign, ClosedFormMode, EnergySource, NCConfig, PotentialParams, QuantumState, SpinBranch,
    Variant,
};
use crate::numerics::{upper_incomplete_gamma_int, QuadratureSpec};
use crate::series::{solve_quasi_exact, SeriesSolution};

/// First-order substitution `r̂ = r - θ l_z / (2r)`; `O(θ²)` is dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusDeformation {
    pub theta: f64,
    pub l_z: f64,
}

impl RadiusDeformation {
    pub fn apply(&self, r: f64) -> f64 {
        if self.is_identity() {
            r
        } else {
            r - self.theta * self.l_z / (2.0 * r)
        }
    }

    pub fn is_identity(&self) -> bool {
        self.theta == 0.0 || self.l_z == 0.0
    }
}

pub fn deform_radius(theta: f64, m: u32) -> Result<RadiusDeformation> {
    NCConfig::canonical(theta).validate()?;
    Ok(RadiusDeformation {
        theta,
        l_z: f64::from(m),
    })
}

/// Eigenvalue of the operator multiplying θ: `m`, or `m ∓ 2 s_z` per branch.
pub fn effective_lz(m: u32, variant: Variant, branch: Option<SpinBranch>, sign: BranchSign) -> Result<f64> {
    QuantumState { n: 0, m, branch }.check_variant(variant)?;
    let m = f64::from(m);
    Ok(match (variant, branch) {
        (Variant::Complex, Some(b)) => match sign {
            BranchSign::MinusPlus => m - 2.0 * b.s_z(),
            BranchSign::PlusMinus => m + 2.0 * b.s_z(),
        },
        _ => m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformedPotential {
    pub base: PotentialParams,
    pub variant: Variant,
    pub branch: Option<SpinBranch>,
    pub theta: f64,
    /// `L_z` eigenvalue, or `L_z - 2 s_z` for the complex variant.
    pub l_eff: f64,
    /// Coefficient of `θ L` (constant).
    pub term_l: f64,
    /// Coefficient of `θ L / r`.
    pub term_lr: f64,
    /// Coefficient of `θ L / r³`.
    pub term_lr3: f64,
}

impl DeformedPotential {
    pub fn nc_part(&self, r: f64) -> f64 {
        if self.theta == 0.0 || self.l_eff == 0.0 {
            return 0.0;
        }
        self.theta * self.l_eff * (self.term_l + self.term_lr / r + self.term_lr3 / (r * r * r))
    }

    pub fn evaluate(&self, r: f64) -> f64 {
        self.base.potential(r) + self.nc_part(r)
    }
}

pub fn deform_potential(
    params: PotentialParams,
    nc: &NCConfig,
    m: u32,
    branch: Option<SpinBranch>,
) -> Result<DeformedPotential> {
    let params = params.validated()?;
    nc.validate()?;
    let l_eff = effective_lz(m, nc.variant, branch, nc.branch_sign)?;
    let (term_l, term_lr) = match nc.a_term_mode {
        ATermMode::PaperLiteral => (-(params.a / 2.0 + params.b), 0.0),
        ATermMode::ExpandedExact => (-params.b, -params.a / 2.0),
    };
    Ok(DeformedPotential {
        base: params,
        variant: nc.variant,
        branch,
        theta: nc.theta,
        l_eff,
        term_l,
        term_lr,
        term_lr3: params.c / 2.0,
    })
}

/// Commutative energy of the quasi-exact state from the selected source.
pub fn commutative_energy(params: &PotentialParams, n: u32, m: u32, source: EnergySource) -> f64 {
    let osc = 2.0 * params.sqrt_b() * f64::from(1 + m + n);
    match source {
        EnergySource::PaperFormula => osc,
        EnergySource::Termination => {
            let k = params.linear_decay();
            osc - k * k
        }
    }
}

/// Commutative energy plus the θ terms that do not depend on `r`.
pub fn zeroth_energy(state: &QuantumState, params: PotentialParams, nc: &NCConfig) -> Result<f64> {
    let dp = deform_potential(params, nc, state.m, state.branch)?;
    let e_comm = commutative_energy(&params, state.n, state.m, nc.energy_source);
    if nc.theta == 0.0 || dp.l_eff == 0.0 {
        return Ok(e_comm);
    }
    Ok(e_comm + nc.theta * dp.l_eff * dp.term_l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftMethod {
    Quadrature,
    PaperClosedForm,
    CompletedSquareClosedForm,
}

impl ShiftMethod {
    pub fn for_mode(mode: ClosedFormMode) -> Self {
        match mode {
            ClosedFormMode::QuadratureOnly => ShiftMethod::Quadrature,
            ClosedFormMode::PaperLiteral => ShiftMethod::PaperClosedForm,
            ClosedFormMode::CompletedSquare => ShiftMethod::CompletedSquareClosedForm,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ShiftMethod::Quadrature => "quadrature",
            ShiftMethod::PaperClosedForm => "paper-closed-form",
            ShiftMethod::CompletedSquareClosedForm => "completed-square",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shift {
    pub value: f64,
    pub method: ShiftMethod,
}

fn shift_quadrature_spec() -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-13,
        ..QuadratureSpec::default()
    }
}

/// `∫ R² r^k dr` through the route selected by `mode` (closed forms fall back to
/// the Gaussian moments only where the mode has no expression of its own).
fn radial_integral(solution: &SeriesSolution, k: i32, mode: ClosedFormMode) -> Result<f64> {
    match mode {
        ClosedFormMode::CompletedSquare => solution.moment_closed_form(k),
        _ => Ok(solution.moment(f64::from(k), &shift_quadrature_spec())?.value),
    }
}

/// First-order shift `⟨θ L (term_Lr / r + term_Lr3 / r³)⟩`.
///
/// The radial factor comes from `solution`; `state` supplies `m` and the branch.
/// The `1/r³` expectation is `∫ R² r^{-2} dr`, which diverges for `m = 0`.
pub fn first_order_shift(solution: &SeriesSolution, state: &QuantumState, nc: &NCConfig) -> Result<Shift> {
    let dp = deform_potential(solution.params, nc, state.m, state.branch)?;
    let method = ShiftMethod::for_mode(nc.closed_form_mode);
    if nc.theta == 0.0 || dp.l_eff == 0.0 {
        return Ok(Shift { value: 0.0, method });
    }
    let weight = nc.angular_measure.weight();
    let mut per_theta_l = 0.0;
    if dp.term_lr != 0.0 {
        per_theta_l += weight * dp.term_lr * radial_integral(solution, 0, nc.closed_form_mode)?;
    }
    let mut literal_factor = None;
    if dp.term_lr3 != 0.0 {
        match nc.closed_form_mode {
            ClosedFormMode::PaperLiteral => {
                let lit = literal_forms(solution, solution.complex_delta())?;
                match (nc.variant, solution.n) {
                    (Variant::Canonical, _) => {
                        let integral = lit.inverse_square.ok_or_else(|| undefined_literal("for ∫R²r⁻²", solution))?;
                        per_theta_l += weight * dp.term_lr3 * integral;
                    }
                    (Variant::Complex, 0) => {
                        literal_factor = Some(lit.c0.ok_or_else(|| undefined_literal("for C₀", solution))?);
                    }
                    (Variant::Complex, _) => {
                        let a_n = lit.excited.ok_or_else(|| undefined_literal("for A_n", solution))?;
                        literal_factor = Some(-2.0 * a_n);
                    }
                }
            }
            mode => {
                per_theta_l += weight * dp.term_lr3 * radial_integral(solution, -2, mode)?;
            }
        }
    }
    let value = nc.theta * dp.l_eff * (per_theta_l + literal_factor.unwrap_or(0.0));
    Ok(Shift { value, method })
}

fn undefined_literal(what: &str, solution: &SeriesSolution) -> Error {
    Error::InvalidArgument(format!(
        "literal closed form {what} undefined for n = {}, m = {}",
        solution.n, solution.m
    ))
}

struct LiteralForms {
    inverse_square: Option<f64>,
    c0: Option<f64>,
    excited: Option<f64>,
}

/// The literal incomplete-gamma closed forms.
fn literal_forms(solution: &SeriesSolution, delta: f64) -> Result<LiteralForms> {
    let two_delta = 2.0 * delta;
    if two_delta.fract() != 0.0 || !two_delta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "closed forms need integer 2δ (got δ = {delta})"
        )));
    }
    let PotentialParams { a, b, .. } = solution.params;
    let sqrt_b = b.sqrt();
    let prefactor = ((a * a + 2.0 * b * a) / (4.0 * b * sqrt_b)).exp();
    let x = -a / (2.0 * sqrt_b);
    let squares = solution.square_coeffs();
    let n = solution.n;
    let gamma = |order: f64| upper_incomplete_gamma_int(order, x).ok();

    let inverse_square = gamma(f64::from(n) + two_delta).map(|g| {
        let sum: f64 = squares.iter().take(n as usize + 1).sum();
        prefactor * sum * b.powf(-(f64::from(n) + two_delta) / 2.0) * g
    });
    let c0 = if n == 0 {
        gamma(two_delta).map(|g| prefactor * solution.coeffs[0].powi(2) * b.powf(-delta) * g)
    } else {
        None
    };
    let excited = (0..=n)
        .map(|k| {
            gamma(f64::from(k) + two_delta)
                .map(|g| squares[k as usize] * b.powf(-(f64::from(k) + two_delta) / 2.0) * g)
        })
        .sum::<Option<f64>>()
        .map(|s| prefactor * s);
    Ok(LiteralForms { inverse_square, c0, excited })
}

/// Literal, completed-square and quadrature values of the `1/r³` radial integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormComparison {
    pub params: PotentialParams,
    pub n: u32,
    pub m: u32,
    pub delta: f64,
    /// `∫ R² r^{-2} dr` as the canonical-variant closed form states it.
    pub inverse_square_literal: Option<f64>,
    /// Ground-state coefficient `C₀` as the complex-variant closed form states it.
    pub c0_literal: Option<f64>,
    /// Excited-state coefficient `A_n`.
    pub excited_literal: Option<f64>,
    /// `∫ R² r^{-2} dr` from completed-square Gaussian moments.
    pub completed_square: Option<f64>,
    /// `∫ R² r^{-2} dr` by adaptive quadrature (reference).
    pub quadrature: Option<f64>,
    pub notes: Vec<String>,
}

impl ClosedFormComparison {
    /// Reference `C₀ = π c ∫ R² r^{-2} dr`.
    pub fn c0_reference(&self) -> Option<f64> {
        self.quadrature.map(|i| PI * self.params.c * i)
    }

    pub fn inverse_square_discrepancy(&self) -> Option<f64> {
        relative(self.inverse_square_literal?, self.quadrature?)
    }

    pub fn c0_discrepancy(&self) -> Option<f64> {
        relative(self.c0_literal?, self.c0_reference()?)
    }

    pub fn completed_square_discrepancy(&self) -> Option<f64> {
        relative(self.completed_square?, self.quadrature?)
    }
}

fn relative(value: f64, reference: f64) -> Option<f64> {
    let scale = reference.abs();
    (scale > 0.0).then(|| (value - reference).abs() / scale)
}

/// Evaluates the literal closed forms at indicial exponent `delta` next to the
/// completed-square and quadrature values of the same integral.
pub fn paper_closed_form_c(solution: &SeriesSolution, delta: f64) -> Result<ClosedFormComparison> {
    let lit = literal_forms(solution, delta)?;
    let mut notes = Vec::new();
    if lit.inverse_square.is_none() {
        notes.push(format!("Γ(n + 2δ, ·) undefined for n + 2δ = {}", f64::from(solution.n) + 2.0 * delta));
    }
    let completed_square = match solution.moment_closed_form(-2) {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("completed square: {e}"));
            None
        }
    };
    let quadrature = match solution.moment(-2.0, &shift_quadrature_spec()) {
        Ok(v) => Some(v.value),
        Err(e) => {
            notes.push(format!("quadrature: {e}"));
            None
        }
    };
    Ok(ClosedFormComparison {
        params: solution.params,
        n: solution.n,
        m: solution.m,
        delta,
        inverse_square_literal: lit.inverse_square,
        c0_literal: lit.c0,
        excited_literal: lit.excited,
        completed_square,
        quadrature,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NCEnergyLevel {
    pub state: QuantumState,
    pub commutative: f64,
    pub zeroth: f64,
    pub first_order_shift: f64,
    pub total: f64,
    pub method: ShiftMethod,
}

/// `Ê⁺ - Ê⁻` for one `(n, m)` pair of the complex variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchSplitting {
    pub n: u32,
    pub m: u32,
    pub splitting: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSet {
    pub levels: Vec<NCEnergyLevel>,
    pub splittings: Vec<BranchSplitting>,
}

/// Zeroth order plus first-order shift for one state, using a given radial solution.
pub fn level_with_solution(solution: &SeriesSolution, state: &QuantumState, nc: &NCConfig) -> Result<NCEnergyLevel> {
    let zeroth = zeroth_energy(state, solution.params, nc)?;
    let shift = first_order_shift(solution, state, nc)?;
    Ok(NCEnergyLevel {
        state: *state,
        commutative: commutative_energy(&solution.params, state.n, state.m, nc.energy_source),
        zeroth,
        first_order_shift: shift.value,
        total: zeroth + shift.value,
        method: shift.method,
    })
}

/// Levels for every state, each with its own quasi-exact radial solution.
///
/// For the complex variant a state without a branch expands into both branches.
pub fn total_levels(params: PotentialParams, nc: &NCConfig, states: &[QuantumState]) -> Result<LevelSet> {
    nc.validate()?;
    let mut expanded = Vec::new();
    for s in states {
        match (nc.variant, s.branch) {
            (Variant::Complex, None) => {
                expanded.extend(SpinBranch::BOTH.iter().map(|&b| QuantumState::complex(s.n, s.m, b)));
            }
            _ => {
                s.check_variant(nc.variant)?;
                expanded.push(*s);
            }
        }
    }
    let mut levels = Vec::with_capacity(expanded.len());
    for state in &expanded {
        let solution = solve_quasi_exact(params, state.n, state.m)?;
        levels.push(level_with_solution(&solution, state, nc)?);
    }
    let splittings = branch_splittings(&levels);
    Ok(LevelSet { levels, splittings })
}

pub fn branch_splittings(levels: &[NCEnergyLevel]) -> Vec<BranchSplitting> {
    let mut out = Vec::new();
    for up in levels.iter().filter(|l| l.state.branch == Some(SpinBranch::Up)) {
        if let Some(down) = levels.iter().find(|l| {
            l.state.branch == Some(SpinBranch::Down) && l.state.n == up.state.n && l.state.m == up.state.m
        }) {
            out.push(BranchSplitting {
                n: up.state.n,
                m: up.state.m,
                splitting: up.total - down.total,
            });
        }
    }
    out
}
