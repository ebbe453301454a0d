//! Domain types shared by every module.
//!
//! Units: ħ = 1 and 2M = 1, so the radial equation reads
//! `R'' + R'/r + [E - m²/r² - V(r)] R = 0` with `V(r) = a r + b r² + c / r`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of the mixed potential `V(r) = c/r + a r + b r²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialParams {
    /// Linear (confining) coefficient.
    pub a: f64,
    /// Harmonic coefficient.
    pub b: f64,
    /// Coulomb coefficient.
    pub c: f64,
}

impl PotentialParams {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn validate(&self) -> ValidationReport {
        validate_params(self)
    }

    /// Returns `self` if every invariant holds.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        if report.is_valid() {
            Ok(self)
        } else {
            Err(Error::InvalidParams(report))
        }
    }

    /// Oscillator frequency `√b`.
    pub fn sqrt_b(&self) -> f64 {
        self.b.sqrt()
    }

    /// Decay rate of the linear part of the ansatz exponent, `a / (2√b)`.
    pub fn linear_decay(&self) -> f64 {
        self.a / (2.0 * self.sqrt_b())
    }

    pub fn potential(&self, r: f64) -> f64 {
        self.a * r + self.b * r * r + self.c / r
    }
}

/// One checked invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub name: String,
    pub passed: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ValidationReport {
    pub checks: Vec<InvariantCheck>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reasons: Vec<&str> = self
            .failures()
            .filter_map(|c| c.reason.as_deref())
            .collect();
        if reasons.is_empty() {
            write!(f, "all invariants hold")
        } else {
            write!(f, "{}", reasons.join("; "))
        }
    }
}

/// Checks every [`PotentialParams`] invariant and reports each one.
pub fn validate_params(params: &PotentialParams) -> ValidationReport {
    let mut checks = Vec::with_capacity(3);
    let finite = params.a.is_finite() && params.b.is_finite() && params.c.is_finite();
    checks.push(InvariantCheck {
        name: "finite".into(),
        passed: finite,
        reason: (!finite).then(|| "coefficients must be finite".to_string()),
    });
    let b_ok = params.b > 0.0;
    checks.push(InvariantCheck {
        name: "b-positive".into(),
        passed: b_ok,
        reason: (!b_ok).then(|| format!("b must be > 0 (got {})", params.b)),
    });
    let a_ok = params.a >= 0.0;
    checks.push(InvariantCheck {
        name: "a-nonnegative".into(),
        passed: a_ok,
        reason: (!a_ok).then(|| format!("a must be ≥ 0 (got {})", params.a)),
    });
    ValidationReport { checks }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Canonical noncommutative plane, `θ·L = θ L_z`.
    #[default]
    Canonical,
    /// Noncommutative complex coordinates with the emergent spin label.
    Complex,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Canonical => "canonical",
            Variant::Complex => "complex",
        })
    }
}

/// `s_z = ±1/2` label of the complex-space variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpinBranch {
    #[serde(rename = "+")]
    Up,
    #[serde(rename = "-")]
    Down,
}

impl SpinBranch {
    pub const BOTH: [SpinBranch; 2] = [SpinBranch::Up, SpinBranch::Down];

    pub fn s_z(self) -> f64 {
        match self {
            SpinBranch::Up => 0.5,
            SpinBranch::Down => -0.5,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SpinBranch::Up => "+",
            SpinBranch::Down => "-",
        }
    }
}

impl fmt::Display for SpinBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// How the linear term of the potential is deformed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ATermMode {
    /// The linear term only contributes a constant `-(a/2) θ L_z`.
    PaperLiteral,
    /// First-order Taylor expansion: the linear term contributes `-(a/2) θ L_z / r`.
    #[default]
    ExpandedExact,
}

/// How the radial integral in the first-order shift is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedFormMode {
    /// Literal incomplete-gamma expressions (reproduction only).
    PaperLiteral,
    /// Completed-square Gaussian moments.
    CompletedSquare,
    /// Adaptive quadrature on the series radial function.
    #[default]
    QuadratureOnly,
}

/// Source of the commutative energy that the θ corrections are added to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergySource {
    /// Energy fixed by series termination, `2√b(1+m+n) - a²/(4b)`.
    #[default]
    Termination,
    /// The oscillator-type formula `2√b(1+m+n)`.
    PaperFormula,
}

/// Sign convention for the branch factor `(m ∓ 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchSign {
    /// Spin up pairs with `m - 1`.
    #[default]
    MinusPlus,
    /// Spin up pairs with `m + 1` (the excited-state variant).
    PlusMinus,
}

/// Angular normalisation used when integrating the `1/r^k` perturbations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngularMeasure {
    /// Unnormalised `e^{imφ}`, so the angular integral contributes `2π`.
    #[default]
    FullCircle,
    /// Unit-normalised angular factor.
    Normalized,
}

impl AngularMeasure {
    pub fn weight(self) -> f64 {
        match self {
            AngularMeasure::FullCircle => 2.0 * std::f64::consts::PI,
            AngularMeasure::Normalized => 1.0,
        }
    }
}

/// Noncommutativity parameter together with the formula switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NCConfig {
    pub theta: f64,
    pub variant: Variant,
    #[serde(default)]
    pub a_term_mode: ATermMode,
    #[serde(default)]
    pub closed_form_mode: ClosedFormMode,
    #[serde(default)]
    pub energy_source: EnergySource,
    #[serde(default)]
    pub branch_sign: BranchSign,
    #[serde(default)]
    pub angular_measure: AngularMeasure,
}

impl NCConfig {
    pub fn new(theta: f64, variant: Variant) -> Self {
        Self {
            theta,
            variant,
            a_term_mode: ATermMode::default(),
            closed_form_mode: ClosedFormMode::default(),
            energy_source: EnergySource::default(),
            branch_sign: BranchSign::default(),
            angular_measure: AngularMeasure::default(),
        }
    }

    pub fn canonical(theta: f64) -> Self {
        Self::new(theta, Variant::Canonical)
    }

    pub fn complex(theta: f64) -> Self {
        Self::new(theta, Variant::Complex)
    }

    /// Every switch set to its literal expression.
    pub fn paper_literal(mut self) -> Self {
        self.a_term_mode = ATermMode::PaperLiteral;
        self.closed_form_mode = ClosedFormMode::PaperLiteral;
        self.energy_source = EnergySource::PaperFormula;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta >= 0.0) || !self.theta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "theta must be ≥ 0 (got {})",
                self.theta
            )));
        }
        Ok(())
    }
}

/// Series order `n`, magnetic number `m ≥ 0` and, for the complex variant, the spin branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumState {
    pub n: u32,
    pub m: u32,
    pub branch: Option<SpinBranch>,
}

impl QuantumState {
    pub const fn canonical(n: u32, m: u32) -> Self {
        Self { n, m, branch: None }
    }

    pub const fn complex(n: u32, m: u32, branch: SpinBranch) -> Self {
        Self {
            n,
            m,
            branch: Some(branch),
        }
    }

    pub fn check_variant(&self, variant: Variant) -> Result<()> {
        match (variant, self.branch) {
            (Variant::Canonical, None) | (Variant::Complex, Some(_)) => Ok(()),
            (Variant::Canonical, Some(_)) => Err(Error::InvalidArgument(
                "spin branch given for the canonical variant".into(),
            )),
            (Variant::Complex, None) => Err(Error::InvalidArgument(
                "complex variant requires a spin branch".into(),
            )),
        }
    }
}
