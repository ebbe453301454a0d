//! Experiment configuration files.
//!
//! A config is TOML with four sections:
//!
//! ```toml
//! [potential]
//! a = 2.0
//! b = 1.0
//! c = -1.0
//!
//! [nc]
//! variant = "complex"                 # or "canonical"
//! a_term_mode = "expanded-exact"      # or "paper-literal"
//! closed_form_mode = "quadrature-only" # "paper-literal", "completed-square"
//! energy_source = "termination"       # or "paper-formula"
//! branch_sign = "minus-plus"          # or "plus-minus"
//! angular_measure = "full-circle"     # or "normalized"
//!
//! [sweep]
//! theta = [0.0, 0.01]
//! m = [0, 2]                           # inclusive range
//! n = [0, 0]
//! branches = ["+", "-"]                # complex variant only
//! outputs = ["csv", "svg", "report"]
//! validate = false
//!
//! [grid]                               # optional oracle overrides
//! points = 8000
//! r_max = 12.0
//! spacing = "uniform"
//! ```
//!
//! Only `[potential]`, `theta` and `m` are required. `[nc]` defaults to the
//! canonical variant with the values shown, `n` to `[0, 0]`, `branches` to both
//! (complex only), `outputs` to all three. Unknown keys are rejected.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::model::{
    ATermMode, AngularMeasure, BranchSign, ClosedFormMode, EnergySource, NCConfig, PotentialParams, SpinBranch,
    Variant,
};
use crate::oracle::{GridSpec, Spacing};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "NC_SPECTRA_OUT_DIR";

#[derive(Debug)]
pub enum ConfigError {
    Io { path: PathBuf, source: std::io::Error },
    Parse(String),
    Invalid(Vec<String>),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io { path, source } => write!(f, "cannot read {}: {source}", path.display()),
            ConfigError::Parse(msg) => f.write_str(msg.trim_end()),
            ConfigError::Invalid(msgs) => write!(f, "invalid config: {}", msgs.join("; ")),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputKind {
    Csv,
    Svg,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntRange {
    pub start: u32,
    pub end: u32,
}

impl IntRange {
    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.start..=self.end
    }
}

/// Optional overrides for the oracle grid; unset fields use per-state defaults.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<Spacing>,
}

impl GridOverrides {
    /// Grid for magnetic number `m`.
    pub fn grid_for(&self, params: &PotentialParams, m: u32) -> GridSpec {
        let base = GridSpec::for_state(params, m);
        let points = self.points.unwrap_or(base.points);
        let r_max = self.r_max.unwrap_or(base.r_max);
        let mut grid = GridSpec::uniform(r_max, points);
        if let Some(spacing) = self.spacing {
            grid.spacing = spacing;
        }
        if let Some(r_min) = self.r_min {
            grid.r_min = r_min;
        }
        grid
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: PotentialParams,
    /// Switches; its `theta` is replaced per sweep point.
    pub nc: NCConfig,
    pub theta_values: Vec<f64>,
    pub m_range: IntRange,
    pub n_range: IntRange,
    pub branches: Vec<SpinBranch>,
    pub outputs: Vec<OutputKind>,
    pub validate: bool,
    pub grid: GridOverrides,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileNc {
    #[serde(default)]
    variant: Variant,
    #[serde(default)]
    a_term_mode: ATermMode,
    #[serde(default)]
    closed_form_mode: ClosedFormMode,
    #[serde(default)]
    energy_source: EnergySource,
    #[serde(default)]
    branch_sign: BranchSign,
    #[serde(default)]
    angular_measure: AngularMeasure,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSweep {
    theta: Vec<f64>,
    m: [u32; 2],
    #[serde(default)]
    n: [u32; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    branches: Option<Vec<SpinBranch>>,
    #[serde(default = "default_outputs")]
    outputs: Vec<OutputKind>,
    #[serde(default)]
    validate: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    potential: PotentialParams,
    #[serde(default)]
    nc: FileNc,
    sweep: FileSweep,
    #[serde(default)]
    grid: GridOverrides,
}

fn default_outputs() -> Vec<OutputKind> {
    vec![OutputKind::Csv, OutputKind::Svg, OutputKind::Report]
}

fn line_of(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let t = l.trim_start();
        t.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

impl ExperimentConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text).map_err(|e| match e {
            ConfigError::Parse(msg) => ConfigError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let at = |key: &str| line_of(text, key).map(|l| format!("line {l}: ")).unwrap_or_default();
        let config = Self::from_file(file);
        config.validate().map_err(|msgs| {
            ConfigError::Invalid(
                msgs.into_iter()
                    .map(|(key, msg)| format!("{}{msg}", at(key)))
                    .collect(),
            )
        })?;
        Ok(config)
    }

    fn from_file(file: ConfigFile) -> Self {
        let nc = NCConfig {
            theta: 0.0,
            variant: file.nc.variant,
            a_term_mode: file.nc.a_term_mode,
            closed_form_mode: file.nc.closed_form_mode,
            energy_source: file.nc.energy_source,
            branch_sign: file.nc.branch_sign,
            angular_measure: file.nc.angular_measure,
        };
        let branches = match (file.nc.variant, file.sweep.branches) {
            (Variant::Canonical, b) => b.unwrap_or_default(),
            (Variant::Complex, Some(b)) => b,
            (Variant::Complex, None) => SpinBranch::BOTH.to_vec(),
        };
        Self {
            params: file.potential,
            nc,
            theta_values: file.sweep.theta,
            m_range: IntRange {
                start: file.sweep.m[0],
                end: file.sweep.m[1],
            },
            n_range: IntRange {
                start: file.sweep.n[0],
                end: file.sweep.n[1],
            },
            branches,
            outputs: file.sweep.outputs,
            validate: file.sweep.validate,
            grid: file.grid,
        }
    }

    fn to_file(&self) -> ConfigFile {
        ConfigFile {
            potential: self.params,
            nc: FileNc {
                variant: self.nc.variant,
                a_term_mode: self.nc.a_term_mode,
                closed_form_mode: self.nc.closed_form_mode,
                energy_source: self.nc.energy_source,
                branch_sign: self.nc.branch_sign,
                angular_measure: self.nc.angular_measure,
            },
            sweep: FileSweep {
                theta: self.theta_values.clone(),
                m: [self.m_range.start, self.m_range.end],
                n: [self.n_range.start, self.n_range.end],
                branches: (self.nc.variant == Variant::Complex).then(|| self.branches.clone()),
                outputs: self.outputs.clone(),
                validate: self.validate,
            },
            grid: self.grid,
        }
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.to_file()).expect("config is always representable")
    }

    /// Every violated invariant as `(key, message)`.
    fn validate(&self) -> Result<(), Vec<(&'static str, String)>> {
        let mut errs = Vec::new();
        let report = self.params.validate();
        for f in report.failures() {
            let key = if f.name.starts_with('b') { "b" } else { "a" };
            errs.push((key, f.reason.clone().unwrap_or_else(|| f.name.clone())));
        }
        if self.theta_values.is_empty() {
            errs.push(("theta", "theta list must not be empty".to_string()));
        }
        for &t in &self.theta_values {
            if !(t >= 0.0) || !t.is_finite() {
                errs.push(("theta", format!("theta must be ≥ 0 (got {t})")));
            }
        }
        for (key, r) in [("m", self.m_range), ("n", self.n_range)] {
            if r.start > r.end {
                errs.push((key, format!("{key} range is empty ({}..={})", r.start, r.end)));
            }
        }
        match self.nc.variant {
            Variant::Complex if self.branches.is_empty() => {
                errs.push(("branches", "complex variant needs at least one branch".to_string()));
            }
            Variant::Canonical if !self.branches.is_empty() => {
                errs.push(("branches", "branches apply only to the complex variant".to_string()));
            }
            _ => {}
        }
        if self.outputs.is_empty() {
            errs.push(("outputs", "outputs must not be empty".to_string()));
        }
        if let Some(p) = self.grid.points {
            if p < 100 {
                errs.push(("points", format!("grid points must be ≥ 100 (got {p})")));
            }
        }
        if let Some(r) = self.grid.r_max {
            if !(r > 0.0) || !r.is_finite() {
                errs.push(("r_max", format!("grid r_max must be > 0 (got {r})")));
            }
        }
        if let Some(r) = self.grid.r_min {
            if !(r > 0.0) || !r.is_finite() {
                errs.push(("r_min", format!("grid r_min must be > 0 (got {r})")));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    /// Sweep points for the complex variant, or `None` once for the canonical one.
    pub fn branch_options(&self) -> Vec<Option<SpinBranch>> {
        match self.nc.variant {
            Variant::Canonical => vec![None],
            Variant::Complex => {
                let mut b = self.branches.clone();
                b.sort();
                b.dedup();
                b.into_iter().map(Some).collect()
            }
        }
    }

    pub fn wants(&self, kind: OutputKind) -> bool {
        self.outputs.contains(&kind)
    }
}
