//! Quasi-exact bound states of the 2D Schrödinger equation with the mixed potential
//! `V(r) = c/r + a r + b r²`, their first-order noncommutative corrections, and a
//! finite-difference oracle that checks both.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod config;
pub mod emit;
pub mod error;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod perturbation;
pub mod series;
pub mod sweep;

pub use config::{ConfigError, ExperimentConfig, OutputKind};
pub use error::{Error, Result};
pub use model::{
    validate_params, ATermMode, AngularMeasure, BranchSign, ClosedFormMode, EnergySource, NCConfig, PotentialParams,
    QuantumState, SpinBranch, ValidationReport, Variant,
};
pub use oracle::{expectation_numeric, radial_eigensolve, GridSpec, OracleResult, Spacing};
pub use perturbation::{
    deform_potential, deform_radius, first_order_shift, paper_closed_form_c, total_levels, zeroth_energy,
    ClosedFormComparison, DeformedPotential, LevelSet, NCEnergyLevel, ShiftMethod,
};
pub use series::{
    build_recurrence, evaluate_radial, solve_quasi_exact, termination_constraints, RecurrenceRelation, SeriesSolution,
    TerminationConstraint,
};
pub use sweep::{run_sweep, SpectrumRow, Sweep};
