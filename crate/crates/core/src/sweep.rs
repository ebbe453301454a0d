//! Parameter sweeps over θ, n, m and spin branch.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::Error;
use crate::model::{NCConfig, QuantumState, SpinBranch, Variant};
use crate::oracle::{radial_eigensolve, OracleResult};
use crate::perturbation::{level_with_solution, paper_closed_form_c, ClosedFormComparison, ShiftMethod};
use crate::series::{solve_quasi_exact, SeriesSolution};

/// Relative gap between the literal and reference totals that counts as a discrepancy.
pub const DISCREPANCY_TOL: f64 = 1e-6;

pub mod flag {
    pub const CONSTRAINT_VIOLATED: &str = "constraint-violated";
    pub const PAPER_ENERGY_DIFFERS: &str = "paper-energy-differs";
    pub const DIVERGENT: &str = "divergent";
    pub const FAILED: &str = "failed";
    pub const ORACLE_UNCONVERGED: &str = "oracle-unconverged";
    pub const ORACLE_MISMATCH: &str = "oracle-mismatch";
    pub const PAPER_DISCREPANCY: &str = "paper-discrepancy";
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub variant: Variant,
    pub n: u32,
    pub m: u32,
    pub branch: Option<SpinBranch>,
    pub theta: f64,
    pub e_comm: f64,
    pub e_zeroth: f64,
    pub de1: f64,
    pub e_total: f64,
    pub method: ShiftMethod,
    /// Oracle eigenvalue of the radial state with the same node count.
    pub oracle_e: Option<f64>,
    pub flags: Vec<String>,
    /// Total with every switch at its literal setting.
    pub paper_total: Option<f64>,
    /// Total from the quadrature path with the termination energy.
    pub reference_total: Option<f64>,
    /// Why `reference_total` is missing.
    pub reference_error: Option<String>,
    pub error: Option<String>,
}

impl SpectrumRow {
    pub fn state(&self) -> QuantumState {
        QuantumState {
            n: self.n,
            m: self.m,
            branch: self.branch,
        }
    }

    /// Relative gap between `paper_total` and `reference_total`; `None` if either is missing.
    pub fn paper_discrepancy(&self) -> Option<f64> {
        let (p, r) = (self.paper_total?, self.reference_total?);
        Some((p - r).abs() / r.abs().max(f64::MIN_POSITIVE))
    }

    fn sort_key(&self) -> (f64, u32, u32, Option<SpinBranch>) {
        (self.theta, self.n, self.m, self.branch)
    }
}

/// Per-(n, m) radial data shared by every θ and branch.
#[derive(Debug, Clone)]
pub struct RadialCase {
    pub n: u32,
    pub m: u32,
    pub solution: Result<SeriesSolution, String>,
    pub oracle: Option<Result<OracleResult, String>>,
    /// Literal closed forms at `δ = m + 1/2` and `δ = m`.
    pub closed_forms: Vec<ClosedFormComparison>,
}

impl RadialCase {
    /// Oracle eigenvalue for the series state: the grid state with the same node count.
    pub fn oracle_energy(&self) -> Option<f64> {
        let sol = self.solution.as_ref().ok()?;
        let oracle = self.oracle.as_ref()?.as_ref().ok()?;
        oracle.eigenvalues.get(sol.nodes as usize).copied()
    }

    pub fn oracle_converged(&self) -> Option<bool> {
        self.oracle.as_ref().map(|o| o.as_ref().map(|r| r.converged).unwrap_or(false))
    }
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub config: ExperimentConfig,
    pub rows: Vec<SpectrumRow>,
    pub cases: Vec<RadialCase>,
}

impl Sweep {
    /// Whether any requested oracle failed or did not converge.
    pub fn oracle_failed(&self) -> bool {
        self.cases.iter().any(|c| c.oracle_converged() == Some(false))
    }
}

fn radial_case(config: &ExperimentConfig, n: u32, m: u32) -> RadialCase {
    let solution = solve_quasi_exact(config.params, n, m).map_err(|e| e.to_string());
    let oracle = config.validate.then(|| {
        let k = solution.as_ref().map(|s| s.nodes as usize + 1).unwrap_or(n as usize + 1);
        radial_eigensolve(config.params, m, config.grid.grid_for(&config.params, m), k).map_err(|e| e.to_string())
    });
    let closed_forms = match &solution {
        Ok(sol) => [f64::from(m) + 0.5, f64::from(m)]
            .iter()
            .filter_map(|&d| paper_closed_form_c(sol, d).ok())
            .collect(),
        Err(_) => Vec::new(),
    };
    RadialCase {
        n,
        m,
        solution,
        oracle,
        closed_forms,
    }
}

/// Reference switches: quadrature shift on the termination energy.
pub fn reference_config(nc: &NCConfig) -> NCConfig {
    NCConfig {
        theta: nc.theta,
        variant: nc.variant,
        branch_sign: nc.branch_sign,
        angular_measure: nc.angular_measure,
        ..NCConfig::new(nc.theta, nc.variant)
    }
}

fn failure_flag(e: &Error) -> &'static str {
    match e {
        Error::DivergentMoment { .. } => flag::DIVERGENT,
        _ => flag::FAILED,
    }
}

fn row(case: &RadialCase, theta: f64, branch: Option<SpinBranch>, config: &ExperimentConfig) -> SpectrumRow {
    let nc = config.nc.with_theta(theta);
    let state = QuantumState {
        n: case.n,
        m: case.m,
        branch,
    };
    let mut out = SpectrumRow {
        variant: nc.variant,
        n: case.n,
        m: case.m,
        branch,
        theta,
        e_comm: f64::NAN,
        e_zeroth: f64::NAN,
        de1: f64::NAN,
        e_total: f64::NAN,
        method: ShiftMethod::for_mode(nc.closed_form_mode),
        oracle_e: case.oracle_energy(),
        flags: Vec::new(),
        paper_total: None,
        reference_total: None,
        reference_error: None,
        error: None,
    };
    if case.oracle_converged() == Some(false) {
        out.flags.push(flag::ORACLE_UNCONVERGED.into());
    }
    let sol = match &case.solution {
        Ok(s) => s,
        Err(e) => {
            out.flags.push(flag::FAILED.into());
            out.error = Some(e.clone());
            return out;
        }
    };
    if !sol.is_terminated() {
        out.flags.push(flag::CONSTRAINT_VIOLATED.into());
    }
    if (sol.paper_energy - sol.energy).abs() > 1e-12 * sol.energy.abs().max(1.0) {
        out.flags.push(flag::PAPER_ENERGY_DIFFERS.into());
    }
    if let Some(e) = out.oracle_e {
        if sol.is_terminated() && (e - sol.energy).abs() > 1e-4 * e.abs().max(f64::MIN_POSITIVE) {
            out.flags.push(flag::ORACLE_MISMATCH.into());
        }
    }
    match level_with_solution(sol, &state, &nc) {
        Ok(level) => {
            out.e_comm = level.commutative;
            out.e_zeroth = level.zeroth;
            out.de1 = level.first_order_shift;
            out.e_total = level.total;
            out.method = level.method;
        }
        Err(e) => {
            out.flags.push(failure_flag(&e).into());
            out.error = Some(e.to_string());
        }
    }
    out.paper_total = level_with_solution(sol, &state, &reference_config(&nc).paper_literal())
        .ok()
        .map(|l| l.total);
    match level_with_solution(sol, &state, &reference_config(&nc)) {
        Ok(l) => out.reference_total = Some(l.total),
        Err(e) => out.reference_error = Some(e.to_string()),
    }
    let discrepant = match (out.paper_total, out.reference_total) {
        (Some(_), Some(_)) => out.paper_discrepancy().is_some_and(|d| d > DISCREPANCY_TOL),
        (Some(_), None) => true,
        _ => false,
    };
    if discrepant {
        out.flags.push(flag::PAPER_DISCREPANCY.into());
    }
    out
}

/// One row per `(θ, n, m, branch)`, ordered by those keys ascending.
///
/// Radial work is shared per `(n, m)` and computed in parallel; failures end up
/// in the row's `flags` and `error` rather than aborting the sweep.
pub fn run_sweep(config: &ExperimentConfig) -> Sweep {
    let pairs: Vec<(u32, u32)> = config
        .n_range
        .iter()
        .flat_map(|n| config.m_range.iter().map(move |m| (n, m)))
        .collect();
    let cases: Vec<RadialCase> = pairs.par_iter().map(|&(n, m)| radial_case(config, n, m)).collect();
    let by_pair: BTreeMap<(u32, u32), &RadialCase> = cases.iter().map(|c| ((c.n, c.m), c)).collect();

    let mut thetas = config.theta_values.clone();
    thetas.sort_by(f64::total_cmp);
    thetas.dedup();
    let branches = config.branch_options();
    let mut points = Vec::new();
    for &theta in &thetas {
        for &(n, m) in by_pair.keys() {
            for &branch in &branches {
                points.push((theta, n, m, branch));
            }
        }
    }
    let mut rows: Vec<SpectrumRow> = points
        .par_iter()
        .map(|&(theta, n, m, branch)| row(by_pair[&(n, m)], theta, branch, config))
        .collect();
    rows.sort_by(|x, y| {
        let (a, b) = (x.sort_key(), y.sort_key());
        a.0.total_cmp(&b.0).then((a.1, a.2, a.3).cmp(&(b.1, b.2, b.3)))
    });
    Sweep {
        config: config.clone(),
        rows,
        cases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    fn config(variant: &str, theta: &str, m: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml_str(&format!(
            "[potential]\na = 2.0\nb = 1.0\nc = -3.0\n[nc]\nvariant = \"{variant}\"\n[sweep]\ntheta = {theta}\nm = {m}\nn = [0, 0]\n"
        ))
        .unwrap()
    }

    #[test]
    fn zero_theta_has_zero_shifts() {
        let sweep = run_sweep(&config("canonical", "[0.0]", "[1, 3]"));
        assert_eq!(sweep.rows.len(), 3);
        for r in &sweep.rows {
            assert_eq!(r.de1, 0.0);
            assert_eq!(r.e_total, r.e_comm);
        }
    }

    #[test]
    fn ordering_is_theta_n_m_branch() {
        let sweep = run_sweep(&config("complex", "[0.02, 0.0]", "[1, 2]"));
        let keys: Vec<_> = sweep.rows.iter().map(|r| (r.theta, r.m, r.branch)).collect();
        assert_eq!(keys.len(), 8);
        assert_eq!(keys[0], (0.0, 1, Some(SpinBranch::Up)));
        assert_eq!(keys[1], (0.0, 1, Some(SpinBranch::Down)));
        assert_eq!(keys[4], (0.02, 1, Some(SpinBranch::Up)));
    }

    #[test]
    fn failures_stay_in_rows() {
        // m = 0 complex rows diverge at first order but the sweep still completes.
        let sweep = run_sweep(&config("complex", "[0.01]", "[0, 1]"));
        assert_eq!(sweep.rows.len(), 4);
        let m0: Vec<_> = sweep.rows.iter().filter(|r| r.m == 0).collect();
        assert!(m0.iter().all(|r| r.flags.iter().any(|f| f == flag::DIVERGENT)));
        assert!(m0.iter().all(|r| r.error.is_some()));
        assert!(sweep.rows.iter().filter(|r| r.m == 1).all(|r| r.error.is_none()));
    }
}
