//! Finite-difference ground truth for the radial problem at arbitrary parameters.
//!
//! The operator `-(1/r)(r R')' + m²/r² R + V R` is discretised in flux form on a
//! cell-centred mesh. Multiplying row `i` by the cell volume `r_i w_i` makes it
//! symmetric, and the substitution `u_i = √(r_i w_i) R_i` yields a symmetric
//! tridiagonal matrix: the discrete counterpart of the reduced equation
//! `-u'' + [(m² - 1/4)/r² + V] u = E u`. The face at the origin carries zero
//! flux, which is the regularity condition; the outer end is Dirichlet.

mod tridiag;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use tridiag::SymTridiagonal;

use crate::error::{Error, Result};
use crate::model::PotentialParams;

/// Relative eigenvalue change under spacing halving above which a result is flagged.
pub const RICHARDSON_TOL: f64 = 1e-5;

pub const DEFAULT_POINTS: usize = 8000;

/// Upper bound on the default point count.
pub const MAX_DEFAULT_POINTS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    #[default]
    Uniform,
    Log,
}

/// Radial mesh: `points` nodes starting at `r_min`; the Dirichlet boundary sits at `r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    /// Uniform cells tiling `[0, r_max)`, so the inner face is the origin.
    pub fn uniform(r_max: f64, points: usize) -> Self {
        Self {
            r_min: r_max / (2.0 * points as f64 + 1.0),
            r_max,
            points,
            spacing: Spacing::Uniform,
        }
    }

    /// Default mesh for low-lying states with magnetic number `m`.
    pub fn for_state(params: &PotentialParams, m: u32) -> Self {
        let r_max = default_r_max(params, m);
        Self::uniform(r_max, default_points(params, r_max))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "grid needs 0 < r_min < r_max (got {} .. {})",
                self.r_min, self.r_max
            )));
        }
        if self.points < 100 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 100 points (got {})",
                self.points
            )));
        }
        Ok(())
    }

    fn step(&self) -> f64 {
        (self.r_max - self.r_min) / self.points as f64
    }

    /// Same mesh family with the spacing halved.
    pub fn refined(&self) -> Self {
        match self.spacing {
            Spacing::Uniform => {
                let h = self.step();
                let r_min = if self.r_min >= 0.5 * h {
                    self.r_min - 0.25 * h
                } else {
                    0.5 * self.r_min
                };
                let points = 2 * self.points;
                Self {
                    r_min,
                    r_max: r_min + points as f64 * 0.5 * h,
                    points,
                    spacing: Spacing::Uniform,
                }
            }
            Spacing::Log => Self {
                points: 2 * self.points,
                ..*self
            },
        }
    }
}

/// Outer radius beyond which the envelope `exp(-(a r + b r²)/√b)` of `R²` is below `e^{-80}`,
/// plus room for the polynomial and centrifugal factors.
pub fn default_r_max(params: &PotentialParams, m: u32) -> f64 {
    let sqrt_b = params.sqrt_b();
    let lin = params.a / sqrt_b;
    let decay = (-lin + (lin * lin + 320.0 * sqrt_b).sqrt()) / (2.0 * sqrt_b);
    decay + params.b.powf(-0.25) * (2.0 + f64::from(2 * m + 1).sqrt())
}

/// Enough points to resolve the Coulomb length `1/|c|` as well as the envelope.
pub fn default_points(params: &PotentialParams, r_max: f64) -> usize {
    let coulomb = (200.0 * r_max * params.c.abs()).ceil();
    if coulomb.is_finite() {
        (coulomb as usize).clamp(DEFAULT_POINTS, MAX_DEFAULT_POINTS)
    } else {
        MAX_DEFAULT_POINTS
    }
}

struct Mesh {
    r: Vec<f64>,
    /// Cell volumes `r_i w_i`.
    weight: Vec<f64>,
    inner_face: f64,
    matrix: SymTridiagonal,
}

impl Mesh {
    fn build(params: &PotentialParams, m: u32, grid: &GridSpec) -> Self {
        let n = grid.points;
        // n nodes plus the Dirichlet node at index n.
        let nodes: Vec<f64> = match grid.spacing {
            Spacing::Uniform => {
                let h = grid.step();
                (0..=n).map(|i| grid.r_min + i as f64 * h).collect()
            }
            Spacing::Log => {
                let q = (grid.r_max / grid.r_min).powf(1.0 / n as f64);
                (0..=n).map(|i| grid.r_min * q.powi(i as i32)).collect()
            }
        };
        let inner_face = match grid.spacing {
            Spacing::Uniform => (grid.r_min - 0.5 * grid.step()).max(0.0),
            Spacing::Log => 0.0,
        };
        let mut faces = Vec::with_capacity(n + 1);
        faces.push(inner_face);
        for i in 0..n {
            faces.push(match grid.spacing {
                Spacing::Uniform => 0.5 * (nodes[i] + nodes[i + 1]),
                Spacing::Log => (nodes[i] * nodes[i + 1]).sqrt(),
            });
        }
        let gaps: Vec<f64> = (0..n).map(|i| nodes[i + 1] - nodes[i]).collect();
        let r: Vec<f64> = nodes[..n].to_vec();
        let weight: Vec<f64> = (0..n).map(|i| r[i] * (faces[i + 1] - faces[i])).collect();
        let m2 = f64::from(m * m);
        let diag: Vec<f64> = (0..n)
            .map(|i| {
                let outward = faces[i + 1] / gaps[i];
                let inward = if i == 0 { 0.0 } else { faces[i] / gaps[i - 1] };
                (outward + inward) / weight[i] + m2 / (r[i] * r[i]) + params.potential(r[i])
            })
            .collect();
        let off: Vec<f64> = (0..n - 1)
            .map(|i| -faces[i + 1] / (gaps[i] * (weight[i] * weight[i + 1]).sqrt()))
            .collect();
        Self {
            r,
            weight,
            inner_face,
            matrix: SymTridiagonal::new(diag, off),
        }
    }
}

/// Eigenpairs and radial moments from the finite-difference solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub params: PotentialParams,
    pub m: u32,
    pub grid: GridSpec,
    /// Node positions.
    pub r: Vec<f64>,
    /// Cell volumes; `Σ R_i² weights_i = 1` for every state.
    pub weights: Vec<f64>,
    pub inner_face: f64,
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues on the grid with half the spacing.
    pub refined_eigenvalues: Vec<f64>,
    pub radial_functions: Vec<Vec<f64>>,
    /// `⟨r^p⟩` per state for every convergent `p ∈ [-2, 2]`, Richardson-extrapolated
    /// from both grids.
    pub moments: BTreeMap<i32, Vec<f64>>,
    /// `‖H u - E u‖ / ‖u‖` per state.
    pub residuals: Vec<f64>,
    pub richardson_change: f64,
    pub converged: bool,
}

impl OracleResult {
    /// Richardson extrapolation of the two grids (second-order scheme).
    pub fn extrapolated(&self, state: usize) -> f64 {
        (4.0 * self.refined_eigenvalues[state] - self.eigenvalues[state]) / 3.0
    }
}

pub fn radial_eigensolve(params: PotentialParams, m: u32, grid: GridSpec, k: usize) -> Result<OracleResult> {
    let params = params.validated()?;
    grid.validate()?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be ≥ 1".into()));
    }
    if k > grid.points / 10 {
        return Err(Error::Eigensolver(format!(
            "{k} states requested but a {}-point grid resolves at most {}",
            grid.points,
            grid.points / 10
        )));
    }
    let mesh = Mesh::build(&params, m, &grid);
    let eigenvalues = mesh.matrix.lowest_eigenvalues(k);
    let refined = grid.refined();
    let fine_mesh = Mesh::build(&params, m, &refined);
    let refined_eigenvalues = fine_mesh.matrix.lowest_eigenvalues(k);

    let scale = params.sqrt_b();
    let richardson_change = eigenvalues
        .iter()
        .zip(&refined_eigenvalues)
        .map(|(e, f)| (e - f).abs() / f.abs().max(scale))
        .fold(0.0, f64::max);

    let mut radial_functions = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for &lambda in &eigenvalues {
        let u = mesh.matrix.eigenvector(lambda);
        let hu = mesh.matrix.apply(&u);
        let res = hu
            .iter()
            .zip(&u)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        residuals.push(res);
        radial_functions.push(u.iter().zip(&mesh.weight).map(|(x, w)| x / w.sqrt()).collect());
    }

    let mut result = OracleResult {
        params,
        m,
        grid,
        r: mesh.r,
        weights: mesh.weight,
        inner_face: mesh.inner_face,
        eigenvalues,
        refined_eigenvalues,
        radial_functions,
        moments: BTreeMap::new(),
        residuals,
        richardson_change,
        converged: richardson_change < RICHARDSON_TOL,
    };
    let fine_functions: Vec<Vec<f64>> = result
        .refined_eigenvalues
        .iter()
        .map(|&lambda| {
            let u = fine_mesh.matrix.eigenvector(lambda);
            u.iter().zip(&fine_mesh.weight).map(|(x, w)| x / w.sqrt()).collect()
        })
        .collect();
    for p in -2..=2 {
        if 2 * m as i32 + p < -1 {
            continue;
        }
        let values = (0..k)
            .map(|s| {
                let coarse = grid_moment(&result.radial_functions[s], &result.r, &result.weights, result.inner_face, m, p);
                let fine = grid_moment(&fine_functions[s], &fine_mesh.r, &fine_mesh.weight, fine_mesh.inner_face, m, p);
                (4.0 * fine - coarse) / 3.0
            })
            .collect();
        result.moments.insert(p, values);
    }
    Ok(result)
}

fn grid_moment(radial: &[f64], r: &[f64], weights: &[f64], inner_face: f64, m: u32, power: i32) -> f64 {
    let mut sum: f64 = radial
        .iter()
        .zip(r)
        .zip(weights)
        .map(|((f, r), w)| f * f * r.powi(power) * w)
        .sum();
    if inner_face > 0.0 {
        let amp = radial[0] * radial[0] * r[0].powi(-2 * m as i32);
        let e = f64::from(2 * m as i32 + power + 2);
        sum += amp * inner_face.powf(e) / e;
    }
    sum
}

/// `⟨r^power⟩ = ∫ R² r^power r dr` for a grid state.
///
/// Returns the extrapolated moment for `p ∈ [-2, 2]`; other powers use the
/// midpoint rule on the coarse grid. If the inner face is not at the origin the
/// gap `[0, inner_face]` is filled with the `r^m` power law.
pub fn expectation_numeric(result: &OracleResult, which_state: usize, power: i32) -> Result<f64> {
    if which_state >= result.eigenvalues.len() {
        return Err(Error::InvalidArgument(format!(
            "state {which_state} not computed (k = {})",
            result.eigenvalues.len()
        )));
    }
    if power < -2 {
        return Err(Error::InvalidArgument(format!("power must be ≥ -2 (got {power})")));
    }
    let exponent = 2 * result.m as i32 + power + 1;
    if exponent <= -1 {
        return Err(Error::DivergentMoment {
            exponent: f64::from(exponent),
            context: format!("⟨r^{power}⟩ for m = {}", result.m),
        });
    }
    if let Some(values) = result.moments.get(&power) {
        return Ok(values[which_state]);
    }
    Ok(grid_moment(
        &result.radial_functions[which_state],
        &result.r,
        &result.weights,
        result.inner_face,
        result.m,
        power,
    ))
}
