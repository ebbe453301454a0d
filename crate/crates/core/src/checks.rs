//! Built-in fixture and property checks run by `nc-spectra check`.

use std::f64::consts::PI;

use crate::model::{NCConfig, PotentialParams, QuantumState, SpinBranch};
use crate::numerics::{gaussian_linear_moment, integrate_semi_infinite, upper_incomplete_gamma_int, QuadratureSpec};
use crate::oracle::{radial_eigensolve, GridSpec};
use crate::perturbation::{first_order_shift, level_with_solution};
use crate::series::{solve_quasi_exact, termination_constraints};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * y.abs().max(f64::MIN_POSITIVE)
}

fn outcome(name: &'static str, result: crate::Result<(bool, String)>) -> CheckOutcome {
    match result {
        Ok((passed, detail)) => CheckOutcome { name, passed, detail },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn gamma_fixtures() -> crate::Result<(bool, String)> {
    let g1 = upper_incomplete_gamma_int(1.0, 0.0)?;
    let g3 = upper_incomplete_gamma_int(3.0, 0.0)?;
    let g2 = upper_incomplete_gamma_int(2.0, -1.0)?;
    let ok = (g1 - 1.0).abs() < 1e-15 && (g3 - 2.0).abs() < 1e-15 && g2.abs() < 1e-14;
    Ok((ok, format!("Γ(1,0) = {g1}, Γ(3,0) = {g3}, Γ(2,-1) = {g2:e}")))
}

fn gamma_recurrence() -> crate::Result<(bool, String)> {
    let mut worst = 0.0_f64;
    for s in 1..=10 {
        for x in [-3.0, -1.0, 0.0, 1.0, 3.0] {
            let sf = f64::from(s);
            let lhs = upper_incomplete_gamma_int(sf + 1.0, x)?;
            let rhs = sf * upper_incomplete_gamma_int(sf, x)? + f64::powi(x, s) * (-x).exp();
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1e-300));
        }
    }
    Ok((worst <= 1e-12, format!("worst relative residual {worst:.2e}")))
}

fn quadrature_fixtures() -> crate::Result<(bool, String)> {
    let spec = QuadratureSpec::default();
    let g = integrate_semi_infinite(|r| (-r * r).exp(), &spec)?.value;
    let e = integrate_semi_infinite(|r| r * (-r).exp(), &spec)?.value;
    let h = integrate_semi_infinite(|r| (-r).exp() / r.sqrt(), &spec)?.value;
    let m = gaussian_linear_moment(0.5, 2.0, 1.0)?;
    let mq = integrate_semi_infinite(|r| r.sqrt() * (-2.0 * r - r * r).exp(), &spec)?.value;
    let ok = close(g, PI.sqrt() / 2.0, 1e-12) && close(e, 1.0, 1e-12) && close(h, PI.sqrt(), 1e-12) && close(m, mq, 1e-10);
    Ok((ok, format!("√π/2 → {g}, Γ(2) → {e}, Γ(1/2) → {h}, moment {m} vs {mq}")))
}

fn termination_fixtures() -> crate::Result<(bool, String)> {
    let c0 = termination_constraints(2.0, 1.0, 0, 0)?.c_values;
    let c1 = termination_constraints(2.0, 1.0, 0, 1)?.c_values;
    let two = termination_constraints(2.0, 1.0, 1, 0)?;
    let s3 = 3.0_f64.sqrt();
    let ok = close(c0[0], -1.0, 1e-12)
        && close(c1[0], -3.0, 1e-12)
        && two.c_values.len() == 2
        && close(two.c_values[0], -2.0 - s3, 1e-10)
        && close(two.c_values[1], -2.0 + s3, 1e-10)
        && close(two.energy, 3.0, 1e-12);
    Ok((ok, format!("c(n=0,m=0) = {:?}, c(n=0,m=1) = {:?}, c(n=1,m=0) = {:?}", c0, c1, two.c_values)))
}

fn oracle_oscillator() -> crate::Result<(bool, String)> {
    let params = PotentialParams::new(0.0, 1.0, 0.0);
    let mut detail = Vec::new();
    let mut ok = true;
    for m in 0..=1 {
        let r = radial_eigensolve(params, m, GridSpec::for_state(&params, m), 1)?;
        let exact = 2.0 * f64::from(1 + m);
        ok &= (r.eigenvalues[0] - exact).abs() < 1e-4 && r.converged;
        detail.push(format!("m = {m}: {}", r.eigenvalues[0]));
    }
    Ok((ok, detail.join(", ")))
}

fn oracle_series_agreement() -> crate::Result<(bool, String)> {
    let params = PotentialParams::new(2.0, 1.0, -1.0);
    let sol = solve_quasi_exact(params, 0, 0)?;
    let r = radial_eigensolve(params, 0, GridSpec::for_state(&params, 0), 1)?;
    let d = (r.eigenvalues[0] - sol.energy).abs() / r.eigenvalues[0].abs();
    Ok((d <= 1e-4, format!("series {} vs oracle {} (rel {d:.2e})", sol.energy, r.eigenvalues[0])))
}

fn theta_zero_reduction() -> crate::Result<(bool, String)> {
    let params = PotentialParams::new(2.0, 1.0, -3.0);
    let sol = solve_quasi_exact(params, 0, 1)?;
    let mut ok = true;
    for state in [
        QuantumState::canonical(0, 1),
        QuantumState::complex(0, 1, SpinBranch::Up),
        QuantumState::complex(0, 1, SpinBranch::Down),
    ] {
        let nc = if state.branch.is_some() {
            NCConfig::complex(0.0)
        } else {
            NCConfig::canonical(0.0)
        };
        let l = level_with_solution(&sol, &state, &nc)?;
        ok &= l.total == l.commutative;
    }
    Ok((ok, "θ = 0 totals equal commutative energies".into()))
}

fn theta_linearity() -> crate::Result<(bool, String)> {
    let params = PotentialParams::new(2.0, 1.0, -3.0);
    let sol = solve_quasi_exact(params, 0, 1)?;
    let state = QuantumState::canonical(0, 1);
    let mut worst = 0.0_f64;
    for theta in [1e-3, 1e-2] {
        let s1 = first_order_shift(&sol, &state, &NCConfig::canonical(theta))?.value;
        let s2 = first_order_shift(&sol, &state, &NCConfig::canonical(2.0 * theta))?.value;
        worst = worst.max((s2 - 2.0 * s1).abs() / s2.abs());
    }
    Ok((worst <= 1e-12, format!("worst relative deviation {worst:.2e}")))
}

pub fn run_builtin_checks() -> Vec<CheckOutcome> {
    vec![
        outcome("incomplete gamma fixtures", gamma_fixtures()),
        outcome("incomplete gamma recurrence", gamma_recurrence()),
        outcome("quadrature fixtures", quadrature_fixtures()),
        outcome("termination roots", termination_fixtures()),
        outcome("oracle oscillator levels", oracle_oscillator()),
        outcome("oracle vs series energy", oracle_series_agreement()),
        outcome("theta = 0 reduction", theta_zero_reduction()),
        outcome("theta linearity", theta_linearity()),
    ]
}
