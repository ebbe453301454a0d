use std::f64::consts::PI;

use proptest::prelude::*;

use nc_spectra::emit::write_csv;
use nc_spectra::numerics::{
    gaussian_linear_moment, integrate_semi_infinite, upper_incomplete_gamma_int, EndpointTransform, QuadratureSpec,
};
use nc_spectra::oracle::{expectation_numeric, radial_eigensolve, GridSpec, SymTridiagonal};
use nc_spectra::perturbation::first_order_shift;
use nc_spectra::series::{solve_quasi_exact, termination_constraints};
use nc_spectra::{
    deform_potential, run_sweep, AngularMeasure, BranchSign, ClosedFormMode, ExperimentConfig, NCConfig,
    PotentialParams, QuantumState, SpinBranch, Variant,
};

/// Terminated parameter set: the admissible `c` with index `root` for `(a, b, n, m)`.
fn terminated(a: f64, b: f64, n: u32, m: u32, root: usize) -> PotentialParams {
    let t = termination_constraints(a, b, n, m).unwrap();
    PotentialParams::new(a, b, t.c_values[root % t.c_values.len()])
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn series_solution_satisfies_radial_equation(
        a in 0.0..3.0f64, b in 0.2..4.0f64, n in 0u32..3, m in 0u32..4, root in 0usize..3, r in 0.3..2.5f64,
    ) {
        let params = terminated(a, b, n, m, root);
        let sol = solve_quasi_exact(params, n, m).unwrap();
        prop_assert!(sol.is_terminated());
        // Sixth-order central differences.
        let h = 1e-2;
        let f = |x: f64| sol.radial(x);
        let d1 = (-f(r - 3.0 * h) + 9.0 * f(r - 2.0 * h) - 45.0 * f(r - h) + 45.0 * f(r + h) - 9.0 * f(r + 2.0 * h)
            + f(r + 3.0 * h)) / (60.0 * h);
        let d2 = (2.0 * f(r - 3.0 * h) - 27.0 * f(r - 2.0 * h) + 270.0 * f(r - h) - 490.0 * f(r) + 270.0 * f(r + h)
            - 27.0 * f(r + 2.0 * h) + 2.0 * f(r + 3.0 * h)) / (180.0 * h * h);
        let mf = f64::from(m);
        let terms = [d2, d1 / r, sol.energy * f(r), mf * mf / (r * r) * f(r), params.potential(r) * f(r)];
        let residual = d2 + d1 / r + (sol.energy - mf * mf / (r * r) - params.potential(r)) * f(r);
        let scale = terms.iter().fold(0.0f64, |s, t| s.max(t.abs()));
        prop_assert!(residual.abs() <= 1e-7 * scale, "residual {residual:e}, scale {scale:e}");
    }

    #[test]
    fn termination_roots_are_tridiagonal_eigenvalues(a in 0.0..3.0f64, b in 0.2..4.0f64, n in 0u32..6, m in 0u32..4) {
        let t = termination_constraints(a, b, n, m).unwrap();
        let kappa = a / (2.0 * b.sqrt());
        let mf = f64::from(m);
        let diag: Vec<f64> = (0..=n).map(|p| -kappa * (2.0 * f64::from(p) + 2.0 * mf + 1.0)).collect();
        let off: Vec<f64> = (0..n)
            .map(|p| {
                let p = f64::from(p);
                ((p + 1.0) * (p + 1.0 + 2.0 * mf) * 2.0 * b.sqrt() * (f64::from(n) - p)).sqrt()
            })
            .collect();
        let eig = SymTridiagonal::new(diag, off).lowest_eigenvalues(n as usize + 1);
        prop_assert_eq!(eig.len(), t.c_values.len());
        let scale = eig.iter().fold(1.0f64, |s, e| s.max(e.abs()));
        for (e, c) in eig.iter().zip(&t.c_values) {
            prop_assert!((e - c).abs() <= 1e-9 * scale, "{e} vs {c}");
        }
    }

    #[test]
    fn shift_is_linear_in_theta(
        a in 0.0..3.0f64, b in 0.2..4.0f64, m in 1u32..4, theta in 1e-4..0.1f64, complex in any::<bool>(),
        mode in prop_oneof![Just(ClosedFormMode::QuadratureOnly), Just(ClosedFormMode::CompletedSquare),
                            Just(ClosedFormMode::PaperLiteral)],
    ) {
        let params = terminated(a, b, 0, m, 0);
        let sol = solve_quasi_exact(params, 0, m).unwrap();
        let (state, mut nc) = if complex {
            (QuantumState::complex(0, m, SpinBranch::Down), NCConfig::complex(theta))
        } else {
            (QuantumState::canonical(0, m), NCConfig::canonical(theta))
        };
        nc.closed_form_mode = mode;
        let s1 = first_order_shift(&sol, &state, &nc).unwrap().value;
        let s2 = first_order_shift(&sol, &state, &nc.with_theta(2.0 * theta)).unwrap().value;
        prop_assert!((s2 - 2.0 * s1).abs() <= 1e-12 * s2.abs(), "{s1} {s2}");
    }

    #[test]
    fn completed_square_matches_quadrature(a in 0.0..3.0f64, b in 0.2..4.0f64, n in 0u32..3, m in 1u32..4, root in 0usize..3) {
        let params = terminated(a, b, n, m, root);
        let sol = solve_quasi_exact(params, n, m).unwrap();
        let state = QuantumState::canonical(n, m);
        let mut nc = NCConfig::canonical(0.01);
        let q = first_order_shift(&sol, &state, &nc).unwrap().value;
        nc.closed_form_mode = ClosedFormMode::CompletedSquare;
        let cs = first_order_shift(&sol, &state, &nc).unwrap().value;
        prop_assert!(rel(cs, q) <= 1e-8, "{cs} vs {q}");
    }

    #[test]
    fn deformed_potential_is_first_order_expansion(
        a in 0.0..3.0f64, b in 0.2..4.0f64, c in -3.0..3.0f64, m in 0u32..4, r in 0.3..3.0f64,
    ) {
        let params = PotentialParams::new(a, b, c);
        let theta = 1.0;
        let dp = deform_potential(params, &NCConfig::canonical(theta), m, None).unwrap();
        let v_hat = |t: f64| params.potential(r - t * f64::from(m) / (2.0 * r));
        let h = 1e-3;
        let dv = (8.0 * (v_hat(h) - v_hat(-h)) - (v_hat(2.0 * h) - v_hat(-2.0 * h))) / (12.0 * h);
        let scale = 1.0 + dv.abs();
        prop_assert!((dp.nc_part(r) / theta - dv).abs() <= 1e-6 * scale, "{} vs {dv}", dp.nc_part(r));
    }

    #[test]
    fn branch_mean_is_m_proportional(a in 0.0..3.0f64, b in 0.2..4.0f64, m in 1u32..4, theta in 1e-3..0.05f64) {
        let params = terminated(a, b, 0, m, 0);
        let sol = solve_quasi_exact(params, 0, m).unwrap();
        let nc = NCConfig::complex(theta);
        let up = first_order_shift(&sol, &QuantumState::complex(0, m, SpinBranch::Up), &nc).unwrap().value;
        let down = first_order_shift(&sol, &QuantumState::complex(0, m, SpinBranch::Down), &nc).unwrap().value;
        let canon = first_order_shift(&sol, &QuantumState::canonical(0, m), &NCConfig::canonical(theta)).unwrap().value;
        prop_assert!(rel(up + down, 2.0 * canon) <= 1e-12);
    }

    #[test]
    fn incomplete_gamma_recurrence(s in 1u32..=10, x in -3.0..3.0f64) {
        let sf = f64::from(s);
        let lhs = upper_incomplete_gamma_int(sf + 1.0, x).unwrap();
        let rhs = sf * upper_incomplete_gamma_int(sf, x).unwrap() + x.powi(s as i32) * (-x).exp();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300));
    }

    #[test]
    fn config_round_trips(
        a in 0.0..10.0f64, b in 1e-3..10.0f64, c in -10.0..10.0f64,
        thetas in prop::collection::vec(0.0..1.0f64, 1..5),
        m0 in 0u32..3, dm in 0u32..3, n0 in 0u32..3, dn in 0u32..3,
        complex in any::<bool>(), validate in any::<bool>(), points in prop::option::of(100usize..20_000),
    ) {
        let variant = if complex { "complex" } else { "canonical" };
        let theta = thetas.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>().join(", ");
        let grid = points.map(|p| format!("[grid]\npoints = {p}\n")).unwrap_or_default();
        let text = format!(
            "[potential]\na = {a:?}\nb = {b:?}\nc = {c:?}\n[nc]\nvariant = \"{variant}\"\n[sweep]\ntheta = [{theta}]\n\
             m = [{m0}, {}]\nn = [{n0}, {}]\nvalidate = {validate}\n{grid}",
            m0 + dm, n0 + dn
        );
        let cfg = ExperimentConfig::from_toml_str(&text).unwrap();
        let again = ExperimentConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        prop_assert_eq!(cfg, again);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    #[test]
    fn gaussian_moment_matches_quadrature(s in -0.9..6.0f64, a in 0.0..4.0f64, b in 0.1..5.0f64) {
        let closed = gaussian_linear_moment(s, a, b).unwrap();
        let (lambda, gamma) = (a / b.sqrt(), b.sqrt());
        let q = integrate_semi_infinite(|r| r.powf(s) * (-lambda * r - gamma * r * r).exp(), &QuadratureSpec::default())
            .unwrap()
            .value;
        prop_assert!(rel(closed, q) <= 1e-10, "{closed} vs {q}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn series_energy_matches_oracle(a in 0.0..3.0f64, b in 0.3..3.0f64, m in 0u32..3, n in 0u32..2, root in 0usize..2) {
        let params = terminated(a, b, n, m, root);
        let sol = solve_quasi_exact(params, n, m).unwrap();
        let oracle = radial_eigensolve(params, m, GridSpec::for_state(&params, m), sol.nodes as usize + 1).unwrap();
        let e = oracle.eigenvalues[sol.nodes as usize];
        prop_assert!(oracle.converged);
        // Energies can cross zero; measure against the oscillator scale there.
        let err = (sol.energy - e).abs() / e.abs().max(params.sqrt_b());
        prop_assert!(err <= 1e-4, "series {} vs oracle {e}", sol.energy);
    }
}

#[test]
fn quadrature_error_estimate_bounds_true_error() {
    type Case = (Box<dyn Fn(f64) -> f64>, f64);
    let cases: Vec<Case> = vec![
        (Box::new(|r: f64| (-r * r).exp()), PI.sqrt() / 2.0),
        (Box::new(|r: f64| r * (-r).exp()), 1.0),
        (Box::new(|r: f64| (-r).exp() / r.sqrt()), PI.sqrt()),
        (Box::new(|r: f64| r.powi(4) * (-r * r).exp()), 3.0 * PI.sqrt() / 8.0),
        (Box::new(|r: f64| r.powf(-0.75) * (-r).exp()), 3.625_609_908_221_908),
    ];
    for transform in [EndpointTransform::SqrtPowerLaw, EndpointTransform::None, EndpointTransform::ExpTail] {
        let spec = QuadratureSpec::default().with_transform(transform);
        for (i, (f, exact)) in cases.iter().enumerate() {
            let Ok(res) = integrate_semi_infinite(f, &spec) else {
                continue;
            };
            let err = (res.value - exact).abs();
            assert!(err <= res.error_estimate.max(4.0 * f64::EPSILON * exact), "{transform:?} case {i}: {err:e} > {:e}", res.error_estimate);
        }
    }
}

#[test]
fn grid_convergence_is_second_order() {
    for (params, m, exact) in [
        (PotentialParams::new(0.0, 1.0, 0.0), 1, 4.0),
        (PotentialParams::new(2.0, 1.0, -1.0), 0, 1.0),
    ] {
        let r_max = nc_spectra::oracle::default_r_max(&params, m);
        let errs: Vec<f64> = [1000, 2000, 4000]
            .iter()
            .map(|&n| (radial_eigensolve(params, m, GridSpec::uniform(r_max, n), 1).unwrap().eigenvalues[0] - exact).abs())
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((1.7..=2.3).contains(&order), "{params:?} m = {m}: order {order}");
        }
    }
}

#[test]
fn oracle_eigenvector_residuals() {
    let params = PotentialParams::new(2.0, 1.0, -1.0);
    for m in 0..3 {
        let r = radial_eigensolve(params, m, GridSpec::for_state(&params, m), 3).unwrap();
        for res in &r.residuals {
            assert!(*res <= 1e-6, "m = {m}: residual {res:e}");
        }
    }
}

#[test]
fn oracle_inverse_square_moment_matches_series() {
    let params = PotentialParams::new(2.0, 1.0, -3.0);
    let sol = solve_quasi_exact(params, 0, 1).unwrap();
    let reference = sol.moment(-1.0, &QuadratureSpec::default()).unwrap().value;
    let oracle = radial_eigensolve(params, 1, GridSpec::for_state(&params, 1), 1).unwrap();
    let fd = expectation_numeric(&oracle, 0, -2).unwrap();
    assert!(rel(fd, reference) <= 1e-6, "oracle {fd} vs series {reference}");
}

#[test]
fn m_proportionality_for_fixed_radial_function() {
    let sol = solve_quasi_exact(PotentialParams::new(2.0, 1.0, -3.0), 0, 1).unwrap();
    let ratios: Vec<f64> = (1..=3)
        .map(|m| first_order_shift(&sol, &QuantumState::canonical(0, m), &NCConfig::canonical(0.01)).unwrap().value / f64::from(m))
        .collect();
    for r in &ratios[1..] {
        assert!(rel(*r, ratios[0]) <= 1e-10);
    }
}

#[test]
fn branch_sign_flag_swaps_branches() {
    let sol = solve_quasi_exact(PotentialParams::new(2.0, 1.0, -3.0), 0, 1).unwrap();
    let mut flipped = NCConfig::complex(0.02);
    flipped.branch_sign = BranchSign::PlusMinus;
    let up = first_order_shift(&sol, &QuantumState::complex(0, 1, SpinBranch::Up), &NCConfig::complex(0.02)).unwrap();
    let down_flipped = first_order_shift(&sol, &QuantumState::complex(0, 1, SpinBranch::Down), &flipped).unwrap();
    assert_eq!(up.value, down_flipped.value);
}

#[test]
fn angular_measure_scales_shift() {
    let sol = solve_quasi_exact(PotentialParams::new(2.0, 1.0, -3.0), 0, 1).unwrap();
    let state = QuantumState::canonical(0, 1);
    let full = first_order_shift(&sol, &state, &NCConfig::canonical(0.01)).unwrap().value;
    let mut nc = NCConfig::canonical(0.01);
    nc.angular_measure = AngularMeasure::Normalized;
    let unit = first_order_shift(&sol, &state, &nc).unwrap().value;
    assert!(rel(full, 2.0 * PI * unit) <= 1e-14);
}

#[test]
fn csv_totals_add_up_as_printed() {
    let cfg = ExperimentConfig::from_toml_str(
        "[potential]\na = 1.3\nb = 0.7\nc = -2.1\n[nc]\nvariant = \"complex\"\n[sweep]\ntheta = [0.0, 0.013, 0.07]\nm = [1, 3]\nn = [0, 1]\n",
    )
    .unwrap();
    assert_eq!(cfg.nc.variant, Variant::Complex);
    let sweep = run_sweep(&cfg);
    let mut buf = Vec::new();
    write_csv(&sweep.rows, &mut buf).unwrap();
    let mut reader = csv::Reader::from_reader(buf.as_slice());
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let zeroth: f64 = rec[6].parse().unwrap();
        let de1: f64 = rec[7].parse().unwrap();
        let total: f64 = rec[8].parse().unwrap();
        assert_eq!(zeroth + de1, total, "{rec:?}");
        rows += 1;
    }
    assert_eq!(rows, sweep.rows.len());
}
