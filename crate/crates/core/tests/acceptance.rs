//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every criterion prints even when an
//! earlier one fails. Criterion 6 contains a known-unattainable sub-check that is
//! reported as FAIL and tolerated only while it fails for the expected reason.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use nc_spectra::emit::render_report;
use nc_spectra::numerics::upper_incomplete_gamma_int;
use nc_spectra::perturbation::level_with_solution;
use nc_spectra::{
    first_order_shift, radial_eigensolve, run_sweep, solve_quasi_exact, ClosedFormMode, Error, ExperimentConfig,
    GridSpec, NCConfig, PotentialParams, QuantumState, SpinBranch, Variant,
};

type Outcome = Result<String, String>;

enum Expect {
    Pass,
    /// Must fail, and the closure decides whether the failure is the anticipated one.
    KnownFailure(fn(&str) -> bool),
}

struct Criterion {
    id: u32,
    name: &'static str,
    expect: Expect,
    run: fn() -> Outcome,
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn oracle_equivalence() -> Outcome {
    let s3 = 3f64.sqrt();
    let sets = [
        (2.0, 1.0, -1.0, 0, 0),
        (0.0, 1.0, 0.0, 0, 0),
        (0.0, 1.0, 0.0, 0, 1),
        (0.0, 4.0, 0.0, 0, 0),
        (0.0, 4.0, 0.0, 0, 1),
        (2.0, 1.0, -3.0, 0, 1),
        (2.0, 1.0, -2.0 + s3, 1, 0),
    ];
    let mut worst = 0.0_f64;
    let mut slowest = Duration::ZERO;
    let mut largest_grid = 0;
    for (a, b, c, n, m) in sets {
        let params = PotentialParams::new(a, b, c);
        let sol = solve_quasi_exact(params, n, m).map_err(fail)?;
        let grid = GridSpec::for_state(&params, m);
        largest_grid = largest_grid.max(grid.refined().points);
        let start = Instant::now();
        let oracle = radial_eigensolve(params, m, grid, sol.nodes as usize + 1).map_err(fail)?;
        slowest = slowest.max(start.elapsed());
        let e = oracle.eigenvalues[sol.nodes as usize];
        if !oracle.converged {
            return Err(format!("oracle unconverged for (a, b, c, n, m) = ({a}, {b}, {c}, {n}, {m})"));
        }
        let d = rel(sol.energy, e);
        if d > 1e-4 {
            return Err(format!("({a}, {b}, {c}, n = {n}, m = {m}): series {} vs oracle {e}", sol.energy));
        }
        worst = worst.max(d);
    }
    ensure(
        slowest <= Duration::from_secs(5) && largest_grid <= 2 * nc_spectra::oracle::MAX_DEFAULT_POINTS,
        format!(
            "{} sets, worst relative difference {worst:.2e}, slowest eigensolve {:.2} s, coarse grids ≤ {} points",
            sets.len(),
            slowest.as_secs_f64(),
            largest_grid / 2
        ),
    )
}

fn oscillator_limits() -> Outcome {
    let mut worst = 0.0_f64;
    for b in [1.0, 4.0] {
        let params = PotentialParams::new(0.0, b, 0.0);
        for m in 0..=2 {
            let exact = 2.0 * f64::sqrt(b) * f64::from(1 + m);
            let sol = solve_quasi_exact(params, 0, m).map_err(fail)?;
            let oracle = radial_eigensolve(params, m, GridSpec::for_state(&params, m), 1).map_err(fail)?;
            worst = worst.max(rel(sol.energy, exact)).max(rel(oracle.eigenvalues[0], exact));
        }
    }
    ensure(worst <= 1e-4, format!("b ∈ {{1, 4}}, m ∈ {{0, 1, 2}}: worst relative error {worst:.2e}"))
}

fn theta_zero_reduction() -> Outcome {
    let modes = [ClosedFormMode::QuadratureOnly, ClosedFormMode::CompletedSquare, ClosedFormMode::PaperLiteral];
    let mut checked = 0;
    let mut worst_quadrature = 0.0_f64;
    for (a, b, c, n, m) in [(2.0, 1.0, -3.0, 0, 1), (1.0, 4.0, -0.75, 0, 1), (0.0, 1.0, 0.0, 0, 2)] {
        let sol = solve_quasi_exact(PotentialParams::new(a, b, c), n, m).map_err(fail)?;
        let states = [
            (Variant::Canonical, QuantumState::canonical(n, m)),
            (Variant::Complex, QuantumState::complex(n, m, SpinBranch::Up)),
            (Variant::Complex, QuantumState::complex(n, m, SpinBranch::Down)),
        ];
        for mode in modes {
            for (variant, state) in &states {
                for literal in [false, true] {
                    let mut nc = NCConfig::new(0.0, *variant);
                    if literal {
                        nc = nc.paper_literal();
                    }
                    nc.closed_form_mode = mode;
                    let level = level_with_solution(&sol, state, &nc).map_err(fail)?;
                    checked += 1;
                    if mode == ClosedFormMode::QuadratureOnly {
                        worst_quadrature = worst_quadrature.max(rel(level.total, level.commutative));
                    } else if level.total != level.commutative {
                        return Err(format!("{mode:?} {state:?}: {} ≠ {}", level.total, level.commutative));
                    }
                }
            }
        }
    }
    ensure(
        worst_quadrature <= 1e-10,
        format!("{checked} levels; closed forms exact, quadrature worst {worst_quadrature:.1e}"),
    )
}

fn theta_linearity() -> Outcome {
    let mut worst = 0.0_f64;
    let mut count = 0;
    for (a, b, c, n, m) in [(2.0, 1.0, -3.0, 0, 1), (1.0, 4.0, -0.75, 0, 1), (0.5, 1.0, -0.75, 0, 1)] {
        let sol = solve_quasi_exact(PotentialParams::new(a, b, c), n, m).map_err(fail)?;
        for mode in [ClosedFormMode::QuadratureOnly, ClosedFormMode::CompletedSquare, ClosedFormMode::PaperLiteral] {
            for (variant, state) in [
                (Variant::Canonical, QuantumState::canonical(n, m)),
                (Variant::Complex, QuantumState::complex(n, m, SpinBranch::Up)),
                (Variant::Complex, QuantumState::complex(n, m, SpinBranch::Down)),
            ] {
                for theta in [1e-3, 1e-2] {
                    let mut nc = NCConfig::new(theta, variant);
                    nc.closed_form_mode = mode;
                    let s1 = first_order_shift(&sol, &state, &nc).map_err(fail)?.value;
                    let s2 = first_order_shift(&sol, &state, &nc.with_theta(2.0 * theta)).map_err(fail)?.value;
                    worst = worst.max(rel(s2, 2.0 * s1));
                    count += 1;
                }
            }
        }
    }
    ensure(worst <= 1e-12, format!("{count} shift pairs, worst relative deviation {worst:.1e}"))
}

fn m_proportionality() -> Outcome {
    let sol = solve_quasi_exact(PotentialParams::new(2.0, 1.0, -3.0), 0, 1).map_err(fail)?;
    let mut worst = 0.0_f64;
    for mode in [ClosedFormMode::QuadratureOnly, ClosedFormMode::CompletedSquare] {
        let mut nc = NCConfig::canonical(0.01);
        nc.closed_form_mode = mode;
        let per_m: Vec<f64> = (1..=3)
            .map(|m| first_order_shift(&sol, &QuantumState::canonical(0, m), &nc).map(|s| s.value / f64::from(m)))
            .collect::<nc_spectra::Result<_>>()
            .map_err(fail)?;
        for v in &per_m[1..] {
            worst = worst.max(rel(*v, per_m[0]));
        }
    }
    ensure(worst <= 1e-10, format!("shift/m over m = 1..3, worst relative spread {worst:.1e}"))
}

fn branch_structure() -> Outcome {
    let theta = 0.01;
    let fixed = solve_quasi_exact(PotentialParams::new(2.0, 1.0, -3.0), 0, 1).map_err(fail)?;
    let nc = NCConfig::complex(theta);
    let mut splittings = Vec::new();
    for m in 0..=3 {
        let up = level_with_solution(&fixed, &QuantumState::complex(0, m, SpinBranch::Up), &nc).map_err(fail)?;
        let down = level_with_solution(&fixed, &QuantumState::complex(0, m, SpinBranch::Down), &nc).map_err(fail)?;
        splittings.push(up.total - down.total);
    }
    let spread = splittings[1..].iter().map(|s| rel(*s, splittings[0])).fold(0.0, f64::max);
    if spread > 1e-12 {
        return Err(format!("splitting varies with m: {splittings:?}"));
    }

    let params = PotentialParams::new(2.0, 1.0, -1.0);
    let ground = solve_quasi_exact(params, 0, 0).map_err(fail)?;
    let literal = NCConfig::complex(theta).paper_literal();
    let up = level_with_solution(&ground, &QuantumState::complex(0, 0, SpinBranch::Up), &literal).map_err(fail)?;
    let down = level_with_solution(&ground, &QuantumState::complex(0, 0, SpinBranch::Down), &literal).map_err(fail)?;
    let literal_split = up.total - down.total;
    if literal_split == 0.0 || literal_split.is_nan() {
        return Err(format!("1s pair not split with literal closed forms: {literal_split}"));
    }
    let head = format!(
        "splitting m-independent to {spread:.1e}; literal 1s splitting {literal_split:.6}; quadrature C₀ for the 1s pair"
    );
    match first_order_shift(&ground, &QuantumState::complex(0, 0, SpinBranch::Up), &nc) {
        Ok(s) => {
            let c0 = s.value / (theta * 2.0 * std::f64::consts::PI);
            let magnitude = 2.0 * theta * (c0 - params.a / 2.0 - params.b).abs();
            let got = (up.total - down.total).abs();
            ensure(rel(got, magnitude) <= 1e-8, format!("{head} gives {magnitude} vs {got}"))
        }
        Err(e @ Error::DivergentMoment { .. }) => Err(format!("{head}: {e}")),
        Err(e) => Err(format!("{head}: unexpected error {e}")),
    }
}

fn divergent_ground_state(detail: &str) -> bool {
    detail.contains("C₀ for the 1s pair: divergent moment")
}

fn degeneracy_lifting() -> Outcome {
    let mut cfg = ExperimentConfig::from_toml_str(
        "[potential]\na = 2.0\nb = 1.0\nc = -1.0\n\n[nc]\nvariant = \"canonical\"\n\n[sweep]\ntheta = [0.01]\nm = [0, 4]\nn = [0, 0]\n",
    )
    .map_err(fail)?;
    cfg.validate = false;
    let sweep = run_sweep(&cfg);
    let levels: Vec<f64> = sweep.rows.iter().map(|r| r.e_total).collect();
    if levels.len() != 5 || levels.iter().any(|e| !e.is_finite()) {
        return Err(format!("expected five finite levels, got {levels:?}"));
    }
    let mut min_gap = f64::INFINITY;
    for i in 0..levels.len() {
        for j in i + 1..levels.len() {
            min_gap = min_gap.min((levels[i] - levels[j]).abs());
        }
    }
    ensure(min_gap > 1e-9, format!("m = 0..4 at θ = 0.01, smallest gap {min_gap:.4}"))
}

fn special_functions() -> Outcome {
    let mut worst = 0.0_f64;
    for s in 1..=12 {
        for x in [-5.0, -3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0, 5.0] {
            let sf = f64::from(s);
            let lhs = upper_incomplete_gamma_int(sf + 1.0, x).map_err(fail)?;
            let rhs = sf * upper_incomplete_gamma_int(sf, x).map_err(fail)? + f64::powi(x, s) * (-x).exp();
            worst = worst.max(rel(lhs, rhs));
        }
    }
    let g = upper_incomplete_gamma_int(2.0, -1.0).map_err(fail)?;
    ensure(worst <= 1e-12 && g.abs() <= 1e-14, format!("recurrence worst {worst:.1e}; Γ(2, -1) = {g:e}"))
}

fn closed_form_audit() -> Outcome {
    let mut lines = Vec::new();
    for (a, b, c) in [(2.0, 1.0, -3.0), (1.0, 4.0, -0.75), (0.5, 1.0, -0.75)] {
        let cfg = ExperimentConfig::from_toml_str(&format!(
            "[potential]\na = {a:?}\nb = {b:?}\nc = {c:?}\n\n[nc]\nvariant = \"complex\"\n\n[sweep]\ntheta = [0.01]\nm = [1, 1]\nn = [0, 0]\n"
        ))
        .map_err(fail)?;
        let sweep = run_sweep(&cfg);
        let report = render_report(&sweep);
        let case = sweep.cases.first().ok_or("no radial case")?;
        let mut found = false;
        for cmp in &case.closed_forms {
            let (Some(integral), Some(c0)) = (cmp.inverse_square_discrepancy(), cmp.c0_discrepancy()) else {
                continue;
            };
            let shown = format!("{integral:.3e}");
            if !report.contains(&shown) {
                return Err(format!("report for ({a}, {b}, {c}) omits discrepancy {shown}"));
            }
            if integral > 1e-6 || c0 > 1e-6 {
                found = true;
            }
            lines.push(format!("({a}, {b}, {c}) δ = {}: integral {integral:.2e}, C₀ {c0:.2e}", cmp.delta));
        }
        if !found {
            return Err(format!("no literal-vs-quadrature discrepancy quantified for ({a}, {b}, {c})"));
        }
    }
    Ok(lines.join("; "))
}

fn determinism() -> Outcome {
    let config = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/fixture.toml");
    let dirs: Vec<tempfile::TempDir> = (0..2).map(|_| tempfile::tempdir()).collect::<Result<_, _>>().map_err(fail)?;
    for dir in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_nc-spectra"))
            .arg("run")
            .arg(&config)
            .arg("--out-dir")
            .arg(dir.path())
            .env_remove(nc_spectra::config::OUT_DIR_ENV)
            .output()
            .map_err(fail)?;
        if !status.status.success() {
            return Err(format!("run failed: {}", String::from_utf8_lossy(&status.stderr)));
        }
    }
    let mut sizes = Vec::new();
    for name in ["spectrum.csv", "levels.svg"] {
        let a = std::fs::read(dirs[0].path().join(name)).map_err(fail)?;
        let b = std::fs::read(dirs[1].path().join(name)).map_err(fail)?;
        if a != b {
            return Err(format!("{name} differs between runs"));
        }
        sizes.push(format!("{name} {} bytes", a.len()));
    }
    Ok(format!("identical: {}", sizes.join(", ")))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "series vs finite-difference oracle", expect: Expect::Pass, run: oracle_equivalence },
        Criterion { id: 2, name: "oscillator limits", expect: Expect::Pass, run: oscillator_limits },
        Criterion { id: 3, name: "theta = 0 reduction", expect: Expect::Pass, run: theta_zero_reduction },
        Criterion { id: 4, name: "theta linearity", expect: Expect::Pass, run: theta_linearity },
        Criterion { id: 5, name: "m-proportionality (canonical)", expect: Expect::Pass, run: m_proportionality },
        Criterion {
            id: 6,
            name: "branch structure (complex)",
            expect: Expect::KnownFailure(divergent_ground_state),
            run: branch_structure,
        },
        Criterion { id: 7, name: "degeneracy lifting", expect: Expect::Pass, run: degeneracy_lifting },
        Criterion { id: 8, name: "incomplete gamma identities", expect: Expect::Pass, run: special_functions },
        Criterion { id: 9, name: "closed-form audit", expect: Expect::Pass, run: closed_form_audit },
        Criterion { id: 10, name: "determinism", expect: Expect::Pass, run: determinism },
    ];
    let start = Instant::now();
    let mut unexpected = 0;
    for c in &criteria {
        let outcome = (c.run)();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        let note = match (&c.expect, &outcome) {
            (Expect::Pass, Ok(_)) => "",
            (Expect::Pass, Err(_)) => {
                unexpected += 1;
                ""
            }
            (Expect::KnownFailure(matches), Err(d)) if matches(d) => " [known limitation]",
            (Expect::KnownFailure(_), _) => {
                unexpected += 1;
                " [known limitation no longer reproduces as expected]"
            }
        };
        println!("{tag} criterion {:>2} {}: {detail}{note}", c.id, c.name);
    }
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected outcome(s)");
        ExitCode::FAILURE
    }
}
