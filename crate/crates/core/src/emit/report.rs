use std::fmt::Write as _;
use std::io;
use std::path::Path;

use super::write_atomic;
use crate::model::{SpinBranch, Variant};
use crate::perturbation::ClosedFormComparison;
use crate::sweep::{Sweep, DISCREPANCY_TOL};

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.10e}")).unwrap_or_else(|| "—".into())
}

fn rel(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "—".into())
}

fn audit_rows(s: &mut String, c: &ClosedFormComparison) {
    let _ = writeln!(
        s,
        "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
        c.n,
        c.m,
        c.delta,
        opt(c.quadrature),
        opt(c.inverse_square_literal),
        rel(c.inverse_square_discrepancy()),
        opt(c.c0_reference()),
        opt(c.c0_literal),
        rel(c.c0_discrepancy()),
        rel(c.completed_square_discrepancy()),
    );
}

/// The two competing forms of the constant branch term, per unit θ.
fn branch_term_rows(s: &mut String, sweep: &Sweep) {
    let p = sweep.config.params;
    let _ = writeln!(s, "## Constant branch term per unit θ\n");
    let _ = writeln!(
        s,
        "Two literal forms of the constant branch term. The literal a-term mode uses the first; \
         the second is shown for comparison only.\n"
    );
    let _ = writeln!(s, "| m | branch | −(a/2 + b)(m − 2s_z) | (a − b/2)(m + 2s_z) | difference |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    let mut ms: Vec<u32> = sweep.cases.iter().map(|c| c.m).collect();
    ms.sort_unstable();
    ms.dedup();
    for m in ms {
        for branch in [SpinBranch::Up, SpinBranch::Down] {
            let m_f = f64::from(m);
            let used = -(p.a / 2.0 + p.b) * (m_f - 2.0 * branch.s_z()) + 0.0;
            let alt = (p.a - p.b / 2.0) * (m_f + 2.0 * branch.s_z()) + 0.0;
            let _ = writeln!(s, "| {m} | {} | {used} | {alt} | {} |", branch.symbol(), alt - used);
        }
    }
    s.push('\n');
}

/// Markdown comparison of the literal formulas against the reference paths.
pub fn render_report(sweep: &Sweep) -> String {
    let cfg = &sweep.config;
    let p = cfg.params;
    let mut s = String::new();
    let _ = writeln!(s, "# Spectrum comparison report\n");
    let _ = writeln!(s, "Potential: a = {}, b = {}, c = {}  ", p.a, p.b, p.c);
    let _ = writeln!(
        s,
        "Variant: {}; a-term: {:?}; closed form: {:?}; energy: {:?}; branch sign: {:?}; angular measure: {:?}\n",
        cfg.nc.variant,
        cfg.nc.a_term_mode,
        cfg.nc.closed_form_mode,
        cfg.nc.energy_source,
        cfg.nc.branch_sign,
        cfg.nc.angular_measure
    );
    let _ = writeln!(
        s,
        "Reference: quadrature first-order shift on the termination energy. Literal: constant a-term, \
         incomplete-gamma closed forms and oscillator energy formula.\n"
    );

    let _ = writeln!(s, "## Literal vs reference totals\n");
    let flagged: Vec<_> = sweep
        .rows
        .iter()
        .filter(|r| match (r.paper_total, r.reference_total) {
            (Some(_), Some(_)) => r.paper_discrepancy().is_some_and(|d| d > DISCREPANCY_TOL),
            (Some(_), None) => true,
            _ => false,
        })
        .collect();
    let _ = writeln!(
        s,
        "{} of {} rows differ by more than {DISCREPANCY_TOL:e} relative (or have no finite reference).\n",
        flagged.len(),
        sweep.rows.len()
    );
    if !flagged.is_empty() {
        let _ = writeln!(s, "| variant | n | m | branch | θ | literal E_total | reference E_total | relative difference |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|---|");
        for r in &flagged {
            let diff = match r.paper_discrepancy() {
                Some(d) => format!("{d:.3e}"),
                None => format!(
                    "reference undefined: {}",
                    r.reference_error.as_deref().unwrap_or("no value")
                ),
            };
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} | {} | {} |",
                r.variant,
                r.n,
                r.m,
                r.branch.map(|b| b.symbol()).unwrap_or(""),
                r.theta,
                opt(r.paper_total),
                opt(r.reference_total),
                diff
            );
        }
        s.push('\n');
    }
    let failed: Vec<_> = sweep.rows.iter().filter(|r| r.error.is_some()).collect();
    if !failed.is_empty() {
        let _ = writeln!(s, "### Rows without a value in the selected mode\n");
        for r in failed {
            let _ = writeln!(
                s,
                "- n = {}, m = {}, branch {}, θ = {}: {}",
                r.n,
                r.m,
                r.branch.map(|b| b.symbol()).unwrap_or("none"),
                r.theta,
                r.error.as_deref().unwrap_or_default()
            );
        }
        s.push('\n');
    }

    let _ = writeln!(s, "## Commutative energies\n");
    let _ = writeln!(s, "| n | m | c | admissible c | termination E | oscillator formula E | relative difference | oracle E |");
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|");
    for case in &sweep.cases {
        match &case.solution {
            Ok(sol) => {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} | {} | {} |",
                    case.n,
                    case.m,
                    p.c,
                    sol.termination_c,
                    sol.energy,
                    sol.paper_energy,
                    rel(Some((sol.paper_energy - sol.energy).abs() / sol.energy.abs().max(f64::MIN_POSITIVE))),
                    opt(case.oracle_energy())
                );
            }
            Err(e) => {
                let _ = writeln!(s, "| {} | {} | {} | — | — | — | — | {e} |", case.n, case.m, p.c);
            }
        }
    }
    s.push('\n');

    if cfg.nc.variant == Variant::Complex {
        branch_term_rows(&mut s, sweep);
    }

    let _ = writeln!(s, "## Closed-form audit of ∫ R² r⁻² dr\n");
    let _ = writeln!(
        s,
        "Literal single-integral form and ground-state coefficient C₀ at both indicial exponents, against \
         quadrature (C₀ reference = π c ∫ R² r⁻² dr). The last column checks the completed-square moments.\n"
    );
    let _ = writeln!(
        s,
        "| n | m | δ | quadrature | literal integral | rel. diff | C₀ reference | literal C₀ | rel. diff | completed square rel. diff |"
    );
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|---|---|");
    let mut notes = Vec::new();
    for case in &sweep.cases {
        for c in &case.closed_forms {
            audit_rows(&mut s, c);
            for note in &c.notes {
                notes.push(format!("n = {}, m = {}, δ = {}: {note}", c.n, c.m, c.delta));
            }
        }
    }
    s.push('\n');
    if !notes.is_empty() {
        for n in notes {
            let _ = writeln!(s, "- {n}");
        }
        s.push('\n');
    }

    if sweep.cases.iter().any(|c| c.oracle.is_some()) {
        let _ = writeln!(s, "## Finite-difference oracle\n");
        let _ = writeln!(s, "| n | m | series E | oracle E | relative difference | grid change | converged |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|");
        for case in &sweep.cases {
            let Some(oracle) = &case.oracle else { continue };
            match (oracle, &case.solution) {
                (Ok(o), Ok(sol)) => {
                    let e = case.oracle_energy();
                    let _ = writeln!(
                        s,
                        "| {} | {} | {} | {} | {} | {:.3e} | {} |",
                        case.n,
                        case.m,
                        sol.energy,
                        opt(e),
                        rel(e.map(|e| (e - sol.energy).abs() / e.abs())),
                        o.richardson_change,
                        o.converged
                    );
                }
                (Err(e), _) | (_, Err(e)) => {
                    let _ = writeln!(s, "| {} | {} | — | — | — | — | {e} |", case.n, case.m);
                }
            }
        }
        s.push('\n');
    }
    s
}

pub fn emit_report(sweep: &Sweep, path: &Path) -> io::Result<()> {
    if sweep.rows.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "no rows to emit"));
    }
    write_atomic(path, render_report(sweep).as_bytes())
}
