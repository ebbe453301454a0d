use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use super::write_atomic;
use crate::model::SpinBranch;
use crate::sweep::SpectrumRow;

pub const SVG_WIDTH: f64 = 800.0;
pub const SVG_HEIGHT: f64 = 600.0;

const PLOT_LEFT: f64 = 90.0;
const PLOT_RIGHT: f64 = 620.0;
const PLOT_TOP: f64 = 50.0;
const PLOT_BOTTOM: f64 = 540.0;
const INSET: f64 = 40.0;

fn colour(branch: Option<SpinBranch>) -> &'static str {
    match branch {
        Some(SpinBranch::Up) => "#c0392b",
        Some(SpinBranch::Down) => "#2471a3",
        None => "#555555",
    }
}

fn branch_label(branch: Option<SpinBranch>) -> &'static str {
    match branch {
        Some(SpinBranch::Up) => "s_z = +1/2",
        Some(SpinBranch::Down) => "s_z = -1/2",
        None => "no spin label",
    }
}

type SeriesKey = (u32, u32, Option<SpinBranch>);

/// Level diagram: one short horizontal line per row at `(θ, E_total)`, dashed
/// connectors between neighbouring θ of the same `(n, m, branch)` series.
pub fn render_svg(rows: &[SpectrumRow]) -> String {
    let finite: Vec<&SpectrumRow> = rows.iter().filter(|r| r.e_total.is_finite()).collect();
    let mut thetas: Vec<f64> = finite.iter().map(|r| r.theta).collect();
    thetas.sort_by(f64::total_cmp);
    thetas.dedup();

    let (mut e_lo, mut e_hi) = finite
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.e_total), hi.max(r.e_total)));
    if finite.is_empty() {
        (e_lo, e_hi) = (0.0, 1.0);
    }
    let span = e_hi - e_lo;
    let pad = if span > 1e-12 * e_hi.abs().max(1.0) { 0.08 * span } else { 0.5 };
    e_lo -= pad;
    e_hi += pad;

    let (t_lo, t_hi) = (thetas.first().copied().unwrap_or(0.0), thetas.last().copied().unwrap_or(0.0));
    let x_of = |t: f64| {
        if t_hi > t_lo {
            PLOT_LEFT + INSET + (t - t_lo) / (t_hi - t_lo) * (PLOT_RIGHT - PLOT_LEFT - 2.0 * INSET)
        } else {
            0.5 * (PLOT_LEFT + PLOT_RIGHT)
        }
    };
    let y_of = |e: f64| PLOT_BOTTOM - (e - e_lo) / (e_hi - e_lo) * (PLOT_BOTTOM - PLOT_TOP);
    let min_gap = thetas
        .windows(2)
        .map(|w| x_of(w[1]) - x_of(w[0]))
        .fold(f64::INFINITY, f64::min);
    let half = if min_gap.is_finite() { (0.35 * min_gap).min(30.0) } else { 30.0 };

    let mut series: BTreeMap<SeriesKey, Vec<(f64, f64)>> = BTreeMap::new();
    for r in &finite {
        series.entry((r.n, r.m, r.branch)).or_default().push((r.theta, r.e_total));
    }
    for pts in series.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r##"<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="#ffffff"/>"##);
    let variant = rows.first().map(|r| r.variant.to_string()).unwrap_or_default();
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="28" text-anchor="middle" font-size="15">Energy levels vs θ ({variant})</text>"#,
        0.5 * (PLOT_LEFT + PLOT_RIGHT)
    );

    // Axes.
    let _ = writeln!(
        s,
        r##"<g stroke="#000000" stroke-width="1"><line x1="{PLOT_LEFT:.1}" y1="{PLOT_BOTTOM:.1}" x2="{PLOT_RIGHT:.1}" y2="{PLOT_BOTTOM:.1}"/><line x1="{PLOT_LEFT:.1}" y1="{PLOT_TOP:.1}" x2="{PLOT_LEFT:.1}" y2="{PLOT_BOTTOM:.1}"/></g>"##
    );
    let tick_thetas: Vec<f64> = if thetas.len() <= 8 {
        thetas.clone()
    } else {
        vec![t_lo, t_hi]
    };
    for t in tick_thetas {
        let x = x_of(t);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.1}" y1="{PLOT_BOTTOM:.1}" x2="{x:.1}" y2="{:.1}" stroke="#000000"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{t:.4}</text>"##,
            PLOT_BOTTOM + 5.0,
            PLOT_BOTTOM + 18.0
        );
    }
    for i in 0..=4 {
        let e = e_lo + (e_hi - e_lo) * f64::from(i) / 4.0;
        let y = y_of(e);
        let _ = writeln!(
            s,
            r##"<line x1="{:.1}" y1="{y:.1}" x2="{PLOT_LEFT:.1}" y2="{y:.1}" stroke="#000000"/><text x="{:.1}" y="{:.1}" text-anchor="end">{e:.4}</text>"##,
            PLOT_LEFT - 5.0,
            PLOT_LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">θ</text>"#,
        0.5 * (PLOT_LEFT + PLOT_RIGHT),
        PLOT_BOTTOM + 40.0
    );
    let _ = writeln!(
        s,
        r#"<text x="24" y="{:.1}" text-anchor="middle" transform="rotate(-90 24 {:.1})">E</text>"#,
        0.5 * (PLOT_TOP + PLOT_BOTTOM),
        0.5 * (PLOT_TOP + PLOT_BOTTOM)
    );

    // Levels, grouped by (n, m).
    type Series<'a> = (Option<SpinBranch>, &'a Vec<(f64, f64)>);
    let mut groups: BTreeMap<(u32, u32), Vec<Series>> = BTreeMap::new();
    for ((n, m, b), pts) in &series {
        groups.entry((*n, *m)).or_default().push((*b, pts));
    }
    for ((n, m), members) in &groups {
        let _ = writeln!(s, r#"<g class="group" data-n="{n}" data-m="{m}">"#);
        for (branch, pts) in members {
            let c = colour(*branch);
            for &(t, e) in pts.iter() {
                let (x, y) = (x_of(t), y_of(e));
                let _ = writeln!(
                    s,
                    r#"<line class="level" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{c}" stroke-width="2"/>"#,
                    x - half,
                    x + half
                );
            }
            for w in pts.windows(2) {
                let _ = writeln!(
                    s,
                    r#"<line class="connector" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{c}" stroke-width="1" stroke-dasharray="4 3"/>"#,
                    x_of(w[0].0) + half,
                    y_of(w[0].1),
                    x_of(w[1].0) - half,
                    y_of(w[1].1)
                );
            }
            if let Some(&(t, e)) = pts.last() {
                let sym = branch.map(|b| b.symbol()).unwrap_or("");
                let _ = writeln!(
                    s,
                    r#"<text x="{:.2}" y="{:.2}" fill="{c}">n={n} m={m}{sym}</text>"#,
                    x_of(t) + half + 4.0,
                    y_of(e) + 4.0
                );
            }
        }
        s.push_str("</g>\n");
    }

    // Legend.
    let mut present: Vec<Option<SpinBranch>> = series.keys().map(|k| k.2).collect();
    present.sort();
    present.dedup();
    let lx = PLOT_RIGHT + 45.0;
    let _ = writeln!(
        s,
        r##"<g class="legend"><rect x="{:.1}" y="{PLOT_TOP:.1}" width="135" height="{:.1}" fill="none" stroke="#999999"/>"##,
        lx - 10.0,
        20.0 + 18.0 * present.len() as f64
    );
    for (i, b) in present.iter().enumerate() {
        let y = PLOT_TOP + 20.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 20.0,
            colour(*b),
            lx + 26.0,
            y + 4.0,
            branch_label(*b)
        );
    }
    s.push_str("</g>\n");
    let missing = rows.len() - finite.len();
    if missing > 0 {
        let _ = writeln!(
            s,
            r##"<text x="{PLOT_LEFT:.1}" y="{:.1}" fill="#7f7f7f">{missing} row(s) without a finite total not drawn</text>"##,
            SVG_HEIGHT - 12.0
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg(rows: &[SpectrumRow], path: &Path) -> io::Result<()> {
    if rows.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "no rows to emit"));
    }
    write_atomic(path, render_svg(rows).as_bytes())
}
