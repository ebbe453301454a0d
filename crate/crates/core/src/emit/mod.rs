//! Output files for a sweep: CSV table, SVG level diagram, markdown report.

mod csv;
mod report;
mod svg;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

pub use self::csv::{emit_csv, write_csv, CSV_HEADER};
pub use self::report::{emit_report, render_report};
pub use self::svg::{emit_svg, render_svg, SVG_HEIGHT, SVG_WIDTH};

use crate::config::OutputKind;
use crate::sweep::Sweep;

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, bytes)
}

/// Writes every output the sweep's config requests into `dir`; returns the paths written.
pub fn emit_all(sweep: &Sweep, dir: &Path) -> io::Result<Vec<PathBuf>> {
    if sweep.rows.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "no rows to emit"));
    }
    let mut written = Vec::new();
    for kind in [OutputKind::Csv, OutputKind::Svg, OutputKind::Report] {
        if !sweep.config.wants(kind) {
            continue;
        }
        let path = match kind {
            OutputKind::Csv => {
                let p = dir.join("spectrum.csv");
                emit_csv(&sweep.rows, &p)?;
                p
            }
            OutputKind::Svg => {
                let p = dir.join("levels.svg");
                emit_svg(&sweep.rows, &p)?;
                p
            }
            OutputKind::Report => {
                let p = dir.join("report.md");
                emit_report(sweep, &p)?;
                p
            }
        };
        written.push(path);
    }
    Ok(written)
}
