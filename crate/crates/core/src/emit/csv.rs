use std::io;
use std::path::Path;

use super::{fmt_f64, write_atomic};
use crate::sweep::SpectrumRow;

pub const CSV_HEADER: [&str; 12] = [
    "variant", "n", "m", "branch", "theta", "E_comm", "E_zeroth", "dE1", "E_total", "method", "oracle_E", "flags",
];

/// Writes the rows as CSV to any writer.
pub fn write_csv<W: io::Write>(rows: &[SpectrumRow], out: W) -> io::Result<()> {
    let mut w = ::csv::WriterBuilder::new().terminator(::csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.variant.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.branch.map(|b| b.symbol().to_string()).unwrap_or_default(),
            fmt_f64(r.theta),
            fmt_f64(r.e_comm),
            fmt_f64(r.e_zeroth),
            fmt_f64(r.de1),
            fmt_f64(r.e_total),
            r.method.as_str().to_string(),
            r.oracle_e.map(fmt_f64).unwrap_or_default(),
            r.flags.join(";"),
        ])?;
    }
    w.flush()
}

pub fn emit_csv(rows: &[SpectrumRow], path: &Path) -> io::Result<()> {
    if rows.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "no rows to emit"));
    }
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    write_atomic(path, &buf)
}
