//! CSV and PGM writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Full-precision decimal: 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Comma-separated rows under a `# pluri <version> <command>` line and a
/// header row.
pub struct CsvWriter<W: Write> {
    out: W,
    columns: usize,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W, command: &str, header: &[&str]) -> io::Result<Self> {
        writeln!(out, "# pluri {VERSION} {command}")?;
        writeln!(out, "{}", header.join(","))?;
        Ok(CsvWriter {
            out,
            columns: header.len(),
        })
    }

    pub fn row(&mut self, fields: &[String]) -> io::Result<()> {
        debug_assert_eq!(fields.len(), self.columns);
        writeln!(self.out, "{}", fields.join(","))
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

/// The CSV sink: a file when given, stdout otherwise.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Binary 16-bit PGM (P5, big-endian). `values` is row-major with row 0 at
/// the bottom; each value maps to `round(65535·v)` clamped, NaN to 0.
pub fn write_pgm(path: &Path, width: usize, height: usize, values: &[f64]) -> io::Result<()> {
    assert_eq!(values.len(), width * height);
    let mut out = BufWriter::new(File::create(path)?);
    write!(out, "P5\n{width} {height}\n65535\n")?;
    for j in (0..height).rev() {
        for &v in &values[j * width..(j + 1) * width] {
            let level = if v.is_nan() { 0 } else { (65535.0 * v).round().clamp(0.0, 65535.0) as u16 };
            out.write_all(&level.to_be_bytes())?;
        }
    }
    out.flush()
}
