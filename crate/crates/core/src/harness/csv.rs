//! CSV output: `#` metadata lines, a header row, then rows of numbers in
//! scientific notation with 17 significant digits.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::Result;

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn render_table(metadata: &[String], header: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for m in metadata {
        out.push_str("# ");
        out.push_str(m);
        out.push('\n');
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_table(path: &Path, metadata: &[String], header: &[String], rows: &[Vec<f64>]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(render_table(metadata, header, rows).as_bytes())?;
    Ok(())
}
