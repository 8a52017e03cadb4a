//! Paired-sample input for the `estimate` command: two numeric columns per
//! line, comma- or whitespace-separated, optional single header line
//! detected by failing to parse as numbers.

use std::fs;
use std::path::Path;

use crate::empirical::BivariateSample;
use crate::error::{Error, Result};

/// Parse a two-column numeric text body into a sample. Blank lines and lines
/// starting with `#` are skipped; if the first content line does not parse
/// as two numbers it is treated as a header and dropped, once.
pub fn parse_paired_text(text: &str) -> Result<BivariateSample> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut header_allowed = true;
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_pair(trimmed) {
            Some((x, y)) => {
                header_allowed = false;
                xs.push(x);
                ys.push(y);
            }
            None if header_allowed => header_allowed = false,
            None => {
                return Err(Error::Parse(format!(
                    "line {}: expected two numeric fields, got {trimmed:?}",
                    idx + 1
                )));
            }
        }
    }
    if xs.is_empty() {
        return Err(Error::Parse("no data rows found".into()));
    }
    BivariateSample::new(xs, ys)
}

/// Read and parse a data file.
pub fn read_paired_file(path: &Path) -> Result<BivariateSample> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?;
    parse_paired_text(&text)
}

fn parse_pair(line: &str) -> Option<(f64, f64)> {
    let mut fields = line
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|f| !f.is_empty());
    let x = fields.next()?.parse::<f64>().ok()?;
    let y = fields.next()?.parse::<f64>().ok()?;
    if fields.next().is_some() {
        return None;
    }
    Some((x, y))
}
