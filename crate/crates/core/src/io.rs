//! CSV and JSON matrix files.
//!
//! CSV holds one row per line with comma-separated complex literals
//! (`a`, `a+bi`, `a-bi`, `bi`). JSON holds
//! `{"rows": n, "cols": n, "data": [[{"re": r, "im": i}, ...], ...]}`.
//! Both writers emit shortest or 17-significant-digit representations, so
//! `parse(write(m))` reproduces `m` bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidArgument(format!("unknown format '{other}' (expected csv or json)"))),
        }
    }

    /// Guesses the format from the file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?;
        Format::parse(ext).ok()
    }

    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_real(s: &str) -> Option<f64> {
    if s.is_empty() || s.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses a single complex literal.
pub fn parse_complex(s: &str) -> Option<C64> {
    let Some(body) = s.strip_suffix('i') else {
        return parse_real(s).map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => parse_real(t),
    };
    match split {
        Some(p) => Some(C64::new(parse_real(&body[..p])?, imag(&body[p..])?)),
        None => Some(C64::new(0.0, imag(body)?)),
    }
}

pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{sign}{:.16e}i", z.re, z.im.abs())
}

pub fn parse_csv(text: &str) -> Result<ComplexMatrix> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut column = 1;
        for field in line.split(',') {
            let lead = field.len() - field.trim_start().len();
            let lit = field.trim();
            if lit.is_empty() {
                return Err(parse_error(line_no, column + lead, "empty entry"));
            }
            let z = parse_complex(lit)
                .ok_or_else(|| parse_error(line_no, column + lead, format!("invalid complex literal '{lit}'")))?;
            row.push(z);
            column += field.chars().count() + 1;
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_error(
                    line_no,
                    1,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_error(1, 1, "no rows"));
    }
    ComplexMatrix::from_rows(&rows)
}

pub fn write_csv(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|&z| format_complex(z)).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<JsonEntry>>,
}

pub fn parse_json(text: &str) -> Result<ComplexMatrix> {
    let doc: JsonMatrix =
        serde_json::from_str(text).map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
    if doc.data.len() != doc.rows {
        return Err(parse_error(
            1,
            1,
            format!("\"data\" has {} rows, header says {}", doc.data.len(), doc.rows),
        ));
    }
    let mut values = Vec::with_capacity(doc.rows * doc.cols);
    for (i, row) in doc.data.iter().enumerate() {
        if row.len() != doc.cols {
            return Err(parse_error(
                1,
                1,
                format!("row {i} of \"data\" has {} entries, header says {}", row.len(), doc.cols),
            ));
        }
        values.extend(row.iter().map(|e| C64::new(e.re, e.im)));
    }
    ComplexMatrix::new(doc.rows, doc.cols, values)
}

pub fn write_json(m: &ComplexMatrix) -> Result<String> {
    if let Some(z) = m.as_slice().iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite(z.to_string()));
    }
    let doc = JsonMatrix {
        rows: m.rows(),
        cols: m.cols(),
        data: (0..m.rows())
            .map(|i| m.row(i).iter().map(|z| JsonEntry { re: z.re, im: z.im }).collect())
            .collect(),
    };
    serde_json::to_string(&doc).map_err(|e| Error::Io(e.to_string()))
}

pub fn parse(text: &str, format: Format) -> Result<ComplexMatrix> {
    match format {
        Format::Csv => parse_csv(text),
        Format::Json => parse_json(text),
    }
}

pub fn write(m: &ComplexMatrix, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(write_csv(m)),
        Format::Json => write_json(m),
    }
}

fn resolve(path: &Path, format: Option<Format>) -> Result<Format> {
    format.or_else(|| Format::from_path(path)).ok_or_else(|| {
        Error::InvalidArgument(format!("cannot infer format of '{}'; pass it explicitly", path.display()))
    })
}

pub fn read_file(path: &Path, format: Option<Format>) -> Result<ComplexMatrix> {
    let format = resolve(path, format)?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text, format)
}

pub fn write_file(path: &Path, m: &ComplexMatrix, format: Option<Format>) -> Result<()> {
    let format = resolve(path, format)?;
    let text = write(m, format)?;
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
