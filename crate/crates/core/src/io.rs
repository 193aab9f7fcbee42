//! File formats. Every file boundary is in SI units, except raster pixel
//! sizes which are in nanometers.
//!
//! * Magnetoconductance trace: `# key=value` metadata lines, a `B_T,G_S`
//!   header, then numeric rows.
//! * TLM dataset: `# key=value` metadata lines, a `L_m,R_ohm` header, then
//!   numeric rows.
//! * Raster (`GPA1`): a text line `GPA1 <rows> <cols> <pixel_size_nm>`
//!   followed by `rows * cols` little-endian f32 values, row-major.
//! * Table: `#` comment lines and two whitespace-separated numbers per row.
//! * Key-value: `key=value` lines, `#` comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::fitting::MagnetoTrace;
use crate::gpa::{LatticeImage, Raster};
use crate::tlm::{TlmDataset, TlmPoint};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn line_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Line {
        line,
        message: message.into(),
    }
}

fn read_text(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

/// Metadata lines plus two-column numeric rows under a fixed header.
struct Csv {
    meta: Vec<(usize, String, String)>,
    rows: Vec<(usize, f64, f64)>,
}

fn parse_csv(text: &str, header: [&str; 2]) -> Result<Csv, FormatError> {
    let mut meta = Vec::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once('=') {
                meta.push((n, k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if !seen_header {
            if cells != header {
                return Err(line_err(
                    n,
                    format!("expected column header `{}`, found `{line}`", header.join(",")),
                ));
            }
            seen_header = true;
            continue;
        }
        if cells.len() != 2 {
            return Err(line_err(n, format!("expected 2 cells, found {}", cells.len())));
        }
        let num = |j: usize| {
            cells[j].parse::<f64>().map_err(|_| {
                line_err(n, format!("non-numeric {} cell `{}`", header[j], cells[j]))
            })
        };
        rows.push((n, num(0)?, num(1)?));
    }
    if !seen_header {
        return Err(FormatError::Invalid(format!(
            "missing column header `{}`",
            header.join(",")
        )));
    }
    Ok(Csv { meta, rows })
}

fn meta_number<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, FormatError> {
    value
        .parse()
        .map_err(|_| line_err(line, format!("invalid value `{value}` for {key}")))
}

pub const TRACE_HEADER: [&str; 2] = ["B_T", "G_S"];

pub fn parse_trace_str(text: &str) -> Result<MagnetoTrace, FormatError> {
    let csv = parse_csv(text, TRACE_HEADER)?;
    let (field, conductance): (Vec<f64>, Vec<f64>) = csv.rows.iter().map(|r| (r.1, r.2)).unzip();
    let mut trace =
        MagnetoTrace::new(field, conductance).map_err(|e| FormatError::Invalid(e.to_string()))?;
    for (n, key, value) in &csv.meta {
        match key.as_str() {
            "bias_mV" => trace.bias_mv = meta_number(*n, key, value)?,
            "temperature_K" => trace.temperature_k = meta_number(*n, key, value)?,
            "n_parallel" => {
                trace.n_parallel = meta_number(*n, key, value)?;
                if trace.n_parallel == 0 {
                    return Err(line_err(*n, "n_parallel must be >= 1"));
                }
            }
            "label" => trace.label = value.clone(),
            _ => {}
        }
    }
    Ok(trace)
}

pub fn parse_trace_csv(path: &Path) -> Result<MagnetoTrace, FormatError> {
    parse_trace_str(&read_text(path)?)
}

pub fn write_trace_csv(trace: &MagnetoTrace) -> String {
    let mut s = String::new();
    writeln!(s, "# bias_mV={}", fmt_f64(trace.bias_mv)).unwrap();
    writeln!(s, "# temperature_K={}", fmt_f64(trace.temperature_k)).unwrap();
    writeln!(s, "# n_parallel={}", trace.n_parallel).unwrap();
    writeln!(s, "# label={}", trace.label.replace('\n', " ")).unwrap();
    writeln!(s, "{}", TRACE_HEADER.join(",")).unwrap();
    for (b, g) in trace.field().iter().zip(trace.conductance()) {
        writeln!(s, "{},{}", fmt_f64(*b), fmt_f64(*g)).unwrap();
    }
    s
}

pub const TLM_HEADER: [&str; 2] = ["L_m", "R_ohm"];

pub fn parse_tlm_str(text: &str) -> Result<TlmDataset, FormatError> {
    let csv = parse_csv(text, TLM_HEADER)?;
    let mut n_parallel = 1u32;
    let mut temperature_k = 0.0;
    let mut label = String::new();
    for (n, key, value) in &csv.meta {
        match key.as_str() {
            "n_parallel" => n_parallel = meta_number(*n, key, value)?,
            "temperature_K" => temperature_k = meta_number(*n, key, value)?,
            "label" => label = value.clone(),
            _ => {}
        }
    }
    let points = csv
        .rows
        .iter()
        .map(|r| TlmPoint {
            length: r.1,
            resistance: r.2,
        })
        .collect();
    let mut data =
        TlmDataset::new(points, n_parallel).map_err(|e| FormatError::Invalid(e.to_string()))?;
    data.temperature_k = temperature_k;
    data.label = label;
    Ok(data)
}

pub fn parse_tlm_csv(path: &Path) -> Result<TlmDataset, FormatError> {
    parse_tlm_str(&read_text(path)?)
}

pub fn write_tlm_csv(data: &TlmDataset) -> String {
    let mut s = String::new();
    writeln!(s, "# n_parallel={}", data.n_parallel).unwrap();
    writeln!(s, "# temperature_K={}", fmt_f64(data.temperature_k)).unwrap();
    writeln!(s, "# label={}", data.label.replace('\n', " ")).unwrap();
    writeln!(s, "{}", TLM_HEADER.join(",")).unwrap();
    for p in data.points() {
        writeln!(s, "{},{}", fmt_f64(p.length), fmt_f64(p.resistance)).unwrap();
    }
    s
}

pub const RASTER_MAGIC: &str = "GPA1";

pub fn encode_raster(raster: &Raster) -> Vec<u8> {
    let header = format!(
        "{RASTER_MAGIC} {} {} {}\n",
        raster.rows(),
        raster.cols(),
        raster.pixel_size_nm()
    );
    let mut out = Vec::with_capacity(header.len() + 4 * raster.values().len());
    out.extend_from_slice(header.as_bytes());
    for v in raster.values() {
        out.extend_from_slice(&(*v as f32).to_le_bytes());
    }
    out
}

pub fn decode_raster(bytes: &[u8]) -> Result<Raster, FormatError> {
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| FormatError::Invalid("missing raster header line".into()))?;
    let header = std::str::from_utf8(&bytes[..nl])
        .map_err(|_| line_err(1, "raster header is not UTF-8"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.first() != Some(&RASTER_MAGIC) {
        return Err(line_err(1, format!("bad magic: expected `{RASTER_MAGIC}`")));
    }
    if fields.len() != 4 {
        return Err(line_err(1, "expected `GPA1 <rows> <cols> <pixel_size_nm>`"));
    }
    let rows: usize = fields[1]
        .parse()
        .map_err(|_| line_err(1, format!("invalid row count `{}`", fields[1])))?;
    let cols: usize = fields[2]
        .parse()
        .map_err(|_| line_err(1, format!("invalid column count `{}`", fields[2])))?;
    let pixel_size: f64 = fields[3]
        .parse()
        .map_err(|_| line_err(1, format!("invalid pixel size `{}`", fields[3])))?;
    if !(pixel_size > 0.0 && pixel_size.is_finite()) {
        return Err(FormatError::Invalid(format!(
            "pixel size must be > 0, got {pixel_size}"
        )));
    }
    let payload = &bytes[nl + 1..];
    let expected = rows
        .checked_mul(cols)
        .ok_or_else(|| line_err(1, "raster dimensions overflow"))?;
    let found = payload.len() / 4;
    if expected.checked_mul(4) != Some(payload.len()) {
        return Err(FormatError::Invalid(format!(
            "expected {expected} floats, found {found}{}",
            if !payload.len().is_multiple_of(4) { " (and a partial value)" } else { "" }
        )));
    }
    let values: Vec<f64> = payload
        .chunks_exact(4)
        .map(|c| f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]])))
        .collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(FormatError::Invalid(format!(
            "non-finite value at row {}, col {}",
            i / cols.max(1),
            i % cols.max(1)
        )));
    }
    Raster::new(rows, cols, pixel_size, values).map_err(|e| FormatError::Invalid(e.to_string()))
}

/// Reads any `GPA1` raster (phase or strain maps included).
pub fn read_raster(path: &Path) -> Result<Raster, FormatError> {
    let bytes = std::fs::read(path).map_err(|source| FormatError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    decode_raster(&bytes)
}

/// Reads a `GPA1` raster as a lattice image.
pub fn parse_raster(path: &Path) -> Result<LatticeImage, FormatError> {
    LatticeImage::new(read_raster(path)?).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn write_table(columns: [&str; 2], rows: &[(f64, f64)]) -> String {
    let mut s = format!("# {} {}\n", columns[0], columns[1]);
    for (x, y) in rows {
        writeln!(s, "{} {}", fmt_f64(*x), fmt_f64(*y)).unwrap();
    }
    s
}

pub fn parse_table(text: &str) -> Result<Vec<(f64, f64)>, FormatError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split_whitespace().collect();
        if cells.len() != 2 {
            return Err(line_err(i + 1, format!("expected 2 columns, found {}", cells.len())));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| line_err(i + 1, format!("non-numeric cell `{s}`")))
        };
        rows.push((num(cells[0])?, num(cells[1])?));
    }
    Ok(rows)
}

/// `key=value` lines; later keys override earlier ones.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, FormatError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| line_err(i + 1, format!("expected key=value, found `{line}`")))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(line_err(i + 1, "empty key"));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

pub fn read_key_values(path: &Path) -> Result<BTreeMap<String, String>, FormatError> {
    parse_key_values(&read_text(path)?)
}

pub fn write_key_values(entries: &[(&str, String)]) -> String {
    let mut s = String::new();
    for (k, v) in entries {
        writeln!(s, "{k}={v}").unwrap();
    }
    s
}
