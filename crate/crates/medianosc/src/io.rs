//! Field file format: a one-line JSON header, a blank line, then the raw cell
//! values as little-endian IEEE 754 doubles in row-major order. A plain CSV
//! form (one value per line, 17 significant digits) is accepted for 1D data
//! and assumes the unit interval when no geometry is present.

use crate::error::{Error, Result};
use crate::grid::SampledFunction;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
struct FieldHeader {
    dim: usize,
    origin: Vec<f64>,
    side: f64,
    cells_per_side: usize,
    dtype: String,
    order: String,
}

/// Serializes a field into the header + raw-bytes layout.
pub fn field_to_bytes(f: &SampledFunction) -> Vec<u8> {
    let header = FieldHeader {
        dim: f.dim(),
        origin: f.origin().to_vec(),
        side: f.side(),
        cells_per_side: f.cells_per_side(),
        dtype: "f64".into(),
        order: "row-major".into(),
    };
    let mut out = serde_json::to_vec(&header).expect("header serializes");
    out.extend_from_slice(b"\n\n");
    for v in f.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Parses the header + raw-bytes layout.
pub fn field_from_bytes(bytes: &[u8]) -> Result<SampledFunction> {
    let sep = bytes
        .windows(2)
        .position(|w| w == b"\n\n")
        .ok_or_else(|| Error::Format("missing blank line after field header".into()))?;
    let header: FieldHeader = serde_json::from_slice(&bytes[..sep])
        .map_err(|e| Error::Format(format!("bad field header: {e}")))?;
    if header.dtype != "f64" {
        return Err(Error::Format(format!("unsupported dtype {}", header.dtype)));
    }
    if header.order != "row-major" {
        return Err(Error::Format(format!("unsupported order {}", header.order)));
    }
    let payload = &bytes[sep + 2..];
    let n_cells = header
        .cells_per_side
        .checked_pow(header.dim as u32)
        .ok_or_else(|| Error::Format("cell count overflows".into()))?;
    if payload.len() != n_cells * 8 {
        return Err(Error::Format(format!(
            "expected {} bytes of samples, got {}",
            n_cells * 8,
            payload.len()
        )));
    }
    let values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    SampledFunction::new(header.dim, header.origin, header.side, header.cells_per_side, values)
        .map_err(|e| Error::Format(e.to_string()))
}

pub fn write_field(path: &Path, f: &SampledFunction) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(&field_to_bytes(f))?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<SampledFunction> {
    if path.extension().and_then(|e| e.to_str()) == Some("csv") {
        return read_csv_1d(path);
    }
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    field_from_bytes(&bytes)
}

/// Writes a 1D field as one value per line at 17 significant digits,
/// which round-trips f64 exactly.
pub fn write_csv_1d(path: &Path, f: &SampledFunction) -> Result<()> {
    if f.dim() != 1 {
        return Err(Error::InvalidParameter(
            "CSV form only covers 1D fields".into(),
        ));
    }
    let mut out = String::with_capacity(f.n_cells() * 24);
    for v in f.values() {
        out.push_str(&format_f64(*v));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a one-value-per-line CSV as a 1D field on the unit interval.
pub fn read_csv_1d(path: &Path) -> Result<SampledFunction> {
    let text = fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        values.push(line.parse::<f64>().map_err(|e| {
            Error::Format(format!("line {}: {e}", lineno + 1))
        })?);
    }
    if values.is_empty() {
        return Err(Error::Format("CSV holds no values".into()));
    }
    let n = values.len();
    SampledFunction::new(1, vec![0.0], 1.0, n, values)
        .map_err(|e| Error::Format(e.to_string()))
}

/// Fixed 17-significant-digit float formatting used in all text outputs.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// JSON serialization with floats at 17 significant digits, so identical
/// inputs produce byte-identical output.
pub fn to_json_string(value: &serde_json::Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    serde::Serialize::serialize(value, &mut ser).expect("JSON value serializes");
    String::from_utf8(out).expect("JSON is UTF-8")
}

struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}
