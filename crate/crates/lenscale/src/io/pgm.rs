//! Binary graymaps. Rows run from the top of the domain (largest y) down;
//! 16-bit samples are big-endian.

use std::path::Path;

use super::Field;
use crate::error::{Error, Result};

const MAX16: f64 = 65535.0;

/// Encodes a 2D field as a 16-bit binary graymap.
pub fn encode(field: &Field) -> Vec<u8> {
    let [nx, ny, _] = field.dims;
    let mut out = format!("P5\n{nx} {ny}\n65535\n").into_bytes();
    out.reserve(2 * nx * ny);
    for iy in (0..ny).rev() {
        for &v in &field.values[iy * nx..(iy + 1) * nx] {
            let s = (v.clamp(0.0, 1.0) * MAX16).round() as u16;
            out.extend_from_slice(&s.to_be_bytes());
        }
    }
    out
}

pub fn write(path: &Path, field: &Field) -> Result<()> {
    if !field.is_2d() {
        return Err(Error::format(path, "graymaps hold 2D fields only"));
    }
    std::fs::write(path, encode(field)).map_err(|e| Error::io(path, e))
}

/// Header tokens, skipping whitespace and `#` comments.
fn header(bytes: &[u8], count: usize) -> std::result::Result<(Vec<String>, usize), String> {
    let mut tokens = Vec::new();
    let mut i = 0;
    while tokens.len() < count {
        while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b'#') {
            if bytes[i] == b'#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if start == i {
            return Err("truncated header".into());
        }
        tokens.push(String::from_utf8_lossy(&bytes[start..i]).into_owned());
    }
    // Exactly one whitespace byte separates the header from the samples.
    Ok((tokens, i + 1))
}

pub fn decode(bytes: &[u8]) -> std::result::Result<Field, String> {
    let (t, start) = header(bytes, 4)?;
    if t[0] != "P5" {
        return Err(format!("expected a binary graymap (P5), found `{}`", t[0]));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|e| format!("bad header value `{s}`: {e}"));
    let (nx, ny, maxval) = (num(&t[1])?, num(&t[2])?, num(&t[3])?);
    if nx == 0 || ny == 0 || maxval == 0 || maxval > 65535 {
        return Err(format!("unsupported header {nx} x {ny}, maxval {maxval}"));
    }
    let width = if maxval > 255 { 2 } else { 1 };
    let data = bytes.get(start..).unwrap_or(&[]);
    if data.len() < nx * ny * width {
        return Err(format!("expected {} bytes of samples, found {}", nx * ny * width, data.len()));
    }
    let mut values = vec![0.0; nx * ny];
    for (k, chunk) in data.chunks_exact(width).take(nx * ny).enumerate() {
        let s = if width == 2 { u16::from_be_bytes([chunk[0], chunk[1]]) as f64 } else { chunk[0] as f64 };
        let (row, ix) = (k / nx, k % nx);
        values[ix + nx * (ny - 1 - row)] = s / maxval as f64;
    }
    Field::new([nx, ny, 1], values).map_err(|e| e.to_string())
}

pub fn read(path: &Path) -> Result<Field> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes).map_err(|m| Error::format(path, m))
}
