//! Matrix and vector input files, scalar-field CSV, and JSON encodings of
//! fields and contour sets.
//!
//! Matrix JSON: `{"rows": n, "cols": m, "entries": [[re, im], ...]}` in
//! row-major order. Matrix CSV: one matrix row per line, comma-separated
//! tokens such as `1.5`, `-2j`, `0.25+1e-3i`.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::contour::{ContourSet, Polyline};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::spectra::{GridSpec, Quantity, ScalarField};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_matrix_json(text: &str) -> Result<CMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(json_error)?;
    if file.entries.len() != file.rows * file.cols {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix needs {} entries, file has {}",
            file.rows,
            file.cols,
            file.rows * file.cols,
            file.entries.len()
        )));
    }
    let data = file
        .entries
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    CMatrix::new(file.rows, file.cols, data)
}

/// Parses a complex literal: `a`, `bj`, `a+bj`, `a-bi`, `j`, `-i`.
pub fn parse_complex(token: &str) -> Option<Complex64> {
    let t = token.trim();
    if t.is_empty() {
        return None;
    }
    let finite = |c: Complex64| (c.re.is_finite() && c.im.is_finite()).then_some(c);
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t
            .parse::<f64>()
            .ok()
            .map(|re| Complex64::new(re, 0.0))
            .and_then(finite);
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| -> Option<f64> {
        match s {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => s.parse().ok(),
        }
    };
    let c = match split {
        Some(k) => Complex64::new(body[..k].parse().ok()?, imag(&body[k..])?),
        None => Complex64::new(0.0, imag(body)?),
    };
    finite(c)
}

pub fn parse_matrix_csv(text: &str) -> Result<CMatrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut col = 1;
        for tok in line.split(',') {
            let c = parse_complex(tok).ok_or_else(|| Error::Parse {
                line: ln + 1,
                column: col,
                message: format!("invalid complex number `{}`", tok.trim()),
            })?;
            row.push(c);
            col += tok.chars().count() + 1;
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::DimensionMismatch(format!(
                    "line {} has {} entries, expected {}",
                    ln + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty matrix".into(),
        });
    }
    let (n, m) = (rows.len(), rows[0].len());
    CMatrix::new(n, m, rows.into_iter().flatten().collect())
}

/// JSON if the first non-blank character is `{`, CSV otherwise.
pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    if text.trim_start().starts_with('{') {
        parse_matrix_json(text)
    } else {
        parse_matrix_csv(text)
    }
}

pub fn parse_matrix_file(path: &Path) -> Result<CMatrix> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}

/// A vector is any matrix file with a single row or a single column.
pub fn matrix_to_vector(m: &CMatrix) -> Result<CVector> {
    if m.cols() == 1 || m.rows() == 1 {
        CVector::new(m.as_slice().to_vec())
    } else {
        Err(Error::DimensionMismatch(format!(
            "expected a single row or column, got {}x{}",
            m.rows(),
            m.cols()
        )))
    }
}

pub fn matrix_to_json(m: &CMatrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.as_slice().iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>(),
    })
}

pub fn vector_to_matrix(v: &CVector) -> CMatrix {
    CMatrix::new(v.dim(), 1, v.as_slice().to_vec()).expect("non-empty finite vector")
}

/// 17 significant digits; `inf` for infinity.
pub fn format_real(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

fn parse_real(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        t => t.parse().ok(),
    }
}

/// Writes `re,im,value` rows, imaginary part outer and ascending.
pub fn emit_field_csv<W: Write>(field: &ScalarField, mut sink: W) -> Result<()> {
    writeln!(sink, "re,im,value")?;
    let g = &field.grid;
    for j in 0..g.ny {
        for i in 0..g.nx {
            let z = g.node(i, j);
            writeln!(
                sink,
                "{},{},{}",
                format_real(z.re),
                format_real(z.im),
                format_real(field.get(i, j))
            )?;
        }
    }
    Ok(())
}

/// Inverse of [`emit_field_csv`]; the grid is recovered from the node
/// coordinates.
pub fn parse_field_csv(text: &str, quantity: Quantity) -> Result<ScalarField> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "re,im,value" => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "expected header `re,im,value`".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut col = 1;
        let mut vals = [0.0; 3];
        let mut parts = line.split(',');
        for v in vals.iter_mut() {
            let tok = parts.next().unwrap_or("");
            *v = parse_real(tok).ok_or_else(|| Error::Parse {
                line: ln + 1,
                column: col,
                message: format!("invalid number `{tok}`"),
            })?;
            col += tok.len() + 1;
        }
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: ln + 1,
                column: col,
                message: "too many columns".into(),
            });
        }
        rows.push(vals);
    }
    if rows.len() < 4 {
        return Err(Error::DimensionMismatch(
            "field needs at least 2x2 nodes".into(),
        ));
    }
    let first_im = rows[0][1];
    let nx = rows.iter().take_while(|r| r[1] == first_im).count();
    if nx < 2 || rows.len() % nx != 0 {
        return Err(Error::DimensionMismatch(format!(
            "{} rows do not form a rectangular grid",
            rows.len()
        )));
    }
    let ny = rows.len() / nx;
    let last = rows[rows.len() - 1];
    let grid = GridSpec::new(rows[0][0], rows[nx - 1][0], first_im, last[1], nx, ny)?;
    ScalarField::new(grid, quantity, rows.iter().map(|r| r[2]).collect())
}

/// JSON number, or the string `"inf"` for infinity.
pub fn real_to_json(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(format_real(v))
    }
}

pub fn real_from_json(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => parse_real(s).filter(|x| x.is_infinite()),
        _ => None,
    }
}

pub fn grid_to_json(g: &GridSpec) -> Value {
    json!({
        "re_min": g.re_min, "re_max": g.re_max,
        "im_min": g.im_min, "im_max": g.im_max,
        "nx": g.nx, "ny": g.ny,
    })
}

pub fn field_to_json(f: &ScalarField) -> Value {
    json!({
        "grid": grid_to_json(&f.grid),
        "quantity": f.quantity.as_str(),
        "values": f.values.iter().map(|&v| real_to_json(v)).collect::<Vec<_>>(),
    })
}

fn polyline_to_json(p: &Polyline) -> Value {
    json!({
        "closed": p.closed,
        "points": p.points.iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>(),
    })
}

pub fn contours_to_json(set: &ContourSet) -> Value {
    json!({
        "levels": set.levels,
        "polylines": set
            .polylines
            .iter()
            .map(|lines| lines.iter().map(polyline_to_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}
