//! Text formats for surfaces and fit reports.
//!
//! Grid form:
//!
//! ```text
//! # grid nx=3 ny=2 x0=-1 y0=0 dx=1 dy=1 [cx=0 cy=0 rim=1]
//! 0.1,0.2,nan
//! 0.3,0.4,0.5
//! ```
//!
//! Row `j` holds heights at `y0 + j·dy`. The optional `cx`, `cy` and `rim`
//! keys fix the disk center and rim radius. Long form has the header
//! `x_mm,y_mm,z_mm` and one point per line; the coordinates must form a
//! uniform lattice, and lattice cells without a row are missing. `nan`
//! marks a missing height in both forms.

use std::collections::BTreeMap;

use super::grid::{GridLayout, SurfaceGrid};
use super::FitReport;
use crate::error::{Error, Result};
use crate::format::sig;

/// Header of the long form.
pub const LONG_HEADER: &str = "x_mm,y_mm,z_mm";

/// Relative tolerance on lattice spacing in long-form input.
const LATTICE_TOL: f64 = 1e-6;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_value(s: &str, line: usize) -> Result<f64> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("nan") {
        return Ok(f64::NAN);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(parse_err(
            line,
            format!("non-finite value '{s}' (use 'nan' for missing)"),
        )),
        Err(_) => Err(parse_err(line, format!("invalid number '{s}'"))),
    }
}

fn parse_coord(s: &str, line: usize) -> Result<f64> {
    let v = parse_value(s, line)?;
    if v.is_nan() {
        return Err(parse_err(line, "coordinates may not be missing"));
    }
    Ok(v)
}

/// First non-blank line (1-based number, trimmed) and the text after it.
fn split_header(text: &str) -> Result<(usize, &str, &str)> {
    let mut offset = 0;
    for (k, line) in text.split_inclusive('\n').enumerate() {
        offset += line.len();
        if !line.trim().is_empty() {
            return Ok((k + 1, line.trim(), &text[offset..]));
        }
    }
    Err(Error::Empty("input is empty".into()))
}

/// Comma-separated records of `body` with 1-based line numbers in the
/// enclosing text, where `body` starts after line `first_line`.
fn records(body: &str, first_line: usize) -> Result<Vec<(usize, csv::StringRecord)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(body.as_bytes());
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(first_line + line, e.to_string())
        })?;
        let line = first_line + rec.position().map_or(0, |p| p.line() as usize);
        out.push((line, rec));
    }
    Ok(out)
}

/// Parses either form, chosen by the first non-blank line.
pub fn parse_surface(text: &str) -> Result<SurfaceGrid> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    match first {
        Some(l) if l.starts_with('#') => parse_grid(text),
        Some(l) if l.replace(' ', "") == LONG_HEADER => parse_long(text),
        Some(_) => Err(parse_err(
            1,
            format!("expected '# grid ...' or '{LONG_HEADER}' header"),
        )),
        None => Err(Error::Empty("input is empty".into())),
    }
}

/// Parses the grid form.
pub fn parse_grid(text: &str) -> Result<SurfaceGrid> {
    let (hline, header, body) = split_header(text)?;
    let rest = header
        .strip_prefix('#')
        .map(str::trim_start)
        .and_then(|h| h.strip_prefix("grid"))
        .ok_or_else(|| parse_err(hline, "expected '# grid' header"))?;

    let mut keys = BTreeMap::new();
    for tok in rest.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(hline, format!("malformed field '{tok}'")))?;
        if !matches!(
            k,
            "nx" | "ny" | "x0" | "y0" | "dx" | "dy" | "cx" | "cy" | "rim"
        ) {
            return Err(parse_err(hline, format!("unknown header key '{k}'")));
        }
        if keys.insert(k, v).is_some() {
            return Err(parse_err(hline, format!("duplicate header key '{k}'")));
        }
    }
    let count = |k: &str| -> Result<usize> {
        let v = keys
            .get(k)
            .ok_or_else(|| parse_err(hline, format!("missing header key '{k}'")))?;
        v.parse().map_err(|_| {
            parse_err(
                hline,
                format!("{k} must be a non-negative integer, got '{v}'"),
            )
        })
    };
    let real =
        |k: &str| -> Result<Option<f64>> { keys.get(k).map(|v| parse_coord(v, hline)).transpose() };
    let required = |k: &str| -> Result<f64> {
        real(k)?.ok_or_else(|| parse_err(hline, format!("missing header key '{k}'")))
    };
    let layout = GridLayout {
        nx: count("nx")?,
        ny: count("ny")?,
        x0: required("x0")?,
        y0: required("y0")?,
        dx: required("dx")?,
        dy: required("dy")?,
    };
    let center = match (real("cx")?, real("cy")?) {
        (Some(x), Some(y)) => Some((x, y)),
        (None, None) => None,
        _ => return Err(parse_err(hline, "cx and cy must be given together")),
    };
    let rim = real("rim")?;
    layout
        .validate()
        .map_err(|e| parse_err(hline, e.to_string()))?;

    let mut heights = Vec::with_capacity(layout.len());
    let mut rows = 0;
    for (ln, record) in records(body, hline)? {
        if rows == layout.ny {
            return Err(parse_err(
                ln,
                format!("more than ny = {} data rows", layout.ny),
            ));
        }
        if record.len() != layout.nx {
            return Err(parse_err(
                ln,
                format!("expected {} values, got {}", layout.nx, record.len()),
            ));
        }
        for field in record.iter() {
            heights.push(parse_value(field, ln)?);
        }
        rows += 1;
    }
    if rows != layout.ny {
        return Err(parse_err(
            text.lines().count(),
            format!("expected {} data rows, got {rows}", layout.ny),
        ));
    }
    SurfaceGrid::new(layout, heights, center, rim)
}

/// Sorted distinct values forming a uniform lattice: `(start, step, count)`.
fn lattice(mut v: Vec<f64>, axis: &str) -> Result<(f64, f64, usize)> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    if v.len() == 1 {
        return Ok((v[0], 1.0, 1));
    }
    let n = v.len();
    let step = (v[n - 1] - v[0]) / (n - 1) as f64;
    for (k, &x) in v.iter().enumerate() {
        if (x - (v[0] + k as f64 * step)).abs() > LATTICE_TOL * step {
            return Err(parse_err(
                0,
                format!("{axis} coordinates are not uniformly spaced"),
            ));
        }
    }
    Ok((v[0], step, n))
}

/// Parses the long form.
pub fn parse_long(text: &str) -> Result<SurfaceGrid> {
    let (hline, header, body) = split_header(text)?;
    if header.replace(' ', "") != LONG_HEADER {
        return Err(parse_err(hline, format!("expected header '{LONG_HEADER}'")));
    }
    let mut points = Vec::new();
    for (ln, record) in records(body, hline)? {
        if record.len() != 3 {
            return Err(parse_err(
                ln,
                format!("expected 3 fields, got {}", record.len()),
            ));
        }
        points.push((
            ln,
            parse_coord(&record[0], ln)?,
            parse_coord(&record[1], ln)?,
            parse_value(&record[2], ln)?,
        ));
    }
    if points.is_empty() {
        return Err(Error::Empty("no data rows".into()));
    }
    let (x0, dx, nx) = lattice(points.iter().map(|p| p.1).collect(), "x")?;
    let (y0, dy, ny) = lattice(points.iter().map(|p| p.2).collect(), "y")?;
    let layout = GridLayout {
        nx,
        ny,
        x0,
        y0,
        dx,
        dy,
    };
    let mut heights = vec![f64::NAN; layout.len()];
    let mut seen = vec![false; layout.len()];
    for (ln, x, y, z) in points {
        let i = ((x - x0) / dx).round() as usize;
        let j = ((y - y0) / dy).round() as usize;
        let k = j * nx + i;
        if seen[k] {
            return Err(parse_err(ln, format!("duplicate point ({x}, {y})")));
        }
        seen[k] = true;
        heights[k] = z;
    }
    SurfaceGrid::new(layout, heights, None, None)
}

/// Grid-form text including the center and rim keys.
pub fn write_grid(grid: &SurfaceGrid) -> String {
    let l = grid.layout();
    let (cx, cy) = grid.center();
    let mut out = format!(
        "# grid nx={} ny={} x0={} y0={} dx={} dy={} cx={} cy={} rim={}\n",
        l.nx,
        l.ny,
        sig(l.x0),
        sig(l.y0),
        sig(l.dx),
        sig(l.dy),
        sig(cx),
        sig(cy),
        sig(grid.rim_radius())
    );
    for row in grid.heights().chunks(l.nx) {
        let fields: Vec<String> = row.iter().map(|&h| sig(h)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Flat JSON object with the scalar fields of a report.
pub fn write_report(rep: &FitReport) -> String {
    let num = |k: &str, v: f64| {
        format!(
            "  \"{k}\": {}",
            if v.is_finite() { sig(v) } else { "null".into() }
        )
    };
    let fields = [
        num("a", rep.params.a),
        num("b", rep.params.b),
        num("alpha", rep.params.alpha.value()),
        num("rim_radius_mm", rep.params.rim_radius),
        num("mae_mm", rep.mae),
        num("rmse_mm", rep.rmse),
        num("max_abs_residual_mm", rep.max_residual),
        num("objective_mm2", rep.objective),
        format!("  \"n_points_used\": {}", rep.n_points_used),
        format!("  \"objective_evals\": {}", rep.objective_evals),
        format!("  \"converged\": {}", rep.converged),
        num("final_simplex_size", rep.final_simplex_size),
        format!("  \"sign_flipped\": {}", rep.orientation.flipped),
        num("height_shift_mm", rep.orientation.shift),
    ];
    format!("{{\n{}\n}}\n", fields.join(",\n"))
}
