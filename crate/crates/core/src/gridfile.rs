//! Plain-text grid export.
//!
//! ```text
//! # torharm-grid v1
//! # <rho_min> <rho_max> <n_rho> <z_min> <z_max> <n_z> <a>
//! rho,z,value,flag
//! ...
//! ```
//!
//! Rows are row-major with `z` outer. Floats use 17 significant digits so a
//! write/read cycle is exact; NaN values are written as `NaN`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::torus::{CellFlag, FieldGrid, GridSpec};

pub const MAGIC: &str = "# torharm-grid v1";

fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_grid(grid: &FieldGrid) -> String {
    let s = &grid.spec;
    let mut out = String::with_capacity(64 * (grid.values.len() + 2));
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(
        out,
        "# {} {} {} {} {} {} {}",
        num(s.rho_min),
        num(s.rho_max),
        s.n_rho,
        num(s.z_min),
        num(s.z_max),
        s.n_z,
        num(grid.a)
    );
    for (rho, z, value, flag) in grid.cells() {
        let _ = writeln!(out, "{},{},{},{}", num(rho), num(z), num(value), flag.as_str());
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("not a number: {field:?}")))
}

pub fn read_grid(text: &str) -> Result<FieldGrid> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim_end() == MAGIC => {}
        _ => return Err(parse_err(1, format!("expected {MAGIC:?}"))),
    }
    let (ln, meta) = lines.next().ok_or_else(|| parse_err(2, "missing grid description"))?;
    let fields: Vec<&str> = meta
        .strip_prefix('#')
        .ok_or_else(|| parse_err(ln, "grid description must start with '#'"))?
        .split_whitespace()
        .collect();
    if fields.len() != 7 {
        return Err(parse_err(ln, format!("expected 7 fields, found {}", fields.len())));
    }
    let count = |f: &str| {
        f.parse::<usize>()
            .map_err(|_| parse_err(ln, format!("not a grid size: {f:?}")))
    };
    let spec = GridSpec {
        rho_min: parse_f64(fields[0], ln)?,
        rho_max: parse_f64(fields[1], ln)?,
        n_rho: count(fields[2])?,
        z_min: parse_f64(fields[3], ln)?,
        z_max: parse_f64(fields[4], ln)?,
        n_z: count(fields[5])?,
    };
    let a = parse_f64(fields[6], ln)?;
    spec.validate().map_err(|e| parse_err(ln, e.to_string()))?;

    let total = spec.n_rho * spec.n_z;
    let mut values = Vec::with_capacity(total);
    let mut flags = Vec::with_capacity(total);
    for (ln, row) in lines {
        if row.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = row.split(',').collect();
        if cols.len() != 4 {
            return Err(parse_err(ln, format!("expected 4 columns, found {}", cols.len())));
        }
        let idx = values.len();
        if idx >= total {
            return Err(parse_err(ln, format!("more than {total} rows")));
        }
        let rho = parse_f64(cols[0], ln)?;
        let z = parse_f64(cols[1], ln)?;
        let (ir, iz) = (idx % spec.n_rho, idx / spec.n_rho);
        let (want_rho, want_z) = (spec.rho_at(ir), spec.z_at(iz));
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + y.abs());
        if !close(rho, want_rho) || !close(z, want_z) {
            return Err(parse_err(
                ln,
                format!("row {idx} at ({rho}, {z}) but the grid expects ({want_rho}, {want_z})"),
            ));
        }
        values.push(parse_f64(cols[2], ln)?);
        let flag = cols[3].trim();
        flags.push(CellFlag::parse(flag).ok_or_else(|| parse_err(ln, format!("unknown flag {flag:?}")))?);
    }
    if values.len() != total {
        return Err(parse_err(
            text.lines().count(),
            format!("expected {total} rows, found {}", values.len()),
        ));
    }
    Ok(FieldGrid { spec, a, values, flags })
}
