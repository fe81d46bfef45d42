//! Text snapshots of a [`Field`].
//!
//! ```text
//! anisovisc-field v1
//! x_min=-1 x_max=1 y_min=-4 y_max=4 nx=64 ny=1024 t=1
//! <ny lines of nx space-separated values, row j = 0 first>
//! ```
//!
//! Values use the shortest round-trip decimal form, so reading back is exact.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec};

pub const MAGIC: &str = "anisovisc-field v1";

pub fn format_snapshot(field: &Field) -> String {
    let g = &field.grid;
    let mut out = String::with_capacity(g.len() * 20 + 128);
    out.push_str(MAGIC);
    out.push('\n');
    writeln!(
        out,
        "x_min={} x_max={} y_min={} y_max={} nx={} ny={} t={}",
        g.x_min, g.x_max, g.y_min, g.y_max, g.nx, g.ny, field.time
    )
    .unwrap();
    for row in field.values.chunks(g.nx) {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            write!(out, "{v}").unwrap();
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn parse_snapshot(text: &str) -> Result<Field> {
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(Error::Snapshot(format!("missing `{MAGIC}` header")));
    }
    let header = lines
        .next()
        .ok_or_else(|| Error::Snapshot("missing grid line".into()))?;
    let get = |name: &str| -> Result<String> {
        header
            .split_whitespace()
            .find_map(|kv| kv.strip_prefix(name).and_then(|r| r.strip_prefix('=')))
            .map(str::to_string)
            .ok_or_else(|| Error::Snapshot(format!("grid line lacks `{name}`")))
    };
    let num = |s: String| {
        s.parse::<f64>()
            .map_err(|_| Error::Snapshot(format!("bad number `{s}`")))
    };
    let int = |s: String| {
        s.parse::<usize>()
            .map_err(|_| Error::Snapshot(format!("bad count `{s}`")))
    };
    let grid = GridSpec::new(
        num(get("x_min")?)?,
        num(get("x_max")?)?,
        num(get("y_min")?)?,
        num(get("y_max")?)?,
        int(get("nx")?)?,
        int(get("ny")?)?,
    )?;
    let time = num(get("t")?)?;

    let mut values = Vec::with_capacity(grid.len());
    for j in 0..grid.ny {
        let line = lines
            .next()
            .ok_or_else(|| Error::Snapshot(format!("expected {} rows, found {j}", grid.ny)))?;
        let before = values.len();
        for tok in line.split_whitespace() {
            values.push(num(tok.to_string())?);
        }
        if values.len() - before != grid.nx {
            return Err(Error::Snapshot(format!(
                "row {j} has {} values, expected {}",
                values.len() - before,
                grid.nx
            )));
        }
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(Error::Snapshot("trailing data after last row".into()));
    }
    Field::new(grid, values, time)
}

pub fn write_snapshot(path: &Path, field: &Field) -> Result<()> {
    std::fs::write(path, format_snapshot(field))?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Field> {
    parse_snapshot(&std::fs::read_to_string(path)?)
}
