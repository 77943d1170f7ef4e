//! Residual rows and their CSV form, plus the grid dump/load format.
//!
//! CSV schema is fixed: header row, comma separators, `.` decimal, 17
//! significant digits so every f64 round-trips bit-exactly.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use coulomb_core::geometry::{make_grid, QuadratureGrid, SurfaceSpec};
use coulomb_core::specfun::TorusModulus;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRow {
    pub n: u64,
    pub exact: f64,
    pub asymptotic: f64,
    pub residual: f64,
    pub scaled_residual: f64,
}

impl ResidualRow {
    pub fn new(n: u64, exact: f64, asymptotic: f64) -> Self {
        let residual = (exact - asymptotic).abs();
        ResidualRow {
            n,
            exact,
            asymptotic,
            residual,
            scaled_residual: residual * n as f64 / (n as f64).ln(),
        }
    }
}

pub const CSV_HEADER: &str = "n,exact,asymptotic,residual,scaled_residual";

fn fmt(v: f64) -> String {
    // 17 significant digits round-trip any finite f64
    format!("{v:.16e}")
}

pub fn write_rows(path: &Path, header_comment: &str, rows: &[ResidualRow]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    if !header_comment.is_empty() {
        writeln!(out, "# {header_comment}")?;
    }
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            fmt(r.exact),
            fmt(r.asymptotic),
            fmt(r.residual),
            fmt(r.scaled_residual)
        )?;
    }
    Ok(())
}

pub fn parse_rows(text: &str) -> Result<Vec<ResidualRow>> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != CSV_HEADER {
                return Err(CliError::Config(format!("unexpected CSV header '{line}'")));
            }
            saw_header = true;
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 5 {
            return Err(CliError::Config(format!("bad CSV row '{line}'")));
        }
        let n: u64 = parts[0]
            .parse()
            .map_err(|_| CliError::Config(format!("bad n in '{line}'")))?;
        let nums: Vec<f64> = parts[1..]
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| CliError::Config(format!("bad number in '{line}'")))?;
        rows.push(ResidualRow {
            n,
            exact: nums[0],
            asymptotic: nums[1],
            residual: nums[2],
            scaled_residual: nums[3],
        });
    }
    Ok(rows)
}

/// Dump a grid as CSV with the versioned header
/// `# coulomb-grid v1 <genus> <re(tau)> <im(tau)> <resolution>`.
pub fn dump_grid(path: &Path, grid: &QuadratureGrid) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let (re, im) = match grid.surface {
        SurfaceSpec::Sphere => (0.0, 0.0),
        SurfaceSpec::Torus(t) => (t.get().re, t.get().im),
    };
    writeln!(
        out,
        "# coulomb-grid v1 {} {} {} {}",
        grid.surface.genus(),
        fmt(re),
        fmt(im),
        grid.resolution
    )?;
    writeln!(out, "re,im,weight")?;
    for (z, w) in grid.nodes.iter().zip(&grid.weights) {
        writeln!(out, "{},{},{}", fmt(z.re), fmt(z.im), fmt(*w))?;
    }
    Ok(())
}

/// Load a grid dump: rebuilds the grid from the header parameters and
/// verifies the stored nodes and weights against it.
pub fn load_grid(path: &Path) -> Result<QuadratureGrid> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Config("empty grid file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 7 || parts[0] != "#" || parts[1] != "coulomb-grid" || parts[2] != "v1" {
        return Err(CliError::Config(format!("bad grid header '{header}'")));
    }
    let genus: u32 = parts[3]
        .parse()
        .map_err(|_| CliError::Config("bad genus in grid header".into()))?;
    let re: f64 = parts[4].parse().map_err(|_| CliError::Config("bad tau".into()))?;
    let im: f64 = parts[5].parse().map_err(|_| CliError::Config("bad tau".into()))?;
    let resolution: usize = parts[6]
        .parse()
        .map_err(|_| CliError::Config("bad resolution".into()))?;
    let surface = match genus {
        0 => SurfaceSpec::Sphere,
        1 => SurfaceSpec::Torus(
            TorusModulus::new(Complex64::new(re, im))
                .map_err(|e| CliError::Config(e.to_string()))?,
        ),
        g => return Err(CliError::Config(format!("unsupported genus {g} in grid file"))),
    };
    let grid = make_grid(surface, resolution).map_err(|e| CliError::Config(e.to_string()))?;
    let mut idx = 0usize;
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line == "re,im,weight" {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(CliError::Config(format!("bad grid row '{line}'")));
        }
        let re: f64 = cols[0].parse().map_err(|_| CliError::Config("bad node".into()))?;
        let im: f64 = cols[1].parse().map_err(|_| CliError::Config("bad node".into()))?;
        let w: f64 = cols[2].parse().map_err(|_| CliError::Config("bad weight".into()))?;
        if idx >= grid.len() {
            return Err(CliError::Config("grid file has extra rows".into()));
        }
        let z = grid.nodes[idx];
        if (z.re - re).abs() > 1e-12 || (z.im - im).abs() > 1e-12
            || (grid.weights[idx] - w).abs() > 1e-12 * w.abs().max(1.0)
        {
            return Err(CliError::Config(format!("grid row {idx} does not match")));
        }
        idx += 1;
    }
    if idx != grid.len() {
        return Err(CliError::Config("grid file truncated".into()));
    }
    Ok(grid)
}
