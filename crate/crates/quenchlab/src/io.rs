//! File formats: the text field format (`N nx ny h x0 y0` header plus
//! row-major values, one row per line), radial profile CSV, and per-scale
//! table CSV.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::ScaleTable;
use crate::radial::RadialProfile;
use crate::solver::{Grid, ScalarField};

/// Serializes a field: header `N nx ny h x0 y0`, then one row of values per
/// line (1D stores ny = 1 and a single row).
pub fn field_to_string(field: &ScalarField) -> String {
    let g = field.grid();
    let (nx, ny) = match g.dim() {
        1 => (g.n_axis(), 1),
        _ => (g.n_axis(), g.n_axis()),
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {} {} {} {}",
        g.dim(),
        nx,
        ny,
        g.h(),
        g.origin()[0],
        g.origin()[1]
    );
    for j in 0..ny {
        let mut line = String::new();
        for i in 0..nx {
            if i > 0 {
                line.push(' ');
            }
            let _ = write!(line, "{}", field.at(i, j));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn write_field(path: &Path, field: &ScalarField) -> Result<()> {
    std::fs::write(path, field_to_string(field))?;
    Ok(())
}

pub fn parse_field(text: &str) -> Result<ScalarField> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::FieldFormat("empty file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 6 {
        return Err(Error::FieldFormat(format!(
            "header must be 'N nx ny h x0 y0', got {} fields",
            parts.len()
        )));
    }
    let dim: usize = parts[0].parse().map_err(|_| Error::FieldFormat("bad N".into()))?;
    let nx: usize = parts[1].parse().map_err(|_| Error::FieldFormat("bad nx".into()))?;
    let ny: usize = parts[2].parse().map_err(|_| Error::FieldFormat("bad ny".into()))?;
    let h: f64 = parts[3].parse().map_err(|_| Error::FieldFormat("bad h".into()))?;
    let x0: f64 = parts[4].parse().map_err(|_| Error::FieldFormat("bad x0".into()))?;
    let y0: f64 = parts[5].parse().map_err(|_| Error::FieldFormat("bad y0".into()))?;
    let grid = match dim {
        1 => {
            if ny != 1 {
                return Err(Error::FieldFormat("1D field must have ny = 1".into()));
            }
            Grid::interval(nx, x0, h)?
        }
        2 => {
            if ny != nx {
                return Err(Error::FieldFormat("2D fields are square: nx must equal ny".into()));
            }
            Grid::square(nx, [x0, y0], h)?
        }
        other => return Err(Error::FieldFormat(format!("unsupported dimension {other}"))),
    };
    let mut values = Vec::with_capacity(grid.node_count());
    for (row, line) in lines.enumerate() {
        if row >= ny {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::FieldFormat("trailing data after the last row".into()));
        }
        for tok in line.split_whitespace() {
            let v: f64 =
                tok.parse().map_err(|_| Error::FieldFormat(format!("bad value '{tok}'")))?;
            values.push(v);
        }
    }
    if values.len() != grid.node_count() {
        return Err(Error::FieldFormat(format!(
            "expected {} values, got {}",
            grid.node_count(),
            values.len()
        )));
    }
    ScalarField::new(grid, values)
}

pub fn read_field(path: &Path) -> Result<ScalarField> {
    parse_field(&std::fs::read_to_string(path)?)
}

/// Radial profile CSV: a comment header naming γ, operator, α, c_*, then
/// `r,u,du` rows.
pub fn profile_to_csv(profile: &RadialProfile) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# gamma={} operator={:?} dim={} alpha={} c_star={}",
        profile.gamma, profile.operator, profile.dimension, profile.alpha, profile.c_star
    );
    out.push_str("r,u,du\n");
    for &(r, u, du) in &profile.samples {
        let _ = writeln!(out, "{r},{u},{du}");
    }
    out
}

pub fn write_profile_csv(path: &Path, profile: &RadialProfile) -> Result<()> {
    std::fs::write(path, profile_to_csv(profile))?;
    Ok(())
}

/// Per-scale table CSV with columns `scale,raw,normalized`.
pub fn scale_table_to_csv(table: &ScaleTable) -> String {
    let mut out = String::from("scale,raw,normalized\n");
    for row in &table.rows {
        let _ = writeln!(out, "{},{},{}", row.scale, row.raw, row.normalized);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn field_roundtrip_1d_and_2d() {
        let g = Grid::interval(33, -1.0, 2.0 / 32.0).unwrap();
        let f = ScalarField::from_fn(g, |p| (p[0] * 3.1).sin());
        let back = parse_field(&field_to_string(&f)).unwrap();
        assert_eq!(f, back);

        let g = Grid::square(33, [0.25, -0.5], 0.125).unwrap();
        let f = ScalarField::from_fn(g, |p| p[0] * p[1] + 0.3);
        let back = parse_field(&field_to_string(&f)).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_field("").is_err());
        assert!(parse_field("1 33 1 0.1 0").is_err()); // 5 header fields
        assert!(parse_field("3 33 33 0.1 0 0\n").is_err()); // bad dim
        let g = Grid::interval(33, 0.0, 0.1).unwrap();
        let f = ScalarField::constant(g, 1.0);
        let mut s = field_to_string(&f);
        s.push_str("42.0\n");
        assert!(parse_field(&s).is_err()); // trailing data
    }

    proptest! {
        #[test]
        fn field_values_roundtrip_exactly(seed in 0u64..1000) {
            // shortest-roundtrip float formatting is lossless
            use rand::prelude::*;
            use rand_chacha::ChaCha8Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = Grid::interval(33, 0.0, 1.0 / 32.0).unwrap();
            let vals: Vec<f64> = (0..33).map(|_| rng.gen_range(-1e6..1e6)).collect();
            let f = ScalarField::new(g, vals).unwrap();
            let back = parse_field(&field_to_string(&f)).unwrap();
            prop_assert_eq!(f.values(), back.values());
        }
    }
}
