//! Object-map ingestion: sparse CSV records or a pair of 16-bit ASCII PGM
//! planes.
//!
//! CSV: header `i,j,T,phi_T`, one record per pixel, row-major 0-based
//! indices, every cell present exactly once.
//!
//! PGM: `<stem>.T.pgm` and `<stem>.phi.pgm`, both P2 with maxval 65535.
//! The transmission plane maps [0, 65535] linearly onto [0, 1]; the phase
//! plane maps [0, 65535] linearly onto [−π, π] (quantization ≤ π/65535).

use std::fs;
use std::path::{Path, PathBuf};

use upqi_core::imaging::ObjectMap;
use upqi_core::{wrap_phase, ObjectPixel};

use crate::error::CliError;

pub const CSV_HEADER: &str = "i,j,T,phi_T";
pub const PGM_MAXVAL: u32 = 65535;

/// Load an object map from `path`: a `.csv` record file, a PGM plane of a
/// `<stem>.T.pgm` / `<stem>.phi.pgm` pair, or the bare stem of such a pair.
pub fn load_object(path: &Path) -> Result<ObjectMap, CliError> {
    let name = path.to_string_lossy();
    if name.ends_with(".csv") {
        load_object_csv(path)
    } else {
        let stem = if let Some(s) = name.strip_suffix(".T.pgm") {
            PathBuf::from(s)
        } else if let Some(s) = name.strip_suffix(".phi.pgm") {
            PathBuf::from(s)
        } else {
            path.to_path_buf()
        };
        load_object_pgm_pair(&stem)
    }
}

fn load_object_csv(path: &Path) -> Result<ObjectMap, CliError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(CliError::FormatError("empty CSV file".into()));
    };
    if header.trim() != CSV_HEADER {
        return Err(CliError::FormatError(format!(
            "expected header `{CSV_HEADER}`, got `{}`",
            header.trim()
        )));
    }

    let mut records: Vec<(usize, usize, f64, f64)> = Vec::new();
    let mut max_i = 0usize;
    let mut max_j = 0usize;
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(CliError::FormatError(format!(
                "line {}: expected 4 fields, got {}",
                idx + 1,
                fields.len()
            )));
        }
        let i: usize = fields[0]
            .parse()
            .map_err(|_| CliError::FormatError(format!("line {}: bad row index", idx + 1)))?;
        let j: usize = fields[1]
            .parse()
            .map_err(|_| CliError::FormatError(format!("line {}: bad column index", idx + 1)))?;
        let t: f64 = fields[2]
            .parse()
            .map_err(|_| CliError::FormatError(format!("line {}: bad transmission", idx + 1)))?;
        let phi: f64 = fields[3]
            .parse()
            .map_err(|_| CliError::FormatError(format!("line {}: bad phase", idx + 1)))?;
        if !(0.0..=1.0).contains(&t) || !t.is_finite() {
            return Err(CliError::ValueOutOfRange(format!(
                "line {}: transmission {t} not in [0, 1]",
                idx + 1
            )));
        }
        if !phi.is_finite() {
            return Err(CliError::ValueOutOfRange(format!(
                "line {}: non-finite phase",
                idx + 1
            )));
        }
        max_i = max_i.max(i);
        max_j = max_j.max(j);
        records.push((i, j, t, phi));
    }
    if records.is_empty() {
        return Err(CliError::FormatError("CSV contains no pixel records".into()));
    }

    let (height, width) = (max_i + 1, max_j + 1);
    let mut cells: Vec<Option<ObjectPixel>> = vec![None; width * height];
    for (i, j, t, phi) in records {
        let slot = &mut cells[i * width + j];
        if slot.is_some() {
            return Err(CliError::FormatError(format!(
                "duplicate pixel ({i}, {j})"
            )));
        }
        *slot = Some(ObjectPixel::new(t, phi, 0.0)?);
    }
    let mut pixels = Vec::with_capacity(width * height);
    for (k, cell) in cells.into_iter().enumerate() {
        match cell {
            Some(p) => pixels.push(p),
            None => {
                return Err(CliError::IncompleteGrid(format!(
                    "missing pixel ({}, {})",
                    k / width,
                    k % width
                )))
            }
        }
    }
    Ok(ObjectMap::new(width, height, pixels)?)
}

fn load_object_pgm_pair(stem: &Path) -> Result<ObjectMap, CliError> {
    let t_path = PathBuf::from(format!("{}.T.pgm", stem.display()));
    let phi_path = PathBuf::from(format!("{}.phi.pgm", stem.display()));
    let (tw, th, t_values) = parse_pgm(&t_path)?;
    let (pw, ph, phi_values) = parse_pgm(&phi_path)?;
    if (tw, th) != (pw, ph) {
        return Err(CliError::FormatError(format!(
            "plane dimensions differ: {tw}x{th} vs {pw}x{ph}"
        )));
    }
    let mut pixels = Vec::with_capacity(tw * th);
    for (tv, pv) in t_values.iter().zip(&phi_values) {
        let t = *tv as f64 / PGM_MAXVAL as f64;
        let phi = -std::f64::consts::PI
            + std::f64::consts::TAU * (*pv as f64) / PGM_MAXVAL as f64;
        pixels.push(ObjectPixel::new(t, wrap_phase(phi), 0.0)?);
    }
    Ok(ObjectMap::new(tw, th, pixels)?)
}

/// Parse an ASCII (P2) PGM with maxval 65535. `#` comments are allowed
/// anywhere between tokens.
fn parse_pgm(path: &Path) -> Result<(usize, usize, Vec<u32>), CliError> {
    let text = fs::read_to_string(path)?;
    let mut tokens = text.lines().flat_map(|line| {
        line.split('#')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .collect::<Vec<_>>()
    });
    let magic = tokens
        .next()
        .ok_or_else(|| CliError::FormatError(format!("{}: empty file", path.display())))?;
    if magic != "P2" {
        return Err(CliError::FormatError(format!(
            "{}: expected ASCII PGM magic `P2`, got `{magic}`",
            path.display()
        )));
    }
    let mut next_usize = |what: &str| -> Result<usize, CliError> {
        tokens
            .next()
            .ok_or_else(|| CliError::FormatError(format!("{}: missing {what}", path.display())))?
            .parse()
            .map_err(|_| CliError::FormatError(format!("{}: bad {what}", path.display())))
    };
    let width = next_usize("width")?;
    let height = next_usize("height")?;
    let maxval = next_usize("maxval")?;
    if maxval as u32 != PGM_MAXVAL {
        return Err(CliError::FormatError(format!(
            "{}: maxval must be {PGM_MAXVAL}, got {maxval}",
            path.display()
        )));
    }
    let mut values = Vec::with_capacity(width * height);
    for k in 0..width * height {
        let v = next_usize(&format!("sample {k}"))? as u32;
        if v > PGM_MAXVAL {
            return Err(CliError::ValueOutOfRange(format!(
                "{}: sample {k} = {v} exceeds maxval",
                path.display()
            )));
        }
        values.push(v);
    }
    Ok((width, height, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
        let path = dir.path().join(name);
        let mut f = fs::File::create(&path).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        path
    }

    #[test]
    fn loads_two_by_two_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_temp(
            &dir,
            "obj.csv",
            "i,j,T,phi_T\n0,0,0,0\n0,1,1,0.5\n1,0,1,-0.5\n1,1,0,0\n",
        );
        let map = load_object(&path).unwrap();
        assert_eq!((map.width(), map.height()), (2, 2));
        assert_eq!(map.pixel(0, 1).transmission, 1.0);
        assert!((map.pixel(1, 0).transmission_phase + 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_duplicate_and_missing_pixels() {
        let dir = tempfile::tempdir().unwrap();
        let dup = write_temp(&dir, "dup.csv", "i,j,T,phi_T\n0,0,0.5,0\n0,0,0.6,0\n");
        assert!(matches!(
            load_object(&dup),
            Err(CliError::FormatError(_))
        ));
        let hole = write_temp(&dir, "hole.csv", "i,j,T,phi_T\n0,0,0.5,0\n1,1,0.5,0\n");
        assert!(matches!(
            load_object(&hole),
            Err(CliError::IncompleteGrid(_))
        ));
    }

    #[test]
    fn rejects_bad_header_and_values() {
        let dir = tempfile::tempdir().unwrap();
        let bad_header = write_temp(&dir, "h.csv", "i,j,T\n0,0,0.5\n");
        assert!(matches!(
            load_object(&bad_header),
            Err(CliError::FormatError(_))
        ));
        let bad_t = write_temp(&dir, "t.csv", "i,j,T,phi_T\n0,0,1.5,0\n");
        assert!(matches!(
            load_object(&bad_t),
            Err(CliError::ValueOutOfRange(_))
        ));
    }

    #[test]
    fn loads_pgm_pair_with_endpoint_mapping() {
        let dir = tempfile::tempdir().unwrap();
        write_temp(&dir, "obj.T.pgm", "P2\n2 1\n65535\n0 65535\n");
        write_temp(&dir, "obj.phi.pgm", "P2\n# phase plane\n2 1\n65535\n32768 65535\n");
        for entry in ["obj", "obj.T.pgm", "obj.phi.pgm"] {
            let map = load_object(&dir.path().join(entry)).unwrap();
            assert_eq!((map.width(), map.height()), (2, 1));
            assert_eq!(map.pixel(0, 0).transmission, 0.0);
            assert_eq!(map.pixel(0, 1).transmission, 1.0);
            // value 32768 of 65535 ≈ phase slightly above 0.
            assert!(map.pixel(0, 0).transmission_phase.abs() < 1e-4);
            assert!((map.pixel(0, 1).transmission_phase - std::f64::consts::PI).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_mismatched_planes_and_bad_maxval() {
        let dir = tempfile::tempdir().unwrap();
        write_temp(&dir, "a.T.pgm", "P2\n2 1\n65535\n0 1\n");
        write_temp(&dir, "a.phi.pgm", "P2\n1 1\n65535\n0\n");
        assert!(matches!(
            load_object(&dir.path().join("a")),
            Err(CliError::FormatError(_))
        ));
        write_temp(&dir, "b.T.pgm", "P2\n1 1\n255\n0\n");
        write_temp(&dir, "b.phi.pgm", "P2\n1 1\n65535\n0\n");
        assert!(matches!(
            load_object(&dir.path().join("b")),
            Err(CliError::FormatError(_))
        ));
    }
}
