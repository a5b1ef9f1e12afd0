//! Result emission. All floating-point values are printed with 17
//! significant digits (round-trippable decimal); every file ends with a
//! trailing newline.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use upqi_core::imaging::{Metrics, ObjectMap, ReconstructedMap};
use upqi_core::wrap_phase;

use crate::error::CliError;
use crate::object_io::{CSV_HEADER, PGM_MAXVAL};

/// 17 significant digits, scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// The reconstructed map as a complete, reloadable object-map CSV
/// (`i,j,T,phi_T` with the estimated values).
pub fn write_recon_csv(path: &Path, recon: &ReconstructedMap) -> Result<(), CliError> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    for i in 0..recon.height {
        for j in 0..recon.width {
            let k = i * recon.width + j;
            writeln!(
                w,
                "{i},{j},{},{}",
                fmt_f64(recon.t_hat[k]),
                fmt_f64(recon.phi_hat[k])
            )?;
        }
    }
    Ok(w.flush()?)
}

/// Phase estimates alone, as `i,j,phi_hat` records.
pub fn write_phi_csv(path: &Path, recon: &ReconstructedMap) -> Result<(), CliError> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "i,j,phi_hat")?;
    for i in 0..recon.height {
        for j in 0..recon.width {
            writeln!(w, "{i},{j},{}", fmt_f64(recon.phi_hat[i * recon.width + j]))?;
        }
    }
    Ok(w.flush()?)
}

/// Ground-truth map in the ingestible CSV format.
pub fn write_object_csv(path: &Path, map: &ObjectMap) -> Result<(), CliError> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    for i in 0..map.height() {
        for j in 0..map.width() {
            let p = map.pixel(i, j);
            writeln!(
                w,
                "{i},{j},{},{}",
                fmt_f64(p.transmission),
                fmt_f64(p.transmission_phase)
            )?;
        }
    }
    Ok(w.flush()?)
}

pub fn write_metrics_txt(path: &Path, metrics: &Metrics) -> Result<(), CliError> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "rmse_T={}", fmt_f64(metrics.rmse_t))?;
    writeln!(w, "rmse_phi={}", fmt_f64(metrics.rmse_phi))?;
    writeln!(w, "max_abs_err_T={}", fmt_f64(metrics.max_abs_err_t))?;
    writeln!(w, "n_pixels={}", metrics.n_pixels)?;
    writeln!(w, "samples_per_setting={}", metrics.samples_per_setting)?;
    Ok(w.flush()?)
}

/// 16-bit PGM renders `<stem>.T.pgm` / `<stem>.phi.pgm` of the
/// reconstruction, reloadable as an object map (up to quantization).
pub fn write_recon_pgm_pair(stem: &Path, recon: &ReconstructedMap) -> Result<(), CliError> {
    let t_path = format!("{}.T.pgm", stem.display());
    let phi_path = format!("{}.phi.pgm", stem.display());
    write_pgm(Path::new(&t_path), recon.width, recon.height, |k| {
        quantize_unit(recon.t_hat[k])
    })?;
    write_pgm(Path::new(&phi_path), recon.width, recon.height, |k| {
        quantize_phase(recon.phi_hat[k])
    })
}

fn quantize_unit(t: f64) -> u32 {
    (t.clamp(0.0, 1.0) * PGM_MAXVAL as f64).round() as u32
}

fn quantize_phase(phi: f64) -> u32 {
    let unit = (wrap_phase(phi) + std::f64::consts::PI) / std::f64::consts::TAU;
    ((unit * PGM_MAXVAL as f64).round() as u32).min(PGM_MAXVAL)
}

fn write_pgm(
    path: &Path,
    width: usize,
    height: usize,
    value: impl Fn(usize) -> u32,
) -> Result<(), CliError> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "P2")?;
    writeln!(w, "{width} {height}")?;
    writeln!(w, "{PGM_MAXVAL}")?;
    for i in 0..height {
        let row: Vec<String> = (0..width)
            .map(|j| value(i * width + j).to_string())
            .collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(w.flush()?)
}
