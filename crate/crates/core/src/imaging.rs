//! Image reconstruction protocols over pixel maps.
//!
//! Two protocols recover each pixel's amplitude transmission and phase:
//!
//! - **QSI** (signal protocol): eight homodyne *means* at detection phases
//!   δ ∈ {0, π/2} and pump mismatches Δ ∈ {0, π/2, π, 3π/2} yield |G(Δ)|²,
//!   whose quadrature differences encode `T e^{iφ_T}`. Requires a coherent
//!   seed; the classical background cancels in the differences.
//! - **QFI** (noise protocol): four homodyne *variances* at the same pump
//!   mismatches encode the identical information through the quadrature
//!   noise alone, so it works with a vacuum seed (α = 0).
//!
//! Both reconstructions use the two-argument arctangent for the phase and
//! clamp noisy transmission estimates into [0, 1], flagging affected pixels
//! instead of failing whole-image scans.

use rayon::prelude::*;

use crate::error::CoreError;
use crate::moments::{mean_signal, variance_signal};
use crate::optics::{
    bogoliubov_coeffs, FieldParams, MeasurementSetting, ObjectPixel, SetupParams,
};
use crate::phase::wrapped_diff;
use crate::sampler::{derive_seed, estimate, sample_homodyne};

use std::f64::consts::{FRAC_PI_2, PI};

/// Pump mismatch values probed by both protocols, in setting-index order.
pub const PUMP_MISMATCHES: [f64; 4] = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];
/// Detection phases probed by the signal protocol, in setting-index order.
pub const DETECTION_PHASES: [f64; 2] = [0.0, FRAC_PI_2];

/// Relative threshold below which both quadrature differences are treated
/// as zero and the pixel phase is flagged undefined.
const PHASE_UNDEFINED_REL: f64 = 1e-12;

/// Known squeezer gain products entering the reconstruction denominators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    /// G₁G₂ = cosh r₁ · cosh r₂ ≥ 1.
    pub gain_product: f64,
    /// g₁g₂ = sinh r₁ · sinh r₂ ≥ 0.
    pub cross_gain_product: f64,
}

/// Exact gain products of the configured squeezers. Calibration is assumed
/// known; estimating it from reference pixels is out of scope.
pub fn calibrate(setup: &SetupParams) -> Calibration {
    Calibration {
        gain_product: setup.squeezer1.gain * setup.squeezer2.gain,
        cross_gain_product: setup.squeezer1.cross_gain * setup.squeezer2.cross_gain,
    }
}

/// Per-setting sample budget: exact expectation values or a finite draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Noiseless mode: return exact moments.
    Exact,
    /// Draw this many homodyne samples per measurement setting (≥ 2).
    Draws(u64),
}

/// Reconstruction protocol selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Signal protocol: reconstruct from homodyne means.
    Qsi,
    /// Noise protocol: reconstruct from homodyne variances.
    Qfi,
}

/// Per-pixel reconstruction outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelFlag {
    Ok,
    /// The raw estimate fell outside [0, 1] and was clamped.
    Clamped,
    /// Both quadrature differences were negligible; the phase is undefined
    /// (reported as 0) and excluded from phase error metrics.
    PhaseUndefined,
}

/// One reconstructed pixel, including the pre-clamp diagnostic value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelEstimate {
    pub t_hat: f64,
    pub phi_hat: f64,
    pub flag: PixelFlag,
    /// Transmission estimate before clamping into [0, 1].
    pub t_raw: f64,
}

/// Ground-truth object: a grid of pixels, row-major with `i` the row index.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectMap {
    width: usize,
    height: usize,
    pixels: Vec<ObjectPixel>,
}

impl ObjectMap {
    pub fn new(width: usize, height: usize, pixels: Vec<ObjectPixel>) -> Result<Self, CoreError> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(CoreError::EmptyMap);
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> ObjectPixel,
    ) -> Result<Self, CoreError> {
        if width == 0 || height == 0 {
            return Err(CoreError::EmptyMap);
        }
        let mut pixels = Vec::with_capacity(width * height);
        for i in 0..height {
            for j in 0..width {
                pixels.push(f(i, j));
            }
        }
        Self::new(width, height, pixels)
    }

    /// Synthetic target: a transmission step between the left and right
    /// halves with a smooth phase gradient across the frame.
    pub fn test_pattern(width: usize, height: usize) -> Result<Self, CoreError> {
        let n = (width * height).max(2) as f64;
        Self::from_fn(width, height, |i, j| {
            let t = if j < width / 2 { 0.2 } else { 0.8 };
            let frac = (i * width + j) as f64 / (n - 1.0);
            let phi = -3.0 + 6.0 * frac;
            ObjectPixel::new(t, phi, 0.0).expect("pattern values are valid")
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel(&self, i: usize, j: usize) -> &ObjectPixel {
        &self.pixels[i * self.width + j]
    }

    pub fn pixels(&self) -> &[ObjectPixel] {
        &self.pixels
    }
}

/// Reconstructed transmission/phase maps with per-pixel flags and the
/// pre-clamp diagnostics grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedMap {
    pub width: usize,
    pub height: usize,
    /// Row-major T̂ ∈ [0, 1].
    pub t_hat: Vec<f64>,
    /// Row-major φ̂_T ∈ (−π, π] (0 where the phase is undefined).
    pub phi_hat: Vec<f64>,
    pub flags: Vec<PixelFlag>,
    /// Row-major T̂ before clamping.
    pub t_raw: Vec<f64>,
}

/// Error metrics of a reconstruction against ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub rmse_t: f64,
    /// RMSE of wrapped phase differences, over pixels with defined phase.
    pub rmse_phi: f64,
    pub max_abs_err_t: f64,
    pub n_pixels: u64,
    /// 0 in noiseless (exact) mode.
    pub samples_per_setting: u64,
}

/// Eight mean estimates ⟨S(δ, Δ)⟩, ordered δ-major:
/// index = δ_index · 4 + Δ_index over [`DETECTION_PHASES`] × [`PUMP_MISMATCHES`].
///
/// `pixel_i`/`pixel_j` select the disjoint random stream for this pixel.
pub fn qsi_measure_pixel(
    setup: &SetupParams,
    pixel: &ObjectPixel,
    sampling: Sampling,
    master_seed: u64,
    pixel_i: usize,
    pixel_j: usize,
) -> Result<[f64; 8], CoreError> {
    if setup.field.seed_amplitude == 0.0 {
        return Err(CoreError::ZeroSeed);
    }
    let mut out = [0.0; 8];
    for (di, &delta) in DETECTION_PHASES.iter().enumerate() {
        for (mi, &mismatch) in PUMP_MISMATCHES.iter().enumerate() {
            let s = setup
                .with_pump_mismatch(mismatch)
                .with_detection_phase(delta);
            let coeffs = bogoliubov_coeffs(&s, pixel);
            let setting = MeasurementSetting::from_setup(&s);
            let mean = mean_signal(&coeffs, &s.field, &setting);
            let index = di * 4 + mi;
            out[index] = match sampling {
                Sampling::Exact => mean,
                Sampling::Draws(n) => {
                    if n < 2 {
                        return Err(CoreError::TooFewSamples);
                    }
                    let variance = variance_signal(&coeffs, &s.field);
                    let seed =
                        derive_seed(master_seed, pixel_i as u64, pixel_j as u64, index as u64);
                    let samples = sample_homodyne(mean, variance, n, seed)?;
                    estimate(&samples)?.mean_hat
                }
            };
        }
    }
    Ok(out)
}

/// Reconstruct one pixel from the eight signal-protocol means.
///
/// The detection-phase pair at each mismatch gives
/// `|G(Δ)|² = (⟨S(0,Δ)⟩² + ⟨S(π/2,Δ)⟩²) / (4α²β²)`; the quadrature
/// differences of |G|² across mismatches then yield
///
/// ```text
/// T̂  = √((|G(π/2)|²−|G(3π/2)|²)² + (|G(0)|²−|G(π)|²)²) / (4·G₁G₂·g₁g₂)
/// φ̂  = atan2(|G(π/2)|²−|G(3π/2)|², |G(0)|²−|G(π)|²)
/// ```
pub fn qsi_reconstruct(
    signals: &[f64; 8],
    cal: &Calibration,
    field: &FieldParams,
) -> Result<PixelEstimate, CoreError> {
    if cal.cross_gain_product == 0.0 {
        return Err(CoreError::ZeroGain);
    }
    if field.seed_amplitude == 0.0 {
        return Err(CoreError::ZeroSeed);
    }
    if field.lo_amplitude == 0.0 {
        return Err(CoreError::ZeroLocalOscillator);
    }
    let norm = 4.0 * field.seed_amplitude.powi(2) * field.lo_amplitude.powi(2);
    let mut g_sq = [0.0; 4];
    for (mi, g) in g_sq.iter_mut().enumerate() {
        *g = (signals[mi] * signals[mi] + signals[4 + mi] * signals[4 + mi]) / norm;
    }
    let sine_diff = g_sq[1] - g_sq[3];
    let cosine_diff = g_sq[0] - g_sq[2];
    let t_raw =
        sine_diff.hypot(cosine_diff) / (4.0 * cal.gain_product * cal.cross_gain_product);
    let scale = g_sq.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    Ok(assemble_estimate(t_raw, sine_diff, cosine_diff, scale))
}

/// Four variance estimates ⟨ΔS²(Δ)⟩ over [`PUMP_MISMATCHES`].
///
/// The variance carries the object information on its own, so this works
/// with a vacuum seed (α = 0); finite draws are taken from the full
/// distribution at the setup's own detection phase.
pub fn qfi_measure_pixel(
    setup: &SetupParams,
    pixel: &ObjectPixel,
    sampling: Sampling,
    master_seed: u64,
    pixel_i: usize,
    pixel_j: usize,
) -> Result<[f64; 4], CoreError> {
    let mut out = [0.0; 4];
    for (mi, &mismatch) in PUMP_MISMATCHES.iter().enumerate() {
        let s = setup.with_pump_mismatch(mismatch);
        let coeffs = bogoliubov_coeffs(&s, pixel);
        let variance = variance_signal(&coeffs, &s.field);
        out[mi] = match sampling {
            Sampling::Exact => variance,
            Sampling::Draws(n) => {
                if n < 2 {
                    return Err(CoreError::TooFewSamples);
                }
                let setting = MeasurementSetting::from_setup(&s);
                let mean = mean_signal(&coeffs, &s.field, &setting);
                let seed = derive_seed(master_seed, pixel_i as u64, pixel_j as u64, mi as u64);
                let samples = sample_homodyne(mean, variance, n, seed)?;
                estimate(&samples)?.var_hat
            }
        };
    }
    Ok(out)
}

/// Reconstruct one pixel from the four noise-protocol variances:
///
/// ```text
/// T̂  = √((⟨ΔS²(0)⟩−⟨ΔS²(π)⟩)² + (⟨ΔS²(π/2)⟩−⟨ΔS²(3π/2)⟩)²) / (8β²·G₁G₂·g₁g₂)
/// φ̂  = atan2(⟨ΔS²(π/2)⟩−⟨ΔS²(3π/2)⟩, ⟨ΔS²(0)⟩−⟨ΔS²(π)⟩)
/// ```
pub fn qfi_reconstruct(
    variances: &[f64; 4],
    cal: &Calibration,
    lo_amplitude: f64,
) -> Result<PixelEstimate, CoreError> {
    if cal.cross_gain_product == 0.0 {
        return Err(CoreError::ZeroGain);
    }
    if lo_amplitude == 0.0 {
        return Err(CoreError::ZeroLocalOscillator);
    }
    let sine_diff = variances[1] - variances[3];
    let cosine_diff = variances[0] - variances[2];
    let t_raw = sine_diff.hypot(cosine_diff)
        / (8.0 * lo_amplitude * lo_amplitude * cal.gain_product * cal.cross_gain_product);
    let scale = variances.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    Ok(assemble_estimate(t_raw, sine_diff, cosine_diff, scale))
}

fn assemble_estimate(t_raw: f64, sine_diff: f64, cosine_diff: f64, scale: f64) -> PixelEstimate {
    let threshold = PHASE_UNDEFINED_REL * scale;
    if sine_diff.abs() < threshold && cosine_diff.abs() < threshold {
        return PixelEstimate {
            t_hat: t_raw.clamp(0.0, 1.0),
            phi_hat: 0.0,
            flag: PixelFlag::PhaseUndefined,
            t_raw,
        };
    }
    let phi_hat = sine_diff.atan2(cosine_diff);
    if (0.0..=1.0).contains(&t_raw) {
        PixelEstimate {
            t_hat: t_raw,
            phi_hat,
            flag: PixelFlag::Ok,
            t_raw,
        }
    } else {
        PixelEstimate {
            t_hat: t_raw.clamp(0.0, 1.0),
            phi_hat,
            flag: PixelFlag::Clamped,
            t_raw,
        }
    }
}

/// Measure and reconstruct every pixel of `map`, returning the estimate
/// grids and error metrics against the ground truth.
///
/// Pixels are processed in parallel; each pixel's random stream derives only
/// from `(master_seed, i, j, setting_index)`, so results are independent of
/// the worker count.
pub fn scan_object(
    setup: &SetupParams,
    map: &ObjectMap,
    protocol: Protocol,
    sampling: Sampling,
    master_seed: u64,
) -> Result<(ReconstructedMap, Metrics), CoreError> {
    let cal = calibrate(setup);
    // Validate protocol feasibility once, up front: these conditions depend
    // only on the setup, so a per-pixel failure would fail every pixel.
    if cal.cross_gain_product == 0.0 {
        return Err(CoreError::ZeroGain);
    }
    if setup.field.lo_amplitude == 0.0 {
        return Err(CoreError::ZeroLocalOscillator);
    }
    if protocol == Protocol::Qsi && setup.field.seed_amplitude == 0.0 {
        return Err(CoreError::ZeroSeed);
    }
    if let Sampling::Draws(n) = sampling {
        if n < 2 {
            return Err(CoreError::TooFewSamples);
        }
    }

    let (w, h) = (map.width(), map.height());
    let estimates: Vec<PixelEstimate> = (0..w * h)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / w, idx % w);
            let pixel = map.pixel(i, j);
            match protocol {
                Protocol::Qsi => {
                    let signals =
                        qsi_measure_pixel(setup, pixel, sampling, master_seed, i, j)?;
                    qsi_reconstruct(&signals, &cal, &setup.field)
                }
                Protocol::Qfi => {
                    let variances =
                        qfi_measure_pixel(setup, pixel, sampling, master_seed, i, j)?;
                    qfi_reconstruct(&variances, &cal, setup.field.lo_amplitude)
                }
            }
        })
        .collect::<Result<_, _>>()?;

    let recon = ReconstructedMap {
        width: w,
        height: h,
        t_hat: estimates.iter().map(|e| e.t_hat).collect(),
        phi_hat: estimates.iter().map(|e| e.phi_hat).collect(),
        flags: estimates.iter().map(|e| e.flag).collect(),
        t_raw: estimates.iter().map(|e| e.t_raw).collect(),
    };
    let metrics = compute_metrics(map, &recon, sampling);
    Ok((recon, metrics))
}

fn compute_metrics(map: &ObjectMap, recon: &ReconstructedMap, sampling: Sampling) -> Metrics {
    let n = map.pixels().len();
    let mut sum_t = 0.0;
    let mut max_t = 0.0_f64;
    let mut sum_phi = 0.0;
    let mut n_phi = 0u64;
    for (k, truth) in map.pixels().iter().enumerate() {
        let err_t = (recon.t_hat[k] - truth.transmission).abs();
        sum_t += err_t * err_t;
        max_t = max_t.max(err_t);
        if recon.flags[k] != PixelFlag::PhaseUndefined {
            let err_phi = wrapped_diff(recon.phi_hat[k], truth.transmission_phase);
            sum_phi += err_phi * err_phi;
            n_phi += 1;
        }
    }
    Metrics {
        rmse_t: (sum_t / n as f64).sqrt(),
        rmse_phi: if n_phi == 0 {
            0.0
        } else {
            (sum_phi / n_phi as f64).sqrt()
        },
        max_abs_err_t: max_t,
        n_pixels: n as u64,
        samples_per_setting: match sampling {
            Sampling::Exact => 0,
            Sampling::Draws(n) => n,
        },
    }
}
