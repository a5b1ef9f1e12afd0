//! Physical configuration of the two-squeezer imaging chain and the exact
//! coefficients of the detected output mode.
//!
//! The chain is: two-mode squeezer 1 on (signal, idler) → object beam
//! splitter on (idler, loss port) → two-mode squeezer 2 on (signal, idler)
//! → homodyne detection of the signal. Eliminating the intermediate modes
//! expresses the detected mode as a Bogoliubov combination of the three
//! inputs,
//!
//! ```text
//! a_out = signal · a_S  +  idler · a_I†  +  loss · a_L†
//! ```
//!
//! with `|signal|² − |idler|² − |loss|² = 1` so that `[a_out, a_out†] = 1`.

use num_complex::Complex64;

use crate::error::CoreError;
use crate::phase::{wrap_phase, wrapped_diff};

/// Tolerance used when matching a detection phase against a multiple of π/2.
const QUARTER_TURN_TOL: f64 = 1e-9;

/// One two-mode squeezer, parameterized by its real squeeze parameter.
///
/// The amplitude gain is `cosh r` and the conversion gain `sinh r`, so
/// `gain² − cross_gain² = 1` holds by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezerParams {
    /// Squeeze parameter, r ≥ 0.
    pub r: f64,
    /// Amplitude gain cosh r ≥ 1.
    pub gain: f64,
    /// Conversion gain sinh r ≥ 0.
    pub cross_gain: f64,
    /// Phase of the classical pump, wrapped to (−π, π].
    pub pump_phase: f64,
}

impl SqueezerParams {
    pub fn new(r: f64, pump_phase: f64) -> Result<Self, CoreError> {
        if !r.is_finite() || !pump_phase.is_finite() {
            return Err(CoreError::NonFinite("squeeze parameter"));
        }
        if r < 0.0 {
            return Err(CoreError::Negative("squeeze parameter"));
        }
        Ok(Self {
            r,
            gain: r.cosh(),
            cross_gain: r.sinh(),
            pump_phase: wrap_phase(pump_phase),
        })
    }
}

/// One object pixel, modeled as a lossless beam splitter.
///
/// `transmission² + reflection² = 1`; the reflection amplitude is derived
/// from the transmission at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectPixel {
    /// Amplitude transmission T ∈ [0, 1].
    pub transmission: f64,
    /// Transmission phase, wrapped to (−π, π].
    pub transmission_phase: f64,
    /// Amplitude reflection √(1 − T²).
    pub reflection: f64,
    /// Reflection phase, wrapped to (−π, π].
    pub reflection_phase: f64,
}

impl ObjectPixel {
    pub fn new(
        transmission: f64,
        transmission_phase: f64,
        reflection_phase: f64,
    ) -> Result<Self, CoreError> {
        if !transmission.is_finite()
            || !transmission_phase.is_finite()
            || !reflection_phase.is_finite()
        {
            return Err(CoreError::NonFinite("object pixel"));
        }
        if !(0.0..=1.0).contains(&transmission) {
            return Err(CoreError::OutOfRange("transmission"));
        }
        let reflection = (1.0 - transmission * transmission).max(0.0).sqrt();
        Ok(Self {
            transmission,
            transmission_phase: wrap_phase(transmission_phase),
            reflection,
            reflection_phase: wrap_phase(reflection_phase),
        })
    }

    /// Fully transparent pixel (T = 1, zero phases).
    pub fn transparent() -> Self {
        Self::new(1.0, 0.0, 0.0).expect("valid constants")
    }
}

/// Coherent seed and homodyne local oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    /// Coherent seed amplitude α ≥ 0 injected into the signal input.
    pub seed_amplitude: f64,
    /// Seed phase φ_α, wrapped to (−π, π].
    pub seed_phase: f64,
    /// Local-oscillator amplitude β ≥ 0.
    pub lo_amplitude: f64,
    /// Local-oscillator phase φ_β, wrapped to (−π, π].
    pub lo_phase: f64,
}

impl FieldParams {
    pub fn new(
        seed_amplitude: f64,
        seed_phase: f64,
        lo_amplitude: f64,
        lo_phase: f64,
    ) -> Result<Self, CoreError> {
        for v in [seed_amplitude, seed_phase, lo_amplitude, lo_phase] {
            if !v.is_finite() {
                return Err(CoreError::NonFinite("field parameter"));
            }
        }
        if seed_amplitude < 0.0 || lo_amplitude < 0.0 {
            return Err(CoreError::Negative("field amplitude"));
        }
        Ok(Self {
            seed_amplitude,
            seed_phase: wrap_phase(seed_phase),
            lo_amplitude,
            lo_phase: wrap_phase(lo_phase),
        })
    }
}

/// The two phase knobs that parameterize a measurement, derived from a
/// [`SetupParams`] so they stay consistent with it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    /// Detection phase δ = φ_α + φ_β, wrapped to (−π, π].
    pub detection_phase: f64,
    /// Pump phase mismatch Δ = pump2 − pump1, wrapped to (−π, π].
    pub pump_mismatch: f64,
    /// `Some(k)` when δ equals kπ/2 to within 1e−9; the asymptotic
    /// reference expressions branch on the parity of k.
    pub quarter_turns: Option<i64>,
}

impl MeasurementSetting {
    pub fn from_setup(setup: &SetupParams) -> Self {
        let detection_phase = wrap_phase(setup.field.seed_phase + setup.field.lo_phase);
        let pump_mismatch =
            wrap_phase(setup.squeezer2.pump_phase - setup.squeezer1.pump_phase);
        let k = (detection_phase / std::f64::consts::FRAC_PI_2).round();
        let quarter_turns = if wrapped_diff(detection_phase, k * std::f64::consts::FRAC_PI_2)
            .abs()
            <= QUARTER_TURN_TOL
        {
            Some(k as i64)
        } else {
            None
        };
        Self {
            detection_phase,
            pump_mismatch,
            quarter_turns,
        }
    }
}

/// Complete experimental configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetupParams {
    pub squeezer1: SqueezerParams,
    pub squeezer2: SqueezerParams,
    pub field: FieldParams,
}

impl SetupParams {
    pub fn new(squeezer1: SqueezerParams, squeezer2: SqueezerParams, field: FieldParams) -> Self {
        Self {
            squeezer1,
            squeezer2,
            field,
        }
    }

    /// Copy of this setup with the second pump retuned so that the pump
    /// mismatch Δ equals `mismatch`. Gains are untouched.
    pub fn with_pump_mismatch(&self, mismatch: f64) -> Self {
        let mut out = *self;
        out.squeezer2.pump_phase = wrap_phase(self.squeezer1.pump_phase + mismatch);
        out
    }

    /// Copy of this setup with the local-oscillator phase retuned so that
    /// the detection phase δ equals `detection`. Amplitudes are untouched.
    pub fn with_detection_phase(&self, detection: f64) -> Self {
        let mut out = *self;
        out.field.lo_phase = wrap_phase(detection - self.field.seed_phase);
        out
    }
}

/// Coefficients of the detected output mode on the three input modes,
/// together with the derived interference quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovCoeffs {
    /// Coefficient on the input-signal annihilation operator.
    pub signal: Complex64,
    /// Coefficient on the input-idler creation operator.
    pub idler: Complex64,
    /// Coefficient on the loss-port creation operator.
    pub loss: Complex64,
    /// Interference parameter x = T·g₁g₂/(G₁G₂) ∈ [0, 1).
    pub x: f64,
    /// Argument of the signal coefficient.
    pub signal_phase: f64,
    /// Modulus of the signal coefficient, ≥ 1.
    pub signal_mag: f64,
    /// Phase of the squeeze–transmit–squeeze term: Δ − φ_T.
    pub cascade_phase: f64,
    /// Phase of the transmitted-idler term: pump2 − φ_T.
    pub idler_phase: f64,
    /// Phase of the loss term: pump2 − reflection phase.
    pub loss_phase: f64,
}

/// Exact output-mode coefficients for a setup probing one object pixel.
///
/// The signal phase is evaluated as the two-argument arctangent of
/// `(x sin(Δ−φ_T), 1 + x cos(Δ−φ_T))`; for x < 1 the second argument is
/// positive, and the form stays well conditioned as x → 1.
pub fn bogoliubov_coeffs(setup: &SetupParams, pixel: &ObjectPixel) -> BogoliubovCoeffs {
    let g1 = &setup.squeezer1;
    let g2 = &setup.squeezer2;
    let t = pixel.transmission;

    let mismatch = wrap_phase(g2.pump_phase - g1.pump_phase);
    let cascade_phase = wrapped_diff(mismatch, pixel.transmission_phase);
    let idler_phase = wrapped_diff(g2.pump_phase, pixel.transmission_phase);
    let loss_phase = wrapped_diff(g2.pump_phase, pixel.reflection_phase);

    let signal = Complex64::new(g1.gain * g2.gain, 0.0)
        + Complex64::from_polar(g1.cross_gain * g2.cross_gain * t, cascade_phase);
    let idler = Complex64::from_polar(g1.cross_gain * g2.gain, g1.pump_phase)
        + Complex64::from_polar(g1.gain * g2.cross_gain * t, idler_phase);
    let loss = Complex64::from_polar(g2.cross_gain * pixel.reflection, loss_phase);

    let x = t * g1.cross_gain * g2.cross_gain / (g1.gain * g2.gain);
    let signal_phase = (x * cascade_phase.sin()).atan2(1.0 + x * cascade_phase.cos());
    let signal_mag =
        g1.gain * g2.gain * (x * x + 2.0 * x * cascade_phase.cos() + 1.0).sqrt();

    BogoliubovCoeffs {
        signal,
        idler,
        loss,
        x,
        signal_phase,
        signal_mag,
        cascade_phase,
        idler_phase,
        loss_phase,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn std_setup() -> SetupParams {
        SetupParams::new(
            SqueezerParams::new(0.5, 0.0).unwrap(),
            SqueezerParams::new(0.5, 0.0).unwrap(),
            FieldParams::new(1.0, 0.0, 1.0, 0.0).unwrap(),
        )
    }

    #[test]
    fn squeezer_identity_and_hyperbolic_values() {
        let s = SqueezerParams::new(0.0, 0.0).unwrap();
        assert_eq!(s.gain, 1.0);
        assert_eq!(s.cross_gain, 0.0);

        let s = SqueezerParams::new(0.5, 0.0).unwrap();
        assert!((s.gain - 1.127_625_965_206_380_7).abs() < 1e-15);
        assert!((s.cross_gain - 0.521_095_305_493_747_4).abs() < 1e-15);
        assert!((s.gain * s.gain - s.cross_gain * s.cross_gain - 1.0).abs() < 1e-12);
    }

    #[test]
    fn squeezer_rejects_bad_inputs() {
        assert_eq!(
            SqueezerParams::new(-1.0, 0.0),
            Err(CoreError::Negative("squeeze parameter"))
        );
        assert_eq!(
            SqueezerParams::new(f64::NAN, 0.0),
            Err(CoreError::NonFinite("squeeze parameter"))
        );
        assert_eq!(
            SqueezerParams::new(f64::INFINITY, 0.0),
            Err(CoreError::NonFinite("squeeze parameter"))
        );
    }

    #[test]
    fn object_pixel_reflection_is_pythagorean() {
        assert_eq!(ObjectPixel::new(1.0, 0.0, 0.0).unwrap().reflection, 0.0);
        assert_eq!(ObjectPixel::new(0.0, 0.0, 0.0).unwrap().reflection, 1.0);
        let p = ObjectPixel::new(0.8, 0.7, 0.0).unwrap();
        assert!((p.reflection - 0.6).abs() < 1e-15);
        assert!(ObjectPixel::new(1.2, 0.0, 0.0).is_err());
        assert!(ObjectPixel::new(-0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn coeffs_match_frozen_standard_values() {
        // Frozen from direct complex arithmetic; cross-checked against the
        // symplectic oracle in the gaussian module's tests.
        let pixel = ObjectPixel::new(0.8, 0.0, 0.0).unwrap();
        let c = bogoliubov_coeffs(&std_setup(), &pixel);
        assert!((c.signal.re - 1.488_772_571_333_719_2).abs() < 1e-12);
        assert!(c.signal.im.abs() < 1e-15);
        assert!((c.idler.re - 1.057_681_074_279_421_4).abs() < 1e-12);
        assert!((c.loss.re - 0.312_657_183_296_248_36).abs() < 1e-12);
        assert!((c.x - 0.170_841_813_627_258_14).abs() < 1e-12);
        let comm = c.signal.norm_sqr() - c.idler.norm_sqr() - c.loss.norm_sqr();
        assert!((comm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coeffs_without_squeezing_are_trivial() {
        let setup = SetupParams::new(
            SqueezerParams::new(0.0, 0.3).unwrap(),
            SqueezerParams::new(0.0, -0.8).unwrap(),
            FieldParams::new(1.0, 0.0, 1.0, 0.0).unwrap(),
        );
        let pixel = ObjectPixel::new(0.3, 1.0, -2.0).unwrap();
        let c = bogoliubov_coeffs(&setup, &pixel);
        assert!((c.signal - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(c.idler.norm() < 1e-15);
        assert!(c.loss.norm() < 1e-15);
        assert_eq!(c.x, 0.0);
    }

    #[test]
    fn transparent_cascade_composes_hyperbolically() {
        // Equal squeezers and a fully transparent object compose into one
        // squeezer of doubled parameter.
        let r = 0.7;
        let setup = SetupParams::new(
            SqueezerParams::new(r, 0.0).unwrap(),
            SqueezerParams::new(r, 0.0).unwrap(),
            FieldParams::new(0.0, 0.0, 1.0, 0.0).unwrap(),
        );
        let c = bogoliubov_coeffs(&setup, &ObjectPixel::transparent());
        assert!((c.signal.re - (2.0 * r).cosh()).abs() < 1e-12);
        assert!((c.idler.re - (2.0 * r).sinh()).abs() < 1e-12);
        assert!(c.loss.norm() < 1e-15);
    }

    #[test]
    fn signal_phase_and_mag_agree_with_complex_arithmetic() {
        let setup = SetupParams::new(
            SqueezerParams::new(1.3, 0.4).unwrap(),
            SqueezerParams::new(0.9, -1.1).unwrap(),
            FieldParams::new(2.0, 0.2, 1.5, 0.9).unwrap(),
        );
        let pixel = ObjectPixel::new(0.6, 2.5, 0.7).unwrap();
        let c = bogoliubov_coeffs(&setup, &pixel);
        assert!(wrapped_diff(c.signal_phase, c.signal.arg()).abs() < 1e-12);
        assert!((c.signal_mag - c.signal.norm()).abs() < 1e-12 * c.signal_mag);
    }

    #[test]
    fn measurement_setting_detects_quarter_turns() {
        let mut setup = std_setup();
        let s = MeasurementSetting::from_setup(&setup);
        assert_eq!(s.detection_phase, 0.0);
        assert_eq!(s.quarter_turns, Some(0));

        setup.field.lo_phase = PI / 2.0;
        let s = MeasurementSetting::from_setup(&setup);
        assert_eq!(s.quarter_turns, Some(1));

        setup.field.lo_phase = 0.3;
        let s = MeasurementSetting::from_setup(&setup);
        assert_eq!(s.quarter_turns, None);
    }

    #[test]
    fn retuning_helpers_hit_requested_settings() {
        let setup = SetupParams::new(
            SqueezerParams::new(0.5, 0.4).unwrap(),
            SqueezerParams::new(0.5, -0.2).unwrap(),
            FieldParams::new(1.0, 1.1, 1.0, 0.7).unwrap(),
        );
        let retuned = setup.with_pump_mismatch(2.0).with_detection_phase(-0.5);
        let s = MeasurementSetting::from_setup(&retuned);
        assert!(wrapped_diff(s.pump_mismatch, 2.0).abs() < 1e-12);
        assert!(wrapped_diff(s.detection_phase, -0.5).abs() < 1e-12);
    }
}
