//! Closed-form homodyne statistics of the detected signal mode, the exact
//! phase sensitivity, and the small-x / near-unit-x reference expressions.
//!
//! With output-mode coefficient magnitude `|G|` and phase `φ_G`, detection
//! phase `δ` and fields `(α, β)`:
//!
//! ```text
//! mean     = 2αβ|G| cos(φ_G + δ)
//! variance = β² (2|G|² − 1)            (independent of δ and α)
//! SNR      = 4α² Γ cos²(φ_G + δ),  Γ = |G|²/(2|G|² − 1) ∈ (1/2, 1]
//! ```
//!
//! The homodyne observable is `S = β (a† e^{−iφ_β} + a e^{iφ_β})`; with this
//! unit-prefactor normalization the three formulas above are mutually
//! consistent (SNR is normalization-free either way).

use crate::error::CoreError;
use crate::optics::{
    bogoliubov_coeffs, BogoliubovCoeffs, FieldParams, MeasurementSetting, ObjectPixel,
    SetupParams,
};
use crate::phase::{wrap_phase, wrapped_diff};

/// Asymptotic regime selector for the reference expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// x → 0: weakly transmitting object.
    X0,
    /// x → 1: transparent object at high gain.
    X1,
}

/// Aggregate homodyne statistics for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentResult {
    pub mean: f64,
    pub variance: f64,
    pub snr: f64,
    /// Γ = |G|²/(2|G|² − 1).
    pub gamma: f64,
}

/// Mean homodyne signal 2αβ|G| cos(φ_G + δ).
pub fn mean_signal(
    coeffs: &BogoliubovCoeffs,
    field: &FieldParams,
    setting: &MeasurementSetting,
) -> f64 {
    2.0 * field.seed_amplitude
        * field.lo_amplitude
        * coeffs.signal_mag
        * (coeffs.signal_phase + setting.detection_phase).cos()
}

/// Homodyne variance β²(2|G|² − 1); independent of the detection phase and
/// of the seed amplitude.
pub fn variance_signal(coeffs: &BogoliubovCoeffs, field: &FieldParams) -> f64 {
    let b = field.lo_amplitude;
    b * b * (2.0 * coeffs.signal_mag * coeffs.signal_mag - 1.0)
}

/// `(snr, gamma)`: SNR = 4α²Γcos²(φ_G + δ) with Γ = |G|²/(2|G|²−1).
///
/// Equal to mean²/variance wherever the latter is defined; this form stays
/// finite (and returns 0 at an exact quadrature null) even when β = 0.
pub fn snr(
    coeffs: &BogoliubovCoeffs,
    field: &FieldParams,
    setting: &MeasurementSetting,
) -> (f64, f64) {
    let mag_sq = coeffs.signal_mag * coeffs.signal_mag;
    let gamma = mag_sq / (2.0 * mag_sq - 1.0);
    let c = (coeffs.signal_phase + setting.detection_phase).cos();
    let a = field.seed_amplitude;
    (4.0 * a * a * gamma * c * c, gamma)
}

/// All four statistics at once.
pub fn moment_result(
    coeffs: &BogoliubovCoeffs,
    field: &FieldParams,
    setting: &MeasurementSetting,
) -> MomentResult {
    let (s, gamma) = snr(coeffs, field, setting);
    MomentResult {
        mean: mean_signal(coeffs, field, setting),
        variance: variance_signal(coeffs, field),
        snr: s,
        gamma,
    }
}

/// Exact |d⟨S⟩/dφ_T|, from analytic differentiation of the closed form
/// including both the |G| and the φ_G dependence on the object phase:
///
/// ```text
/// d⟨S⟩/dφ_T = 2αβ x (G₁G₂)²/|G| · [sin u · cos(φ_G+δ) + (x + cos u) · sin(φ_G+δ)]
/// ```
///
/// with u = Δ − φ_T. This is the authoritative sensitivity; the asymptotic
/// forms below are reference expressions for comparison only.
pub fn sensitivity_exact(
    setup: &SetupParams,
    pixel: &ObjectPixel,
    setting: &MeasurementSetting,
) -> f64 {
    let coeffs = bogoliubov_coeffs(setup, pixel);
    if coeffs.x == 0.0 {
        return 0.0;
    }
    let alpha = setup.field.seed_amplitude;
    let beta = setup.field.lo_amplitude;
    let gain_prod = setup.squeezer1.gain * setup.squeezer2.gain;
    let u = coeffs.cascade_phase;
    let total = coeffs.signal_phase + setting.detection_phase;
    let bracket = u.sin() * total.cos() + (coeffs.x + u.cos()) * total.sin();
    (2.0 * alpha * beta * coeffs.x * gain_prod * gain_prod / coeffs.signal_mag * bracket).abs()
}

/// Reference sensitivity per unit object-phase change, in the requested
/// asymptotic regime at detection phase δ = kπ/2:
///
/// - x → 0:  `2xαβG₁G₂|cos u|` (odd k), `x²αβG₁G₂|sin 2u|` (even k);
/// - x → 1:  `2αβG₁G₂|cos u|` (odd k), `2αβG₁G₂|sin u|` (even k);
///
/// with u = Δ − φ_T. The even-k small-x branch keeps only the phase
/// response and is O(x²), whereas the exact derivative is O(x) there; see
/// the verification suite, which reports the mismatch rather than asserting
/// that branch.
pub fn sensitivity_asymptotic(
    setup: &SetupParams,
    pixel: &ObjectPixel,
    k: i64,
    regime: Regime,
) -> Result<f64, CoreError> {
    check_quarter_turn(setup, k)?;
    let coeffs = bogoliubov_coeffs(setup, pixel);
    let u = coeffs.cascade_phase;
    let pref = setup.field.seed_amplitude
        * setup.field.lo_amplitude
        * setup.squeezer1.gain
        * setup.squeezer2.gain;
    let odd = k.rem_euclid(2) == 1;
    Ok(match (regime, odd) {
        (Regime::X0, true) => 2.0 * coeffs.x * pref * u.cos().abs(),
        (Regime::X0, false) => coeffs.x * coeffs.x * pref * (2.0 * u).sin().abs(),
        (Regime::X1, true) => 2.0 * pref * u.cos().abs(),
        (Regime::X1, false) => 2.0 * pref * u.sin().abs(),
    })
}

/// Reference SNR limit at detection phase δ = kπ/2:
///
/// - x → 0:  `4α²Γφ_G²` (odd k), `4α²Γ` (even k), with Γ and φ_G evaluated
///   at the actual configuration;
/// - x → 1:  `2α²sin²(u/2)` (odd k), `2α²cos²(u/2)` (even k).
pub fn snr_limit(
    setup: &SetupParams,
    pixel: &ObjectPixel,
    k: i64,
    regime: Regime,
) -> Result<f64, CoreError> {
    check_quarter_turn(setup, k)?;
    let coeffs = bogoliubov_coeffs(setup, pixel);
    let a = setup.field.seed_amplitude;
    let odd = k.rem_euclid(2) == 1;
    Ok(match (regime, odd) {
        (Regime::X0, _) => {
            let mag_sq = coeffs.signal_mag * coeffs.signal_mag;
            let gamma = mag_sq / (2.0 * mag_sq - 1.0);
            if odd {
                4.0 * a * a * gamma * coeffs.signal_phase * coeffs.signal_phase
            } else {
                4.0 * a * a * gamma
            }
        }
        (Regime::X1, true) => {
            let s = (coeffs.cascade_phase / 2.0).sin();
            2.0 * a * a * s * s
        }
        (Regime::X1, false) => {
            let c = (coeffs.cascade_phase / 2.0).cos();
            2.0 * a * a * c * c
        }
    })
}

fn check_quarter_turn(setup: &SetupParams, k: i64) -> Result<(), CoreError> {
    let delta = wrap_phase(setup.field.seed_phase + setup.field.lo_phase);
    let target = k as f64 * std::f64::consts::FRAC_PI_2;
    if wrapped_diff(delta, target).abs() > 1e-9 {
        return Err(CoreError::InvalidSetting);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::SqueezerParams;
    use crate::sampler::SplitMix64;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn std_setup() -> SetupParams {
        SetupParams::new(
            SqueezerParams::new(0.5, 0.0).unwrap(),
            SqueezerParams::new(0.5, 0.0).unwrap(),
            FieldParams::new(1.0, 0.0, 1.0, 0.0).unwrap(),
        )
    }

    fn random_setup_and_pixel(rng: &mut SplitMix64) -> (SetupParams, ObjectPixel) {
        let phase = |rng: &mut SplitMix64| TAU * rng.next_f64() - PI;
        let setup = SetupParams::new(
            SqueezerParams::new(5.0 * rng.next_f64(), phase(rng)).unwrap(),
            SqueezerParams::new(5.0 * rng.next_f64(), phase(rng)).unwrap(),
            FieldParams::new(
                5.0 * rng.next_f64(),
                phase(rng),
                0.1 + 4.9 * rng.next_f64(),
                phase(rng),
            )
            .unwrap(),
        );
        let pixel = ObjectPixel::new(rng.next_f64(), phase(rng), phase(rng)).unwrap();
        (setup, pixel)
    }

    #[test]
    fn frozen_standard_moments() {
        let setup = std_setup();
        let pixel = ObjectPixel::new(0.8, 0.0, 0.0).unwrap();
        let coeffs = bogoliubov_coeffs(&setup, &pixel);
        let setting = MeasurementSetting::from_setup(&setup);
        let m = moment_result(&coeffs, &setup.field, &setting);
        assert!((m.mean - 2.977_545_142_667_438_4).abs() < 1e-12);
        assert!((m.variance - 3.432_887_538_311_228_5).abs() < 1e-12);
        assert!((m.snr - 2.582_599_918_488_41).abs() < 1e-12);
        assert!((m.gamma - 0.645_649_979_622_102_5).abs() < 1e-12);
    }

    #[test]
    fn zero_seed_means_zero_mean() {
        let mut setup = std_setup();
        setup.field = FieldParams::new(0.0, 0.0, 1.0, 0.6).unwrap();
        let coeffs = bogoliubov_coeffs(&setup, &ObjectPixel::new(0.5, 0.2, 0.0).unwrap());
        let setting = MeasurementSetting::from_setup(&setup);
        assert_eq!(mean_signal(&coeffs, &setup.field, &setting), 0.0);
    }

    #[test]
    fn opaque_pixel_mean_closed_form() {
        // T = 0 at δ = 0 and zero pump phases: mean = 2αβG₁G₂.
        let setup = std_setup();
        let coeffs = bogoliubov_coeffs(&setup, &ObjectPixel::new(0.0, 0.0, 0.0).unwrap());
        let setting = MeasurementSetting::from_setup(&setup);
        let g1g2 = setup.squeezer1.gain * setup.squeezer2.gain;
        assert!((mean_signal(&coeffs, &setup.field, &setting) - 2.0 * g1g2).abs() < 1e-12);
    }

    #[test]
    fn unsqueezed_variance_is_shot_noise_and_scales_with_beta_squared() {
        let mut setup = std_setup();
        setup.squeezer1 = SqueezerParams::new(0.0, 0.0).unwrap();
        setup.squeezer2 = SqueezerParams::new(0.0, 0.0).unwrap();
        let pixel = ObjectPixel::new(0.3, 0.1, 0.0).unwrap();
        let coeffs = bogoliubov_coeffs(&setup, &pixel);
        assert!((variance_signal(&coeffs, &setup.field) - 1.0).abs() < 1e-12);

        setup.field = FieldParams::new(1.0, 0.0, 2.0, 0.0).unwrap();
        assert!((variance_signal(&coeffs, &setup.field) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn snr_vanishes_at_quadrature_null() {
        let setup = std_setup();
        let pixel = ObjectPixel::new(0.8, 0.0, 0.0).unwrap();
        let coeffs = bogoliubov_coeffs(&setup, &pixel);
        let nulled = setup.with_detection_phase(FRAC_PI_2 - coeffs.signal_phase);
        let setting = MeasurementSetting::from_setup(&nulled);
        let (s, _) = snr(&coeffs, &nulled.field, &setting);
        assert!(s < 1e-25);
        assert!(s.is_finite());
    }

    #[test]
    fn snr_identity_and_variance_delta_independence_over_random_sweep() {
        let mut rng = SplitMix64::new(0xA11CE);
        for _ in 0..500 {
            let (setup, pixel) = random_setup_and_pixel(&mut rng);
            let coeffs = bogoliubov_coeffs(&setup, &pixel);
            let setting = MeasurementSetting::from_setup(&setup);
            let m = moment_result(&coeffs, &setup.field, &setting);
            assert!(
                (m.snr - m.mean * m.mean / m.variance).abs() <= 1e-12 * m.snr.max(1.0),
                "snr identity failed"
            );
            assert!(m.gamma > 0.5 && m.gamma <= 1.0);
            assert!(m.variance >= setup.field.lo_amplitude.powi(2) * (1.0 - 1e-12));

            // Variance must not react to the detection phase or the seed.
            let base = variance_signal(&coeffs, &setup.field);
            for k in 0..10 {
                let retuned = setup.with_detection_phase(TAU * (k as f64) / 10.0 - PI);
                let mut field = retuned.field;
                field.seed_amplitude = rng.next_f64() * 3.0;
                field.seed_phase = TAU * rng.next_f64() - PI;
                assert_eq!(variance_signal(&coeffs, &field), base);
            }
        }
    }

    #[test]
    fn exact_sensitivity_matches_finite_differences() {
        let mut rng = SplitMix64::new(0xD1FF);
        let step = 1e-6;
        for _ in 0..100 {
            let (setup, pixel) = random_setup_and_pixel(&mut rng);
            let setting = MeasurementSetting::from_setup(&setup);
            let analytic = sensitivity_exact(&setup, &pixel, &setting);

            let mean_at = |phi: f64| {
                let p =
                    ObjectPixel::new(pixel.transmission, phi, pixel.reflection_phase).unwrap();
                let c = bogoliubov_coeffs(&setup, &p);
                mean_signal(&c, &setup.field, &setting)
            };
            let fd = (mean_at(pixel.transmission_phase + step)
                - mean_at(pixel.transmission_phase - step))
                / (2.0 * step);
            let scale = analytic
                .abs()
                .max(2.0 * setup.field.seed_amplitude * setup.field.lo_amplitude)
                .max(1e-12);
            assert!(
                (analytic - fd.abs()).abs() <= 1e-6 * scale,
                "analytic {analytic} vs fd {fd}"
            );
        }
    }

    #[test]
    fn sensitivity_vanishes_for_opaque_pixel() {
        let setup = std_setup();
        let setting = MeasurementSetting::from_setup(&setup);
        let pixel = ObjectPixel::new(0.0, 0.4, 0.0).unwrap();
        assert_eq!(sensitivity_exact(&setup, &pixel, &setting), 0.0);
    }

    #[test]
    fn exact_sensitivity_approaches_near_unit_x_form() {
        // High gain, transparent object: |d⟨S⟩/dφ_T| → 2αβG₁G₂|sin(u + δ)|.
        for k in [0i64, 1] {
            let setup = SetupParams::new(
                SqueezerParams::new(3.0, 0.0).unwrap(),
                SqueezerParams::new(3.0, 0.9).unwrap(),
                FieldParams::new(1.0, 0.0, 1.0, k as f64 * FRAC_PI_2).unwrap(),
            );
            let pixel = ObjectPixel::new(1.0, 0.35, 0.0).unwrap();
            let setting = MeasurementSetting::from_setup(&setup);
            let coeffs = bogoliubov_coeffs(&setup, &pixel);
            let exact = sensitivity_exact(&setup, &pixel, &setting);
            let gain_prod = setup.squeezer1.gain * setup.squeezer2.gain;
            let limit = 2.0
                * gain_prod
                * (coeffs.cascade_phase + setting.detection_phase).sin().abs();
            assert!(
                (exact - limit).abs() <= 2.0 * (1.0 - coeffs.x) * limit,
                "k={k}: exact {exact} vs limit {limit}"
            );
            // And the tabulated reference agrees with the general form here.
            let reference = sensitivity_asymptotic(&setup, &pixel, k, Regime::X1).unwrap();
            assert!((reference - limit).abs() < 1e-9 * limit);
        }
    }

    #[test]
    fn asymptotic_forms_and_setting_validation() {
        let setup = std_setup(); // δ = 0, even k
        let pixel = ObjectPixel::new(0.0, 0.0, 0.0).unwrap();
        // Prefactor x makes the odd small-x form vanish with the object.
        assert_eq!(
            sensitivity_asymptotic(&setup, &pixel, 0, Regime::X0).unwrap(),
            0.0
        );
        assert_eq!(
            sensitivity_asymptotic(&setup, &pixel, 1, Regime::X0),
            Err(CoreError::InvalidSetting)
        );

        let tilted = setup.with_detection_phase(0.3);
        assert_eq!(
            snr_limit(&tilted, &pixel, 0, Regime::X0),
            Err(CoreError::InvalidSetting)
        );
    }

    #[test]
    fn snr_limit_even_k_small_x_brackets_gamma() {
        // Gains → 0 drives Γ → 1, so the even-k small-x limit is 4α².
        let alpha: f64 = 1.3;
        let setup = SetupParams::new(
            SqueezerParams::new(1e-3, 0.0).unwrap(),
            SqueezerParams::new(1e-3, 0.0).unwrap(),
            FieldParams::new(alpha, 0.0, 1.0, 0.0).unwrap(),
        );
        let pixel = ObjectPixel::new(0.5, 0.7, 0.0).unwrap();
        let limit = snr_limit(&setup, &pixel, 0, Regime::X0).unwrap();
        assert!((limit - 4.0 * alpha * alpha).abs() < 0.01 * 4.0 * alpha * alpha);

        // Large gains drive Γ → 1/2 and the even-k limit to 2α².
        let strong = SetupParams::new(
            SqueezerParams::new(4.0, 0.0).unwrap(),
            SqueezerParams::new(4.0, 0.0).unwrap(),
            FieldParams::new(alpha, 0.0, 1.0, 0.0).unwrap(),
        );
        let tiny = ObjectPixel::new(1e-6, 0.7, 0.0).unwrap();
        let limit = snr_limit(&strong, &tiny, 0, Regime::X0).unwrap();
        assert!((limit - 2.0 * alpha * alpha).abs() < 0.01 * 2.0 * alpha * alpha);
    }

    #[test]
    fn snr_converges_to_even_k_small_x_limit() {
        // Relative deviation of the exact SNR from the even-k small-x limit
        // stays within 2x at x = 1e−2 and 1e−3.
        let r: f64 = 0.4;
        for x in [1e-2, 1e-3] {
            let t = x / r.tanh().powi(2);
            let setup = SetupParams::new(
                SqueezerParams::new(r, 0.0).unwrap(),
                SqueezerParams::new(r, 1.1).unwrap(),
                FieldParams::new(1.5, 0.0, 1.0, 0.0).unwrap(),
            );
            let pixel = ObjectPixel::new(t, 0.3, 0.0).unwrap();
            let coeffs = bogoliubov_coeffs(&setup, &pixel);
            assert!((coeffs.x - x).abs() < 1e-12);
            let setting = MeasurementSetting::from_setup(&setup);
            let (exact, _) = snr(&coeffs, &setup.field, &setting);
            let limit = snr_limit(&setup, &pixel, 0, Regime::X0).unwrap();
            assert!(
                (exact - limit).abs() <= 2.0 * x * limit,
                "x={x}: {exact} vs {limit}"
            );
        }
    }

    #[test]
    fn snr_limit_near_unit_x_zero_at_matched_phase() {
        let setup = SetupParams::new(
            SqueezerParams::new(3.0, 0.0).unwrap(),
            SqueezerParams::new(3.0, 0.4).unwrap(),
            FieldParams::new(1.0, 0.0, 1.0, FRAC_PI_2).unwrap(),
        );
        // Δ = φ_T makes the odd-k near-unit-x limit vanish.
        let pixel = ObjectPixel::new(1.0, 0.4, 0.0).unwrap();
        let limit = snr_limit(&setup, &pixel, 1, Regime::X1).unwrap();
        assert!(limit < 1e-25);
    }
}
