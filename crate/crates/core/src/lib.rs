//! Simulation and reconstruction toolkit for homodyne imaging with
//! undetected squeezed photons.
//!
//! A coherent seed and two two-mode squeezers sandwich a semi-transparent
//! object that is probed only by the idler beam; a balanced homodyne
//! detector reads out the signal beam, which never touches the object. Both
//! the mean homodyne signal and its quadrature noise carry the object's
//! amplitude transmission and phase, which makes two reconstruction
//! protocols possible — one from means, one from variances alone.
//!
//! Module map:
//!
//! - [`optics`] — setup configuration and the exact output-mode coefficients;
//! - [`moments`] — closed-form mean/variance/SNR, exact phase sensitivity,
//!   and the asymptotic reference expressions;
//! - [`gaussian`] — independent symplectic covariance-propagation oracle;
//! - [`fock`] — second independent oracle in truncated Fock space;
//! - [`sampler`] — deterministic Gaussian sampling and moment estimation;
//! - [`imaging`] — the two pixel-map reconstruction protocols;
//! - [`verify`] — the self-check suite tying all routes together.

pub mod error;
pub mod fock;
pub mod gaussian;
pub mod imaging;
pub mod moments;
pub mod optics;
pub mod phase;
pub mod sampler;
pub mod verify;

pub use error::CoreError;
pub use fock::fock_moments;
pub use gaussian::{oracle_chain, GaussianState};
pub use imaging::{
    calibrate, qfi_measure_pixel, qfi_reconstruct, qsi_measure_pixel, qsi_reconstruct,
    scan_object, Calibration, Metrics, ObjectMap, PixelEstimate, PixelFlag, Protocol,
    ReconstructedMap, Sampling,
};
pub use moments::{
    mean_signal, moment_result, sensitivity_asymptotic, sensitivity_exact, snr, snr_limit,
    variance_signal, MomentResult, Regime,
};
pub use optics::{
    bogoliubov_coeffs, BogoliubovCoeffs, FieldParams, MeasurementSetting, ObjectPixel,
    SetupParams, SqueezerParams,
};
pub use phase::{wrap_phase, wrapped_diff};
pub use sampler::{derive_seed, estimate, sample_homodyne, SampleStats, SplitMix64};
