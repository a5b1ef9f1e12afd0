//! Deterministic Gaussian sampling for finite-sample protocol studies.
//!
//! The uniform stream is SplitMix64 and the normal transform is plain
//! Box–Muller with fixed consumption (two uniforms per pair of normals, no
//! rejection), so a given `(mean, variance, n, seed)` always produces the
//! same sequence. Bit-identity is guaranteed on the integer stream; the
//! floating-point normals additionally go through `ln`, `sqrt`, `cos` and
//! `sin`, which may differ in the last ulp across libm implementations.

use crate::error::CoreError;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX_MUL_1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_MUL_2: u64 = 0x94D0_49BB_1331_11EB;
/// 2⁻⁵³, for mapping the top 53 bits of a u64 to [0, 1).
const U53_INV: f64 = 1.0 / 9_007_199_254_740_992.0;

/// SplitMix64 generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(MIX_MUL_1);
        z = (z ^ (z >> 27)).wrapping_mul(MIX_MUL_2);
        z ^ (z >> 31)
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * U53_INV
    }
}

/// One SplitMix64 output round applied to `x`.
pub fn splitmix64_mix(x: u64) -> u64 {
    SplitMix64::new(x).next_u64()
}

/// Disjoint per-measurement seed derived from the master seed, the pixel
/// coordinates, and the measurement-setting index. The combination is run
/// through one extra SplitMix64 round so that neighbouring keys land far
/// apart in seed space.
pub fn derive_seed(master_seed: u64, pixel_i: u64, pixel_j: u64, setting_index: u64) -> u64 {
    let key = master_seed
        ^ pixel_i.wrapping_mul(GOLDEN_GAMMA)
        ^ pixel_j.wrapping_mul(MIX_MUL_1)
        ^ setting_index.wrapping_mul(MIX_MUL_2);
    splitmix64_mix(key)
}

/// One Box–Muller pair of standard normals. Consumes exactly two uniforms.
fn normal_pair(rng: &mut SplitMix64) -> (f64, f64) {
    // 1 − u ∈ (0, 1] keeps the logarithm finite.
    let u1 = 1.0 - rng.next_f64();
    let u2 = rng.next_f64();
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = std::f64::consts::TAU * u2;
    (radius * angle.cos(), radius * angle.sin())
}

/// Draw `n` i.i.d. values from Normal(mean, variance) on the deterministic
/// stream selected by `seed`.
pub fn sample_homodyne(
    mean: f64,
    variance: f64,
    n: u64,
    seed: u64,
) -> Result<Vec<f64>, CoreError> {
    if !variance.is_finite() || variance < 0.0 || !mean.is_finite() {
        return Err(CoreError::BadVariance);
    }
    if n < 1 {
        return Err(CoreError::OutOfRange("sample count"));
    }
    let sd = variance.sqrt();
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(n as usize);
    while (out.len() as u64) < n {
        let (z0, z1) = normal_pair(&mut rng);
        out.push(mean + sd * z0);
        if (out.len() as u64) < n {
            out.push(mean + sd * z1);
        }
    }
    Ok(out)
}

/// Sample mean/variance estimates with Gaussian-theory standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub n: u64,
    pub mean_hat: f64,
    /// Unbiased variance estimate (divisor n − 1).
    pub var_hat: f64,
    /// √(var_hat / n).
    pub se_mean: f64,
    /// var_hat · √(2 / (n − 1)).
    pub se_var: f64,
}

/// Unbiased moment estimates for a sample of size ≥ 2.
pub fn estimate(samples: &[f64]) -> Result<SampleStats, CoreError> {
    let n = samples.len();
    if n < 2 {
        return Err(CoreError::TooFewSamples);
    }
    let nf = n as f64;
    let mean_hat = samples.iter().sum::<f64>() / nf;
    let ss: f64 = samples.iter().map(|x| (x - mean_hat) * (x - mean_hat)).sum();
    let var_hat = ss / (nf - 1.0);
    Ok(SampleStats {
        n: n as u64,
        mean_hat,
        var_hat,
        se_mean: (var_hat / nf).sqrt(),
        se_var: var_hat * (2.0 / (nf - 1.0)).sqrt(),
    })
}
