//! Third verification path: brute-force propagation in a truncated
//! three-mode Fock space.
//!
//! Each element of the chain is applied as the exponential of its
//! generator — `r(e^{iφ}a†b† − e^{−iφ}ab)` for a two-mode squeezer, and
//! `Σ A_kl a_k†a_l` with `A = log U` for the object beam splitter — using a
//! scaled Taylor expansion. Population that would be raised past the cutoff
//! is dropped and monitored; the run is rejected when the accumulated norm
//! deficit exceeds the trust limit.
//!
//! This oracle is only meant for small gains and seed amplitudes (r ≲ 0.3,
//! α ≲ 1 with cutoff ≥ 20); the norm-deficit check enforces the boundary of
//! its validity domain at run time.

use num_complex::Complex64;

use crate::error::CoreError;
use crate::optics::{ObjectPixel, SetupParams};

/// Norm deficit above which the truncated result is rejected.
const LEAK_LIMIT: f64 = 1e-8;
/// Target per-substep generator norm for the Taylor expansion.
const SUBSTEP_NORM: f64 = 1.5;
const MAX_TAYLOR_TERMS: usize = 120;

/// Homodyne (mean, variance) of the detected mode from the truncated Fock
/// simulation.
pub fn fock_moments(
    setup: &SetupParams,
    pixel: &ObjectPixel,
    cutoff: usize,
) -> Result<(f64, f64), CoreError> {
    if cutoff < 1 {
        return Err(CoreError::OutOfRange("Fock cutoff"));
    }
    let mut state = Fock3::coherent_seed(cutoff, setup.field.seed_amplitude, setup.field.seed_phase);

    let sq1 = Generator::Squeeze {
        mode_a: 0,
        mode_b: 1,
        xi: Complex64::from_polar(setup.squeezer1.r, setup.squeezer1.pump_phase),
    };
    state.apply_exp(&sq1);

    let u = crate::gaussian::object_unitary(pixel);
    let bs = Generator::Passive {
        mode_a: 1,
        mode_b: 2,
        log_u: su2_log(u[0][0], u[0][1]),
    };
    state.apply_exp(&bs);

    let sq2 = Generator::Squeeze {
        mode_a: 0,
        mode_b: 1,
        xi: Complex64::from_polar(setup.squeezer2.r, setup.squeezer2.pump_phase),
    };
    state.apply_exp(&sq2);

    let norm_sq = state.norm_sq();
    let leaked = (1.0 - norm_sq).max(0.0);
    if leaked > LEAK_LIMIT {
        return Err(CoreError::CutoffTooSmall {
            leaked,
            limit: LEAK_LIMIT,
        });
    }
    state.scale(1.0 / norm_sq.sqrt());

    // ⟨S⟩ and ⟨S²⟩ for S = β(a† e^{−iφ_β} + a e^{iφ_β}) on mode 0.
    let a1 = state.mode0_lowering_moment();
    let a2 = state.mode0_double_lowering_moment();
    let nbar = state.mode0_number();
    let beta = setup.field.lo_amplitude;
    let lo = Complex64::from_polar(1.0, setup.field.lo_phase);
    let mean = 2.0 * beta * (a1 * lo).re;
    let s_sq = beta * beta * (2.0 * (a2 * lo * lo).re + 2.0 * nbar + 1.0);
    Ok((mean, s_sq - mean * mean))
}

/// Principal logarithm of an SU(2) matrix given its first row `[a, b]`
/// (the second row is `[−b̄, ā]`). Returns an anti-Hermitian 2×2 matrix.
fn su2_log(a: Complex64, b: Complex64) -> [[Complex64; 2]; 2] {
    let cos_theta = a.re;
    let v = [b.im, b.re, a.im];
    let s = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if s < 1e-15 {
        if cos_theta >= 0.0 {
            return [[Complex64::ZERO; 2]; 2];
        }
        // U = −I: a π rotation about the z axis.
        let ipi = Complex64::new(0.0, std::f64::consts::PI);
        return [[ipi, Complex64::ZERO], [Complex64::ZERO, -ipi]];
    }
    let theta = s.atan2(cos_theta);
    let n = [v[0] / s, v[1] / s, v[2] / s];
    [
        [
            Complex64::new(0.0, theta * n[2]),
            theta * Complex64::new(n[1], n[0]),
        ],
        [
            theta * Complex64::new(-n[1], n[0]),
            Complex64::new(0.0, -theta * n[2]),
        ],
    ]
}

enum Generator {
    Squeeze {
        mode_a: usize,
        mode_b: usize,
        xi: Complex64,
    },
    Passive {
        mode_a: usize,
        mode_b: usize,
        log_u: [[Complex64; 2]; 2],
    },
}

impl Generator {
    /// Upper bound on the generator's action norm in the truncated space,
    /// used to pick the number of exponential substeps.
    fn norm_bound(&self, cutoff: usize) -> f64 {
        let c1 = (cutoff + 1) as f64;
        match self {
            Generator::Squeeze { xi, .. } => 2.0 * xi.norm() * c1,
            Generator::Passive { log_u, .. } => {
                let theta = log_u[0][0].norm().max(log_u[0][1].norm());
                4.0 * theta * c1
            }
        }
    }
}

/// Dense amplitude vector over |n₀ n₁ n₂⟩ with nᵢ ≤ cutoff.
struct Fock3 {
    cutoff: usize,
    amp: Vec<Complex64>,
    sqrt_n: Vec<f64>,
}

impl Fock3 {
    fn coherent_seed(cutoff: usize, alpha: f64, phase: f64) -> Self {
        let d1 = cutoff + 1;
        let mut amp = vec![Complex64::ZERO; d1 * d1 * d1];
        let alpha_c = Complex64::from_polar(alpha, phase);
        let mut term = Complex64::new((-0.5 * alpha * alpha).exp(), 0.0);
        for n0 in 0..=cutoff {
            if n0 > 0 {
                term *= alpha_c / (n0 as f64).sqrt();
            }
            amp[n0 * d1 * d1] = term;
        }
        let sqrt_n = (0..=d1).map(|k| (k as f64).sqrt()).collect();
        Self {
            cutoff,
            amp,
            sqrt_n,
        }
    }

    fn dim1(&self) -> usize {
        self.cutoff + 1
    }

    fn stride(&self, mode: usize) -> usize {
        let d1 = self.dim1();
        match mode {
            0 => d1 * d1,
            1 => d1,
            _ => 1,
        }
    }

    fn norm_sq(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum()
    }

    fn scale(&mut self, factor: f64) {
        for z in &mut self.amp {
            *z *= factor;
        }
    }

    /// out += Λ·input for the given generator.
    fn accumulate_generator(&self, gen: &Generator, input: &[Complex64], out: &mut [Complex64]) {
        let c = self.cutoff;
        let d1 = self.dim1();
        match gen {
            Generator::Squeeze {
                mode_a,
                mode_b,
                xi,
            } => {
                let (sa, sb) = (self.stride(*mode_a), self.stride(*mode_b));
                let xi_conj = xi.conj();
                for n0 in 0..d1 {
                    for n1 in 0..d1 {
                        for n2 in 0..d1 {
                            let idx = (n0 * d1 + n1) * d1 + n2;
                            let z = input[idx];
                            if z == Complex64::ZERO {
                                continue;
                            }
                            let ns = [n0, n1, n2];
                            let (na, nb) = (ns[*mode_a], ns[*mode_b]);
                            if na < c && nb < c {
                                out[idx + sa + sb] +=
                                    *xi * (self.sqrt_n[na + 1] * self.sqrt_n[nb + 1]) * z;
                            }
                            if na > 0 && nb > 0 {
                                out[idx - sa - sb] -=
                                    xi_conj * (self.sqrt_n[na] * self.sqrt_n[nb]) * z;
                            }
                        }
                    }
                }
            }
            Generator::Passive {
                mode_a,
                mode_b,
                log_u,
            } => {
                let (sa, sb) = (self.stride(*mode_a), self.stride(*mode_b));
                for n0 in 0..d1 {
                    for n1 in 0..d1 {
                        for n2 in 0..d1 {
                            let idx = (n0 * d1 + n1) * d1 + n2;
                            let z = input[idx];
                            if z == Complex64::ZERO {
                                continue;
                            }
                            let ns = [n0, n1, n2];
                            let (na, nb) = (ns[*mode_a], ns[*mode_b]);
                            out[idx] +=
                                (log_u[0][0] * na as f64 + log_u[1][1] * nb as f64) * z;
                            if na < c && nb > 0 {
                                out[idx + sa - sb] +=
                                    log_u[0][1] * (self.sqrt_n[na + 1] * self.sqrt_n[nb]) * z;
                            }
                            if na > 0 && nb < c {
                                out[idx - sa + sb] +=
                                    log_u[1][0] * (self.sqrt_n[na] * self.sqrt_n[nb + 1]) * z;
                            }
                        }
                    }
                }
            }
        }
    }

    /// amp ← exp(Λ)·amp via repeated substeps of a Taylor expansion.
    fn apply_exp(&mut self, gen: &Generator) {
        let bound = gen.norm_bound(self.cutoff);
        let substeps = ((bound / SUBSTEP_NORM).ceil() as usize).max(1);
        let dim = self.amp.len();
        let mut term = vec![Complex64::ZERO; dim];
        let mut next = vec![Complex64::ZERO; dim];
        for _ in 0..substeps {
            let mut acc = self.amp.clone();
            term.copy_from_slice(&self.amp);
            for k in 1..=MAX_TAYLOR_TERMS {
                next.iter_mut().for_each(|z| *z = Complex64::ZERO);
                self.accumulate_generator(gen, &term, &mut next);
                let scale = 1.0 / (substeps as f64 * k as f64);
                for (t, nx) in term.iter_mut().zip(&next) {
                    *t = nx * scale;
                }
                let mut term_sq = 0.0;
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a += t;
                    term_sq += t.norm_sqr();
                }
                if term_sq <= 1e-32 * self.norm_guard(&acc) {
                    break;
                }
            }
            self.amp = acc;
        }
    }

    fn norm_guard(&self, v: &[Complex64]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>().max(1e-300)
    }

    /// ⟨a₀⟩.
    fn mode0_lowering_moment(&self) -> Complex64 {
        let d1 = self.dim1();
        let s0 = d1 * d1;
        let mut acc = Complex64::ZERO;
        for n0 in 1..d1 {
            for rest in 0..s0 {
                let idx = n0 * s0 + rest;
                acc += self.amp[idx - s0].conj() * self.sqrt_n[n0] * self.amp[idx];
            }
        }
        acc
    }

    /// ⟨a₀²⟩.
    fn mode0_double_lowering_moment(&self) -> Complex64 {
        let d1 = self.dim1();
        let s0 = d1 * d1;
        let mut acc = Complex64::ZERO;
        for n0 in 2..d1 {
            for rest in 0..s0 {
                let idx = n0 * s0 + rest;
                acc += self.amp[idx - 2 * s0].conj()
                    * (self.sqrt_n[n0] * self.sqrt_n[n0 - 1])
                    * self.amp[idx];
            }
        }
        acc
    }

    /// ⟨a₀†a₀⟩.
    fn mode0_number(&self) -> f64 {
        let d1 = self.dim1();
        let s0 = d1 * d1;
        let mut acc = 0.0;
        for n0 in 0..d1 {
            for rest in 0..s0 {
                acc += n0 as f64 * self.amp[n0 * s0 + rest].norm_sqr();
            }
        }
        acc
    }
}
