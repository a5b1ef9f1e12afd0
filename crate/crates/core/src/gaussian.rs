//! Independent verification path: symplectic propagation of the three-mode
//! Gaussian state through the imaging chain.
//!
//! Quadrature convention: `X = a + a†`, `P = i(a† − a)`, vector ordered
//! `X₀, P₀, X₁, P₁, …`; the vacuum covariance is the identity. Every
//! transform used here is a symplectic matrix `S` with `S Ω Sᵀ = Ω`, where
//! Ω carries `[[0, 1], [−1, 0]]` blocks on the diagonal.
//!
//! Mode layout for the imaging chain: 0 = signal, 1 = idler, 2 = object
//! loss port.

use num_complex::Complex64;

use crate::error::CoreError;
use crate::optics::{FieldParams, ObjectPixel, SetupParams, SqueezerParams};

/// Gaussian state: mean quadrature vector plus symmetric covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    /// Length 2·n_modes.
    mean: Vec<f64>,
    /// Row-major (2n)×(2n).
    cov: Vec<f64>,
}

impl GaussianState {
    /// Global vacuum: zero mean, identity covariance.
    pub fn vacuum(n_modes: usize) -> Self {
        let d = 2 * n_modes;
        let mut cov = vec![0.0; d * d];
        for k in 0..d {
            cov[k * d + k] = 1.0;
        }
        Self {
            n_modes,
            mean: vec![0.0; d],
            cov,
        }
    }

    /// Three-mode input state: coherent seed in mode 0, vacuum elsewhere.
    /// In this convention a coherent state of amplitude α has ⟨X⟩ = 2α cos φ,
    /// ⟨P⟩ = 2α sin φ.
    pub fn initial(field: &FieldParams) -> Self {
        let mut st = Self::vacuum(3);
        st.mean[0] = 2.0 * field.seed_amplitude * field.seed_phase.cos();
        st.mean[1] = 2.0 * field.seed_amplitude * field.seed_phase.sin();
        st
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn cov(&self) -> &[f64] {
        &self.cov
    }

    /// Apply a (2n)×(2n) symplectic matrix: mean ← S·mean, cov ← S·cov·Sᵀ.
    pub fn apply_symplectic(&mut self, s: &[f64]) {
        let d = 2 * self.n_modes;
        assert_eq!(s.len(), d * d, "symplectic matrix dimension mismatch");
        self.mean = mat_vec(d, s, &self.mean);
        let sc = mat_mul(d, s, &self.cov);
        let st = transpose(d, s);
        self.cov = mat_mul(d, &sc, &st);
    }

    /// Two-mode squeezer `a′ = G a + g e^{iφ} b†`, `b′ = G b + g e^{iφ} a†`
    /// on modes `(mode_a, mode_b)`.
    pub fn apply_two_mode_squeezer(
        &mut self,
        mode_a: usize,
        mode_b: usize,
        sq: &SqueezerParams,
    ) -> Result<(), CoreError> {
        check_modes(self.n_modes, mode_a, mode_b)?;
        let s = two_mode_squeezer_matrix(self.n_modes, mode_a, mode_b, sq);
        self.apply_symplectic(&s);
        Ok(())
    }

    /// Passive (photon-number-conserving) two-mode transform
    /// `a_i′ = Σ_j u[i][j] a_j` on modes `(mode_a, mode_b)`.
    pub fn apply_passive(
        &mut self,
        mode_a: usize,
        mode_b: usize,
        u: &[[Complex64; 2]; 2],
    ) -> Result<(), CoreError> {
        check_modes(self.n_modes, mode_a, mode_b)?;
        let s = passive_matrix(self.n_modes, mode_a, mode_b, u);
        self.apply_symplectic(&s);
        Ok(())
    }

    /// Object beam splitter on `(mode_in, mode_loss)`. The first row of the
    /// unitary is the physical transmitted-idler relation
    /// `a′ = T e^{iφ_T} a_in + R e^{iφ_R} a_loss`; the second row is the
    /// standard unitary completion, whose choice does not affect the
    /// statistics of the detected mode.
    pub fn apply_object_bs(
        &mut self,
        mode_in: usize,
        mode_loss: usize,
        pixel: &ObjectPixel,
    ) -> Result<(), CoreError> {
        self.apply_passive(mode_in, mode_loss, &object_unitary(pixel))
    }

    /// Homodyne mean and variance of the quadrature selected by the local
    /// oscillator: `S = β (a† e^{−iφ_β} + a e^{iφ_β})` on `mode`, which in
    /// quadratures is `β (cos φ_β · X − sin φ_β · P)`.
    pub fn homodyne_moments(
        &self,
        mode: usize,
        field: &FieldParams,
    ) -> Result<(f64, f64), CoreError> {
        if mode >= self.n_modes {
            return Err(CoreError::BadMode);
        }
        let d = 2 * self.n_modes;
        let (ux, up) = (field.lo_phase.cos(), -field.lo_phase.sin());
        let b = field.lo_amplitude;
        let (ix, ip) = (2 * mode, 2 * mode + 1);
        let mean = b * (ux * self.mean[ix] + up * self.mean[ip]);
        let var = b
            * b
            * (ux * ux * self.cov[ix * d + ix]
                + 2.0 * ux * up * self.cov[ix * d + ip]
                + up * up * self.cov[ip * d + ip]);
        Ok((mean, var))
    }
}

/// Unitary of the object beam splitter acting on (input idler, loss port).
pub fn object_unitary(pixel: &ObjectPixel) -> [[Complex64; 2]; 2] {
    let t = Complex64::from_polar(pixel.transmission, pixel.transmission_phase);
    let r = Complex64::from_polar(pixel.reflection, pixel.reflection_phase);
    [[t, r], [-r.conj(), t.conj()]]
}

/// Symplectic matrix of the two-mode squeezer embedded in an n-mode system.
pub fn two_mode_squeezer_matrix(
    n_modes: usize,
    mode_a: usize,
    mode_b: usize,
    sq: &SqueezerParams,
) -> Vec<f64> {
    let d = 2 * n_modes;
    let mut s = identity(d);
    let (g, c) = (sq.cross_gain, sq.gain);
    let (cp, sp) = (sq.pump_phase.cos(), sq.pump_phase.sin());
    let (ax, ap) = (2 * mode_a, 2 * mode_a + 1);
    let (bx, bp) = (2 * mode_b, 2 * mode_b + 1);
    // X_a′ = G X_a + g (cos φ X_b + sin φ P_b)
    // P_a′ = G P_a + g (sin φ X_b − cos φ P_b), and symmetrically for b.
    s[ax * d + ax] = c;
    s[ax * d + bx] = g * cp;
    s[ax * d + bp] = g * sp;
    s[ap * d + ap] = c;
    s[ap * d + bx] = g * sp;
    s[ap * d + bp] = -g * cp;
    s[bx * d + bx] = c;
    s[bx * d + ax] = g * cp;
    s[bx * d + ap] = g * sp;
    s[bp * d + bp] = c;
    s[bp * d + ax] = g * sp;
    s[bp * d + ap] = -g * cp;
    s
}

/// Symplectic matrix of a passive two-mode unitary embedded in an n-mode
/// system. Each complex entry u maps to the 2×2 block [[Re u, −Im u],
/// [Im u, Re u]] on the (X, P) pair.
pub fn passive_matrix(
    n_modes: usize,
    mode_a: usize,
    mode_b: usize,
    u: &[[Complex64; 2]; 2],
) -> Vec<f64> {
    let d = 2 * n_modes;
    let mut s = identity(d);
    let modes = [mode_a, mode_b];
    for (bi, &mi) in modes.iter().enumerate() {
        for (bj, &mj) in modes.iter().enumerate() {
            let e = u[bi][bj];
            s[(2 * mi) * d + 2 * mj] = e.re;
            s[(2 * mi) * d + 2 * mj + 1] = -e.im;
            s[(2 * mi + 1) * d + 2 * mj] = e.im;
            s[(2 * mi + 1) * d + 2 * mj + 1] = e.re;
        }
    }
    s
}

/// Max-abs deviation of `S Ω Sᵀ` from Ω.
pub fn symplectic_defect(n_modes: usize, s: &[f64]) -> f64 {
    let d = 2 * n_modes;
    let omega = symplectic_form(n_modes);
    let so = mat_mul(d, s, &omega);
    let sost = mat_mul(d, &so, &transpose(d, s));
    so_defect(&sost, &omega)
}

/// The standard symplectic form with [[0, 1], [−1, 0]] blocks.
pub fn symplectic_form(n_modes: usize) -> Vec<f64> {
    let d = 2 * n_modes;
    let mut omega = vec![0.0; d * d];
    for m in 0..n_modes {
        omega[(2 * m) * d + 2 * m + 1] = 1.0;
        omega[(2 * m + 1) * d + 2 * m] = -1.0;
    }
    omega
}

/// Propagate the full chain and return the homodyne (mean, variance) of the
/// detected signal mode: squeezer 1 on (0, 1), object on (1, 2), squeezer 2
/// on (0, 1), homodyne on mode 0.
pub fn oracle_chain(setup: &SetupParams, pixel: &ObjectPixel) -> (f64, f64) {
    let mut st = GaussianState::initial(&setup.field);
    st.apply_two_mode_squeezer(0, 1, &setup.squeezer1)
        .expect("modes 0,1 valid");
    st.apply_object_bs(1, 2, pixel).expect("modes 1,2 valid");
    st.apply_two_mode_squeezer(0, 1, &setup.squeezer2)
        .expect("modes 0,1 valid");
    st.homodyne_moments(0, &setup.field).expect("mode 0 valid")
}

fn check_modes(n_modes: usize, a: usize, b: usize) -> Result<(), CoreError> {
    if a == b || a >= n_modes || b >= n_modes {
        return Err(CoreError::BadMode);
    }
    Ok(())
}

fn identity(d: usize) -> Vec<f64> {
    let mut m = vec![0.0; d * d];
    for k in 0..d {
        m[k * d + k] = 1.0;
    }
    m
}

fn transpose(d: usize, m: &[f64]) -> Vec<f64> {
    let mut t = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            t[j * d + i] = m[i * d + j];
        }
    }
    t
}

fn mat_mul(d: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..d {
                c[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    c
}

fn mat_vec(d: usize, m: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; d];
    for i in 0..d {
        let mut acc = 0.0;
        for j in 0..d {
            acc += m[i * d + j] * v[j];
        }
        out[i] = acc;
    }
    out
}

fn so_defect(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
