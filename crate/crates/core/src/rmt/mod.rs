//! Random-matrix machinery: Jacobi-ensemble samplers, the Airy₁ edge via
//! the tridiagonal β-Hermite model, and the Wachter equilibrium measure.
//!
//! All parameter bookkeeping between the (N, T) pipeline space and the
//! (p, q) Jacobi space lives in [`JacobiParams`]; nothing else in the
//! crate converts between the two conventions. Note the 𝒯 = T − 1 shift:
//! the corner constructions act on orthogonal matrices of size 𝒯, one
//! less than the panel horizon T.

mod airy;
mod jacobi;
mod wachter;

pub use airy::{airy1_sample, Airy1Sample};
pub use jacobi::{
    jacobi_log_density, sample_jacobi_cc, sample_jacobi_sum_corner, sample_jacobi_var0_corner,
    JacobiDraw,
};
pub use wachter::{adaptive_simpson, support_edges, WachterParams};

use crate::error::{Error, Result};

/// Jacobi ensemble J(N; p, q): density ∝ det(M)^{p−1} det(1−M)^{q−1} on
/// 0 < M < 1. β = 1 is real symmetric, β = 2 complex Hermitian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub beta: u8,
}

impl JacobiParams {
    pub fn new(n: usize, p: f64, q: f64, beta: u8) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if !(p > 0.0 && q > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Jacobi parameters must be positive, got p={p}, q={q}"
            )));
        }
        if beta != 1 && beta != 2 {
            return Err(Error::InvalidInput(format!(
                "beta must be 1 or 2, got {beta}"
            )));
        }
        Ok(Self { n, p, q, beta })
    }

    /// Ensemble coupled to the H₀ Johansen spectrum: J(N; N/2, (T−2N)/2).
    pub fn johansen(n: usize, t: usize) -> Result<Self> {
        if t <= 2 * n {
            return Err(Error::UnsupportedRegime(format!(
                "Johansen coupling needs T > 2N, got N={n}, T={t}"
            )));
        }
        Self::new(n, n as f64 / 2.0, (t as f64 - 2.0 * n as f64) / 2.0, 1)
    }

    /// Ensemble coupled to the white-noise spectrum:
    /// J(N; (T−N−1)/2, (T−2N)/2).
    pub fn white_noise(n: usize, t: usize) -> Result<Self> {
        if t <= 2 * n {
            return Err(Error::UnsupportedRegime(format!(
                "white-noise coupling needs T > 2N, got N={n}, T={t}"
            )));
        }
        Self::new(
            n,
            (t as f64 - n as f64 - 1.0) / 2.0,
            (t as f64 - 2.0 * n as f64) / 2.0,
            1,
        )
    }

    /// Law of the sum-corner construction on SO(𝒯) / U(𝒯):
    /// det(M)^{βN/2+β−2} det(1−M)^{β(𝒯−2N+1)/2−1}.
    pub fn sum_corner(n: usize, t_script: usize, beta: u8) -> Result<Self> {
        if t_script < 2 * n {
            return Err(Error::UnsupportedRegime(format!(
                "corner construction needs 𝒯 >= 2N, got N={n}, 𝒯={t_script}"
            )));
        }
        let b = beta as f64;
        Self::new(
            n,
            b / 2.0 * n as f64 + b - 1.0,
            b / 2.0 * (t_script as f64 - 2.0 * n as f64 + 1.0),
            beta,
        )
    }

    /// Law of the top-left-corner construction:
    /// det(M)^{β(𝒯−N)/2+β−2} det(1−M)^{β(𝒯−2N+1)/2−1}.
    pub fn var0_corner(n: usize, t_script: usize, beta: u8) -> Result<Self> {
        if t_script < 2 * n {
            return Err(Error::UnsupportedRegime(format!(
                "corner construction needs 𝒯 >= 2N, got N={n}, 𝒯={t_script}"
            )));
        }
        let b = beta as f64;
        Self::new(
            n,
            b / 2.0 * (t_script as f64 - n as f64) + b - 1.0,
            b / 2.0 * (t_script as f64 - 2.0 * n as f64 + 1.0),
            beta,
        )
    }

    /// Data dimensions (K, T) so that canonical correlations of
    /// independent N×T and K×T Gaussian panels follow this ensemble:
    /// p = β(K−N+1)/2, q = β(T−N−K+1)/2.
    pub fn cc_dims(&self) -> Result<(usize, usize)> {
        let b = self.beta as f64;
        let k = 2.0 / b * self.p + self.n as f64 - 1.0;
        let t = 2.0 / b * self.q + self.n as f64 + k - 1.0;
        let check = |x: f64, what: &str| -> Result<usize> {
            if (x - x.round()).abs() > 1e-9 || x.round() < 1.0 {
                return Err(Error::InvalidInput(format!(
                    "parameters (p={}, q={}, beta={}) do not correspond to integer {what}",
                    self.p, self.q, self.beta
                )));
            }
            Ok(x.round() as usize)
        };
        let k = check(k, "K")?;
        let t = check(t, "T")?;
        if self.n > k || self.n + k > t {
            return Err(Error::InvalidInput(format!(
                "canonical-correlation construction needs N <= K and N+K <= T, \
                 got N={}, K={k}, T={t}",
                self.n
            )));
        }
        Ok((k, t))
    }

    /// The rescaled parameters (𝗉, 𝗊) of the large-N limit:
    /// (p−1)/N = (𝗉−1)/2, (q−1)/N = (𝗊−1)/2.
    pub fn asymptotic(&self) -> (f64, f64) {
        let n = self.n as f64;
        (
            2.0 * (self.p - 1.0) / n + 1.0,
            2.0 * (self.q - 1.0) / n + 1.0,
        )
    }
}
