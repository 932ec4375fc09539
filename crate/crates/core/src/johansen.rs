//! The cointegration test pipeline: de-trend lagged levels, de-mean both
//! regressors, form the moment matrices S_ij, extract the squared sample
//! canonical correlations
//!
//!   det(S₁₀S₀₀⁻¹S₀₁ − λS₁₁) = 0,   1 ≥ λ₁ ≥ … ≥ λ_N ≥ 0,
//!
//! standardize Σ_{i≤r} ln(1−λᵢ) by the closed-form constants (c₁, c₂),
//! and compare against the tabulated quantiles of Σ_{i≤r} 𝔞ᵢ. Also the
//! cyclic-increment white-noise variant.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::harness::QuantileTable;
use crate::linalg::{cholesky_lower, gen_eigs_spd, solve_lower, SymMatrix};
use crate::varsim::Panel;

/// De-meaned residual blocks: column t of `r0` is R₀t, of `r1` is R₁t.
#[derive(Debug, Clone)]
pub struct ResidualPair {
    pub r0: Array2<f64>,
    pub r1: Array2<f64>,
}

/// Squared sample canonical correlations, descending in [0, 1].
#[derive(Debug, Clone)]
pub struct EigenSpectrum {
    pub lambdas: Vec<f64>,
}

/// Closed-form standardization constants of the limit theorem.
#[derive(Debug, Clone, Copy)]
pub struct ScalingConstants {
    pub p_hat: f64,
    pub q_hat: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// c₁ = ln(1−λ₊).
    pub c1: f64,
    /// c₂ < 0; the statistic scale at the soft edge.
    pub c2: f64,
    pub simplified: bool,
}

/// Whether to drop the 2/N corrections in (𝗉, 𝗊).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Simplified {
    /// Simplified iff T/N >= 6.
    Auto,
    On,
    Off,
}

/// Full verdict of the test at rank r and level alpha.
#[derive(Debug, Clone)]
pub struct TestOutcome {
    pub r: usize,
    /// Σ_{i≤r} ln(1−λᵢ); −∞ when some λᵢ = 1 (flagged degenerate).
    pub raw_stat: f64,
    /// (raw − r·c₁)/(N^{−2/3}·c₂); +∞ in the degenerate case.
    pub standardized: f64,
    pub alpha: f64,
    pub critical_value: f64,
    pub reject: bool,
    /// λ₁ = 1 within clamping tolerance: certain rejection, but the raw
    /// statistic is off the asymptotic scale.
    pub degenerate: bool,
    pub spectrum: EigenSpectrum,
    pub constants: ScalingConstants,
}

/// De-trended lagged levels: column t = X_{t−1} − ((t−1)/T)(X_T − X₀),
/// t = 1..T.
pub fn detrend(panel: &Panel) -> Result<Array2<f64>> {
    let (n, t) = (panel.n, panel.t);
    if t < 2 {
        return Err(Error::InvalidInput("detrending needs T >= 2".into()));
    }
    let span = &panel.col(t).to_owned() - &panel.x0;
    let mut out = Array2::zeros((n, t));
    for tau in 1..=t {
        let drift = (tau - 1) as f64 / t as f64;
        let col = &panel.col(tau - 1).to_owned() - &(drift * &span);
        out.column_mut(tau - 1).assign(&col);
    }
    Ok(out)
}

/// Right-multiplication by the projector 𝒫 orthogonal to (1,…,1):
/// subtracts each row's mean.
fn demean_rows(m: &mut Array2<f64>) {
    let t = m.ncols() as f64;
    for mut row in m.rows_mut() {
        let mean = row.sum() / t;
        row.mapv_inplace(|x| x - mean);
    }
}

/// R₀ = ΔX·𝒫 and R₁ = X̃·𝒫.
pub fn residuals(panel: &Panel) -> Result<ResidualPair> {
    let xt = detrend(panel)?;
    let (n, t) = (panel.n, panel.t);
    let mut dx = Array2::zeros((n, t));
    for tau in 1..=t {
        let d = &panel.col(tau).to_owned() - &panel.col(tau - 1);
        dx.column_mut(tau - 1).assign(&d);
    }
    let mut r0 = dx;
    let mut r1 = xt;
    demean_rows(&mut r0);
    demean_rows(&mut r1);
    Ok(ResidualPair { r0, r1 })
}

/// The four moment matrices S_ij = R_i R_jᵀ; S₁₀ = S₀₁ᵀ exactly.
pub fn s_matrices(res: &ResidualPair) -> (Array2<f64>, Array2<f64>, Array2<f64>, Array2<f64>) {
    let s00 = res.r0.dot(&res.r0.t());
    let s01 = res.r0.dot(&res.r1.t());
    let s10 = s01.t().to_owned();
    let s11 = res.r1.dot(&res.r1.t());
    (s00, s01, s10, s11)
}

/// Eigenvalues of det(S₁₀S₀₀⁻¹S₀₁ − λS₁₁) = 0, clamped to [0,1] with
/// tolerance 1e−9 (anything further out is a hard error).
pub fn canonical_eigs(
    s00: &Array2<f64>,
    s01: &Array2<f64>,
    s10: &Array2<f64>,
    s11: &Array2<f64>,
) -> Result<EigenSpectrum> {
    let n = s00.nrows();
    let degenerate = |what: &str, pivot: f64| {
        Error::DegenerateSample(format!(
            "{what} is not positive definite (smallest pivot {pivot:.3e}); \
             the sample moment matrices are rank deficient"
        ))
    };
    let l00 = cholesky_lower(&SymMatrix::symmetrized(s00)?)
        .map_err(|e| match e {
            Error::SingularPencil { pivot } => degenerate("S00", pivot),
            other => other,
        })?;
    // A = S₁₀S₀₀⁻¹S₀₁ = (L⁻¹S₀₁)ᵀ(L⁻¹S₀₁): symmetric PSD by construction.
    let w = solve_lower(&l00, s01);
    let a = SymMatrix::from_lower(w.t().dot(&w))?;
    let b = SymMatrix::symmetrized(s11)?;
    let _ = s10; // S₁₀ enters as S₀₁ᵀ; accepted for signature symmetry
    let raw = gen_eigs_spd(&a, &b).map_err(|e| match e {
        Error::SingularPencil { pivot } => degenerate("S11", pivot),
        other => other,
    })?;
    let mut lambdas = Vec::with_capacity(n);
    for &x in &raw {
        if !(-1e-9..=1.0 + 1e-9).contains(&x) {
            return Err(Error::InvalidInput(format!(
                "canonical correlation {x} outside [0,1] beyond tolerance"
            )));
        }
        lambdas.push(x.clamp(0.0, 1.0));
    }
    Ok(EigenSpectrum { lambdas })
}

/// Standardization constants: 𝗉 = 2 − 2/N, 𝗊 = T/N − 1 − 2/N, or the
/// simplified 𝗉 = 2, 𝗊 = T/N − 1. Auto mode simplifies iff T/N >= 6.
pub fn scaling_constants(n: usize, t: usize, simplified: Simplified) -> Result<ScalingConstants> {
    if n == 0 || t == 0 {
        return Err(Error::InvalidInput("need positive dimensions".into()));
    }
    let c = t as f64 / n as f64;
    if c <= 2.0 {
        return Err(Error::UnsupportedRegime(format!(
            "the test requires T/N > 2, got T/N = {c:.3} (N={n}, T={t}); \
             for T/N <= 2 the largest canonical correlations are identically 1"
        )));
    }
    let simplified = match simplified {
        Simplified::On => true,
        Simplified::Off => false,
        Simplified::Auto => c >= 6.0,
    };
    let (p_hat, q_hat) = if simplified {
        (2.0, c - 1.0)
    } else {
        (2.0 - 2.0 / n as f64, c - 1.0 - 2.0 / n as f64)
    };
    // The soft-edge standardization needs both rescaled parameters above 1;
    // at p_hat <= 1 the lower edge hits 0, at q_hat <= 1 the upper edge
    // hits 1 and c1 = ln(1 - lambda_plus) diverges. With exact constants
    // this happens for N = 2 or T <= 2N + 2.
    if p_hat <= 1.0 || q_hat <= 1.0 {
        return Err(Error::UnsupportedRegime(format!(
            "standardization constants degenerate at N={n}, T={t} \
             (p_hat={p_hat:.3}, q_hat={q_hat:.3}); both must exceed 1, \
             i.e. the spectral edges must stay inside (0, 1)"
        )));
    }
    let (lambda_minus, lambda_plus) = crate::rmt::support_edges(p_hat, q_hat);
    let c1 = (1.0 - lambda_plus).ln();
    let s = p_hat + q_hat;
    let c2 = -(2.0f64).powf(2.0 / 3.0)
        * lambda_plus.powf(2.0 / 3.0)
        * (1.0 - lambda_plus).powf(-1.0 / 3.0)
        * (lambda_plus - lambda_minus).powf(-1.0 / 3.0)
        * s.powf(-2.0 / 3.0);
    Ok(ScalingConstants {
        p_hat,
        q_hat,
        lambda_plus,
        lambda_minus,
        c1,
        c2,
        simplified,
    })
}

/// Standardized statistic (Σ_{i≤r} ln(1−λᵢ) − r·c₁)/(N^{−2/3}·c₂).
pub fn standardize(spectrum: &EigenSpectrum, consts: &ScalingConstants, r: usize) -> (f64, f64) {
    let raw: f64 = spectrum.lambdas[..r].iter().map(|&l| (1.0 - l).ln()).sum();
    let n = spectrum.lambdas.len() as f64;
    let standardized = (raw - r as f64 * consts.c1) / (n.powf(-2.0 / 3.0) * consts.c2);
    (raw, standardized)
}

/// The full pipeline: detrend → residuals → S matrices → spectrum →
/// standardize → decide against the table's (r, alpha) quantile.
pub fn run_test(
    panel: &Panel,
    r: usize,
    alpha: f64,
    table: &QuantileTable,
    simplified: Simplified,
) -> Result<TestOutcome> {
    if r == 0 || r > panel.n {
        return Err(Error::InvalidInput(format!(
            "rank r={r} must satisfy 1 <= r <= N={}",
            panel.n
        )));
    }
    let critical_value = table.lookup(r, alpha)?;
    let constants = scaling_constants(panel.n, panel.t, simplified)?;
    let res = residuals(panel)?;
    let (s00, s01, s10, s11) = s_matrices(&res);
    let spectrum = canonical_eigs(&s00, &s01, &s10, &s11)?;
    // Under H0 with T/N > 2 the spectrum stays bounded away from 1, so a
    // top eigenvalue at 1 (within clamp tolerance) signals an exactly
    // cointegrated input rather than roundoff.
    let degenerate = spectrum.lambdas[..r].iter().any(|&l| l >= 1.0 - 1e-9);
    let (raw_stat, standardized) = if degenerate {
        (f64::NEG_INFINITY, f64::INFINITY)
    } else {
        standardize(&spectrum, &constants, r)
    };
    // c₂ < 0 flips the tail: strong cointegration (very negative raw
    // statistic) maps to a large standardized value, so the decision is
    // one-sided upper against the tabulated quantile.
    let reject = standardized > critical_value;
    Ok(TestOutcome {
        r,
        raw_stat,
        standardized,
        alpha,
        critical_value,
        reject,
        degenerate,
        spectrum,
        constants,
    })
}

/// White-noise variant: cyclic increments Δᶜ (wrapping X₁ − X_T), no
/// de-trending, and levels X_t in place of lagged levels. Returns the
/// spectrum only; the decision rule is descriptive (small λ_N signals a
/// growing factor).
pub fn run_wn_test(panel: &Panel) -> Result<EigenSpectrum> {
    let (n, t) = (panel.n, panel.t);
    if t < 2 {
        return Err(Error::InvalidInput("white-noise test needs T >= 2".into()));
    }
    if t as f64 / n as f64 <= 2.0 {
        return Err(Error::UnsupportedRegime(format!(
            "white-noise test requires T/N > 2, got N={n}, T={t}"
        )));
    }
    let x = &panel.data;
    let mut dc = Array2::zeros((n, t));
    for tau in 0..t - 1 {
        let d = &x.column(tau + 1).to_owned() - &x.column(tau);
        dc.column_mut(tau).assign(&d);
    }
    let wrap = &x.column(0).to_owned() - &x.column(t - 1);
    dc.column_mut(t - 1).assign(&wrap);
    let mut levels = x.clone();
    let mut dc = dc;
    demean_rows(&mut dc);
    demean_rows(&mut levels);
    let s00 = dc.dot(&dc.t());
    let s01 = dc.dot(&levels.t());
    let s10 = s01.t().to_owned();
    let s11 = levels.dot(&levels.t());
    canonical_eigs(&s00, &s01, &s10, &s11)
}
