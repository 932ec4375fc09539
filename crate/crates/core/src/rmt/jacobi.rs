//! Three constructions of the Jacobi ensemble: canonical correlations of
//! independent Gaussian panels, and two corner constructions on Haar
//! orthogonal/unitary matrices.

use ndarray::{s, Array2};
use ndarray_linalg::{EigValsh, Inverse, UPLO};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    cholesky_lower, haar_orthogonal, haar_unitary, solve_lower, sym_eigs, SymMatrix,
};
use crate::rmt::JacobiParams;

/// A draw of a Jacobi-distributed matrix; real symmetric at β = 1,
/// complex Hermitian at β = 2.
#[derive(Debug, Clone)]
pub enum JacobiDraw {
    Real(SymMatrix),
    Complex(Array2<Complex64>),
}

impl JacobiDraw {
    /// Eigenvalues, descending.
    pub fn eigs(&self) -> Result<Vec<f64>> {
        match self {
            JacobiDraw::Real(m) => sym_eigs(m),
            JacobiDraw::Complex(m) => {
                let mut vals = m
                    .eigvalsh(UPLO::Lower)
                    .map_err(|e| Error::InvalidInput(format!("eigendecomposition failed: {e}")))?
                    .to_vec();
                vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
                Ok(vals)
            }
        }
    }

    /// Largest deviation of the spectrum from the interval [0,1].
    pub fn range_defect(&self) -> Result<f64> {
        let eigs = self.eigs()?;
        Ok(eigs
            .iter()
            .map(|&x| (-x).max(x - 1.0).max(0.0))
            .fold(0.0, f64::max))
    }
}

/// Squared sample canonical correlations of independent N×T and K×T
/// standard Gaussian panels, which follow J(N; β(K−N+1)/2, β(T−N−K+1)/2).
/// Returns the N eigenvalues, descending.
pub fn sample_jacobi_cc<R: Rng + ?Sized>(
    params: &JacobiParams,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let (k, t) = params.cc_dims()?;
    let n = params.n;
    match params.beta {
        1 => {
            let x = Array2::from_shape_simple_fn((n, t), || rng.sample::<f64, _>(StandardNormal));
            let y = Array2::from_shape_simple_fn((k, t), || rng.sample::<f64, _>(StandardNormal));
            let sxx = SymMatrix::from_lower(x.dot(&x.t()))?;
            let syy = SymMatrix::from_lower(y.dot(&y.t()))?;
            let sxy = x.dot(&y.t());
            let lx = cholesky_lower(&sxx)?;
            let ly = cholesky_lower(&syy)?;
            // H = L_y⁻¹ S_yx L_x⁻ᵀ; the squared canonical correlations are
            // the eigenvalues of HᵀH = L_x⁻¹ S_xy S_yy⁻¹ S_yx L_x⁻ᵀ.
            let g = solve_lower(&lx, &sxy); // L_x⁻¹ S_xy
            let h = solve_lower(&ly, &g.t().to_owned()); // L_y⁻¹ S_yx L_x⁻ᵀ
            let m = SymMatrix::from_lower(h.t().dot(&h))?;
            let eigs = sym_eigs(&m)?;
            Ok(eigs.iter().map(|&x| x.clamp(0.0, 1.0)).collect())
        }
        2 => {
            let cg = |rng: &mut R| {
                Complex64::new(
                    rng.sample::<f64, _>(StandardNormal),
                    rng.sample::<f64, _>(StandardNormal),
                )
            };
            let x = Array2::from_shape_simple_fn((n, t), || cg(rng));
            let y = Array2::from_shape_simple_fn((k, t), || cg(rng));
            let xh = x.t().mapv(|v| v.conj());
            let yh = y.t().mapv(|v| v.conj());
            let sxx = x.dot(&xh);
            let syy = y.dot(&yh);
            let sxy = x.dot(&yh);
            let syx = y.dot(&xh);
            let m = sxx
                .inv()
                .map_err(|e| Error::DegenerateSample(format!("singular S_xx: {e}")))?
                .dot(&sxy)
                .dot(
                    &syy.inv()
                        .map_err(|e| Error::DegenerateSample(format!("singular S_yy: {e}")))?,
                )
                .dot(&syx);
            // m is similar to a Hermitian PSD matrix; symmetrize before
            // the Hermitian eigensolver.
            let mh = m.t().mapv(|v| v.conj());
            let sym = (&m + &mh).mapv(|v| v * 0.5);
            let draw = JacobiDraw::Complex(sym);
            let eigs = draw.eigs()?;
            Ok(eigs.iter().map(|&x| x.clamp(0.0, 1.0)).collect())
        }
        b => Err(Error::InvalidInput(format!("unsupported beta {b}"))),
    }
}

/// Sum-corner construction: O Haar on SO(𝒯) (U(𝒯) at β = 2),
/// U = (1+O)⁻¹, M = [U]ₙₙ([U*U]ₙₙ)⁻¹[U*]ₙₙ. The law is
/// J(N; βN/2+β−1, β(𝒯−2N+1)/2).
pub fn sample_jacobi_sum_corner<R: Rng + ?Sized>(
    n: usize,
    t_script: usize,
    beta: u8,
    rng: &mut R,
) -> Result<JacobiDraw> {
    JacobiParams::sum_corner(n, t_script, beta)?; // validates the regime
    match beta {
        1 => {
            let o = haar_orthogonal(t_script, rng)?;
            let u = (Array2::<f64>::eye(t_script) + o.as_array())
                .inv()
                .map_err(|e| Error::DegenerateSample(format!("1+O not invertible: {e}")))?;
            let un = u.slice(s![..n, ..n]).to_owned();
            let p = u.t().dot(&u);
            let pn = SymMatrix::from_lower(p.slice(s![..n, ..n]).to_owned())?;
            let lp = cholesky_lower(&pn)?;
            // M = C (PₙₙPₙₙ)… : with Pₙₙ = LLᵀ, M = W Wᵀ, W = C L⁻ᵀ.
            let w = solve_lower(&lp, &un.t().to_owned()); // L⁻¹ Cᵀ
            Ok(JacobiDraw::Real(SymMatrix::from_lower(w.t().dot(&w))?))
        }
        2 => {
            let o = haar_unitary(t_script, rng)?;
            let eye = Array2::<Complex64>::eye(t_script);
            let u = (&eye + &o)
                .inv()
                .map_err(|e| Error::DegenerateSample(format!("1+O not invertible: {e}")))?;
            let un = u.slice(s![..n, ..n]).to_owned();
            let uh = u.t().mapv(|v| v.conj());
            let p = uh.dot(&u);
            let pn = p.slice(s![..n, ..n]).to_owned();
            let pninv = pn
                .inv()
                .map_err(|e| Error::DegenerateSample(format!("singular corner: {e}")))?;
            let unh = un.t().mapv(|v| v.conj());
            let m = un.dot(&pninv).dot(&unh);
            let mh = m.t().mapv(|v| v.conj());
            Ok(JacobiDraw::Complex((&m + &mh).mapv(|v| v * 0.5)))
        }
        b => Err(Error::InvalidInput(format!("unsupported beta {b}"))),
    }
}

/// Top-left-corner construction: A the N×N corner of Haar O, then
/// M = (1+A)(2+A+A*)⁻¹(1+A*). The law is J(N; β(𝒯−N)/2+β−1, β(𝒯−2N+1)/2).
pub fn sample_jacobi_var0_corner<R: Rng + ?Sized>(
    n: usize,
    t_script: usize,
    beta: u8,
    rng: &mut R,
) -> Result<JacobiDraw> {
    JacobiParams::var0_corner(n, t_script, beta)?;
    match beta {
        1 => {
            let o = haar_orthogonal(t_script, rng)?;
            let a = o.as_array().slice(s![..n, ..n]).to_owned();
            let one = Array2::<f64>::eye(n);
            let mid = SymMatrix::from_lower(2.0 * &one + &a + &a.t())?;
            let l = cholesky_lower(&mid)?;
            // M = (1+A)(LLᵀ)⁻¹(1+Aᵀ) = W Wᵀ with W = (1+A)L⁻ᵀ.
            let w = solve_lower(&l, &(&one + &a).t().to_owned());
            Ok(JacobiDraw::Real(SymMatrix::from_lower(w.t().dot(&w))?))
        }
        2 => {
            let o = haar_unitary(t_script, rng)?;
            let a = o.slice(s![..n, ..n]).to_owned();
            let ah = a.t().mapv(|v| v.conj());
            let one = Array2::<Complex64>::eye(n);
            let mid = (&one).mapv(|v| v * 2.0) + &a + &ah;
            let midinv = mid
                .inv()
                .map_err(|e| Error::DegenerateSample(format!("singular 2+A+A*: {e}")))?;
            let m = (&one + &a).dot(&midinv).dot(&(&one + &ah));
            let mh = m.t().mapv(|v| v.conj());
            Ok(JacobiDraw::Complex((&m + &mh).mapv(|v| v * 0.5)))
        }
        b => Err(Error::InvalidInput(format!("unsupported beta {b}"))),
    }
}

/// Log of the unnormalized eigenvalue density
/// ∏_{i<j}|xᵢ−xⱼ|^β ∏ xᵢ^{p−1}(1−xᵢ)^{q−1}; −∞ off (0,1).
pub fn jacobi_log_density(params: &JacobiParams, eigs: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, &x) in eigs.iter().enumerate() {
        if !(0.0 < x && x < 1.0) {
            return f64::NEG_INFINITY;
        }
        acc += (params.p - 1.0) * x.ln() + (params.q - 1.0) * (1.0 - x).ln();
        for &y in &eigs[i + 1..] {
            let d = (x - y).abs();
            if d == 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += params.beta as f64 * d.ln();
        }
    }
    acc
}
