//! The Wachter distribution: equilibrium measure of the Jacobi ensemble
//! in the (𝗉, 𝗊) normalization,
//!
//!   μ(x) dx = (𝗉+𝗊)/(2π) · √((x−λ₋)(λ₊−x)) / (x(1−x)) on [λ₋, λ₊],
//!
//! together with the soft-edge constants c± that map edge fluctuations to
//! the Airy₁ scale.

use crate::error::{Error, Result};

/// Wachter measure with its support edges and edge constants.
#[derive(Debug, Clone, Copy)]
pub struct WachterParams {
    pub p_bar: f64,
    pub q_bar: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    /// Set when 𝗉 ≤ 1 or 𝗊 ≤ 1; the edge constants degenerate there
    /// (the density is still served).
    pub degenerate_edges: bool,
}

/// Support edges λ± = (√(𝗉(𝗉+𝗊−1)) ± √𝗊)² / (𝗉+𝗊)².
pub fn support_edges(p_bar: f64, q_bar: f64) -> (f64, f64) {
    let s = p_bar + q_bar;
    let root = (p_bar * (s - 1.0)).sqrt();
    let plus = (root + q_bar.sqrt()).powi(2) / (s * s);
    let minus = (root - q_bar.sqrt()).powi(2) / (s * s);
    (minus, plus)
}

impl WachterParams {
    pub fn new(p_bar: f64, q_bar: f64) -> Result<Self> {
        if !(p_bar.is_finite() && q_bar.is_finite()) || p_bar < 1.0 || q_bar < 1.0 {
            return Err(Error::InvalidInput(format!(
                "Wachter parameters must satisfy 𝗉, 𝗊 >= 1, got {p_bar}, {q_bar}"
            )));
        }
        let (lambda_minus, lambda_plus) = support_edges(p_bar, q_bar);
        let s = p_bar + q_bar;
        let width = (lambda_plus - lambda_minus).sqrt();
        let edge = |l: f64| s / 2.0 * width / (l * (1.0 - l));
        let degenerate_edges = p_bar <= 1.0 || q_bar <= 1.0;
        Ok(Self {
            p_bar,
            q_bar,
            lambda_plus,
            lambda_minus,
            c_plus: edge(lambda_plus),
            c_minus: if lambda_minus > 0.0 {
                edge(lambda_minus)
            } else {
                f64::INFINITY
            },
            degenerate_edges,
        })
    }

    /// Density of the equilibrium measure; 0 outside the support.
    pub fn pdf(&self, x: f64) -> f64 {
        if x <= self.lambda_minus || x >= self.lambda_plus {
            return 0.0;
        }
        let s = self.p_bar + self.q_bar;
        s / (2.0 * std::f64::consts::PI)
            * ((x - self.lambda_minus) * (self.lambda_plus - x)).sqrt()
            / (x * (1.0 - x))
    }

    /// CDF by adaptive Simpson quadrature, absolute tolerance 1e-8.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lambda_minus {
            return 0.0;
        }
        let hi = x.min(self.lambda_plus);
        adaptive_simpson(&|t| self.pdf(t), self.lambda_minus, hi, 1e-8).min(1.0)
    }

    /// Upper-edge standardization N^{2/3} c₊^{2/3} (x − λ₊); converges to
    /// the Airy₁ marginals for the largest Jacobi eigenvalues.
    pub fn standardize_upper(&self, n: usize, x: f64) -> f64 {
        (n as f64).powf(2.0 / 3.0) * self.c_plus.powf(2.0 / 3.0) * (x - self.lambda_plus)
    }

    /// Lower-edge mirror N^{2/3} c₋^{2/3} (λ₋ − x).
    pub fn standardize_lower(&self, n: usize, x: f64) -> f64 {
        (n as f64).powf(2.0 / 3.0) * self.c_minus.powf(2.0 / 3.0) * (self.lambda_minus - x)
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + adaptive_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive_step(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_on_polynomials() {
        let int = adaptive_simpson(&|x| x * x, 0.0, 1.0, 1e-10);
        assert!((int - 1.0 / 3.0).abs() < 1e-9);
        let int2 = adaptive_simpson(&|x| x.sin(), 0.0, std::f64::consts::PI, 1e-10);
        assert!((int2 - 2.0).abs() < 1e-8);
    }

    #[test]
    fn edges_closed_form_p2_q4() {
        // Independently verified closed-form values for 𝗉=2, 𝗊=4.
        let (lm, lp) = support_edges(2.0, 4.0);
        assert!((lp - 0.7402530733520421).abs() < 1e-12, "λ₊ {lp}");
        assert!((lm - 0.03752470442573534).abs() < 1e-12, "λ₋ {lm}");
    }

    #[test]
    fn edge_sum_identity() {
        // λ₊ + λ₋ = 2(𝗉(𝗉+𝗊−1)+𝗊)/(𝗉+𝗊)², an algebraic identity.
        for (p, q) in [(2.0, 4.0), (1.5, 9.0), (3.0, 3.0), (1.98, 3.98)] {
            let (lm, lp) = support_edges(p, q);
            let s = p + q;
            let expect = 2.0 * (p * (s - 1.0) + q) / (s * s);
            assert!((lm + lp - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn density_normalizes_and_cdf_endpoints() {
        for (p, q) in [(2.0, 4.0), (1.5, 9.0), (3.0, 3.0)] {
            let w = WachterParams::new(p, q).unwrap();
            assert_eq!(w.cdf(w.lambda_minus), 0.0);
            let total = w.cdf(w.lambda_plus);
            assert!((total - 1.0).abs() < 1e-6, "mass {total} at ({p},{q})");
            assert!(w.cdf(w.lambda_plus + 1.0) == total.min(1.0));
        }
    }

    #[test]
    fn cdf_is_monotone() {
        let w = WachterParams::new(2.0, 4.0).unwrap();
        let mut prev = -1.0;
        for i in 0..=50 {
            let x = w.lambda_minus
                + (w.lambda_plus - w.lambda_minus) * i as f64 / 50.0;
            let c = w.cdf(x);
            assert!(c >= prev - 1e-12);
            prev = c;
        }
    }

    #[test]
    fn edge_constants_value() {
        let w = WachterParams::new(2.0, 4.0).unwrap();
        // c± = (𝗉+𝗊)/2 · √(λ₊−λ₋)/(λ±(1−λ±)), evaluated directly.
        let width = (w.lambda_plus - w.lambda_minus).sqrt();
        let cp = 3.0 * width / (w.lambda_plus * (1.0 - w.lambda_plus));
        assert!((w.c_plus - cp).abs() < 1e-12);
        assert!(w.c_plus > 0.0 && w.c_minus > 0.0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(WachterParams::new(0.5, 4.0).is_err());
        assert!(WachterParams::new(2.0, 0.0).is_err());
        assert!(WachterParams::new(f64::NAN, 2.0).is_err());
    }

    #[test]
    fn boundary_parameters_flagged() {
        let w = WachterParams::new(1.0, 4.0).unwrap();
        assert!(w.degenerate_edges);
        assert!(w.pdf(0.5 * (w.lambda_minus + w.lambda_plus)) > 0.0);
        let w2 = WachterParams::new(2.0, 4.0).unwrap();
        assert!(!w2.degenerate_edges);
    }
}
