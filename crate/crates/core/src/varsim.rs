//! Simulation of VAR panels in error-correction form,
//!
//!   ΔX_t = Γ₁ ΔX_{t−1} + Π X_{t−1} + μ + ε_t,   ε_t = Λ^{1/2} z_t,
//!
//! with the optional lagged-difference term, a menu of error
//! distributions, and generators for rank-one cointegrated alternatives
//! and scaled initial conditions.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_distr::{Cauchy, Distribution, StandardNormal, StandardUniform};

use crate::error::{Error, Result};

/// Innovation distribution for the z_t coordinates. Non-Gaussian options
/// are centered to mean zero but deliberately not variance-normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorDist {
    /// Standard normal.
    Gaussian,
    /// Uniform on [0,1], shifted by −1/2.
    Uniform01,
    /// Uniform on {1,2,3}, shifted by −2.
    Uniform3Pt,
    /// Product of two independent standard normals.
    GaussianProduct,
    /// Standard Cauchy; no moments, included as a negative control.
    Cauchy,
}

impl ErrorDist {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "uniform01" => Ok(Self::Uniform01),
            "uniform-3pt" => Ok(Self::Uniform3Pt),
            "gaussian-product" => Ok(Self::GaussianProduct),
            "cauchy" => Ok(Self::Cauchy),
            other => Err(Error::Parse(format!(
                "unknown error distribution '{other}' (expected gaussian, uniform01, \
                 uniform-3pt, gaussian-product or cauchy)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Uniform01 => "uniform01",
            Self::Uniform3Pt => "uniform-3pt",
            Self::GaussianProduct => "gaussian-product",
            Self::Cauchy => "cauchy",
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Gaussian => rng.sample(StandardNormal),
            Self::Uniform01 => rng.sample::<f64, _>(StandardUniform) - 0.5,
            Self::Uniform3Pt => (rng.random_range(1..=3) as f64) - 2.0,
            Self::GaussianProduct => {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                a * b
            }
            Self::Cauchy => Cauchy::new(0.0, 1.0).unwrap().sample(rng),
        }
    }
}

/// Full description of the data-generating process.
#[derive(Debug, Clone)]
pub struct VarModelSpec {
    pub n: usize,
    pub t: usize,
    pub pi: Array2<f64>,
    pub gamma1: Option<Array2<f64>>,
    pub mu: Array1<f64>,
    /// Lower-triangular Cholesky factor of the innovation covariance Λ.
    pub lambda_chol: Array2<f64>,
    pub x0: Array1<f64>,
    pub error_dist: ErrorDist,
}

impl VarModelSpec {
    /// The null model: Π = 0, μ = 0, Λ = I, X₀ = 0, Gaussian errors.
    pub fn null_model(n: usize, t: usize) -> Self {
        Self {
            n,
            t,
            pi: Array2::zeros((n, n)),
            gamma1: None,
            mu: Array1::zeros(n),
            lambda_chol: Array2::eye(n),
            x0: Array1::zeros(n),
            error_dist: ErrorDist::Gaussian,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.t == 0 {
            return Err(Error::InvalidInput("n and t must be positive".into()));
        }
        let n = self.n;
        if self.pi.dim() != (n, n) {
            return Err(Error::InvalidInput(format!(
                "pi must be {n}x{n}, got {:?}",
                self.pi.dim()
            )));
        }
        if let Some(g) = &self.gamma1 {
            if g.dim() != (n, n) {
                return Err(Error::InvalidInput(format!(
                    "gamma1 must be {n}x{n}, got {:?}",
                    g.dim()
                )));
            }
        }
        if self.mu.len() != n || self.x0.len() != n {
            return Err(Error::InvalidInput(
                "mu and x0 must have length n".into(),
            ));
        }
        if self.lambda_chol.dim() != (n, n) {
            return Err(Error::InvalidInput(format!(
                "lambda_chol must be {n}x{n}, got {:?}",
                self.lambda_chol.dim()
            )));
        }
        for i in 0..n {
            if self.lambda_chol[(i, i)] <= 0.0 {
                return Err(Error::InvalidInput(
                    "lambda_chol must have strictly positive diagonal".into(),
                ));
            }
            for j in (i + 1)..n {
                if self.lambda_chol[(i, j)] != 0.0 {
                    return Err(Error::InvalidInput(
                        "lambda_chol must be lower triangular".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Simulated panel: X₀ plus the T columns X₁..X_T.
#[derive(Debug, Clone)]
pub struct Panel {
    pub n: usize,
    pub t: usize,
    pub x0: Array1<f64>,
    /// n×T, column τ−1 holds X_τ.
    pub data: Array2<f64>,
}

impl Panel {
    pub fn new(x0: Array1<f64>, data: Array2<f64>) -> Result<Self> {
        let (n, t) = data.dim();
        if t < 1 {
            return Err(Error::InvalidInput("panel needs t >= 1".into()));
        }
        if x0.len() != n {
            return Err(Error::InvalidInput(format!(
                "x0 length {} does not match panel dimension {n}",
                x0.len()
            )));
        }
        if x0.iter().any(|v| !v.is_finite()) || data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "panel contains non-finite entries".into(),
            ));
        }
        Ok(Self { n, t, x0, data })
    }

    /// Column τ = X_τ for τ = 0..T, with τ = 0 giving X₀.
    pub fn col(&self, tau: usize) -> ndarray::ArrayView1<'_, f64> {
        if tau == 0 {
            self.x0.view()
        } else {
            self.data.column(tau - 1)
        }
    }
}

/// Exact recursion of the error-correction form; with `gamma1` present the
/// VAR(2) recursion is seeded with ΔX₀ = 0.
pub fn simulate<R: Rng + ?Sized>(spec: &VarModelSpec, rng: &mut R) -> Result<Panel> {
    spec.validate()?;
    let n = spec.n;
    let t = spec.t;
    let mut data = Array2::zeros((n, t));
    let mut x_prev = spec.x0.clone();
    let mut dx_prev = Array1::zeros(n);
    let mut z = Array1::zeros(n);
    for tau in 0..t {
        for zi in z.iter_mut() {
            *zi = spec.error_dist.draw(rng);
        }
        let eps = spec.lambda_chol.dot(&z);
        let mut dx = spec.pi.dot(&x_prev) + &spec.mu + &eps;
        if let Some(g) = &spec.gamma1 {
            dx += &g.dot(&dx_prev);
        }
        let x = &x_prev + &dx;
        data.column_mut(tau).assign(&x);
        x_prev = x;
        dx_prev = dx;
    }
    Panel::new(spec.x0.clone(), data)
}

/// Uniformly random point on the unit sphere in ℝⁿ.
pub fn sphere_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Array1<f64> {
    loop {
        let v = Array1::from_shape_simple_fn(n, || rng.sample::<f64, _>(StandardNormal));
        let norm = v.dot(&v).sqrt();
        if norm > 1e-100 {
            return v / norm;
        }
    }
}

/// Asymmetric rank-one alternative Π = uvᵀ with u, v independent uniform
/// unit vectors, v negated if needed so the nonzero eigenvalue vᵀu is
/// negative.
pub fn rank1_alternative<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Array2<f64>> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let u = sphere_vector(n, rng);
    let mut v = sphere_vector(n, rng);
    if v.dot(&u) >= 0.0 {
        v.mapv_inplace(|x| -x);
    }
    let mut pi = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            pi[(i, j)] = u[i] * v[j];
        }
    }
    Ok(pi)
}

/// Symmetric rank-one alternative Π = −λ vvᵀ with v uniform on the sphere
/// and λ ∈ [0,2] (the stationarity window).
pub fn sym_rank1_alternative<R: Rng + ?Sized>(
    n: usize,
    lam: f64,
    rng: &mut R,
) -> Result<Array2<f64>> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    if !(0.0..=2.0).contains(&lam) {
        return Err(Error::InvalidInput(format!(
            "lambda must lie in [0,2], got {lam}"
        )));
    }
    let v = sphere_vector(n, rng);
    let mut pi = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            pi[(i, j)] = -lam * v[i] * v[j];
        }
    }
    Ok(pi)
}

/// Initial condition X₀ with i.i.d. std0·N(0,1) coordinates.
pub fn scaled_x0<R: Rng + ?Sized>(n: usize, std0: f64, rng: &mut R) -> Result<Array1<f64>> {
    if std0 < 0.0 {
        return Err(Error::InvalidInput(format!(
            "std0 must be nonnegative, got {std0}"
        )));
    }
    Ok(Array1::from_shape_simple_fn(n, || {
        std0 * rng.sample::<f64, _>(StandardNormal)
    }))
}
