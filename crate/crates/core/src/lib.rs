//! Cointegration testing for high-dimensional VAR panels.
//!
//! The centerpiece is a modified Johansen likelihood-ratio statistic whose
//! null distribution, after standardization, converges to a partial sum of
//! the Airy₁ point process. The crate provides:
//!
//! - the test pipeline itself ([`johansen`]),
//! - simulators for panels under the null and under cointegrated
//!   alternatives ([`varsim`]),
//! - the random-matrix machinery used to regenerate critical values from
//!   scratch: Jacobi ensembles, the Airy₁ edge via tridiagonal models, and
//!   the Wachter equilibrium measure ([`rmt`]),
//! - a Monte Carlo harness with deterministic seeding, quantile estimation
//!   and persistent quantile tables ([`harness`]).

// Link the system BLAS for ndarray's matrix products.
extern crate blas_src;

pub mod error;
pub mod harness;
pub mod johansen;
pub mod linalg;
pub mod rmt;
pub mod varsim;

pub use error::{Error, Result};
