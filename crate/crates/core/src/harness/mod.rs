//! Reproducible parallel Monte Carlo: deterministic per-replication RNG
//! streams, empirical quantiles, Kolmogorov-Smirnov distances, quantile
//! tables with persistence, and the size/power/coupling experiments.
//!
//! Every experiment is a pure function of (config, seed). Replication k
//! draws its RNG from a counter-based hash of (seed, stream, k), so the
//! worker count and scheduling order never affect results.

mod experiments;
mod table;

pub use experiments::{
    power_experiment, size_experiment, statistic_quantiles, ExperimentCell, ExperimentReport,
    Horizon, PowerKind,
};
pub use table::{build_quantile_table, QuantileTable, TableMeta, GENERATOR_VERSION};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// SplitMix64 finalizer; a well-mixed 64-bit permutation.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Deterministic counter-based RNG for replication `rep` of stream
/// (`seed`, `stream`). Distinct (seed, stream, rep) triples give
/// independent-looking generators regardless of evaluation order.
pub fn stream_rng(seed: u64, stream: u64, rep: u64) -> ChaCha8Rng {
    let mut s = splitmix64(seed ^ 0x853c49e6748fea9b);
    s = splitmix64(s ^ stream.wrapping_mul(0xda942042e4dd58b5));
    s = splitmix64(s ^ rep.wrapping_mul(0x2545f4914f6cdd1d));
    let mut key = [0u8; 32];
    for (i, chunk) in key.chunks_mut(8).enumerate() {
        s = splitmix64(s ^ (i as u64).wrapping_mul(0x9e3779b97f4a7c15));
        chunk.copy_from_slice(&s.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Empirical quantile with linear interpolation of order statistics
/// (the "type 7" convention): h = (n−1)p, interpolate between the
/// surrounding order statistics.
pub fn empirical_quantile(sorted: &[f64], p: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::InvalidInput("quantile of empty sample".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "quantile level must be in [0,1], got {p}"
        )));
    }
    let n = sorted.len();
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = h - lo as f64;
    Ok(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

fn sorted_copy(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Two-sample Kolmogorov-Smirnov sup-distance.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("KS distance of empty sample".into()));
    }
    let a = sorted_copy(a);
    let b = sorted_copy(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(sup)
}

/// One-sample Kolmogorov-Smirnov sup-distance against a CDF.
pub fn ks_distance_cdf<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InvalidInput("KS distance of empty sample".into()));
    }
    let xs = sorted_copy(sample);
    let n = xs.len() as f64;
    let mut sup: f64 = 0.0;
    for (k, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max((f - k as f64 / n).abs());
        sup = sup.max(((k + 1) as f64 / n - f).abs());
    }
    Ok(sup)
}

/// Monte Carlo standard error of a rejection-rate estimate.
pub fn mc_std_error(p_hat: f64, reps: usize) -> f64 {
    if reps == 0 {
        return f64::NAN;
    }
    (p_hat * (1.0 - p_hat) / reps as f64).sqrt()
}
