//! Size, power and null-quantile experiments over simulated panels.
//! Replication-level parallelism with counter-based RNG streams keeps
//! every report a pure function of (config, seed).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::{empirical_quantile, mc_std_error, stream_rng};
use crate::johansen::{run_test, Simplified};
use crate::varsim::{
    rank1_alternative, scaled_x0, simulate, sym_rank1_alternative, ErrorDist, VarModelSpec,
};

use super::table::QuantileTable;

const STREAM_SIZE: u64 = 0x53495A45; // "SIZE"
const STREAM_POWER: u64 = 0x504F5752; // "POWR"
const STREAM_QSTAT: u64 = 0x51535441; // "QSTA"

/// Time horizon of a size experiment: explicit T or a fixed ratio T/N.
#[derive(Debug, Clone, Copy)]
pub enum Horizon {
    Fixed(usize),
    Ratio(f64),
}

impl Horizon {
    fn t_for(&self, n: usize) -> usize {
        match *self {
            Horizon::Fixed(t) => t,
            Horizon::Ratio(c) => (c * n as f64).round() as usize,
        }
    }
}

/// One grid point of an experiment; `estimate` is a rejection rate with
/// its Monte Carlo standard error, or absent when the cell was skipped.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentCell {
    pub label: String,
    pub n: usize,
    pub t: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub reps: usize,
    pub seed: u64,
    pub grid: Vec<ExperimentCell>,
}

fn rejection_rate<F>(reps: usize, make_outcome: F) -> Result<(f64, f64)>
where
    F: Fn(u64) -> Result<bool> + Sync,
{
    let rejects: Vec<bool> = (0..reps as u64)
        .into_par_iter()
        .map(&make_outcome)
        .collect::<Result<_>>()?;
    let p = rejects.iter().filter(|&&b| b).count() as f64 / reps as f64;
    Ok((p, mc_std_error(p, reps)))
}

/// Empirical size under Π = 0 for each N on the grid.
#[allow(clippy::too_many_arguments)]
pub fn size_experiment(
    ns: &[usize],
    horizon: Horizon,
    alpha: f64,
    r: usize,
    reps: usize,
    table: &QuantileTable,
    simplified: Simplified,
    seed: u64,
) -> Result<ExperimentReport> {
    let mut grid = Vec::new();
    if reps == 0 {
        return Ok(ExperimentReport { reps, seed, grid });
    }
    for (idx, &n) in ns.iter().enumerate() {
        let t = horizon.t_for(n);
        let label = format!("size N={n} T={t}");
        if t as f64 / n as f64 <= 2.0 {
            grid.push(ExperimentCell {
                label,
                n,
                t,
                param: None,
                estimate: None,
                std_error: None,
                skipped: Some(format!(
                    "T/N = {:.2} <= 2: outside the test's regime",
                    t as f64 / n as f64
                )),
            });
            continue;
        }
        let spec = VarModelSpec::null_model(n, t);
        let (p, se) = rejection_rate(reps, |rep| {
            let mut rng = stream_rng(seed, STREAM_SIZE + idx as u64, rep);
            let panel = simulate(&spec, &mut rng)?;
            Ok(run_test(&panel, r, alpha, table, simplified)?.reject)
        })?;
        grid.push(ExperimentCell {
            label,
            n,
            t,
            param: None,
            estimate: Some(p),
            std_error: Some(se),
            skipped: None,
        });
    }
    Ok(ExperimentReport { reps, seed, grid })
}

/// Family of alternatives swept by a power experiment. Powers are
/// averages over alternatives redrawn every replication.
#[derive(Debug, Clone)]
pub enum PowerKind {
    /// Π = uvᵀ with vᵀu < 0, over a grid of panel shapes.
    AsymRank1 { dims: Vec<(usize, usize)> },
    /// Π = −λvvᵀ over a grid of λ at a fixed shape.
    SymRank1 {
        n: usize,
        t: usize,
        lambdas: Vec<f64>,
    },
    /// Π = −λvvᵀ fixed, X₀ = std₀·N(0,1) over a grid of std₀.
    X0Sweep {
        n: usize,
        t: usize,
        lambda: f64,
        std0s: Vec<f64>,
    },
}

#[allow(clippy::too_many_arguments)]
pub fn power_experiment(
    kind: &PowerKind,
    r: usize,
    alpha: f64,
    reps: usize,
    table: &QuantileTable,
    simplified: Simplified,
    seed: u64,
) -> Result<ExperimentReport> {
    let mut grid = Vec::new();
    if reps == 0 {
        return Ok(ExperimentReport { reps, seed, grid });
    }
    let cells: Vec<(String, usize, usize, Option<f64>)> = match kind {
        PowerKind::AsymRank1 { dims } => dims
            .iter()
            .map(|&(n, t)| (format!("asym-rank1 N={n} T={t}"), n, t, None))
            .collect(),
        PowerKind::SymRank1 { n, t, lambdas } => lambdas
            .iter()
            .map(|&l| (format!("sym-rank1 N={n} T={t} lambda={l}"), *n, *t, Some(l)))
            .collect(),
        PowerKind::X0Sweep {
            n,
            t,
            lambda,
            std0s,
        } => std0s
            .iter()
            .map(|&s| {
                (
                    format!("x0-sweep N={n} T={t} lambda={lambda} std0={s}"),
                    *n,
                    *t,
                    Some(s),
                )
            })
            .collect(),
    };
    for (idx, (label, n, t, param)) in cells.into_iter().enumerate() {
        if t as f64 / n as f64 <= 2.0 {
            return Err(Error::Config(format!(
                "power grid point N={n} T={t} violates T/N > 2"
            )));
        }
        let (p, se) = rejection_rate(reps, |rep| {
            let mut rng = stream_rng(seed, STREAM_POWER + idx as u64, rep);
            let mut spec = VarModelSpec::null_model(n, t);
            match kind {
                PowerKind::AsymRank1 { .. } => {
                    spec.pi = rank1_alternative(n, &mut rng)?;
                }
                PowerKind::SymRank1 { .. } => {
                    spec.pi = sym_rank1_alternative(n, param.unwrap(), &mut rng)?;
                }
                PowerKind::X0Sweep { lambda, .. } => {
                    spec.pi = sym_rank1_alternative(n, *lambda, &mut rng)?;
                    spec.x0 = scaled_x0(n, param.unwrap(), &mut rng)?;
                }
            }
            let panel = simulate(&spec, &mut rng)?;
            Ok(run_test(&panel, r, alpha, table, simplified)?.reject)
        })?;
        grid.push(ExperimentCell {
            label,
            n,
            t,
            param,
            estimate: Some(p),
            std_error: Some(se),
            skipped: None,
        });
    }
    Ok(ExperimentReport { reps, seed, grid })
}

/// Empirical quantiles of the standardized statistic under Π = 0 with the
/// given innovation law — the probe used to study non-Gaussian errors.
#[allow(clippy::too_many_arguments)]
pub fn statistic_quantiles(
    n: usize,
    t: usize,
    r: usize,
    dist: ErrorDist,
    reps: usize,
    simplified: Simplified,
    seed: u64,
    probs: &[f64],
) -> Result<Vec<f64>> {
    if reps == 0 {
        return Err(Error::Config("need at least one replication".into()));
    }
    let mut spec = VarModelSpec::null_model(n, t);
    spec.error_dist = dist;
    let consts = crate::johansen::scaling_constants(n, t, simplified)?;
    let mut stats: Vec<f64> = (0..reps as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream_rng(seed, STREAM_QSTAT, rep);
            let panel = simulate(&spec, &mut rng)?;
            let res = crate::johansen::residuals(&panel)?;
            let (s00, s01, s10, s11) = crate::johansen::s_matrices(&res);
            let spectrum = crate::johansen::canonical_eigs(&s00, &s01, &s10, &s11)?;
            let (_, standardized) = crate::johansen::standardize(&spectrum, &consts, r);
            Ok(standardized)
        })
        .collect::<Result<_>>()?;
    stats.sort_by(|a, b| a.partial_cmp(b).unwrap());
    probs.iter().map(|&p| empirical_quantile(&stats, p)).collect()
}
