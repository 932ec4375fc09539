//! Critical-value tables for the standardized statistic: generation from
//! the Airy₁ point process and versioned TOML persistence.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{empirical_quantile, stream_rng};
use crate::rmt::airy1_sample;

pub const SCHEMA_VERSION: u32 = 1;
pub const GENERATOR_VERSION: &str = concat!("largevar-", env!("CARGO_PKG_VERSION"));

/// RNG stream id for table generation (disjoint from experiment streams).
const STREAM_AIRY: u64 = 0x41495259; // "AIRY"

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TableMeta {
    pub reps: u64,
    pub model_size: u64,
    pub seed: u64,
    pub generator: String,
    /// Empirical quantile convention used when the table was built.
    pub quantile_convention: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TableFile {
    schema_version: u32,
    rs: Vec<u32>,
    alphas: Vec<f64>,
    /// Row-major: values[i·len(alphas) + j] is the critical value for
    /// (rs[i], alphas[j]).
    values: Vec<f64>,
    meta: TableMeta,
}

/// Critical values of Σ_{i≤r} 𝔞ᵢ indexed by (r, α).
#[derive(Debug, Clone)]
pub struct QuantileTable {
    pub rs: Vec<usize>,
    pub alphas: Vec<f64>,
    values: Vec<f64>,
    pub meta: TableMeta,
    /// Non-fatal issues noticed at build or load time (low replication
    /// count, generator version mismatch).
    pub warnings: Vec<String>,
}

impl QuantileTable {
    pub fn new(
        rs: Vec<usize>,
        alphas: Vec<f64>,
        values: Vec<f64>,
        meta: TableMeta,
    ) -> Result<Self> {
        if rs.is_empty() || alphas.is_empty() {
            return Err(Error::Config("quantile table must be non-empty".into()));
        }
        if rs.iter().any(|&r| r == 0) {
            return Err(Error::Config("table ranks must be >= 1".into()));
        }
        if alphas.windows(2).any(|w| w[0] >= w[1])
            || alphas.iter().any(|&a| !(0.0 < a && a < 1.0))
        {
            return Err(Error::Config(
                "alphas must be strictly increasing within (0,1)".into(),
            ));
        }
        if values.len() != rs.len() * alphas.len() {
            return Err(Error::Config(format!(
                "expected {} values, got {}",
                rs.len() * alphas.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("table values must be finite".into()));
        }
        for (i, &r) in rs.iter().enumerate() {
            let row = &values[i * alphas.len()..(i + 1) * alphas.len()];
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config(format!(
                    "critical values for r={r} are not strictly increasing in alpha"
                )));
            }
        }
        let mut warnings = Vec::new();
        if meta.reps < 1_000 {
            warnings.push(format!(
                "table built from only {} replications; critical values are noisy",
                meta.reps
            ));
        }
        Ok(Self {
            rs,
            alphas,
            values,
            meta,
            warnings,
        })
    }

    /// Critical value for (r, alpha); alpha matched within 1e-9.
    pub fn lookup(&self, r: usize, alpha: f64) -> Result<f64> {
        let i = self
            .rs
            .iter()
            .position(|&x| x == r)
            .ok_or_else(|| Error::Config(format!("table has no row for r={r}")))?;
        let j = self
            .alphas
            .iter()
            .position(|&a| (a - alpha).abs() < 1e-9)
            .ok_or_else(|| Error::Config(format!("table has no column for alpha={alpha}")))?;
        Ok(self.values[i * self.alphas.len() + j])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Serialize to the versioned TOML schema.
    pub fn to_toml(&self) -> String {
        let file = TableFile {
            schema_version: SCHEMA_VERSION,
            rs: self.rs.iter().map(|&r| r as u32).collect(),
            alphas: self.alphas.clone(),
            values: self.values.clone(),
            meta: self.meta.clone(),
        };
        toml::to_string_pretty(&file).expect("table serialization cannot fail")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: TableFile = toml::from_str(text).map_err(|e| {
            let at = e
                .span()
                .map(|s| format!(" at byte offset {}", s.start))
                .unwrap_or_default();
            Error::Parse(format!("quantile table{at}: {}", e.message()))
        })?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaVersion {
                found: file.schema_version,
                expected: SCHEMA_VERSION,
            });
        }
        let mut table = Self::new(
            file.rs.iter().map(|&r| r as usize).collect(),
            file.alphas,
            file.values,
            file.meta,
        )?;
        if table.meta.generator != GENERATOR_VERSION {
            table.warnings.push(format!(
                "table was generated by '{}' but this build is '{}'",
                table.meta.generator, GENERATOR_VERSION
            ));
        }
        Ok(table)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    /// The table shipped with the crate, regenerated by the `quantiles`
    /// CLI command; see its embedded meta block for provenance.
    pub fn builtin() -> Self {
        Self::from_toml(include_str!("../../data/builtin_quantiles.toml"))
            .expect("embedded table must be valid")
    }
}

/// Monte Carlo quantiles of Σ_{i≤r} 𝔞ᵢ from the tridiagonal Airy₁
/// approximation at the given model size. Deterministic for a fixed seed
/// regardless of thread count.
pub fn build_quantile_table(
    rs: &[usize],
    alphas: &[f64],
    reps: usize,
    model_size: usize,
    seed: u64,
) -> Result<QuantileTable> {
    if rs.is_empty() || alphas.is_empty() || reps == 0 {
        return Err(Error::Config(
            "need at least one rank, one alpha and one replication".into(),
        ));
    }
    let max_r = *rs.iter().max().unwrap();
    if max_r == 0 {
        return Err(Error::Config("ranks must be >= 1".into()));
    }

    // sums[rep] holds Σ_{i≤r} 𝔞ᵢ for every requested r.
    let sums: Vec<Vec<f64>> = (0..reps as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream_rng(seed, STREAM_AIRY, rep);
            let a = airy1_sample(max_r, model_size, &mut rng)?;
            Ok(rs
                .iter()
                .map(|&r| a.a[..r].iter().sum::<f64>())
                .collect::<Vec<f64>>())
        })
        .collect::<Result<_>>()?;

    let mut values = Vec::with_capacity(rs.len() * alphas.len());
    for (ri, _) in rs.iter().enumerate() {
        let mut col: Vec<f64> = sums.iter().map(|s| s[ri]).collect();
        col.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for &alpha in alphas {
            values.push(empirical_quantile(&col, alpha)?);
        }
    }

    QuantileTable::new(
        rs.to_vec(),
        alphas.to_vec(),
        values,
        TableMeta {
            reps: reps as u64,
            model_size: model_size as u64,
            seed,
            generator: GENERATOR_VERSION.to_string(),
            quantile_convention: "linear interpolation of order statistics (type 7)".into(),
        },
    )
}
