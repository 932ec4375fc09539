//! Command-line front end: ingest CSV panels, run the cointegration test,
//! generate critical-value tables, run size/power experiments, and emit
//! Wachter fit data for plotting.
//!
//! Exit codes: 0 = success / no rejection, 1 = rejection, 2 = error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ndarray::{Array1, Array2};
use serde_json::json;

use largevar::harness::{
    build_quantile_table, ks_distance_cdf, power_experiment, size_experiment, Horizon, PowerKind,
    QuantileTable,
};
use largevar::johansen::{
    canonical_eigs, residuals, run_test, run_wn_test, s_matrices, scaling_constants, Simplified,
};
use largevar::varsim::Panel;
use largevar::Error as LvError;

const JSON_SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "largevar",
    version,
    about = "Cointegration testing for high-dimensional VAR panels"
)]
struct Cli {
    /// RNG seed; every command is bit-reproducible for a fixed seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for Monte Carlo commands (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SimplifiedArg {
    /// Simplified constants iff T/N >= 6.
    Auto,
    On,
    Off,
}

impl From<SimplifiedArg> for Simplified {
    fn from(s: SimplifiedArg) -> Self {
        match s {
            SimplifiedArg::Auto => Simplified::Auto,
            SimplifiedArg::On => Simplified::On,
            SimplifiedArg::Off => Simplified::Off,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PowerKindArg {
    AsymRank1,
    SymRank1,
    X0Sweep,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the cointegration test on a CSV panel (first data row is X0).
    Test {
        /// CSV file: header row, then X0, then X1..XT (columns = series).
        input: PathBuf,
        /// Number of top eigenvalues entering the statistic.
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Confidence level of the critical value.
        #[arg(long, default_value_t = 0.95)]
        alpha: f64,
        /// Critical-value table (TOML); defaults to the built-in table.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SimplifiedArg::Auto)]
        simplified: SimplifiedArg,
        /// Run the white-noise variant (cyclic increments, spectrum only).
        #[arg(long)]
        wn: bool,
    },
    /// Regenerate the critical-value table from the Airy point process.
    Quantiles {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 2, 3])]
        r: Vec<usize>,
        #[arg(long, value_delimiter = ',',
              default_values_t = vec![0.9, 0.95, 0.975, 0.99])]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        reps: usize,
        #[arg(long, default_value_t = 1_000_000)]
        model_size: usize,
    },
    /// Empirical size under the null over a grid of panel dimensions.
    Size {
        /// Grid of N values: "5:10" (inclusive range) or "5,7,9".
        #[arg(long = "N", value_name = "GRID")]
        n: String,
        /// Fixed time horizon T (alternative to --ratio).
        #[arg(long = "T", value_name = "T")]
        t: Option<usize>,
        /// Fixed ratio T/N (alternative to --T).
        #[arg(long)]
        ratio: Option<f64>,
        #[arg(long, default_value_t = 0.95)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SimplifiedArg::Auto)]
        simplified: SimplifiedArg,
    },
    /// Empirical power against rank-1 alternatives (redrawn each rep).
    Power {
        #[arg(long, value_enum)]
        kind: PowerKindArg,
        /// Grid of N values (asym-rank1) or a single N (other kinds).
        #[arg(long = "N", value_name = "GRID")]
        n: String,
        /// Fixed T (single N) — for asym-rank1 use --ratio instead.
        #[arg(long = "T", value_name = "T")]
        t: Option<usize>,
        /// Ratio T/N, applied to every N on the grid.
        #[arg(long)]
        ratio: Option<f64>,
        /// Grid of lambda values for sym-rank1.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        /// Fixed lambda for x0-sweep.
        #[arg(long)]
        lambda: Option<f64>,
        /// Grid of initial-condition scales for x0-sweep.
        #[arg(long, value_delimiter = ',')]
        std0s: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.95)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SimplifiedArg::Auto)]
        simplified: SimplifiedArg,
    },
    /// Compare an empirical spectrum against the Wachter distribution.
    Wachter {
        /// CSV panel; its test spectrum is compared to the Wachter law.
        #[arg(long, conflicts_with = "spectrum")]
        input: Option<PathBuf>,
        /// Plain text file with one eigenvalue per line.
        #[arg(long, requires = "p_bar", requires = "q_bar")]
        spectrum: Option<PathBuf>,
        /// Wachter parameter p (required with --spectrum).
        #[arg(long)]
        p_bar: Option<f64>,
        /// Wachter parameter q (required with --spectrum).
        #[arg(long)]
        q_bar: Option<f64>,
        /// Number of histogram bins over the support.
        #[arg(long, default_value_t = 40)]
        bins: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: failed to configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[derive(Debug)]
enum CliError {
    Lib(LvError),
    Msg(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Msg(m) => write!(f, "{m}"),
        }
    }
}

impl From<LvError> for CliError {
    fn from(e: LvError) -> Self {
        CliError::Lib(e)
    }
}

impl From<String> for CliError {
    fn from(m: String) -> Self {
        CliError::Msg(m)
    }
}

type CliResult<T> = Result<T, CliError>;

fn run(cli: &Cli) -> CliResult<ExitCode> {
    match &cli.cmd {
        Cmd::Test {
            input,
            r,
            alpha,
            table,
            simplified,
            wn,
        } => cmd_test(cli, input, *r, *alpha, table.as_deref(), (*simplified).into(), *wn),
        Cmd::Quantiles {
            r,
            alphas,
            reps,
            model_size,
        } => {
            let t = build_quantile_table(r, alphas, *reps, *model_size, cli.seed)?;
            for w in &t.warnings {
                eprintln!("warning: {w}");
            }
            emit(cli, &t.to_toml())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Size {
            n,
            t,
            ratio,
            alpha,
            r,
            reps,
            table,
            simplified,
        } => {
            let ns = parse_grid(n)?;
            let horizon = match (t, ratio) {
                (Some(t), None) => Horizon::Fixed(*t),
                (None, Some(c)) => Horizon::Ratio(*c),
                _ => return Err("exactly one of --T and --ratio is required".to_string().into()),
            };
            let table = load_table(table.as_deref())?;
            let report = size_experiment(
                &ns,
                horizon,
                *alpha,
                *r,
                *reps,
                &table,
                (*simplified).into(),
                cli.seed,
            )?;
            emit(cli, &serde_json::to_string_pretty(&report).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Power {
            kind,
            n,
            t,
            ratio,
            lambdas,
            lambda,
            std0s,
            alpha,
            r,
            reps,
            table,
            simplified,
        } => {
            let ns = parse_grid(n)?;
            let t_for = |n: usize| -> CliResult<usize> {
                match (t, ratio) {
                    (Some(t), None) => Ok(*t),
                    (None, Some(c)) => Ok((c * n as f64).round() as usize),
                    _ => Err("exactly one of --T and --ratio is required".to_string().into()),
                }
            };
            let single_n = || -> CliResult<usize> {
                if ns.len() != 1 {
                    return Err(format!(
                        "this power kind needs a single N, got {} values",
                        ns.len()
                    )
                    .into());
                }
                Ok(ns[0])
            };
            let kind = match kind {
                PowerKindArg::AsymRank1 => PowerKind::AsymRank1 {
                    dims: ns
                        .iter()
                        .map(|&n| Ok((n, t_for(n)?)))
                        .collect::<CliResult<Vec<_>>>()?,
                },
                PowerKindArg::SymRank1 => {
                    let n = single_n()?;
                    PowerKind::SymRank1 {
                        n,
                        t: t_for(n)?,
                        lambdas: lambdas
                            .clone()
                            .ok_or_else(|| "sym-rank1 requires --lambdas".to_string())?,
                    }
                }
                PowerKindArg::X0Sweep => {
                    let n = single_n()?;
                    PowerKind::X0Sweep {
                        n,
                        t: t_for(n)?,
                        lambda: lambda
                            .ok_or_else(|| "x0-sweep requires --lambda".to_string())?,
                        std0s: std0s
                            .clone()
                            .ok_or_else(|| "x0-sweep requires --std0s".to_string())?,
                    }
                }
            };
            let table = load_table(table.as_deref())?;
            let report = power_experiment(
                &kind,
                *r,
                *alpha,
                *reps,
                &table,
                (*simplified).into(),
                cli.seed,
            )?;
            emit(cli, &serde_json::to_string_pretty(&report).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Wachter {
            input,
            spectrum,
            p_bar,
            q_bar,
            bins,
        } => cmd_wachter(
            cli,
            input.as_deref(),
            spectrum.as_deref(),
            *p_bar,
            *q_bar,
            *bins,
        ),
    }
}

fn cmd_test(
    cli: &Cli,
    input: &Path,
    r: usize,
    alpha: f64,
    table: Option<&Path>,
    simplified: Simplified,
    wn: bool,
) -> CliResult<ExitCode> {
    let panel = read_panel(input)?;
    if wn {
        let spectrum = run_wn_test(&panel)?;
        let out = json!({
            "schema_version": JSON_SCHEMA_VERSION,
            "mode": "white-noise",
            "n": panel.n,
            "t": panel.t,
            "spectrum": spectrum.lambdas,
            "lambda_min": spectrum.lambdas.last(),
        });
        emit(cli, &serde_json::to_string_pretty(&out).unwrap())?;
        return Ok(ExitCode::SUCCESS);
    }
    let table = load_table(table)?;
    let out = run_test(&panel, r, alpha, &table, simplified)?;
    let verdict = json!({
        "schema_version": JSON_SCHEMA_VERSION,
        "mode": "cointegration",
        "n": panel.n,
        "t": panel.t,
        "r": out.r,
        "raw_stat": out.raw_stat,
        "standardized": out.standardized,
        "c1": out.constants.c1,
        "c2": out.constants.c2,
        "lambda_plus": out.constants.lambda_plus,
        "lambda_minus": out.constants.lambda_minus,
        "critical_value": out.critical_value,
        "alpha": out.alpha,
        "reject": out.reject,
        "degenerate": out.degenerate,
        "spectrum": out.spectrum.lambdas,
        "simplified_used": out.constants.simplified,
    });
    emit(cli, &serde_json::to_string_pretty(&verdict).unwrap())?;
    Ok(if out.reject {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_wachter(
    cli: &Cli,
    input: Option<&Path>,
    spectrum: Option<&Path>,
    p_bar: Option<f64>,
    q_bar: Option<f64>,
    bins: usize,
) -> CliResult<ExitCode> {
    if bins == 0 {
        return Err("need at least one histogram bin".to_string().into());
    }
    let (eigs, p_bar, q_bar) = match (input, spectrum) {
        (Some(path), None) => {
            let panel = read_panel(path)?;
            let consts = scaling_constants(panel.n, panel.t, Simplified::Off)?;
            let res = residuals(&panel)?;
            let (s00, s01, s10, s11) = s_matrices(&res);
            let spec = canonical_eigs(&s00, &s01, &s10, &s11)?;
            (spec.lambdas, consts.p_hat, consts.q_hat)
        }
        (None, Some(path)) => {
            let eigs = read_spectrum(path)?;
            // clap enforces that --p-bar/--q-bar accompany --spectrum.
            (eigs, p_bar.unwrap(), q_bar.unwrap())
        }
        _ => return Err("exactly one of --input and --spectrum is required".to_string().into()),
    };
    let w = largevar::rmt::WachterParams::new(p_bar, q_bar)?;
    let lo = w
        .lambda_minus
        .min(eigs.iter().cloned().fold(f64::INFINITY, f64::min));
    let hi = w
        .lambda_plus
        .max(eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    let width = (hi - lo).max(f64::MIN_POSITIVE);
    let edges: Vec<f64> = (0..=bins)
        .map(|i| lo + width * i as f64 / bins as f64)
        .collect();
    let mut mass = vec![0.0; bins];
    for &x in &eigs {
        let k = (((x - lo) / width * bins as f64) as usize).min(bins - 1);
        mass[k] += 1.0 / eigs.len() as f64;
    }
    let pdf: Vec<f64> = (0..bins)
        .map(|i| w.pdf(0.5 * (edges[i] + edges[i + 1])))
        .collect();
    let ks = ks_distance_cdf(&eigs, |x| w.cdf(x))?;
    let out = json!({
        "schema_version": JSON_SCHEMA_VERSION,
        "p_bar": p_bar,
        "q_bar": q_bar,
        "lambda_minus": w.lambda_minus,
        "lambda_plus": w.lambda_plus,
        "bin_edges": edges,
        "histogram_mass": mass,
        "wachter_pdf": pdf,
        "ks_distance": ks,
    });
    emit(cli, &serde_json::to_string_pretty(&out).unwrap())?;
    Ok(ExitCode::SUCCESS)
}

/// CSV panel: header row of series names, then one row per time point;
/// the first data row is X0 and the remaining T rows are X1..XT.
fn read_panel(path: &Path) -> CliResult<Panel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| format!("{}: empty file", path.display()))?;
    let n = header.split(',').count();
    if n == 0 || header.trim().is_empty() {
        return Err(format!("{}: header row has no series names", path.display()).into());
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line_idx, line) in lines {
        let row_no = line_idx + 1; // 1-based, header is row 1
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != n {
            return Err(format!(
                "{}: row {row_no} has {} columns, expected {n}",
                path.display(),
                cells.len()
            )
            .into());
        }
        let mut row = Vec::with_capacity(n);
        for (j, cell) in cells.iter().enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| {
                format!(
                    "{}: row {row_no}, column {}: cannot parse '{}' as a real number",
                    path.display(),
                    j + 1,
                    cell.trim()
                )
            })?;
            if !v.is_finite() {
                return Err(format!(
                    "{}: row {row_no}, column {}: non-finite value",
                    path.display(),
                    j + 1
                )
                .into());
            }
            row.push(v);
        }
        rows.push(row);
    }
    if rows.len() < 3 {
        return Err(format!(
            "{}: need at least 3 data rows (X0 plus T >= 2), got {}",
            path.display(),
            rows.len()
        )
        .into());
    }
    let x0 = Array1::from_vec(rows[0].clone());
    let t = rows.len() - 1;
    let mut data = Array2::zeros((n, t));
    for (tau, row) in rows[1..].iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            data[(i, tau)] = v;
        }
    }
    Ok(Panel::new(x0, data)?)
}

fn read_spectrum(path: &Path) -> CliResult<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            format!(
                "{}: line {}: cannot parse '{line}' as a real number",
                path.display(),
                i + 1
            )
        })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(format!("{}: no eigenvalues found", path.display()).into());
    }
    Ok(out)
}

fn load_table(path: Option<&Path>) -> CliResult<QuantileTable> {
    let table = match path {
        Some(p) => QuantileTable::load(p)?,
        None => QuantileTable::builtin(),
    };
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    Ok(table)
}

/// "5:10" (inclusive range) or "5,7,9" (explicit list).
fn parse_grid(s: &str) -> CliResult<Vec<usize>> {
    let bad = |what: &str| -> CliError { format!("invalid grid '{s}': {what}").into() };
    if let Some((a, b)) = s.split_once(':') {
        let lo: usize = a.trim().parse().map_err(|_| bad("range start"))?;
        let hi: usize = b.trim().parse().map_err(|_| bad("range end"))?;
        if lo == 0 || hi < lo {
            return Err(bad("range must be non-empty with start >= 1"));
        }
        return Ok((lo..=hi).collect());
    }
    let vals: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| bad("list entry")))
        .collect::<CliResult<_>>()?;
    if vals.is_empty() || vals.contains(&0) {
        return Err(bad("need positive dimensions"));
    }
    Ok(vals)
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text.to_string() + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()).into()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
