//! Python bindings: panels, the cointegration test, quantile tables, and
//! the random-matrix samplers. Data crosses the boundary as plain lists
//! (row-major matrices), so no numpy ABI coupling is needed.

use ndarray::{Array1, Array2};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use largevar::harness::stream_rng;
use largevar::johansen::{self, Simplified};
use largevar::rmt;
use largevar::varsim;

fn err(e: largevar::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_simplified(s: &str) -> PyResult<Simplified> {
    match s {
        "auto" => Ok(Simplified::Auto),
        "on" => Ok(Simplified::On),
        "off" => Ok(Simplified::Off),
        other => Err(PyValueError::new_err(format!(
            "simplified must be auto/on/off, got '{other}'"
        ))),
    }
}

/// An N-dimensional panel: X0 plus columns X1..XT.
#[pyclass]
struct Panel {
    inner: varsim::Panel,
}

#[pymethods]
impl Panel {
    /// Build from X0 and row-major data rows[i][tau] = X_{i, tau+1}.
    #[new]
    fn new(x0: Vec<f64>, rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let n = x0.len();
        let t = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.len() != n {
            return Err(PyValueError::new_err(format!(
                "expected {n} rows to match x0, got {}",
                rows.len()
            )));
        }
        let mut data = Array2::zeros((n, t));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != t {
                return Err(PyValueError::new_err(format!(
                    "row {i} has {} entries, expected {t}",
                    row.len()
                )));
            }
            for (tau, &v) in row.iter().enumerate() {
                data[(i, tau)] = v;
            }
        }
        Ok(Self {
            inner: varsim::Panel::new(Array1::from_vec(x0), data).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn t(&self) -> usize {
        self.inner.t
    }
}

/// Simulate a null-model panel (pure random walk) for a given seed.
#[pyfunction]
fn simulate_null(n: usize, t: usize, seed: u64) -> PyResult<Panel> {
    let spec = varsim::VarModelSpec::null_model(n, t);
    let mut rng = stream_rng(seed, 0x5059, 0);
    Ok(Panel {
        inner: varsim::simulate(&spec, &mut rng).map_err(err)?,
    })
}

/// Critical-value table for the standardized statistic.
#[pyclass]
struct QuantileTable {
    inner: largevar::harness::QuantileTable,
}

#[pymethods]
impl QuantileTable {
    /// The table shipped with the library.
    #[staticmethod]
    fn builtin() -> Self {
        Self {
            inner: largevar::harness::QuantileTable::builtin(),
        }
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: largevar::harness::QuantileTable::load(path.as_ref()).map_err(err)?,
        })
    }

    /// Monte Carlo regeneration from the Airy point process.
    #[staticmethod]
    fn build(
        rs: Vec<usize>,
        alphas: Vec<f64>,
        reps: usize,
        model_size: usize,
        seed: u64,
    ) -> PyResult<Self> {
        Ok(Self {
            inner: largevar::harness::build_quantile_table(
                &rs, &alphas, reps, model_size, seed,
            )
            .map_err(err)?,
        })
    }

    fn lookup(&self, r: usize, alpha: f64) -> PyResult<f64> {
        self.inner.lookup(r, alpha).map_err(err)
    }

    fn to_toml(&self) -> String {
        self.inner.to_toml()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }
}

/// Run the cointegration test; returns the full verdict as a dict.
#[pyfunction]
#[pyo3(signature = (panel, r=1, alpha=0.95, table=None, simplified="auto"))]
fn run_test(
    py: Python<'_>,
    panel: &Panel,
    r: usize,
    alpha: f64,
    table: Option<&QuantileTable>,
    simplified: &str,
) -> PyResult<Py<PyDict>> {
    let builtin;
    let table = match table {
        Some(t) => &t.inner,
        None => {
            builtin = largevar::harness::QuantileTable::builtin();
            &builtin
        }
    };
    let out = johansen::run_test(&panel.inner, r, alpha, table, parse_simplified(simplified)?)
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", panel.inner.n)?;
    d.set_item("t", panel.inner.t)?;
    d.set_item("r", out.r)?;
    d.set_item("raw_stat", out.raw_stat)?;
    d.set_item("standardized", out.standardized)?;
    d.set_item("c1", out.constants.c1)?;
    d.set_item("c2", out.constants.c2)?;
    d.set_item("lambda_plus", out.constants.lambda_plus)?;
    d.set_item("lambda_minus", out.constants.lambda_minus)?;
    d.set_item("critical_value", out.critical_value)?;
    d.set_item("reject", out.reject)?;
    d.set_item("degenerate", out.degenerate)?;
    d.set_item("spectrum", out.spectrum.lambdas)?;
    d.set_item("simplified_used", out.constants.simplified)?;
    Ok(d.into())
}

/// White-noise variant: spectrum of the cyclic-increment pipeline.
#[pyfunction]
fn run_wn_test(panel: &Panel) -> PyResult<Vec<f64>> {
    Ok(johansen::run_wn_test(&panel.inner).map_err(err)?.lambdas)
}

/// Standardization constants (p, q, lambda+-, c1, c2) for a panel shape.
#[pyfunction]
#[pyo3(signature = (n, t, simplified="auto"))]
fn scaling_constants(py: Python<'_>, n: usize, t: usize, simplified: &str) -> PyResult<Py<PyDict>> {
    let c = johansen::scaling_constants(n, t, parse_simplified(simplified)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("p", c.p_hat)?;
    d.set_item("q", c.q_hat)?;
    d.set_item("lambda_plus", c.lambda_plus)?;
    d.set_item("lambda_minus", c.lambda_minus)?;
    d.set_item("c1", c.c1)?;
    d.set_item("c2", c.c2)?;
    d.set_item("simplified_used", c.simplified)?;
    Ok(d.into())
}

/// Top r points of the Airy(1) process, approximated at `model_size`.
#[pyfunction]
fn airy1_sample(r: usize, model_size: usize, seed: u64) -> PyResult<Vec<f64>> {
    let mut rng = stream_rng(seed, 0x5041, 0);
    Ok(rmt::airy1_sample(r, model_size, &mut rng).map_err(err)?.a)
}

/// Eigenvalues of one Jacobi J(N; p, q) draw via canonical correlations.
#[pyfunction]
#[pyo3(signature = (n, p, q, beta=1, seed=0))]
fn sample_jacobi_cc(n: usize, p: f64, q: f64, beta: u8, seed: u64) -> PyResult<Vec<f64>> {
    let params = rmt::JacobiParams::new(n, p, q, beta).map_err(err)?;
    let mut rng = stream_rng(seed, 0x504a, 0);
    rmt::sample_jacobi_cc(&params, &mut rng).map_err(err)
}

/// Eigenvalues of one sum-corner draw on SO(T)/U(T).
#[pyfunction]
#[pyo3(signature = (n, t_script, beta=1, seed=0))]
fn sample_jacobi_sum_corner(n: usize, t_script: usize, beta: u8, seed: u64) -> PyResult<Vec<f64>> {
    let mut rng = stream_rng(seed, 0x5053, 0);
    rmt::sample_jacobi_sum_corner(n, t_script, beta, &mut rng)
        .map_err(err)?
        .eigs()
        .map_err(err)
}

/// Eigenvalues of one top-left-corner draw.
#[pyfunction]
#[pyo3(signature = (n, t_script, beta=1, seed=0))]
fn sample_jacobi_var0_corner(n: usize, t_script: usize, beta: u8, seed: u64) -> PyResult<Vec<f64>> {
    let mut rng = stream_rng(seed, 0x5056, 0);
    rmt::sample_jacobi_var0_corner(n, t_script, beta, &mut rng)
        .map_err(err)?
        .eigs()
        .map_err(err)
}

/// Wachter support edges (lambda-, lambda+) for rescaled parameters.
#[pyfunction]
fn wachter_support(p_bar: f64, q_bar: f64) -> (f64, f64) {
    rmt::support_edges(p_bar, q_bar)
}

/// Wachter density values at the given points.
#[pyfunction]
fn wachter_pdf(p_bar: f64, q_bar: f64, xs: Vec<f64>) -> PyResult<Vec<f64>> {
    let w = rmt::WachterParams::new(p_bar, q_bar).map_err(err)?;
    Ok(xs.iter().map(|&x| w.pdf(x)).collect())
}

/// Wachter CDF values at the given points.
#[pyfunction]
fn wachter_cdf(p_bar: f64, q_bar: f64, xs: Vec<f64>) -> PyResult<Vec<f64>> {
    let w = rmt::WachterParams::new(p_bar, q_bar).map_err(err)?;
    Ok(xs.iter().map(|&x| w.cdf(x)).collect())
}

#[pymodule]
fn largevar_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Panel>()?;
    m.add_class::<QuantileTable>()?;
    m.add_function(wrap_pyfunction!(simulate_null, m)?)?;
    m.add_function(wrap_pyfunction!(run_test, m)?)?;
    m.add_function(wrap_pyfunction!(run_wn_test, m)?)?;
    m.add_function(wrap_pyfunction!(scaling_constants, m)?)?;
    m.add_function(wrap_pyfunction!(airy1_sample, m)?)?;
    m.add_function(wrap_pyfunction!(sample_jacobi_cc, m)?)?;
    m.add_function(wrap_pyfunction!(sample_jacobi_sum_corner, m)?)?;
    m.add_function(wrap_pyfunction!(sample_jacobi_var0_corner, m)?)?;
    m.add_function(wrap_pyfunction!(wachter_support, m)?)?;
    m.add_function(wrap_pyfunction!(wachter_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(wachter_cdf, m)?)?;
    Ok(())
}
