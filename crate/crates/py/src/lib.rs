//! Python bindings for the secure interference alignment simulator.
//!
//! Matrices cross the boundary as nested lists of Python `complex`, row-major.
//! Receiver and transmitter indices are 0-based; receiver `K` is the
//! eavesdropper.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use wslm_core::harness::{run_sweep, ExperimentSpec, Parallelism};
use wslm_core::{feasibility, rates, solver, ComplexMatrix, Error};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        Error::EigenFailure(_) | Error::Singular(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

#[pyclass(name = "SystemConfig", from_py_object)]
#[derive(Clone)]
struct PySystemConfig {
    inner: wslm_core::SystemConfig,
}

#[pymethods]
impl PySystemConfig {
    #[new]
    #[pyo3(signature = (k, nt, nr, nre, d, pt, sigma2 = 1.0))]
    fn new(k: usize, nt: usize, nr: usize, nre: usize, d: usize, pt: f64, sigma2: f64) -> PyResult<Self> {
        let inner = wslm_core::SystemConfig {
            k,
            nt,
            nr,
            nre,
            d,
            pt,
            sigma2,
        };
        inner.validate().map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn nt(&self) -> usize {
        self.inner.nt
    }

    #[getter]
    fn nr(&self) -> usize {
        self.inner.nr
    }

    #[getter]
    fn nre(&self) -> usize {
        self.inner.nre
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d
    }

    #[getter]
    fn pt(&self) -> f64 {
        self.inner.pt
    }

    #[getter]
    fn sigma2(&self) -> f64 {
        self.inner.sigma2
    }

    /// Properness counts and eavesdropper limits as a dict.
    fn feasibility<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let rep = feasibility::is_proper(&self.inner);
        let out = PyDict::new(py);
        out.set_item("n_eq", rep.n_eq)?;
        out.set_item("n_v", rep.n_v)?;
        out.set_item("proper", rep.proper)?;
        out.set_item("max_nre", rep.max_nre)?;
        out.set_item("silr_onset_nre", rep.silr_onset_nre)?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "SystemConfig(k={}, nt={}, nr={}, nre={}, d={}, pt={}, sigma2={})",
            c.k, c.nt, c.nr, c.nre, c.d, c.pt, c.sigma2
        )
    }
}

#[pyclass(name = "ChannelSet", frozen)]
struct PyChannelSet {
    inner: wslm_core::ChannelSet,
}

#[pymethods]
impl PyChannelSet {
    /// Draw a Rayleigh-fading realization.
    #[staticmethod]
    fn generate(config: &PySystemConfig, seed: u64) -> PyResult<Self> {
        let inner = wslm_core::generate_channels(config.inner, seed).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let inner = wslm_core::load_channels(path).map_err(to_py_err)?;
        Ok(Self { inner })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        wslm_core::save_channels(&self.inner, path).map_err(to_py_err)
    }

    #[getter]
    fn config(&self) -> PySystemConfig {
        PySystemConfig {
            inner: *self.inner.config(),
        }
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed()
    }

    /// Channel matrix from transmitter `tx` to receiver `rx`.
    fn h(&self, rx: usize, tx: usize) -> PyResult<Vec<Vec<Complex64>>> {
        let k = self.inner.config().k;
        if rx > k || tx >= k {
            return Err(PyValueError::new_err(format!("channel index ({rx},{tx}) out of range for K = {k}")));
        }
        Ok(matrix_to_rows(self.inner.h(rx, tx)))
    }
}

#[pyclass(name = "Solution", frozen)]
struct PySolution {
    inner: solver::IaSolution,
}

#[pymethods]
impl PySolution {
    #[getter]
    fn cost_trajectory(&self) -> Vec<f64> {
        self.inner.cost_trajectory.clone()
    }

    #[getter]
    fn final_cost(&self) -> f64 {
        self.inner.final_cost()
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    #[getter]
    fn variant(&self) -> &'static str {
        self.inner.variant.as_str()
    }

    #[getter]
    fn precoders(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.inner.precoders.f.iter().map(matrix_to_rows).collect()
    }

    #[getter]
    fn subspaces(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.inner.subspaces.u.iter().map(matrix_to_rows).collect()
    }

    #[getter]
    fn eaves_subspace(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(&self.inner.subspaces.eaves)
    }

    /// Rates achieved by this solution's precoders.
    fn rates<'py>(&self, py: Python<'py>, channels: &PyChannelSet) -> PyResult<Bound<'py, PyDict>> {
        let rep = rates::rate_report(&channels.inner, &self.inner.precoders).map_err(to_py_err)?;
        let out = PyDict::new(py);
        out.set_item("main_rates", rep.main_rates)?;
        out.set_item("leakage_rates", rep.leakage_rates)?;
        out.set_item("secrecy_rates", rep.secrecy_rates)?;
        out.set_item("smlr", rep.smlr)?;
        out.set_item("silr", rep.silr)?;
        out.set_item("ssr", rep.ssr)?;
        Ok(out)
    }

    /// Residuals of the three alignment conditions.
    #[pyo3(signature = (channels, tol = 1e-6))]
    fn check_conditions<'py>(&self, py: Python<'py>, channels: &PyChannelSet, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        let chk = solver::check_ia_conditions(&channels.inner, &self.inner, tol).map_err(to_py_err)?;
        let out = PyDict::new(py);
        out.set_item("rank_ok", chk.rank_ok.clone())?;
        let imli: Vec<(usize, usize, f64)> = chk.imli_residual.iter().map(|r| (r.rx, r.tx, r.value)).collect();
        out.set_item("imli_residual", imli)?;
        out.set_item("eaves_residual", chk.eaves_residual.clone())?;
        Ok(out)
    }
}

/// Run the alternating solver from a seeded random start.
#[pyfunction]
#[pyo3(signature = (channels, seed, variant = "wslm", kappa_max = 500, cost_epsilon = 1e-9, delta_tolerance = 1e-12))]
fn solve(
    py: Python<'_>,
    channels: &PyChannelSet,
    seed: u64,
    variant: &str,
    kappa_max: usize,
    cost_epsilon: f64,
    delta_tolerance: f64,
) -> PyResult<PySolution> {
    let variant: solver::Variant = variant.parse().map_err(PyValueError::new_err)?;
    let opts = solver::SolverOptions {
        kappa_max,
        cost_epsilon,
        delta_tolerance,
    };
    let inner = py
        .detach(|| solver::solve(&channels.inner, seed, variant, &opts))
        .map_err(to_py_err)?;
    Ok(PySolution { inner })
}

/// Run an experiment given as JSON text; returns the CSV rows as dicts.
#[pyfunction]
fn sweep<'py>(py: Python<'py>, spec_json: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let spec = ExperimentSpec::from_json(spec_json).map_err(to_py_err)?;
    let result = py.detach(|| run_sweep(&spec, Parallelism::Parallel)).map_err(to_py_err)?;
    result
        .rows
        .iter()
        .map(|r| {
            let out = PyDict::new(py);
            out.set_item("sweep_value", r.sweep_value)?;
            out.set_item("variant", r.variant.as_str())?;
            out.set_item("mean_ssr", r.mean_ssr)?;
            out.set_item("mean_smlr", r.mean_smlr)?;
            out.set_item("mean_silr", r.mean_silr)?;
            out.set_item("mean_final_cost", r.mean_final_cost)?;
            out.set_item("mean_iterations", r.mean_iterations)?;
            out.set_item("trials", r.trials)?;
            out.set_item("failed", r.failed)?;
            Ok(out)
        })
        .collect()
}

#[pymodule]
fn wslm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemConfig>()?;
    m.add_class::<PyChannelSet>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
