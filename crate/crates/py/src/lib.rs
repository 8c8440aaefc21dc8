//! Python bindings for the sticky-diffusion toolkit.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::collections::HashMap;
use stickydiff::config::RunConfig;
use stickydiff::estimate::{
    default_g, estimate_rho_crossing, estimate_rho_ito, estimate_rho_occupation, CrossingVariant,
};
use stickydiff::experiments::run_mc_estimation;
use stickydiff::kernel;
use stickydiff::path_model::{Coefficient, ObservationGrid, StickyModel};
use stickydiff::simulate::{reflect_at_first_hit, sample_path, SimConfig, SimMethod};
use stickydiff::statistics::{self, Region};

fn err(e: stickydiff::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_variant(variant: &str) -> PyResult<CrossingVariant> {
    match variant {
        "C" => Ok(CrossingVariant::C),
        "B" => Ok(CrossingVariant::B),
        "D" => Ok(CrossingVariant::D),
        other => Err(PyValueError::new_err(format!("unknown variant `{other}`"))),
    }
}

/// A discretely observed path with per-interval zero-hit flags.
#[pyclass(name = "SamplePath", skip_from_py_object)]
#[derive(Clone)]
struct PySamplePath {
    inner: stickydiff::path_model::SamplePath,
}

#[pymethods]
impl PySamplePath {
    #[getter]
    fn times(&self) -> Vec<f64> {
        (0..=self.inner.intervals())
            .map(|i| self.inner.grid.time(i))
            .collect()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values.clone()
    }

    #[getter]
    fn hit_flags(&self) -> Vec<bool> {
        self.inner.hit_flags.clone()
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.grid.n()
    }

    #[getter]
    fn horizon(&self) -> f64 {
        self.inner.grid.horizon()
    }

    /// Terminal crossing count of type j in {0, 1, 2}.
    fn crossings(&self, j: u8) -> PyResult<u64> {
        Ok(statistics::crossings(&self.inner, j)
            .map_err(err)?
            .terminal())
    }

    /// Terminal bouncing count of type j in {0, 1, 2}.
    fn bouncings(&self, j: u8) -> PyResult<u64> {
        Ok(statistics::bouncings(&self.inner, j)
            .map_err(err)?
            .terminal())
    }

    /// Terminal difference count of type j in {1, 2}.
    fn differences(&self, j: u8) -> PyResult<u64> {
        Ok(statistics::differences(&self.inner, j)
            .map_err(err)?
            .terminal())
    }

    /// Number of observations sitting exactly at 0 (left endpoints).
    fn occupation(&self) -> PyResult<u64> {
        Ok(statistics::occupation_stat(&self.inner, Region::Point(0.0))
            .map_err(err)?
            .terminal())
    }

    /// Crossing-ratio stickiness estimate; None when the count ratio is undefined.
    #[pyo3(signature = (variant = "C"))]
    fn estimate_rho(&self, variant: &str) -> PyResult<Option<f64>> {
        Ok(estimate_rho_crossing(&self.inner, parse_variant(variant)?)
            .map_err(err)?
            .value)
    }

    /// Occupation-ratio stickiness estimate with threshold exponent alpha.
    #[pyo3(signature = (alpha = 0.5))]
    fn estimate_rho_occupation(&self, alpha: f64) -> PyResult<Option<f64>> {
        Ok(estimate_rho_occupation(&self.inner, &default_g, alpha, 1.0)
            .map_err(err)?
            .value)
    }

    /// Crossing estimate rescaled for a diffusion coefficient sigma0 at 0.
    #[pyo3(signature = (sigma0, variant = "C"))]
    fn estimate_rho_ito(&self, sigma0: f64, variant: &str) -> PyResult<Option<f64>> {
        Ok(
            estimate_rho_ito(&self.inner, sigma0, parse_variant(variant)?)
                .map_err(err)?
                .value,
        )
    }

    /// Path reflected (negated) from the first flagged zero hit onward.
    fn reflect(&self) -> PySamplePath {
        PySamplePath {
            inner: reflect_at_first_hit(&self.inner),
        }
    }

    fn to_csv(&self, path: &str) -> PyResult<()> {
        let mut file = std::fs::File::create(path)?;
        self.inner.write_csv(&mut file).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (path, seed = 0))]
    fn from_csv(path: &str, seed: u64) -> PyResult<PySamplePath> {
        let file = std::fs::File::open(path)?;
        let inner =
            stickydiff::path_model::SamplePath::read_csv(&mut std::io::BufReader::new(file), seed)
                .map_err(err)?;
        Ok(PySamplePath { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.values.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "SamplePath(n={}, horizon={}, observations={})",
            self.inner.grid.n(),
            self.inner.grid.horizon(),
            self.inner.values.len()
        )
    }
}

/// Simulate one path of a sticky diffusion observed on the grid i/n.
#[pyfunction]
#[pyo3(signature = (
    kind = "sticky-bm", rho = 1.0, x0 = 0.0, n = 10_000, horizon = 1.0,
    method = "exact", refine = 64, seed = 0, mu = 0.0, sigma = 1.0,
))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    kind: &str,
    rho: f64,
    x0: f64,
    n: u64,
    horizon: f64,
    method: &str,
    refine: u32,
    seed: u64,
    mu: f64,
    sigma: f64,
) -> PyResult<PySamplePath> {
    let model = match kind {
        "sticky-bm" => StickyModel::brownian(rho, x0),
        "sticky-reflected" => StickyModel::reflected(rho, x0),
        "sticky-ito" => StickyModel::ito(
            rho,
            x0,
            Coefficient::Constant(mu),
            Coefficient::Constant(sigma),
        ),
        other => return Err(PyValueError::new_err(format!("unknown kind `{other}`"))),
    }
    .map_err(err)?;
    let method = match method {
        "exact" => SimMethod::KernelExact,
        "time-change" => SimMethod::TimeChange,
        other => return Err(PyValueError::new_err(format!("unknown method `{other}`"))),
    };
    let config = SimConfig {
        model,
        grid: ObservationGrid::new(n, horizon).map_err(err)?,
        method,
        refine,
        seed,
    };
    config.validate().map_err(err)?;
    Ok(PySamplePath {
        inner: sample_path(&config).map_err(err)?,
    })
}

/// Transition density of sticky Brownian motion (continuous part, y != 0).
#[pyfunction]
fn sticky_density(t: f64, x: f64, y: f64, rho: f64) -> PyResult<f64> {
    kernel::sticky_density(t, x, y, rho).map_err(err)
}

/// P_x(X_t <= y).
#[pyfunction]
fn sticky_cdf(t: f64, x: f64, rho: f64, y: f64) -> PyResult<f64> {
    kernel::sticky_cdf(t, x, rho, y).map_err(err)
}

/// P_x(X_t = 0).
#[pyfunction]
fn sticky_atom_mass(t: f64, x: f64, rho: f64) -> PyResult<f64> {
    kernel::sticky_atom_mass(t, x, rho).map_err(err)
}

/// Probability that the bridge from x to y over an interval of length t hits 0.
#[pyfunction]
fn hit_probability(t: f64, x: f64, y: f64, rho: f64) -> PyResult<f64> {
    kernel::hit_probability(t, x, y, rho).map_err(err)
}

/// Limit-law pmf of the strict crossing count, by Laplace inversion.
#[pyfunction]
#[pyo3(signature = (t, k, rho, order = 12))]
fn limit_law_pmf(t: f64, k: u64, rho: f64, order: usize) -> PyResult<f64> {
    kernel::limit_law_pmf(t, k, rho, order).map_err(err)
}

/// Monte Carlo estimation over replicas; `options` uses the CLI config keys.
#[pyfunction]
#[pyo3(signature = (options = None))]
fn mc_estimate(options: Option<HashMap<String, String>>) -> PyResult<HashMap<String, f64>> {
    let mut cfg = RunConfig::new();
    for (k, v) in options.unwrap_or_default() {
        cfg.set(&k, v);
    }
    let summary = run_mc_estimation(&cfg).map_err(err)?;
    let mut out = HashMap::new();
    out.insert("n_replicas".to_string(), summary.n_replicas as f64);
    out.insert("included".to_string(), summary.included as f64);
    if let Some(m) = summary.mean {
        out.insert("mean".to_string(), m);
    }
    if let Some(s) = summary.std {
        out.insert("std".to_string(), s);
    }
    out.insert("conditioning_rate".to_string(), summary.conditioning_rate);
    out.insert("error_count".to_string(), summary.error_count as f64);
    out.insert("wall_seconds".to_string(), summary.wall_seconds);
    Ok(out)
}

#[pymodule]
fn stickydiff_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySamplePath>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(sticky_density, m)?)?;
    m.add_function(wrap_pyfunction!(sticky_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(sticky_atom_mass, m)?)?;
    m.add_function(wrap_pyfunction!(hit_probability, m)?)?;
    m.add_function(wrap_pyfunction!(limit_law_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(mc_estimate, m)?)?;
    Ok(())
}
