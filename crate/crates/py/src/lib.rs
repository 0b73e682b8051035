//! Python bindings.

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use sim::config::{parse_config, to_config_text};
use sim::engine::ExperimentConfig;
use sim::geometry::{LayoutParams, NetworkLayout, Point};
use sim::schemes::{build_neighbor_matrix, Scheme};
use sim::SimError;

fn py_err(e: SimError) -> PyErr {
    match e {
        SimError::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn config_from(text: &str) -> PyResult<ExperimentConfig> {
    parse_config(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Path loss in dB at `distance_km`.
#[pyfunction]
fn path_loss_db(distance_km: f64) -> f64 {
    sim::channel::path_loss_db(distance_km)
}

/// Thermal noise over one subchannel, in dBm.
#[pyfunction]
#[pyo3(signature = (noise_density_dbm_per_hz = -174.0, subchannel_bandwidth_hz = 15000.0))]
fn noise_floor_dbm(noise_density_dbm_per_hz: f64, subchannel_bandwidth_hz: f64) -> f64 {
    let cfg = sim::channel::ChannelConfig {
        noise_density_dbm_per_hz,
        subchannel_bandwidth_hz,
        ..Default::default()
    };
    sim::channel::noise_floor_dbm(&cfg)
}

#[pyfunction]
fn sfr_power_ratio(alpha_u: f64) -> PyResult<f64> {
    if alpha_u < 0.0 {
        return Err(PyValueError::new_err("alpha_u must be non-negative"));
    }
    Ok(sim::schemes::sfr_power_ratio(alpha_u))
}

/// Resolved configuration text; raises ValueError listing bad fields.
#[pyfunction]
#[pyo3(signature = (text = ""))]
fn validate_config(text: &str) -> PyResult<String> {
    Ok(to_config_text(&config_from(text)?))
}

#[pyclass(name = "Layout", frozen)]
struct PyLayout {
    inner: NetworkLayout,
}

#[pymethods]
impl PyLayout {
    #[new]
    #[pyo3(signature = (inter_site_distance_km = 1.5, tiers = 1))]
    fn new(inter_site_distance_km: f64, tiers: usize) -> PyResult<Self> {
        let inner = NetworkLayout::new(LayoutParams {
            inter_site_distance_km,
            tiers,
            ..Default::default()
        })
        .map_err(py_err)?;
        Ok(PyLayout { inner })
    }

    #[getter]
    fn num_cells(&self) -> usize {
        self.inner.num_cells()
    }

    #[getter]
    fn num_regions(&self) -> usize {
        self.inner.regions.len()
    }

    /// Region id such as "1A" containing the point, or None outside the layout.
    fn region_of(&self, x_km: f64, y_km: f64) -> Option<String> {
        self.inner
            .region_of(Point::new(x_km, y_km))
            .map(|r| r.to_string())
    }

    fn region_area_km2(&self, region: &str) -> PyResult<f64> {
        let id = region.parse().map_err(py_err)?;
        self.inner
            .regions
            .iter()
            .find(|r| r.id == id)
            .map(|r| r.area_km2)
            .ok_or_else(|| PyValueError::new_err(format!("no region {region}")))
    }

    fn geometry_dump(&self) -> String {
        self.inner.geometry_dump()
    }

    /// Interfering-neighbor listing of `scheme`, one row per region.
    fn neighbor_listing(&self, scheme: &str) -> PyResult<String> {
        let scheme: Scheme = scheme.parse().map_err(py_err)?;
        Ok(build_neighbor_matrix(&self.inner, scheme).listing())
    }
}

/// Summary of one (scheme, density) pair.
#[pyclass(name = "Summary", frozen, get_all)]
struct PySummary {
    scheme: String,
    users_per_sector: usize,
    drops: usize,
    samples: usize,
    eta_edge: f64,
    eta_edge_per_user: f64,
    eta_area: f64,
    median_sinr_db: Option<f64>,
    median_edge_sinr_db: Option<f64>,
    blocked: usize,
    sinr_db: Vec<f64>,
    edge_sinr_db: Vec<f64>,
}

#[pymethods]
impl PySummary {
    fn __repr__(&self) -> String {
        format!(
            "Summary(scheme='{}', users_per_sector={}, eta_edge={:.3}, eta_area={:.3}, blocked={})",
            self.scheme, self.users_per_sector, self.eta_edge, self.eta_area, self.blocked
        )
    }
}

/// Runs an experiment described by configuration text. When `out_dir` is
/// given the result tables and manifest are written there too.
#[pyfunction]
#[pyo3(signature = (config = "", out_dir = None))]
fn run_experiment(
    py: Python<'_>,
    config: &str,
    out_dir: Option<PathBuf>,
) -> PyResult<Vec<PySummary>> {
    let cfg = config_from(config)?;
    let result = py
        .detach(|| -> sim::Result<_> {
            let result = sim::engine::run_experiment(&cfg)?;
            if let Some(dir) = &out_dir {
                sim::tables::write_tables(&result, dir, None)?;
            }
            Ok(result)
        })
        .map_err(py_err)?;
    Ok(result
        .entries
        .iter()
        .map(|e| {
            let r = &e.report;
            PySummary {
                scheme: e.scheme.to_string(),
                users_per_sector: e.users_per_sector,
                drops: r.per_drop.len(),
                samples: r.samples.len(),
                eta_edge: r.edge_spectral_efficiency,
                eta_edge_per_user: r.edge_spectral_efficiency_per_user,
                eta_area: r.area_spectral_efficiency,
                median_sinr_db: r.median_sinr_db(),
                median_edge_sinr_db: r.median_edge_sinr_db(),
                blocked: r.blocked_count,
                sinr_db: r.sinr_db(),
                edge_sinr_db: r.edge_sinr_db(),
            }
        })
        .collect())
}

#[pymodule]
fn racnsim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add(
        "SCHEMES",
        Scheme::ALL.iter().map(|s| s.name()).collect::<Vec<_>>(),
    )?;
    m.add_function(wrap_pyfunction!(path_loss_db, m)?)?;
    m.add_function(wrap_pyfunction!(noise_floor_dbm, m)?)?;
    m.add_function(wrap_pyfunction!(sfr_power_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(validate_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_class::<PyLayout>()?;
    m.add_class::<PySummary>()?;
    Ok(())
}
