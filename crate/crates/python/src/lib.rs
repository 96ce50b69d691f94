//! Python bindings. Each runner returns the scenario report as a JSON string
//! with the same schema as `ncgeom --format json`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ncgeom::report::SCHEMA_VERSION;
use ncgeom::scenarios::{self, AllConfig, ConnesLottConfig, MatrixGeometryConfig};
use ncgeom::Scalar;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(report: &T) -> PyResult<String> {
    serde_json::to_string_pretty(report).map_err(value_error)
}

fn matrix_config(n: usize, gamma: String, seed: u64, trials: usize) -> PyResult<MatrixGeometryConfig> {
    if !(2..=3).contains(&n) {
        return Err(PyValueError::new_err(format!("n must be 2 or 3, got {n}")));
    }
    Ok(MatrixGeometryConfig { n, gamma, seed, trials })
}

fn connes_lott_config(mu: Option<Vec<String>>) -> PyResult<ConnesLottConfig> {
    let mut cfg = ConnesLottConfig::default();
    if let Some(mus) = mu {
        cfg.mus = mus.iter().map(|s| s.parse::<Scalar>()).collect::<Result<_, _>>().map_err(value_error)?;
    }
    Ok(cfg)
}

/// Canonical text form of a Gaussian rational such as `"1/2 - 3i"`.
#[pyfunction]
fn parse_scalar(text: &str) -> PyResult<String> {
    text.parse::<Scalar>().map(|s| s.to_string()).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (n = 2, gamma = "levi-civita".to_string(), seed = 0, trials = 10))]
fn run_matrix_geometry(py: Python<'_>, n: usize, gamma: String, seed: u64, trials: usize) -> PyResult<String> {
    let cfg = matrix_config(n, gamma, seed, trials)?;
    let report = py.allow_threads(|| scenarios::run_matrix_geometry(&cfg)).map_err(value_error)?;
    to_json(&report)
}

/// `mu` is a list of scalar strings; `None` uses the default samples.
#[pyfunction]
#[pyo3(signature = (mu = None))]
fn run_connes_lott(py: Python<'_>, mu: Option<Vec<String>>) -> PyResult<String> {
    let cfg = connes_lott_config(mu)?;
    let report = py.allow_threads(|| scenarios::run_connes_lott(&cfg)).map_err(value_error)?;
    to_json(&report)
}

#[pyfunction]
fn run_projective(py: Python<'_>) -> PyResult<String> {
    let report = py.allow_threads(scenarios::run_projective_structure).map_err(value_error)?;
    to_json(&report)
}

#[pyfunction]
#[pyo3(signature = (n = 2, gamma = "levi-civita".to_string(), seed = 0, trials = 10, mu = None))]
fn run_all(py: Python<'_>, n: usize, gamma: String, seed: u64, trials: usize, mu: Option<Vec<String>>) -> PyResult<String> {
    let cfg = AllConfig { matrix: matrix_config(n, gamma, seed, trials)?, connes_lott: connes_lott_config(mu)? };
    let report = py.allow_threads(|| scenarios::run_all(&cfg)).map_err(value_error)?;
    to_json(&report)
}

#[pymodule]
fn ncgeom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SCHEMA_VERSION", SCHEMA_VERSION)?;
    m.add_function(wrap_pyfunction!(parse_scalar, m)?)?;
    m.add_function(wrap_pyfunction!(run_matrix_geometry, m)?)?;
    m.add_function(wrap_pyfunction!(run_connes_lott, m)?)?;
    m.add_function(wrap_pyfunction!(run_projective, m)?)?;
    m.add_function(wrap_pyfunction!(run_all, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configs_validate_inputs() {
        assert!(matrix_config(4, "zero".into(), 0, 1).is_err());
        assert!(matrix_config(2, "zero".into(), 0, 1).is_ok());
        let cfg = connes_lott_config(Some(vec!["0".into(), "1/2".into()])).unwrap();
        assert_eq!(cfg.mus, vec![Scalar::zero(), Scalar::ratio(1, 2)]);
    }
}
