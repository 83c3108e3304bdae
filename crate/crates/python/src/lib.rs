//! Python bindings: load a geometry, read tensor components, run the
//! structure report and the reference validation.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ssnm_core::catalog::{Catalog, TensorName};
use ssnm_core::classify::report::{structure_report, Claims};
use ssnm_core::curvature::CurvatureBundle;
use ssnm_core::expr::{parse, AnySymbol};
use ssnm_core::fixtures;
use ssnm_core::geometry::{parse_manifest, Geometry};
use ssnm_core::presets;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A geometry together with its lazily computed tensors.
#[pyclass(frozen)]
struct Manifold {
    catalog: Catalog,
    wormhole: bool,
}

impl Manifold {
    fn from_geometry(geometry: Geometry, wormhole: bool) -> Manifold {
        Manifold {
            catalog: Catalog::new(CurvatureBundle::new(geometry)),
            wormhole,
        }
    }
}

#[pymethods]
impl Manifold {
    /// Built-in geometry by name.
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Manifold> {
        let g = presets::geometry(name)
            .ok_or_else(|| value_error(format!("unknown preset `{name}`")))?;
        Ok(Manifold::from_geometry(g, name == "morris-thorne"))
    }

    /// Geometry described by manifest text.
    #[staticmethod]
    fn from_manifest(text: &str) -> PyResult<Manifold> {
        let m = parse_manifest(text).map_err(value_error)?;
        Ok(Manifold::from_geometry(
            m.build().map_err(value_error)?,
            false,
        ))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.catalog.bundle().dim()
    }

    /// Nonzero components as `(1-based index tuple, expression)` pairs.
    fn components(&self, tensor: &str) -> PyResult<Vec<(Vec<usize>, String)>> {
        let name: TensorName = tensor.parse().map_err(value_error)?;
        let t = self.catalog.get(name).map_err(value_error)?;
        Ok(t.nonzero()
            .into_iter()
            .map(|(idx, v)| (idx.iter().map(|i| i + 1).collect(), v.to_string()))
            .collect())
    }

    /// Structure report as a JSON document.
    #[pyo3(signature = (seed = 0))]
    fn report(&self, seed: u64) -> PyResult<String> {
        let claims = if self.wormhole {
            Some(
                Claims::morris_thorne(self.catalog.bundle().metric().chart())
                    .map_err(value_error)?,
            )
        } else {
            None
        };
        let r = structure_report(&self.catalog, seed, claims.as_ref()).map_err(value_error)?;
        Ok(r.to_tree().to_string())
    }

    /// `(passed, total)` reference groups; wormhole preset only.
    fn validate(&self) -> PyResult<(usize, usize)> {
        if !self.wormhole {
            return Err(value_error(
                "reference tables exist for the morris-thorne preset only",
            ));
        }
        let r = fixtures::validate(&self.catalog).map_err(value_error)?;
        Ok((r.passed(), r.groups.len()))
    }
}

/// Canonical printed form of an expression.
#[pyfunction]
fn simplify(expr: &str) -> PyResult<String> {
    let e = parse(expr, &AnySymbol).map_err(value_error)?;
    Ok(e.canonicalize().map_err(value_error)?.to_string())
}

/// Whether an expression is identically zero.
#[pyfunction]
fn is_zero(expr: &str) -> PyResult<bool> {
    parse(expr, &AnySymbol)
        .map_err(value_error)?
        .is_zero()
        .map_err(value_error)
}

#[pymodule]
fn ssnm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Manifold>()?;
    m.add_function(wrap_pyfunction!(simplify, m)?)?;
    m.add_function(wrap_pyfunction!(is_zero, m)?)?;
    Ok(())
}
