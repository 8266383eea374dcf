//! Python bindings for the cohomology engine.

use std::str::FromStr;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use hamcoh::algebra::{AlgebraSpec, Family, Grading, LiePAlgebra};
use hamcoh::cohomology::{
    cocycle_representatives, full_table, render_cocycle, render_table, verify_propositions,
    ComputeOptions, PropFlags, Provenance, RenderOptions,
};
use hamcoh::error::Error;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::InvalidSpec(_) | Error::NotOddPrime(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn parse_spec(family: &str, n: usize, p: u32, grading: &str) -> PyResult<AlgebraSpec> {
    AlgebraSpec::new(
        Family::from_str(family).map_err(to_py_err)?,
        n,
        p,
        Grading::from_str(grading).map_err(to_py_err)?,
    )
    .map_err(to_py_err)
}

/// A truncated Hamiltonian or Poisson Lie p-algebra over GF(p) with its
/// tabulated bracket.
#[pyclass]
struct Algebra {
    inner: LiePAlgebra,
}

#[pymethods]
impl Algebra {
    #[new]
    #[pyo3(signature = (family, n, p, grading = "symmetric"))]
    fn new(family: &str, n: usize, p: u32, grading: &str) -> PyResult<Self> {
        let spec = parse_spec(family, n, p, grading)?;
        Ok(Algebra { inner: LiePAlgebra::build(spec).map_err(to_py_err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn basis(&self) -> Vec<String> {
        self.inner.basis().iter().map(|m| m.to_string()).collect()
    }

    fn grades(&self) -> Vec<i64> {
        self.inner.grades()
    }

    /// Run the structural checks; returns {check name: passed}.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = self.inner.verify();
        let out = PyDict::new(py);
        for c in &report.checks {
            out.set_item(&c.name, c.passed)?;
        }
        Ok(out)
    }

    /// Compute the cohomology table; returns a list of per-box dicts.
    #[pyo3(signature = (props = false, k_range = None, g_range = None))]
    fn compute_table<'py>(
        &self,
        py: Python<'py>,
        props: bool,
        k_range: Option<(usize, usize)>,
        g_range: Option<(i64, i64)>,
    ) -> PyResult<Bound<'py, PyList>> {
        let opts = ComputeOptions {
            flags: if props { PropFlags::all() } else { PropFlags::none() },
            k_range,
            g_range,
            ..Default::default()
        };
        let table = full_table(&self.inner, &opts).map_err(to_py_err)?;
        let out = PyList::empty(py);
        for e in table.entries.values() {
            let d = PyDict::new(py);
            d.set_item("g", e.g)?;
            d.set_item("k", e.k)?;
            d.set_item("dim_c", e.dim_c)?;
            d.set_item("dim_h", e.dim_h)?;
            d.set_item(
                "provenance",
                match e.provenance {
                    Provenance::Computed => "computed",
                    Provenance::ByProp1 => "by_prop1",
                    Provenance::ByProp2 => "by_prop2",
                    Provenance::ByProp3 => "by_prop3",
                },
            )?;
            out.append(d)?;
        }
        Ok(out)
    }

    /// Render the table in the blank/dot/dimension convention.
    #[pyo3(signature = (props = false, ascii = false, merged_rows = false))]
    fn render_table(&self, props: bool, ascii: bool, merged_rows: bool) -> PyResult<String> {
        let opts = ComputeOptions {
            flags: if props { PropFlags::all() } else { PropFlags::none() },
            ..Default::default()
        };
        let table = full_table(&self.inner, &opts).map_err(to_py_err)?;
        Ok(render_table(
            &self.inner,
            &table,
            &RenderOptions { ascii, merged_rows, include_k0: false },
        ))
    }

    /// Verify the grade and degree symmetries on an unpruned table.
    fn verify_symmetries(&self) -> PyResult<bool> {
        let table =
            full_table(&self.inner, &ComputeOptions::default()).map_err(to_py_err)?;
        Ok(verify_propositions(&self.inner, &table).passed())
    }

    /// Cocycle representatives spanning H^k_g, rendered as wedge strings.
    #[pyo3(signature = (k, g, ascii = false))]
    fn cocycles(&self, k: usize, g: i64, ascii: bool) -> PyResult<Vec<String>> {
        let reps = cocycle_representatives(&self.inner, k, g).map_err(to_py_err)?;
        Ok(reps.iter().map(|c| render_cocycle(&self.inner, c, ascii)).collect())
    }
}

#[pymodule]
fn hamcoh_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Algebra>()?;
    Ok(())
}
