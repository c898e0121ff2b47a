//! Python bindings: a `ToricAlgebra` class over the exact Rust core.
//!
//! Ceiling vectors are lists of Python ints. Rational points may be given as
//! ints, `fractions.Fraction` or strings such as `"-1/2"`. Structured results
//! come back as plain dicts and lists.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

use toric_conic::io::{labelled, resolution_value, shape_value};
use toric_conic::ratgeom::{parse_rat, Rat};
use toric_conic::{
    parse_input, render_svg_2d, AnalysisOptions, CeilingVector, ConeSpec, SvgWindow, ToricAlgebra as Core,
};

fn err(e: toric_conic::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn rat(x: &Bound<'_, PyAny>) -> PyResult<Rat> {
    let s = x.str()?.to_string();
    parse_rat(&s).ok_or_else(|| PyValueError::new_err(format!("not a rational number: {s}")))
}

#[pyclass(name = "ToricAlgebra", module = "toric_conic_py", frozen)]
struct ToricAlgebra {
    inner: Core,
}

impl ToricAlgebra {
    fn wrap(cone: toric_conic::Result<ConeSpec>) -> PyResult<Self> {
        Ok(ToricAlgebra { inner: Core::new(cone.map_err(err)?).map_err(err)? })
    }

    fn class(&self, c: Vec<BigInt>) -> PyResult<CeilingVector> {
        let c = CeilingVector(c);
        self.inner.require_feasible(&c).map_err(err)?;
        Ok(c)
    }

    fn support(&self, classes: Vec<usize>) -> PyResult<Vec<CeilingVector>> {
        let all = self.inner.enumerate_classes();
        classes
            .into_iter()
            .map(|i| all.get(i).cloned().ok_or_else(|| PyValueError::new_err(format!("no class with index {i}"))))
            .collect()
    }
}

#[pymethods]
impl ToricAlgebra {
    /// Builds the algebra from primitive inward facet normals.
    #[new]
    fn new(rank: usize, normals: Vec<Vec<BigInt>>) -> PyResult<Self> {
        Self::wrap(ConeSpec::from_normals(rank, normals))
    }

    #[staticmethod]
    fn from_dual_rays(rank: usize, rays: Vec<Vec<BigInt>>) -> PyResult<Self> {
        Self::wrap(ConeSpec::from_dual_rays(rank, rays))
    }

    #[staticmethod]
    fn from_primal_rays(rank: usize, rays: Vec<Vec<BigInt>>) -> PyResult<Self> {
        Self::wrap(ConeSpec::from_primal_rays(rank, rays))
    }

    /// Parses the JSON input format used by the command line tool.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::wrap(parse_input(text).map_err(err)?.to_cone())
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn normals(&self) -> Vec<Vec<BigInt>> {
        self.inner.cone().normals().to_vec()
    }

    #[getter]
    fn is_simplicial(&self) -> bool {
        self.inner.cone().is_simplicial()
    }

    #[getter]
    fn content_hash(&self) -> String {
        self.inner.cone().content_hash()
    }

    /// Canonical representatives; index `i` is class `A{i}`, the free class first.
    fn classes(&self) -> Vec<Vec<BigInt>> {
        self.inner.enumerate_classes().iter().map(|c| c.0.clone()).collect()
    }

    fn is_feasible(&self, c: Vec<BigInt>) -> bool {
        self.inner.is_feasible(&CeilingVector(c))
    }

    fn chamber_of(&self, v: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<BigInt>> {
        let v: Vec<Rat> = v.iter().map(rat).collect::<PyResult<_>>()?;
        Ok(self.inner.chamber_of(&v).map_err(err)?.0)
    }

    fn canonical_class(&self, c: Vec<BigInt>) -> PyResult<Vec<BigInt>> {
        Ok(self.inner.canonical_class(&CeilingVector(c)).map_err(err)?.0)
    }

    fn class_index(&self, c: Vec<BigInt>) -> PyResult<usize> {
        self.inner.class_index(&CeilingVector(c)).map_err(err)
    }

    /// `m` with `c = c2 + N̂m`, or `None` when the modules are not isomorphic.
    fn iso_witness(&self, c: Vec<BigInt>, c2: Vec<BigInt>) -> Option<Vec<BigInt>> {
        self.inner.iso_witness(&CeilingVector(c), &CeilingVector(c2))
    }

    fn leq(&self, c: Vec<BigInt>, c2: Vec<BigInt>) -> bool {
        self.inner.leq(&CeilingVector(c), &CeilingVector(c2))
    }

    fn degree(&self, c: Vec<BigInt>) -> BigInt {
        self.inner.degree(&CeilingVector(c))
    }

    /// List of `{"omega", "codim", "open_conic"}` dicts.
    fn cells<'py>(&self, py: Python<'py>, c: Vec<BigInt>) -> PyResult<Bound<'py, PyAny>> {
        let c = self.class(c)?;
        let cells = self.inner.enumerate_cells(&c).map_err(err)?;
        let rows: Vec<Value> = cells
            .iter()
            .map(|x| serde_json::json!({"omega": x.omega, "codim": x.codim, "open_conic": self.inner.open_conic(x)}))
            .collect();
        to_py(py, &Value::Array(rows))
    }

    /// `{"shape": [...], "differentials": [...]}`, degree 0 first.
    fn conic_complex<'py>(&self, py: Python<'py>, c: Vec<BigInt>) -> PyResult<Bound<'py, PyAny>> {
        let c = self.class(c)?;
        let k = self.inner.conic_complex(&c).map_err(err)?;
        let shape = shape_value(&self.inner, &k.to_module_complex().class_shape(&self.inner));
        let maps: Vec<Vec<Vec<Value>>> = k
            .differentials
            .iter()
            .map(|m| m.rows().map(|r| r.iter().map(toric_conic::io::int_value).collect()).collect())
            .collect();
        to_py(py, &serde_json::json!({"shape": shape, "differentials": maps}))
    }

    fn pdim(&self, c: Vec<BigInt>) -> PyResult<usize> {
        self.inner.pdim_simple(&self.class(c)?).map_err(err)
    }

    fn global_dimension(&self) -> PyResult<usize> {
        self.inner.global_dimension().map_err(err)
    }

    fn ext_dims(&self, c: Vec<BigInt>, c2: Vec<BigInt>) -> PyResult<Vec<usize>> {
        self.inner.ext_dims(&self.class(c)?, &self.class(c2)?).map_err(err)
    }

    /// Verdict dict; `support` is a list of class indices, `None` for the complete sum.
    #[pyo3(signature = (support=None))]
    fn nccr_verdict<'py>(&self, py: Python<'py>, support: Option<Vec<usize>>) -> PyResult<Bound<'py, PyAny>> {
        let sup = support.map(|s| self.support(s)).transpose()?;
        let v = self.inner.nccr_verdict(sup.as_deref()).map_err(err)?;
        to_py(py, &serde_json::to_value(&v).expect("verdict serialises"))
    }

    fn resolution<'py>(&self, py: Python<'py>, support: Vec<usize>, c: Vec<BigInt>) -> PyResult<Bound<'py, PyAny>> {
        let sup = self.support(support)?;
        let r = self.inner.resolution(&sup, &self.class(c)?).map_err(err)?;
        to_py(py, &resolution_value(&self.inner, &r))
    }

    /// Class label -> multiplicity of the summands of `R^{1/q}`.
    fn decompose_root<'py>(&self, py: Python<'py>, q: u64) -> PyResult<Bound<'py, PyAny>> {
        let d = self.inner.decompose_root(q).map_err(err)?;
        to_py(py, &labelled(&self.inner, &d.multiplicities.iter().map(|(k, v)| (*k, *v as usize)).collect()))
    }

    fn minimal_complete_q(&self) -> PyResult<u64> {
        self.inner.minimal_complete_q().map_err(err)
    }

    /// Full report as a JSON string.
    #[pyo3(signature = (acyclicity=true))]
    fn analyze(&self, acyclicity: bool) -> PyResult<String> {
        let options = AnalysisOptions { acyclicity, ..AnalysisOptions::default() };
        Ok(self.inner.analyze(&options).map_err(err)?.to_json())
    }

    #[pyo3(signature = (x0=-2, x1=2, y0=-2, y1=2))]
    fn render_svg(&self, x0: i64, x1: i64, y0: i64, y1: i64) -> PyResult<String> {
        Ok(render_svg_2d(&self.inner, &SvgWindow::new(x0, x1, y0, y1)).map_err(err)?.svg)
    }

    fn __repr__(&self) -> String {
        format!("ToricAlgebra(rank={}, normals={})", self.inner.rank(), self.inner.cone().num_normals())
    }
}

#[pymodule]
fn toric_conic_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ToricAlgebra>()?;
    Ok(())
}
