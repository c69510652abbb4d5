use std::collections::BTreeMap;
use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tmodel::chain::{self, PComplex};
use tmodel::io;
use tmodel::linalg::Ring;
use tmodel::model::{self, AxiomKind, SampleSpec};
use tmodel::random::Params;
use tmodel::site::{DFunction, ExtInt, FinSpace, PointSet};
use tmodel::tstruct;

fn err(e: tmodel::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ring(s: &str) -> PyResult<Ring> {
    Ring::parse(s).map_err(err)
}

fn to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

fn point_set(space: &FinSpace, names: &[String]) -> PyResult<PointSet> {
    let idx = names
        .iter()
        .map(|n| space.point_index(n).ok_or_else(|| PyValueError::new_err(format!("unknown point `{n}`"))))
        .collect::<PyResult<Vec<usize>>>()?;
    Ok(PointSet::from_points(&idx))
}

/// A finite T0 space given by its points and open sets.
#[pyclass(name = "Site", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySite {
    inner: Arc<FinSpace>,
}

#[pymethods]
impl PySite {
    #[new]
    fn new(points: Vec<String>, opens: Vec<Vec<String>>) -> PyResult<Self> {
        let doc = io::SiteDoc { points, opens };
        Ok(PySite { inner: Arc::new(io::site_from_doc(&doc).map_err(err)?) })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySite { inner: Arc::new(io::parse_site(text).map_err(err)?) })
    }

    #[staticmethod]
    fn sierpinski() -> Self {
        PySite { inner: Arc::new(FinSpace::sierpinski()) }
    }

    #[staticmethod]
    fn three_point() -> Self {
        PySite { inner: Arc::new(FinSpace::three_point()) }
    }

    #[getter]
    fn points(&self) -> Vec<String> {
        self.inner.point_names().to_vec()
    }

    #[getter]
    fn opens(&self) -> Vec<Vec<String>> {
        io::site_to_doc(&self.inner).opens
    }

    fn to_json(&self) -> String {
        io::site_to_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Site(points={:?}, opens={})", self.points(), self.inner.nopens())
    }
}

/// A bounded chain complex of presheaves of modules.
#[pyclass(name = "Complex", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyComplex {
    inner: PComplex,
}

#[pymethods]
impl PyComplex {
    #[staticmethod]
    #[pyo3(signature = (text, site, ring="Z"))]
    fn from_json(text: &str, site: &PySite, ring: &str) -> PyResult<Self> {
        let inner = io::parse_complex(text, &site.inner, self::ring(ring)?).map_err(err)?;
        Ok(PyComplex { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (site, ring="Z"))]
    fn unit_interval(site: &PySite, ring: &str) -> PyResult<Self> {
        Ok(PyComplex { inner: chain::unit_interval(&site.inner, self::ring(ring)?) })
    }

    /// `R_C` in degree `n`.
    #[staticmethod]
    #[pyo3(signature = (site, open, degree, ring="Z"))]
    fn sphere(site: &PySite, open: Vec<String>, degree: i64, ring: &str) -> PyResult<Self> {
        let c = point_set(&site.inner, &open)?;
        let inner = chain::sphere(&site.inner, self::ring(ring)?, c, degree).map_err(err)?;
        Ok(PyComplex { inner })
    }

    /// `R_C` in degrees `n + 1` and `n` joined by the identity.
    #[staticmethod]
    #[pyo3(signature = (site, open, degree, ring="Z"))]
    fn disk(site: &PySite, open: Vec<String>, degree: i64, ring: &str) -> PyResult<Self> {
        let c = point_set(&site.inner, &open)?;
        let inner = chain::disk(&site.inner, self::ring(ring)?, c, degree).map_err(err)?;
        Ok(PyComplex { inner })
    }

    fn to_json(&self) -> String {
        io::complex_to_json(&self.inner)
    }

    #[getter]
    fn degrees(&self) -> (i64, i64) {
        (self.inner.lo(), self.inner.hi())
    }

    /// `H_n` at every open, as `{open: {"free_rank", "invariant_factors"}}`.
    fn homology(&self, py: Python<'_>, degree: i64) -> PyResult<Py<PyAny>> {
        let h = chain::homology(&self.inner, degree);
        let space = self.inner.space();
        let rec: BTreeMap<String, serde_json::Value> =
            (0..space.nopens()).map(|u| (space.format_set(space.open(u)), io::module_record(h.value(u)))).collect();
        to_py(py, &serde_json::to_value(rec).expect("records serialize"))
    }

    fn is_acyclic(&self) -> bool {
        chain::is_acyclic(&self.inner)
    }

    fn __eq__(&self, other: &PyComplex) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Complex(degrees={}..={}, gens={})", self.inner.lo(), self.inner.hi(), self.inner.total_gens())
    }
}

/// A chain map between complexes on the same site.
#[pyclass(name = "ChainMap", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyChainMap {
    inner: chain::ChainMap,
}

#[pymethods]
impl PyChainMap {
    #[staticmethod]
    #[pyo3(signature = (text, site, ring="Z"))]
    fn from_json(text: &str, site: &PySite, ring: &str) -> PyResult<Self> {
        let inner = io::parse_map(text, &site.inner, self::ring(ring)?).map_err(err)?;
        Ok(PyChainMap { inner })
    }

    #[staticmethod]
    fn identity(x: &PyComplex) -> Self {
        PyChainMap { inner: chain::ChainMap::identity(&x.inner) }
    }

    #[staticmethod]
    fn zero(source: &PyComplex, target: &PyComplex) -> Self {
        PyChainMap { inner: chain::ChainMap::zero(&source.inner, &target.inner) }
    }

    fn to_json(&self) -> String {
        io::map_to_json(&self.inner)
    }

    #[getter]
    fn source(&self) -> PyComplex {
        PyComplex { inner: self.inner.source.clone() }
    }

    #[getter]
    fn target(&self) -> PyComplex {
        PyComplex { inner: self.inner.target.clone() }
    }

    fn compose(&self, first: &PyChainMap) -> PyResult<Self> {
        if first.inner.target != self.inner.source {
            return Err(PyValueError::new_err("target of the first map is not the source of the second"));
        }
        Ok(PyChainMap { inner: self.inner.compose(&first.inner) })
    }

    /// Quasi-isomorphism verdicts with witnesses.
    fn classify(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let r = chain::classify(&self.inner);
        to_py(py, &serde_json::to_value(r).expect("report serializes"))
    }

    fn is_fibration(&self) -> bool {
        model::is_fibration(&self.inner)
    }

    fn is_acyclic_fibration(&self) -> bool {
        model::is_acyclic_fibration(&self.inner)
    }

    /// `(middle, first, second)` with `first` a relative cell complex and `second` an acyclic fibration.
    fn factor(&self) -> PyResult<(PyComplex, PyChainMap, PyChainMap)> {
        let f = model::factor_cof_acyclicfib(&self.inner).map_err(err)?;
        Ok((PyComplex { inner: f.middle }, PyChainMap { inner: f.first }, PyChainMap { inner: f.second }))
    }

    fn __eq__(&self, other: &PyChainMap) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let (lo, hi) = self.inner.degree_range();
        format!("ChainMap(degrees={lo}..={hi})")
    }
}

/// The t-structure attached to a function from points to extended integers.
#[pyclass(name = "TStructure", frozen)]
struct PyTStructure {
    inner: tstruct::TStructure,
}

fn ext_int(v: &Bound<'_, PyAny>) -> PyResult<ExtInt> {
    if let Ok(n) = v.extract::<i64>() {
        return Ok(ExtInt::Fin(n));
    }
    let s: String = v.extract()?;
    ExtInt::parse(&s).map_err(err)
}

#[pymethods]
impl PyTStructure {
    /// `d` maps every point name to an integer, `"+inf"` or `"-inf"`.
    #[new]
    fn new(site: &PySite, d: &Bound<'_, PyDict>) -> PyResult<Self> {
        let space = &site.inner;
        let mut vals = vec![None; space.npoints()];
        for (k, v) in d.iter() {
            let name: String = k.extract()?;
            let p = space.point_index(&name).ok_or_else(|| PyValueError::new_err(format!("unknown point `{name}`")))?;
            vals[p] = Some(ext_int(&v)?);
        }
        let vals = vals
            .into_iter()
            .enumerate()
            .map(|(p, v)| v.ok_or_else(|| PyValueError::new_err(format!("no value for `{}`", space.point_names()[p]))))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = tstruct::TStructure::new(space.clone(), DFunction::new(vals)).map_err(err)?;
        Ok(PyTStructure { inner })
    }

    #[getter]
    fn admissible(&self) -> bool {
        self.inner.admissible
    }

    #[getter]
    fn truncatable(&self) -> bool {
        self.inner.truncatable
    }

    fn contains_geq0(&self, x: &PyComplex) -> bool {
        tstruct::in_d_geq0(&x.inner, &self.inner)
    }

    fn contains_leq0(&self, x: &PyComplex) -> bool {
        tstruct::in_d_leq0(&x.inner, &self.inner)
    }

    /// `(X_{≥0}, X_{≤-1})`.
    fn truncate(&self, x: &PyComplex) -> PyResult<(PyComplex, PyComplex)> {
        let tri = tstruct::truncate(&x.inner, &self.inner).map_err(err)?;
        Ok((PyComplex { inner: tri.below }, PyComplex { inner: tri.above }))
    }

    fn heart(&self, x: &PyComplex) -> PyResult<PyComplex> {
        Ok(PyComplex { inner: tstruct::heart_project(&x.inner, &self.inner).map_err(err)? })
    }

    fn is_n_equivalence(&self, f: &PyChainMap, n: i64) -> bool {
        tstruct::is_n_equivalence(&f.inner, &self.inner, n)
    }

    /// `(middle, g, h)` with `g` an `n`-equivalence and `h` a co-`n`-equivalence.
    fn factor(&self, f: &PyChainMap, n: i64) -> PyResult<(PyComplex, PyChainMap, PyChainMap)> {
        let fac = tstruct::factor_t(&f.inner, &self.inner, n).map_err(err)?;
        Ok((PyComplex { inner: fac.middle }, PyChainMap { inner: fac.g }, PyChainMap { inner: fac.h }))
    }
}

#[pyfunction]
fn tensor(x: &PyComplex, y: &PyComplex) -> PyResult<PyComplex> {
    Ok(PyComplex { inner: chain::tensor_total(&x.inner, &y.inner).map_err(err)? })
}

/// Chain homotopy classes of maps `X → Y` as a module record.
#[pyfunction]
fn homotopy_classes(py: Python<'_>, x: &PyComplex, y: &PyComplex) -> PyResult<Py<PyAny>> {
    to_py(py, &io::module_record(&chain::homotopy_classes(&x.inner, &y.inner)))
}

/// Runs a seeded randomized axiom suite and returns its report.
#[pyfunction]
#[pyo3(signature = (suite, site, instances=20, seed=0, ring="Z"))]
fn verify(py: Python<'_>, suite: &str, site: &PySite, instances: usize, seed: u64, ring: &str) -> PyResult<Py<PyAny>> {
    let kind = AxiomKind::parse(suite).ok_or_else(|| PyValueError::new_err(format!("unknown suite `{suite}`")))?;
    let spec =
        SampleSpec { space: site.inner.clone(), ring: self::ring(ring)?, seed, instances, params: Params::default() };
    let report = py.detach(|| model::verify_axiom(kind, &spec));
    to_py(py, &serde_json::to_value(report).expect("report serializes"))
}

#[pymodule(name = "tmodel")]
fn tmodel_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySite>()?;
    m.add_class::<PyComplex>()?;
    m.add_class::<PyChainMap>()?;
    m.add_class::<PyTStructure>()?;
    m.add_function(wrap_pyfunction!(tensor, m)?)?;
    m.add_function(wrap_pyfunction!(homotopy_classes, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
