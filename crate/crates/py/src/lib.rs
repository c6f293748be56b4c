//! Python bindings: sites, cube morphisms, presheaves and their homology.

use std::path::PathBuf;
use std::sync::Arc;

use cubecat::cli::resolve_object;
use cubecat::cube::cat::enumerate_homs;
use cubecat::cube::{cube_compose, cube_pushforward, hom_count_formula, CubeCat, CubeMorphism};
use cubecat::presheaf::{boundary, cylinder, dimension, io, tensor::tensor_truncated, Presheaf};
use cubecat::report::Report;
use cubecat::site::{Site, SiteKind, Subset};
use cubecat::topology::{homology, realize};
use cubecat::{cube, json, presheaf, site as sites, spans, topology};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

fn err(e: cubecat::Error) -> PyErr {
    match e {
        cubecat::Error::Overflow(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

pub fn default_degree(site: &Site) -> usize {
    if site.kind() == SiteKind::Crossed {
        2
    } else {
        3
    }
}

pub fn suite_reports(site: &Site, suite: &str, d: usize) -> cubecat::Result<Vec<Report>> {
    let all = suite == "all";
    let known = ["all", "site-axioms", "span-identities", "cube-axioms", "presheaf-laws", "topology"];
    if !known.contains(&suite) {
        return Err(cubecat::Error::Usage(format!("unknown suite `{suite}`")));
    }
    let mut out = Vec::new();
    if all || suite == "site-axioms" {
        out.push(sites::verify::verify_site_axioms(site, d)?);
    }
    if all || suite == "span-identities" {
        out.push(spans::verify_span_identities(site, d)?);
    }
    if all || suite == "cube-axioms" {
        out.push(cube::verify::verify_cube_axioms(site, d)?);
    }
    if all || suite == "presheaf-laws" {
        out.push(presheaf::verify::verify_presheaf_laws(site, d)?);
    }
    if all || suite == "topology" {
        out.push(topology::verify::verify_topology(site, d)?);
    }
    Ok(out)
}

/// A cubical site: `plain`, `connections`, `sigma` or a crossed table.
#[pyclass(name = "Site", frozen, module = "cubecat")]
pub struct PySite {
    site: Site,
}

#[pymethods]
impl PySite {
    #[new]
    #[pyo3(signature = (selector = "plain", crossed_table = None))]
    fn new(selector: &str, crossed_table: Option<PathBuf>) -> PyResult<Self> {
        Ok(PySite { site: Site::from_selector(selector, crossed_table.as_deref()).map_err(err)? })
    }

    #[getter]
    fn label(&self) -> String {
        self.site.label().to_string()
    }

    fn is_monoidal(&self) -> bool {
        self.site.is_monoidal()
    }

    fn hom_count(&self, m: usize, n: usize) -> PyResult<usize> {
        Ok(enumerate_homs(&self.site, m, n).map_err(err)?.len())
    }

    fn hom_count_formula(&self, m: usize, n: usize) -> PyResult<u128> {
        hom_count_formula(&self.site, m, n).map_err(err)
    }

    fn morphisms(&self, m: usize, n: usize) -> PyResult<Vec<PyMorphism>> {
        let homs = enumerate_homs(&self.site, m, n).map_err(err)?;
        Ok(homs.into_iter().map(|m| PyMorphism { site: self.site.clone(), m }).collect())
    }

    fn identity(&self, n: usize) -> PyResult<PyMorphism> {
        self.site.check_degree(n).map_err(err)?;
        Ok(PyMorphism { site: self.site.clone(), m: CubeMorphism::identity(&self.site, n) })
    }

    /// Parses a morphism from span or normal-form JSON.
    fn morphism(&self, text: &str) -> PyResult<PyMorphism> {
        let v: Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let m = cubecat::cli::parse_morphism(&self.site, &v).map_err(err)?;
        Ok(PyMorphism { site: self.site.clone(), m })
    }

    /// Runs verification suites; returns a list of report dictionaries.
    #[pyo3(signature = (suite = "all", max_degree = None))]
    fn verify<'py>(&self, py: Python<'py>, suite: &str, max_degree: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
        let d = max_degree.unwrap_or_else(|| default_degree(&self.site));
        let reports = py.detach(|| suite_reports(&self.site, suite, d)).map_err(err)?;
        to_py(py, &Value::Array(reports.iter().map(Report::to_json).collect()))
    }

    fn __repr__(&self) -> String {
        format!("Site('{}')", self.site.label())
    }
}

#[pyclass(name = "Morphism", frozen, module = "cubecat")]
pub struct PyMorphism {
    site: Site,
    m: CubeMorphism,
}

#[pymethods]
impl PyMorphism {
    #[getter]
    fn src(&self) -> usize {
        self.m.src()
    }

    #[getter]
    fn dst(&self) -> usize {
        self.m.dst()
    }

    fn is_identity(&self) -> bool {
        self.m.is_identity()
    }

    fn is_iso(&self) -> bool {
        self.m.is_iso()
    }

    /// `self ∘ inner`.
    fn compose(&self, inner: &PyMorphism) -> PyResult<PyMorphism> {
        Ok(PyMorphism { site: self.site.clone(), m: cube_compose(&self.site, &self.m, &inner.m).map_err(err)? })
    }

    fn __matmul__(&self, inner: &PyMorphism) -> PyResult<PyMorphism> {
        self.compose(inner)
    }

    /// Image of a subset of the source coordinates, given as a bitmask.
    fn pushforward(&self, mask: u64) -> PyResult<u64> {
        let eta = Subset::new(self.m.src(), mask).map_err(err)?;
        Ok(cube_pushforward(&self.site, &self.m, eta).map_err(err)?.mask())
    }

    fn normal_form<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &json::normal_form(&self.m.normal_form(&self.site)))
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &json::cube(&self.site, &self.m))
    }

    fn __eq__(&self, other: &PyMorphism) -> bool {
        self.m == other.m
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.m.hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        format!("Morphism({} → {}, {})", self.m.src(), self.m.dst(), self.m)
    }
}

/// A presheaf truncated at `max_degree`.
#[pyclass(name = "Presheaf", frozen, module = "cubecat")]
pub struct PyPresheaf {
    x: Arc<Presheaf>,
}

fn category(site: &PySite, max_degree: Option<usize>) -> (Arc<CubeCat>, usize) {
    let d = max_degree.unwrap_or_else(|| default_degree(&site.site));
    (CubeCat::shared(site.site.clone(), d), d)
}

#[pymethods]
impl PyPresheaf {
    /// Builds an object from an expression such as `tensor:rep:1:boundary:2`.
    #[staticmethod]
    #[pyo3(signature = (site, spec, max_degree = None))]
    fn parse(py: Python<'_>, site: &PySite, spec: &str, max_degree: Option<usize>) -> PyResult<Self> {
        let (cat, d) = category(site, max_degree);
        Ok(PyPresheaf { x: py.detach(|| resolve_object(&cat, d, spec)).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (site, n, max_degree = None))]
    fn representable(site: &PySite, n: usize, max_degree: Option<usize>) -> PyResult<Self> {
        let (cat, d) = category(site, max_degree);
        Ok(PyPresheaf { x: Arc::new(Presheaf::representable(&cat, n, d).map_err(err)?) })
    }

    #[staticmethod]
    #[pyo3(signature = (site, n, max_degree = None))]
    fn boundary(site: &PySite, n: usize, max_degree: Option<usize>) -> PyResult<Self> {
        let (cat, d) = category(site, max_degree);
        Ok(PyPresheaf { x: boundary(&cat, n, d).map_err(err)?.source })
    }

    /// Loads a presheaf from a JSON file.
    #[staticmethod]
    #[pyo3(signature = (path, crossed_table = None))]
    fn load(path: PathBuf, crossed_table: Option<PathBuf>) -> PyResult<Self> {
        Ok(PyPresheaf { x: Arc::new(io::load(&path, crossed_table.as_deref()).map_err(err)?) })
    }

    fn tensor(&self, py: Python<'_>, other: &PyPresheaf) -> PyResult<Self> {
        let t = py.detach(|| tensor_truncated(&self.x, &other.x, self.x.max_degree())).map_err(err)?;
        Ok(PyPresheaf { x: t.object })
    }

    fn cylinder(&self, py: Python<'_>) -> PyResult<Self> {
        Ok(PyPresheaf { x: py.detach(|| cylinder(&self.x)).map_err(err)?.tensor.object })
    }

    #[getter]
    fn max_degree(&self) -> usize {
        self.x.max_degree()
    }

    fn counts(&self) -> Vec<usize> {
        self.x.counts()
    }

    fn dimension(&self) -> PyResult<Option<usize>> {
        dimension(&self.x).map_err(err)
    }

    /// Simplex counts of the realization in dimensions `0..=dim`.
    fn realize(&self, py: Python<'_>, dim: usize) -> PyResult<Vec<usize>> {
        let r = py.detach(|| realize(&self.x, dim)).map_err(err)?;
        Ok(r.set.counts().to_vec())
    }

    /// `[(betti, torsion), …]` for the realization, dimensions `0..=top`.
    #[pyo3(signature = (top = 2))]
    fn homology(&self, py: Python<'_>, top: usize) -> PyResult<Vec<(usize, Vec<i64>)>> {
        let h = py.detach(|| realize(&self.x, top + 1).and_then(|r| homology(&r.set, top))).map_err(err)?;
        Ok(h.into_iter().map(|g| (g.betti, g.torsion)).collect())
    }

    fn check(&self) -> PyResult<()> {
        self.x.check_functoriality().map_err(err)
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &io::to_json(&self.x))
    }

    fn __repr__(&self) -> String {
        format!("Presheaf({}, counts={:?})", self.x.site().label(), self.x.counts())
    }
}

#[pymodule]
#[pyo3(name = "cubecat")]
fn cubecat_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySite>()?;
    m.add_class::<PyMorphism>()?;
    m.add_class::<PyPresheaf>()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_dispatch_by_name() {
        let reports = suite_reports(&Site::plain(), "site-axioms", 2).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].passed());
        assert!(suite_reports(&Site::plain(), "bogus", 2).is_err());
    }

    #[test]
    fn crossed_sites_default_lower() {
        assert_eq!(default_degree(&Site::symmetric()), 2);
        assert_eq!(default_degree(&Site::connections()), 3);
    }
}
