//! Python bindings: parse diagrams, build patchworks and circle packings,
//! assemble and verify necklaces, work with inversive coordinates, and export.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use necklace::circlepack::{self, PackOptions};
use necklace::diagram::{self, Strand};
use necklace::inversive::{self, InversiveCoords, Shape};
use necklace::io::{self as nio, Format, NecklaceDocument, ObjOptions};
use necklace::necklace::{self as nk, AssembleOptions, VerifyOptions};
use necklace::patchwork::{self, VertexRole};

create_exception!(necklace, NecklaceError, PyValueError, "Raised when a diagram, packing or necklace operation fails.");

fn err(e: impl std::fmt::Display) -> PyErr {
    NecklaceError::new_err(e.to_string())
}

/// A link diagram given by PD code.
#[pyclass(name = "LinkDiagram", module = "necklace", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLinkDiagram {
    inner: diagram::LinkDiagram,
}

#[pymethods]
impl PyLinkDiagram {
    /// Parses PD code such as ``"X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"``.
    #[new]
    fn new(pd: &str) -> PyResult<Self> {
        diagram::parse_pd(pd).map(|inner| PyLinkDiagram { inner }).map_err(err)
    }

    /// The crossings as ``(a, b, c, d)`` label tuples.
    #[getter]
    fn crossings(&self) -> Vec<(u32, u32, u32, u32)> {
        self.inner.crossings().iter().map(|&[a, b, c, d]| (a, b, c, d)).collect()
    }

    #[getter]
    fn crossing_count(&self) -> usize {
        self.inner.crossing_count()
    }

    #[getter]
    fn arc_count(&self) -> usize {
        self.inner.arc_count()
    }

    /// Arc labels of each component in traversal order.
    #[getter]
    fn components(&self) -> Vec<Vec<u32>> {
        self.inner.components().iter().map(|c| c.arcs.clone()).collect()
    }

    /// Per component, the sequence of ``(crossing, "over" | "under")``.
    fn gauss_sequences(&self) -> Vec<Vec<(usize, &'static str)>> {
        self.inner
            .gauss_sequences()
            .into_iter()
            .map(|seq| {
                seq.into_iter().map(|(x, s)| (x, if s == Strand::Over { "over" } else { "under" })).collect()
            })
            .collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LinkDiagram({:?})", self.inner.to_string())
    }
}

/// The pyramidal patchwork of a diagram: a plane graph with its faces.
#[pyclass(name = "Patchwork", module = "necklace", frozen)]
struct PyPatchwork {
    inner: patchwork::Patchwork,
}

#[pymethods]
impl PyPatchwork {
    #[new]
    fn new(diagram: &PyLinkDiagram) -> PyResult<Self> {
        patchwork::build_patchwork(&diagram.inner).map(|inner| PyPatchwork { inner }).map_err(err)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn faces(&self) -> Vec<Vec<usize>> {
        self.inner.faces().to_vec()
    }

    fn outer_face(&self) -> Vec<usize> {
        self.inner.outer_face().to_vec()
    }

    /// Vertex roles: ``"crossing"``, ``"medial"`` or ``"auxiliary"``.
    fn roles(&self) -> Vec<&'static str> {
        self.inner
            .roles()
            .iter()
            .map(|r| match r {
                VertexRole::Crossing => "crossing",
                VertexRole::Medial => "medial",
                VertexRole::Auxiliary => "auxiliary",
            })
            .collect()
    }

    /// Circle packing of the patchwork: a list of ``(id, x, y, r)``.
    #[pyo3(signature = (boundary_radius = 1.0, precision = circlepack::DEFAULT_PRECISION))]
    fn pack(&self, boundary_radius: f64, precision: f64) -> PyResult<Vec<(usize, f64, f64, f64)>> {
        let packing = circlepack::pack(&self.inner, &PackOptions { boundary_radius, precision }).map_err(err)?;
        Ok(packing.disks.iter().map(|d| (d.id, d.center[0], d.center[1], d.radius)).collect())
    }

    /// SVG drawing of the packing and its tangency edges.
    #[pyo3(signature = (boundary_radius = 1.0, precision = circlepack::DEFAULT_PRECISION))]
    fn packing_svg(&self, boundary_radius: f64, precision: f64) -> PyResult<String> {
        let packing = circlepack::pack(&self.inner, &PackOptions { boundary_radius, precision }).map_err(err)?;
        Ok(nio::packing_svg(&packing, &self.inner.edges().collect::<Vec<_>>()))
    }
}

/// Result of :meth:`Necklace.verify`.
#[pyclass(name = "VerificationReport", module = "necklace", frozen)]
struct PyReport {
    inner: nk::VerificationReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    #[getter]
    fn packing_ok(&self) -> bool {
        self.inner.packing_ok()
    }

    #[getter]
    fn threads_ok(&self) -> bool {
        self.inner.threads_ok()
    }

    #[getter]
    fn identities_ok(&self) -> bool {
        self.inner.identities_ok()
    }

    #[getter]
    fn over_under_ok(&self) -> bool {
        self.inner.over_under_ok()
    }

    #[getter]
    fn projection_ok(&self) -> bool {
        self.inner.projection_ok()
    }

    /// Largest ``<b_i, b_j> + 1`` over all pairs of balls.
    #[getter]
    fn worst_separation(&self) -> f64 {
        self.inner.worst_separation
    }

    /// Largest ``|<b_i, b_{i+1}> + 1|`` along the threads.
    #[getter]
    fn worst_thread_residual(&self) -> f64 {
        self.inner.worst_thread_residual
    }

    #[getter]
    fn projection(&self) -> String {
        self.inner.projection.to_string()
    }

    fn over_under_failures(&self) -> Vec<usize> {
        self.inner.over_under_failures()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// A necklace representation: balls, threads and per-crossing records.
#[pyclass(name = "Necklace", module = "necklace", frozen)]
struct PyNecklace {
    inner: nk::Necklace,
}

#[pymethods]
impl PyNecklace {
    /// Assembles the necklace of ``diagram``.
    #[new]
    #[pyo3(signature = (diagram, precision = circlepack::DEFAULT_PRECISION, outer_radius = 1.0, tolerance = nk::DEFAULT_TOLERANCE))]
    fn new(diagram: &PyLinkDiagram, precision: f64, outer_radius: f64, tolerance: f64) -> PyResult<Self> {
        let options = AssembleOptions { precision, outer_radius, tolerance };
        nk::assemble(&diagram.inner, &options).map(|inner| PyNecklace { inner }).map_err(err)
    }

    /// Loads a necklace from its JSON document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc = NecklaceDocument::from_json(text).map_err(err)?;
        doc.to_necklace().map(|inner| PyNecklace { inner }).map_err(err)
    }

    #[getter]
    fn diagram(&self) -> PyLinkDiagram {
        PyLinkDiagram { inner: self.inner.diagram().clone() }
    }

    /// Balls as ``(id, x, y, z, r, role, source)`` tuples.
    #[getter]
    fn balls(&self) -> Vec<(usize, f64, f64, f64, f64, &'static str, String)> {
        self.inner
            .balls()
            .iter()
            .map(|b| {
                let [x, y, z] = b.center();
                (b.id, x, y, z, b.radius(), b.role.name(), b.source.to_string())
            })
            .collect()
    }

    /// Inversive coordinates of every ball.
    fn coordinates(&self) -> Vec<Vec<f64>> {
        self.inner.balls().iter().map(|b| b.coords.as_slice().to_vec()).collect()
    }

    #[getter]
    fn threads(&self) -> Vec<Vec<usize>> {
        self.inner.threads().to_vec()
    }

    /// Per crossing: ``(pyramid ids x,1,2,-1,-2; bridge ids; closest pair; over)``.
    #[getter]
    fn crossings(&self) -> Vec<([usize; 5], [usize; 2], i8, bool)> {
        self.inner.crossings().iter().map(|c| (c.pyramid, c.bridges, c.closest, c.over)).collect()
    }

    #[getter]
    fn solver_precision(&self) -> f64 {
        self.inner.solver_precision()
    }

    #[pyo3(signature = (tolerance = nk::DEFAULT_TOLERANCE, projection = true))]
    fn verify(&self, tolerance: f64, projection: bool) -> PyReport {
        PyReport { inner: nk::verify(&self.inner, &VerifyOptions { tolerance, projection }) }
    }

    fn to_json(&self) -> String {
        NecklaceDocument::from_necklace(&self.inner).to_json()
    }

    /// Serializes as ``"json"``, ``"csv"``, ``"obj"`` or ``"svg"``.
    #[pyo3(signature = (format, segments = 24, rings = 12))]
    fn export(&self, format: &str, segments: usize, rings: usize) -> PyResult<String> {
        let format: Format = format.parse().map_err(err)?;
        let doc = NecklaceDocument::from_necklace(&self.inner);
        let bytes = nio::export_document(&doc, format, &ObjOptions { segments, rings }).map_err(err)?;
        String::from_utf8(bytes).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.balls().len()
    }
}

fn coords(v: Vec<f64>) -> PyResult<InversiveCoords> {
    if !(4..=5).contains(&v.len()) {
        return Err(err(format!("inversive coordinates need 4 or 5 entries, got {}", v.len())));
    }
    InversiveCoords::from_raw(v.len() - 2, &v).map_err(err)
}

/// Inversive coordinates of the solid ball (or disk) with this center and radius.
#[pyfunction]
#[pyo3(signature = (center, radius, hollow = false))]
fn encode_ball(center: Vec<f64>, radius: f64, hollow: bool) -> PyResult<Vec<f64>> {
    let shape = if hollow { Shape::Hollow { center, radius } } else { Shape::Solid { center, radius } };
    inversive::encode(&shape).map(|c| c.as_slice().to_vec()).map_err(err)
}

/// Inversive coordinates of the half-space ``<x, normal> >= offset``.
#[pyfunction]
fn encode_half_space(normal: Vec<f64>, offset: f64) -> PyResult<Vec<f64>> {
    inversive::encode(&Shape::HalfSpace { normal, offset }).map(|c| c.as_slice().to_vec()).map_err(err)
}

/// Decodes coordinates into ``("solid" | "hollow", center, radius)`` or
/// ``("half-space", normal, offset)``.
#[pyfunction]
fn decode(v: Vec<f64>) -> PyResult<(&'static str, Vec<f64>, f64)> {
    Ok(match inversive::decode(&coords(v)?).map_err(err)? {
        Shape::Solid { center, radius } => ("solid", center, radius),
        Shape::Hollow { center, radius } => ("hollow", center, radius),
        Shape::HalfSpace { normal, offset } => ("half-space", normal, offset),
    })
}

/// The inversive product of two coordinate vectors.
#[pyfunction]
fn product(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    inversive::product(&coords(a)?, &coords(b)?).map_err(err)
}

/// Embeds a disk as the ball with the same center and radius.
#[pyfunction]
fn blow_up(v: Vec<f64>) -> PyResult<Vec<f64>> {
    inversive::blow_up(&coords(v)?).map(|c| c.as_slice().to_vec()).map_err(err)
}

/// Inversion of ``u`` in the ball ``mirror``.
#[pyfunction]
fn reflect(u: Vec<f64>, mirror: Vec<f64>) -> PyResult<Vec<f64>> {
    inversive::reflect(&coords(u)?, &coords(mirror)?).map(|c| c.as_slice().to_vec()).map_err(err)
}

#[pymodule]
#[pyo3(name = "necklace")]
fn necklace_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NecklaceError", m.py().get_type::<NecklaceError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyLinkDiagram>()?;
    m.add_class::<PyPatchwork>()?;
    m.add_class::<PyNecklace>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(encode_ball, m)?)?;
    m.add_function(wrap_pyfunction!(encode_half_space, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(product, m)?)?;
    m.add_function(wrap_pyfunction!(blow_up, m)?)?;
    m.add_function(wrap_pyfunction!(reflect, m)?)?;
    Ok(())
}
