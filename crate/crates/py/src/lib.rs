//! Python bindings. Rationals cross the boundary as `"p/q"` strings and
//! points as `(x, y)` tuples; every document type also round-trips through
//! its JSON form.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use hypertrop::chains::{self, bits_to_string, parse_bit_string, ChainLength, ChainLengths};
use hypertrop::embedding::{self, Crowdedness};
use hypertrop::io::{from_json_str, to_json, CurveDoc};
use hypertrop::lattice::{self, LatticePoint};
use hypertrop::moduli::{self, TheoremOptions};
use hypertrop::rational::{format_rational, parse_rational, Rational};
use hypertrop::render::{self, SvgOptions};
use hypertrop::triangulation::{self as tri, EnumerationOptions};
use hypertrop::tropical;
use hypertrop::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::TheoremViolation(w) => PyRuntimeError::new_err(w),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn to_points(pts: &[LatticePoint]) -> Vec<(i64, i64)> {
    pts.iter().map(|p| (p.x, p.y)).collect()
}

fn parse_all(qs: &[String]) -> PyResult<Vec<Rational>> {
    qs.iter().map(|q| parse_rational(q).map_err(py_err)).collect()
}

#[pyclass(name = "Polygon", module = "hypertrop_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct Polygon(lattice::LatticePolygon);

#[pymethods]
impl Polygon {
    /// Convex hull of the given lattice points.
    #[new]
    fn new(points: Vec<(i64, i64)>) -> PyResult<Self> {
        let pts: Vec<LatticePoint> = points.into_iter().map(|(x, y)| LatticePoint::new(x, y)).collect();
        lattice::LatticePolygon::hull_of(&pts).map(Polygon).map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        from_json_str(text, "<json>").map(Polygon).map_err(py_err)
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&self.0).map_err(py_err)
    }

    #[getter]
    fn vertices(&self) -> Vec<(i64, i64)> {
        to_points(self.0.vertices())
    }

    #[getter]
    fn genus(&self) -> usize {
        self.0.genus()
    }

    fn lattice_points(&self) -> Vec<(i64, i64)> {
        to_points(&self.0.lattice_points())
    }

    fn interior_points(&self) -> Vec<(i64, i64)> {
        to_points(&self.0.interior_points())
    }

    fn boundary_count(&self) -> usize {
        self.0.boundary_count()
    }

    fn is_hyperelliptic(&self) -> bool {
        self.0.is_hyperelliptic()
    }

    fn is_maximal(&self) -> bool {
        self.0.is_maximal()
    }

    fn normal_form(&self) -> Polygon {
        Polygon(self.0.normal_form())
    }

    fn is_equivalent(&self, other: &Polygon) -> bool {
        self.0.is_equivalent(&other.0)
    }

    /// Regular unimodular triangulations (all of them with `regular_only=False`).
    #[pyo3(signature = (regular_only = true, modulo_symmetry = false, max_genus = 3))]
    fn triangulations(&self, regular_only: bool, modulo_symmetry: bool, max_genus: usize) -> PyResult<Vec<Triangulation>> {
        let opts = EnumerationOptions { regular_only, modulo_symmetry, max_genus };
        let ts = tri::enumerate_triangulations(&self.0, opts).map_err(py_err)?;
        Ok(ts.into_iter().map(|t| Triangulation { polygon: self.0.clone(), tri: t }).collect())
    }

    fn initial_triangulation(&self) -> Triangulation {
        Triangulation { polygon: self.0.clone(), tri: tri::initial_triangulation(&self.0) }
    }

    #[pyo3(signature = (scale = 40.0, margin = 20.0))]
    fn render_svg(&self, scale: f64, margin: f64) -> String {
        render::render_polygon(&self.0, SvgOptions { scale, margin })
    }

    fn __repr__(&self) -> String {
        format!("Polygon({:?})", self.vertices())
    }
}

#[pyclass(name = "Triangulation", module = "hypertrop_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Triangulation {
    polygon: lattice::LatticePolygon,
    tri: tri::UnimodularTriangulation,
}

impl Triangulation {
    fn heights(&self, heights: Option<Vec<String>>) -> PyResult<tri::HeightVector> {
        match heights {
            Some(hs) => Ok(tri::HeightVector::new(parse_all(&hs)?)),
            None => tri::regular_height(&self.tri)
                .map_err(py_err)?
                .ok_or_else(|| py_err(Error::NoInteriorPoint)),
        }
    }
}

#[pymethods]
impl Triangulation {
    /// Reads a curve document; missing triangles are induced by the heights
    /// or default to the placing triangulation.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc: CurveDoc = from_json_str(text, "<json>").map_err(py_err)?;
        let (tri, _) = doc.resolve().map_err(py_err)?;
        Ok(Triangulation { polygon: doc.polygon, tri })
    }

    #[getter]
    fn polygon(&self) -> Polygon {
        Polygon(self.polygon.clone())
    }

    /// Lattice points in the order used by heights.
    #[getter]
    fn points(&self) -> Vec<(i64, i64)> {
        to_points(&self.tri.points)
    }

    #[getter]
    fn triangles(&self) -> Vec<[usize; 3]> {
        self.tri.triangles.clone()
    }

    fn is_regular(&self) -> PyResult<bool> {
        tri::is_regular(&self.polygon, &self.tri).map_err(py_err)
    }

    /// A height in the open secondary cone, or `None` when there is none.
    fn regular_height(&self) -> PyResult<Option<Vec<String>>> {
        let h = tri::regular_height(&self.tri).map_err(py_err)?;
        Ok(h.map(|h| h.heights.iter().map(format_rational).collect()))
    }

    /// Skeleton of the dual curve at `heights` (default: an interior height).
    #[pyo3(signature = (heights = None))]
    fn skeleton(&self, heights: Option<Vec<String>>) -> PyResult<MetricGraph> {
        let h = self.heights(heights)?;
        let curve = tropical::dual_curve(&self.polygon, &self.tri, &h).map_err(py_err)?;
        tropical::skeleton(&curve).map(|s| MetricGraph(s.graph)).map_err(py_err)
    }

    /// Dual curve as a JSON document.
    #[pyo3(signature = (heights = None))]
    fn curve_json(&self, heights: Option<Vec<String>>) -> PyResult<String> {
        let h = self.heights(heights)?;
        let curve = tropical::dual_curve(&self.polygon, &self.tri, &h).map_err(py_err)?;
        to_json(&curve).map_err(py_err)
    }

    /// Dimension of the cone of skeleton metrics.
    fn cone_dim(&self) -> PyResult<usize> {
        moduli::cone_dim(&self.polygon, &self.tri).map_err(py_err)
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&CurveDoc::new(&self.polygon, &self.tri, None)).map_err(py_err)
    }

    #[pyo3(signature = (scale = 40.0, margin = 20.0))]
    fn render_svg(&self, scale: f64, margin: f64) -> String {
        render::render_triangulation(&self.polygon, &self.tri, SvgOptions { scale, margin })
    }

    #[pyo3(signature = (heights = None, scale = 40.0, margin = 20.0))]
    fn render_skeleton_svg(&self, heights: Option<Vec<String>>, scale: f64, margin: f64) -> PyResult<String> {
        let h = self.heights(heights)?;
        let curve = tropical::dual_curve(&self.polygon, &self.tri, &h).map_err(py_err)?;
        let sk = tropical::skeleton(&curve).map_err(py_err)?;
        Ok(render::render_skeleton(&curve, &sk, SvgOptions { scale, margin }))
    }

    fn __len__(&self) -> usize {
        self.tri.triangles.len()
    }
}

#[pyclass(name = "MetricGraph", module = "hypertrop_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct MetricGraph(hypertrop::MetricGraph);

#[pymethods]
impl MetricGraph {
    /// `edges` are `(u, v, length)` with the length as `"p/q"`.
    #[new]
    fn new(vertices: usize, edges: Vec<(usize, usize, String)>) -> PyResult<Self> {
        let triples = edges
            .into_iter()
            .map(|(u, v, l)| parse_rational(&l).map(|l| (u, v, l)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(py_err)?;
        hypertrop::MetricGraph::from_triples(vertices, &triples).map(MetricGraph).map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        from_json_str(text, "<json>").map(MetricGraph).map_err(py_err)
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&self.0).map_err(py_err)
    }

    #[getter]
    fn vertices(&self) -> usize {
        self.0.vertices
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize, String)> {
        self.0.edges.iter().map(|e| (e.u, e.v, format_rational(&e.len))).collect()
    }

    #[getter]
    fn genus(&self) -> usize {
        self.0.genus()
    }

    fn bridges(&self) -> Vec<usize> {
        self.0.bridges()
    }

    fn is_trivalent(&self) -> bool {
        self.0.is_trivalent()
    }

    fn is_hyperelliptic(&self) -> PyResult<bool> {
        hypertrop::hyperelliptic::is_hyperelliptic(&self.0).map(|w| w.verdict).map_err(py_err)
    }

    /// Chain bit string when the graph is combinatorially a chain.
    fn chain_bits(&self) -> Option<String> {
        chains::is_chain(&self.0).map(|c| bits_to_string(&c.bits))
    }

    fn is_hyperelliptic_chain(&self) -> PyResult<bool> {
        chains::is_hyperelliptic_chain(&self.0).map_err(py_err)
    }

    fn is_ladder(&self) -> bool {
        chains::is_ladder(&self.0).is_some()
    }

    fn is_sprawling(&self) -> bool {
        self.0.is_sprawling().is_some()
    }

    /// `"not_planar"`, `"crowded"` or `"not_crowded"`.
    fn crowdedness(&self) -> PyResult<&'static str> {
        Ok(match embedding::is_crowded(&self.0).map_err(py_err)? {
            Crowdedness::NotPlanar => "not_planar",
            Crowdedness::Crowded => "crowded",
            Crowdedness::NotCrowded => "not_crowded",
        })
    }

    fn is_isomorphic(&self, other: &MetricGraph) -> bool {
        hypertrop::iso::are_isomorphic(&self.0, &other.0, true)
    }

    /// Standard chain picture; `None` for other graphs.
    #[pyo3(signature = (scale = 40.0, margin = 20.0))]
    fn render_chain_svg(&self, scale: f64, margin: f64) -> Option<String> {
        render::render_chain(&self.0, SvgOptions { scale, margin })
    }

    /// Number of planar embeddings up to graph automorphism.
    fn embedding_count(&self) -> PyResult<usize> {
        embedding::embedding_classes(&self.0).map(|es| es.len()).map_err(py_err)
    }

    /// Tutte drawing of the `index`-th planar embedding class.
    #[pyo3(signature = (index = 0, scale = 40.0, margin = 20.0))]
    fn render_embedding_svg(&self, index: usize, scale: f64, margin: f64) -> PyResult<String> {
        let es = embedding::embedding_classes(&self.0).map_err(py_err)?;
        let e = es.get(index).ok_or_else(|| PyValueError::new_err(format!("{} embedding classes, asked for {index}", es.len())))?;
        Ok(render::render_embedding(&self.0, e, SvgOptions { scale, margin }))
    }

    fn __repr__(&self) -> String {
        format!("MetricGraph(vertices={}, edges={:?})", self.0.vertices, self.edges())
    }
}

/// Chain of genus `g` from its bit string; `lengths` default to 1 and are
/// given in the edge order of the built graph.
#[pyfunction]
#[pyo3(signature = (g, bits, lengths = None))]
fn chain(g: usize, bits: &str, lengths: Option<Vec<String>>) -> PyResult<MetricGraph> {
    let bits = parse_bit_string(bits).map_err(py_err)?;
    let unit = ChainLengths::uniform(g, Rational::from_integer(1.into()));
    let c = chains::build_chain(g, &bits, &unit).map_err(py_err)?;
    let Some(ls) = lengths else { return Ok(MetricGraph(c)) };
    let ls = parse_all(&ls)?;
    if ls.len() != c.edges.len() {
        return Err(PyValueError::new_err(format!("a genus-{g} chain has {} edges, got {} lengths", c.edges.len(), ls.len())));
    }
    let edges: Vec<_> = c.edges.iter().zip(ls).map(|(e, l)| (e.u, e.v, l)).collect();
    hypertrop::MetricGraph::from_triples(c.vertices, &edges).map(MetricGraph).map_err(py_err)
}

/// One unit-length chain per combinatorial type, keyed by bit string.
#[pyfunction]
fn enumerate_chains(g: usize) -> PyResult<Vec<(String, MetricGraph)>> {
    let cs = chains::enumerate_chains(g).map_err(py_err)?;
    Ok(cs.into_iter().map(|(b, c)| (bits_to_string(&b), MetricGraph(c))).collect())
}

#[pyfunction]
fn chain_count(g: usize) -> PyResult<u64> {
    if g < 2 {
        return Err(PyValueError::new_err("chains need genus >= 2"));
    }
    Ok(chains::chain_count(g))
}

/// Chain lengths grouped by role: two loops, pairs and splits.
#[pyfunction]
fn chain_from_roles(g: usize, bits: &str, loops: Vec<String>, pairs: Vec<(String, String)>, splits: Vec<String>) -> PyResult<MetricGraph> {
    let bits = parse_bit_string(bits).map_err(py_err)?;
    let pairs = pairs
        .iter()
        .map(|(a, b)| Ok([ChainLength(parse_rational(a).map_err(py_err)?), ChainLength(parse_rational(b).map_err(py_err)?)]))
        .collect::<PyResult<Vec<_>>>()?;
    let lengths = ChainLengths { loops: parse_all(&loops)?, pairs, splits: parse_all(&splits)? };
    chains::build_chain(g, &bits, &lengths).map(MetricGraph).map_err(py_err)
}

#[pyfunction]
fn maximal_polygons(g: usize) -> PyResult<Vec<Polygon>> {
    Ok(lattice::maximal_polygons(g).map_err(py_err)?.into_iter().map(Polygon).collect())
}

#[pyfunction]
fn hyperelliptic_polygons(g: usize) -> PyResult<Vec<Polygon>> {
    Ok(lattice::enumerate_hyperelliptic_polygons(g).map_err(py_err)?.into_iter().map(Polygon).collect())
}

#[pyfunction]
fn trivalent_graphs(g: usize) -> PyResult<Vec<MetricGraph>> {
    Ok(hypertrop::catalog::enumerate_trivalent_graphs(g).map_err(py_err)?.into_iter().map(MetricGraph).collect())
}

/// Theorem check over one polygon; returns the report as JSON and raises
/// `RuntimeError` with the witness on a counterexample.
#[pyfunction]
#[pyo3(signature = (polygon, samples = 3, seed = 7, modulo_symmetry = false))]
fn verify_theorem(py: Python<'_>, polygon: &Polygon, samples: usize, seed: u64, modulo_symmetry: bool) -> PyResult<String> {
    let opts = TheoremOptions { samples, seed, modulo_symmetry, ..Default::default() };
    let p = polygon.0.clone();
    let report = py.detach(move || moduli::verify_theorem(&p, &opts)).map_err(py_err)?;
    to_json(&report).map_err(py_err)
}

#[pymodule]
fn hypertrop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds every class and function to `m`; also used to embed the module.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Polygon>()?;
    m.add_class::<Triangulation>()?;
    m.add_class::<MetricGraph>()?;
    m.add_function(wrap_pyfunction!(chain, m)?)?;
    m.add_function(wrap_pyfunction!(chain_from_roles, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_chains, m)?)?;
    m.add_function(wrap_pyfunction!(chain_count, m)?)?;
    m.add_function(wrap_pyfunction!(maximal_polygons, m)?)?;
    m.add_function(wrap_pyfunction!(hyperelliptic_polygons, m)?)?;
    m.add_function(wrap_pyfunction!(trivalent_graphs, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem, m)?)?;
    Ok(())
}
