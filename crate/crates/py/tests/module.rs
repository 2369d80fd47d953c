use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module(code: &str) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "hypertrop_py").unwrap();
        hypertrop_py::register(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("ht", m).unwrap();
        let code = std::ffi::CString::new(code).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            panic!("{e}");
        }
    });
}

#[test]
fn polygons_and_skeletons() {
    with_module(
        "p = ht.Polygon([(0, 0), (6, 0), (0, 2)])\n\
         assert p.genus == 2 and p.is_hyperelliptic()\n\
         ts = p.triangulations()\n\
         assert all(t.skeleton().is_hyperelliptic() for t in ts)\n\
         assert ht.Polygon.from_json(p.to_json()) == p\n",
    );
}

#[test]
fn graph_errors_become_value_errors() {
    with_module(
        "try:\n    ht.MetricGraph(2, [(0, 7, '1')])\n    raise AssertionError\n\
         except ValueError as e:\n    assert 'vertex' in str(e) or 'edge' in str(e), str(e)\n\
         try:\n    ht.chain_from_roles(3, '00', ['1'], [], [])\n    raise AssertionError\n\
         except ValueError:\n    pass\n",
    );
}

#[test]
fn rationals_cross_as_strings() {
    with_module(
        "g = ht.MetricGraph(2, [(0, 1, '2/4'), (0, 1, '1'), (0, 1, '3')])\n\
         assert g.edges[0] == (0, 1, '1/2')\n\
         assert ht.MetricGraph.from_json(g.to_json()).edges == g.edges\n",
    );
}
