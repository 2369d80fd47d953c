//! JSON documents exchanged with the command line and the bindings.
//!
//! Rationals are `"p/q"` strings, points are `[x, y]` pairs and graphs are
//! `{"vertices": n, "edges": [{"u", "v", "len"}]}`.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolygon};
use crate::rational::{serde_str, Rational};
use crate::triangulation::{
    induced_subdivision, initial_triangulation, regular_height, validate_triangulation, HeightVector,
    UnimodularTriangulation,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointHeight {
    pub point: LatticePoint,
    #[serde(with = "serde_str")]
    pub height: Rational,
}

/// A polygon with an optional triangulation (as point triples) and optional
/// heights. Missing pieces are filled in by [`CurveDoc::resolve`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDoc {
    pub polygon: LatticePolygon,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangles: Option<Vec<[LatticePoint; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heights: Option<Vec<PointHeight>>,
}

impl CurveDoc {
    pub fn new(polygon: &LatticePolygon, tri: &UnimodularTriangulation, h: Option<&HeightVector>) -> Self {
        CurveDoc {
            polygon: polygon.clone(),
            triangles: Some(tri.triangles.iter().map(|t| tri.triangle_points(t)).collect()),
            heights: h.map(|h| {
                tri.points.iter().zip(&h.heights).map(|(&point, q)| PointHeight { point, height: q.clone() }).collect()
            }),
        }
    }

    /// Heights every lattice point of the polygon, in `points` order.
    fn heights_for(&self, points: &[LatticePoint]) -> Result<Option<HeightVector>> {
        let Some(hs) = &self.heights else { return Ok(None) };
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            let mut found = hs.iter().filter(|x| x.point == *p);
            let h = found.next().ok_or_else(|| Error::Malformed(format!("no height for lattice point {p}")))?;
            if found.next().is_some() {
                return Err(Error::Malformed(format!("two heights for lattice point {p}")));
            }
            out.push(h.height.clone());
        }
        if hs.len() != points.len() {
            return Err(Error::Malformed(format!("{} heights for {} lattice points", hs.len(), points.len())));
        }
        Ok(Some(HeightVector::new(out)))
    }

    /// Triangulation and a height inducing it.
    ///
    /// Triangles without heights take the LP interior point of their cone;
    /// heights without triangles induce the subdivision, which must be a
    /// unimodular triangulation; neither gives the placing triangulation.
    pub fn resolve(&self) -> Result<(UnimodularTriangulation, HeightVector)> {
        let tri = match &self.triangles {
            Some(ts) => UnimodularTriangulation::from_point_triangles(&self.polygon, ts)?,
            None => match self.heights_for(&self.polygon.lattice_points())? {
                Some(h) => induced_subdivision(&self.polygon, &h)?
                    .to_triangulation()
                    .ok_or_else(|| Error::NotTriangulation("the heights induce a coarser subdivision".into()))?,
                None => initial_triangulation(&self.polygon),
            },
        };
        let v = validate_triangulation(&self.polygon, &tri)?;
        if !v.valid {
            return Err(Error::NotTriangulation(v.diagnostic.unwrap_or_default()));
        }
        let h = match self.heights_for(&tri.points)? {
            Some(h) => h,
            None => regular_height(&tri)?.ok_or(Error::NoInteriorPoint)?,
        };
        Ok((tri, h))
    }
}

fn located(source: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{source}:{}:{}: {e}", e.line(), e.column()))
}

/// Parses a JSON document; errors carry `source:line:column`.
pub fn from_json_str<T: DeserializeOwned>(text: &str, source: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| located(source, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    from_json_str(&text, &path.display().to_string())
}

/// Pretty JSON with a trailing newline; field order is fixed by the types.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MetricGraph;
    use crate::rational::int;

    #[test]
    fn parse_errors_carry_a_location() {
        let err = from_json_str::<MetricGraph>("{\n  \"vertices\": 2,\n  \"edges\": [oops]\n}", "g.json").unwrap_err();
        assert!(err.to_string().contains("g.json:3:"), "{err}");
    }

    #[test]
    fn graph_validation_runs_on_parse() {
        let text = r#"{"vertices": 2, "edges": [{"u": 0, "v": 5, "len": "1/1"}]}"#;
        assert!(from_json_str::<MetricGraph>(text, "g").is_err());
    }

    #[test]
    fn curve_doc_fills_in_missing_pieces() {
        let p = LatticePolygon::from_coords(&[(0, 0), (6, 0), (0, 2)]).unwrap();
        let doc = CurveDoc { polygon: p.clone(), triangles: None, heights: None };
        let (tri, h) = doc.resolve().unwrap();
        let full = CurveDoc::new(&p, &tri, Some(&h));
        let text = to_json(&full).unwrap();
        let back: CurveDoc = from_json_str(&text, "doc").unwrap();
        assert_eq!(back, full);
        assert_eq!(back.resolve().unwrap(), (tri.clone(), h.clone()));
        // heights alone reproduce the triangulation they induce
        let heights_only = CurveDoc { triangles: None, ..full };
        assert_eq!(heights_only.resolve().unwrap().0, tri);
    }

    #[test]
    fn missing_heights_are_reported() {
        let p = LatticePolygon::from_coords(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        let doc = CurveDoc {
            polygon: p,
            triangles: None,
            heights: Some(vec![PointHeight { point: LatticePoint::new(0, 0), height: int(0) }]),
        };
        assert!(matches!(doc.resolve(), Err(Error::Malformed(_))));
    }
}
