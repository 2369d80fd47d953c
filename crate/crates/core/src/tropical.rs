//! Tropical curves dual to regular unimodular triangulations (min-plus
//! convention, lower hull) and their metric skeleta.
//!
//! The vertex dual to a triangle `{p1, p2, p3}` is the point `x` where the
//! three terms `h(p) + <p, x>` tie. The edge dual to a triangulation edge
//! `ab` leaves that vertex perpendicular to `b - a`, on the side of the
//! third vertex. Rays are dual to boundary edges and point along the inward
//! normal of the polygon, i.e. the counterclockwise boundary edge rotated by
//! +90°.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphEdge, MetricGraph};
use crate::lattice::{primitive, LatticePoint, LatticePolygon};
use crate::rational::{int, lattice_length, serde_str, RatPoint, Rational};
use crate::triangulation::{HeightVector, UnimodularTriangulation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedEdge {
    /// Indices into the triangle list; direction points from the first.
    pub triangles: [usize; 2],
    /// The dual triangulation edge, as point indices.
    pub dual: [usize; 2],
    pub direction: [i64; 2],
    #[serde(with = "serde_str")]
    pub length: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray {
    pub triangle: usize,
    pub dual: [usize; 2],
    pub direction: [i64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    /// Interior lattice point index.
    pub point: usize,
    /// Bounded edges around the face.
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalCurve {
    pub points: Vec<LatticePoint>,
    pub triangles: Vec<[usize; 3]>,
    /// One vertex per triangle, in triangle order.
    pub vertices: Vec<RatPoint>,
    pub bounded_edges: Vec<BoundedEdge>,
    pub rays: Vec<Ray>,
    pub faces: Vec<Face>,
}

/// Third vertex of triangle `t` away from edge `{a, b}`.
fn apex(t: &[usize; 3], a: usize, b: usize) -> usize {
    *t.iter().find(|&&v| v != a && v != b).expect("edge belongs to triangle")
}

/// Primitive direction perpendicular to `b - a` on the side of `c`.
fn dual_direction(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> (i64, i64) {
    let (dx, dy) = primitive(b.x - a.x, b.y - a.y);
    let (ux, uy) = (-dy, dx);
    if ux * (c.x - a.x) + uy * (c.y - a.y) > 0 {
        (ux, uy)
    } else {
        (-ux, -uy)
    }
}

/// Integer matrix `M` with `x = M · (h2 - h1, h3 - h1)` for the vertex of a
/// unimodular triangle.
fn vertex_solver(p1: LatticePoint, p2: LatticePoint, p3: LatticePoint) -> [[i64; 2]; 2] {
    // rows (p1 - p2), (p1 - p3)
    let (a, b) = p1.sub(p2);
    let (c, d) = p1.sub(p3);
    let det = a * d - b * c;
    debug_assert_eq!(det.abs(), 1);
    [[d * det, -b * det], [-c * det, a * det]]
}

/// Dual vertex of each triangle as an exact point.
pub fn dual_vertices(tri: &UnimodularTriangulation, h: &HeightVector) -> Vec<RatPoint> {
    tri.triangles
        .iter()
        .map(|t| {
            let [p1, p2, p3] = tri.triangle_points(t);
            let m = vertex_solver(p1, p2, p3);
            let r1 = &h.heights[t[1]] - &h.heights[t[0]];
            let r2 = &h.heights[t[2]] - &h.heights[t[0]];
            RatPoint::new(
                int(m[0][0]) * &r1 + int(m[0][1]) * &r2,
                int(m[1][0]) * &r1 + int(m[1][1]) * &r2,
            )
        })
        .collect()
}

/// Dual vertex coordinates as integer linear forms in the heights.
pub fn dual_vertex_forms(tri: &UnimodularTriangulation) -> Vec<[Vec<i64>; 2]> {
    let n = tri.points.len();
    tri.triangles
        .iter()
        .map(|t| {
            let [p1, p2, p3] = tri.triangle_points(t);
            let m = vertex_solver(p1, p2, p3);
            let mut fx = vec![0i64; n];
            let mut fy = vec![0i64; n];
            // r1 = h[t1] - h[t0], r2 = h[t2] - h[t0]
            for (f, row) in [(&mut fx, m[0]), (&mut fy, m[1])] {
                f[t[1]] += row[0];
                f[t[2]] += row[1];
                f[t[0]] -= row[0] + row[1];
            }
            [fx, fy]
        })
        .collect()
}

/// Combinatorial skeleton of a curve: which bounded edges survive and how
/// they concatenate. Independent of the heights inside the open cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonStructure {
    pub vertices: usize,
    /// Triangle index of each skeleton vertex.
    pub vertex_triangles: Vec<usize>,
    /// Endpoints of each skeleton edge.
    pub ends: Vec<[usize; 2]>,
    /// Bounded-edge indices concatenated into each skeleton edge.
    pub segments: Vec<Vec<usize>>,
    /// Skeleton edges around the cycle of each interior point.
    pub cycles: Vec<(usize, Vec<usize>)>,
}

impl TropicalCurve {
    /// Every vertex has three incident edges or rays.
    pub fn is_trivalent(&self) -> bool {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.bounded_edges {
            deg[e.triangles[0]] += 1;
            deg[e.triangles[1]] += 1;
        }
        for r in &self.rays {
            deg[r.triangle] += 1;
        }
        deg.iter().all(|&d| d == 3)
    }

    /// Sum of outgoing primitive directions at each vertex.
    pub fn balancing_defects(&self) -> Vec<(i64, i64)> {
        let mut sum = vec![(0i64, 0i64); self.vertices.len()];
        for e in &self.bounded_edges {
            let [dx, dy] = e.direction;
            sum[e.triangles[0]].0 += dx;
            sum[e.triangles[0]].1 += dy;
            sum[e.triangles[1]].0 -= dx;
            sum[e.triangles[1]].1 -= dy;
        }
        for r in &self.rays {
            sum[r.triangle].0 += r.direction[0];
            sum[r.triangle].1 += r.direction[1];
        }
        sum
    }

    pub fn is_balanced(&self) -> bool {
        self.balancing_defects().iter().all(|&d| d == (0, 0))
    }

    pub fn genus(&self) -> usize {
        self.faces.len()
    }

    /// Retraction: drop rays, prune leaves, smooth degree-two vertices.
    pub fn skeleton_structure(&self) -> Result<SkeletonStructure> {
        skeleton_structure(self.vertices.len(), &self.bounded_edges, &self.faces)
    }
}

/// Builds the curve after checking that `h` lies in the open secondary cone.
pub fn dual_curve(polygon: &LatticePolygon, tri: &UnimodularTriangulation, h: &HeightVector) -> Result<TropicalCurve> {
    let v = crate::triangulation::validate_triangulation(polygon, tri)?;
    if !v.valid {
        return Err(Error::NotTriangulation(v.diagnostic.unwrap_or_default()));
    }
    dual_curve_unchecked(tri, h)
}

/// [`dual_curve`] for a triangulation already known to be valid.
pub fn dual_curve_unchecked(tri: &UnimodularTriangulation, h: &HeightVector) -> Result<TropicalCurve> {
    if h.heights.len() != tri.points.len() {
        return Err(Error::Malformed(format!("{} heights for {} points", h.heights.len(), tri.points.len())));
    }
    let cone = tri.fold_inequalities();
    if let Some((f, _)) = cone.inequalities.iter().zip(cone.slacks(h)).find(|(_, s)| !s.is_positive()) {
        let [a, b] = f.edge;
        return Err(Error::DegenerateCurve(format!(
            "heights are outside the open secondary cone at edge {}{}",
            tri.points[a], tri.points[b]
        )));
    }
    let vertices = dual_vertices(tri, h);
    let emap = tri.edge_map();
    let mut keys: Vec<_> = emap.keys().copied().collect();
    keys.sort_unstable();
    let mut bounded_edges = Vec::new();
    let mut rays = Vec::new();
    let mut edge_of_dual: HashMap<(usize, usize), usize> = HashMap::new();
    for (a, b) in keys {
        let ts = &emap[&(a, b)];
        let (pa, pb) = (tri.points[a], tri.points[b]);
        match ts.as_slice() {
            [t] => {
                let c = apex(&tri.triangles[*t], a, b);
                let (dx, dy) = dual_direction(pa, pb, tri.points[c]);
                rays.push(Ray { triangle: *t, dual: [a, b], direction: [dx, dy] });
            }
            [t0, t1] => {
                let c = apex(&tri.triangles[*t0], a, b);
                let (dx, dy) = dual_direction(pa, pb, tri.points[c]);
                let (v0, v1) = (&vertices[*t0], &vertices[*t1]);
                let length = lattice_length(v0, v1);
                // v1 - v0 must be a positive multiple of the direction
                let along = (&v1.x - &v0.x) * int(dx) + (&v1.y - &v0.y) * int(dy);
                if length.is_zero() || !along.is_positive() {
                    return Err(Error::DegenerateCurve(format!("edge dual to {pa}{pb} collapses")));
                }
                edge_of_dual.insert((a, b), bounded_edges.len());
                bounded_edges.push(BoundedEdge { triangles: [*t0, *t1], dual: [a, b], direction: [dx, dy], length });
            }
            _ => return Err(Error::NotTriangulation(format!("edge {pa}{pb} is in more than two triangles"))),
        }
    }
    let faces = interior_faces(tri, &bounded_edges);
    Ok(TropicalCurve { points: tri.points.clone(), triangles: tri.triangles.clone(), vertices, bounded_edges, rays, faces })
}

/// A point is interior iff every incident triangulation edge is interior.
fn interior_faces(tri: &UnimodularTriangulation, bounded: &[BoundedEdge]) -> Vec<Face> {
    let n = tri.points.len();
    let mut incident_total = vec![0usize; n];
    for (a, b) in tri.edges() {
        incident_total[a] += 1;
        incident_total[b] += 1;
    }
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in bounded.iter().enumerate() {
        around[e.dual[0]].push(i);
        around[e.dual[1]].push(i);
    }
    (0..n)
        .filter(|&p| incident_total[p] > 0 && around[p].len() == incident_total[p])
        .map(|p| Face { point: p, edges: around[p].clone() })
        .collect()
}

fn skeleton_structure(nv: usize, bounded: &[BoundedEdge], faces: &[Face]) -> Result<SkeletonStructure> {
    let genus = faces.len();
    if genus < 2 {
        return Err(Error::Unsupported(format!("skeleta are only defined for genus >= 2, got {genus}")));
    }
    let mut alive_edge = vec![true; bounded.len()];
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, e) in bounded.iter().enumerate() {
        inc[e.triangles[0]].push(i);
        inc[e.triangles[1]].push(i);
    }
    let mut deg: Vec<usize> = inc.iter().map(|l| l.len()).collect();
    let mut stack: Vec<usize> = (0..nv).filter(|&v| deg[v] == 1).collect();
    while let Some(v) = stack.pop() {
        if deg[v] != 1 {
            continue;
        }
        let ei = *inc[v].iter().find(|&&e| alive_edge[e]).expect("leaf has an edge");
        alive_edge[ei] = false;
        deg[v] = 0;
        let w = if bounded[ei].triangles[0] == v { bounded[ei].triangles[1] } else { bounded[ei].triangles[0] };
        deg[w] -= 1;
        if deg[w] == 1 {
            stack.push(w);
        }
    }
    let branch: Vec<usize> = (0..nv).filter(|&v| deg[v] == 3).collect();
    if branch.is_empty() || (0..nv).any(|v| deg[v] > 3) {
        return Err(Error::DegenerateCurve("core of the curve is not trivalent".into()));
    }
    let index: HashMap<usize, usize> = branch.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut used = vec![false; bounded.len()];
    let mut ends = Vec::new();
    let mut segments = Vec::new();
    for &s in &branch {
        for &first in &inc[s] {
            if !alive_edge[first] || used[first] {
                continue;
            }
            let mut path = vec![first];
            used[first] = true;
            let mut prev_edge = first;
            let mut cur = if bounded[first].triangles[0] == s { bounded[first].triangles[1] } else { bounded[first].triangles[0] };
            while deg[cur] == 2 {
                let next = *inc[cur]
                    .iter()
                    .find(|&&e| alive_edge[e] && e != prev_edge)
                    .expect("degree-two vertex continues");
                used[next] = true;
                path.push(next);
                prev_edge = next;
                cur = if bounded[next].triangles[0] == cur { bounded[next].triangles[1] } else { bounded[next].triangles[0] };
            }
            ends.push([index[&s], index[&cur]]);
            segments.push(path);
        }
    }
    let mut seg_of = vec![usize::MAX; bounded.len()];
    for (k, seg) in segments.iter().enumerate() {
        for &e in seg {
            seg_of[e] = k;
        }
    }
    let cycles = faces
        .iter()
        .map(|f| {
            let mut ks: Vec<usize> = f.edges.iter().map(|&e| seg_of[e]).collect();
            ks.sort_unstable();
            ks.dedup();
            debug_assert!(!ks.contains(&usize::MAX));
            (f.point, ks)
        })
        .collect();
    Ok(SkeletonStructure { vertices: branch.len(), vertex_triangles: branch, ends, segments, cycles })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skeleton {
    pub graph: MetricGraph,
    pub structure: SkeletonStructure,
}

impl Skeleton {
    /// Interior point of each cycle with its skeleton edges.
    pub fn cycle_map(&self) -> &[(usize, Vec<usize>)] {
        &self.structure.cycles
    }
}

pub fn skeleton(curve: &TropicalCurve) -> Result<Skeleton> {
    if !curve.is_trivalent() || !curve.is_balanced() {
        return Err(Error::DegenerateCurve("curve is not smooth".into()));
    }
    let structure = curve.skeleton_structure()?;
    let edges = structure
        .ends
        .iter()
        .zip(&structure.segments)
        .map(|(&[u, v], seg)| GraphEdge {
            u,
            v,
            len: seg.iter().map(|&e| curve.bounded_edges[e].length.clone()).sum(),
        })
        .collect();
    let graph = MetricGraph::new(structure.vertices, edges)?;
    Ok(Skeleton { graph, structure })
}

/// Lattice length of each bounded edge as a rational linear form in the
/// heights, in the bounded-edge order of [`dual_curve`].
pub fn bounded_edge_length_forms(tri: &UnimodularTriangulation) -> Vec<Vec<Rational>> {
    let forms = dual_vertex_forms(tri);
    let emap = tri.edge_map();
    let mut keys: Vec<_> = emap.keys().copied().filter(|k| emap[k].len() == 2).collect();
    keys.sort_unstable();
    keys.into_iter()
        .map(|(a, b)| {
            let ts = &emap[&(a, b)];
            let c = apex(&tri.triangles[ts[0]], a, b);
            let (dx, dy) = dual_direction(tri.points[a], tri.points[b], tri.points[c]);
            let [ax, ay] = &forms[ts[0]];
            let [bx, by] = &forms[ts[1]];
            let norm = int(dx * dx + dy * dy);
            (0..tri.points.len())
                .map(|p| int((bx[p] - ax[p]) * dx + (by[p] - ay[p]) * dy) / &norm)
                .collect()
        })
        .collect()
}
