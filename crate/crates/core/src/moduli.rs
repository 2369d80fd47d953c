//! Skeleton metrics as linear functions of the heights, cone dimensions, and
//! the verification harness: only hyperelliptic polygons give hyperelliptic
//! skeleta, and chains from other polygons carry an explicit unequal two-cut.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chains::{bits_to_string, is_chain, is_hyperelliptic_chain};
use crate::embedding::{is_crowded, Crowdedness};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::hyperelliptic::{involution_patterns, is_hyperelliptic};
use crate::iso::canonical_form;
use crate::lattice::{cross, AffineMap, LatticePoint, LatticePolygon};
use crate::lp::open_cone_point;
use crate::rational::{int, serde_str, Rational};
use crate::triangulation::{
    for_each_triangulation, regular_height, validate_triangulation, EnumerationOptions, HeightVector,
    UnimodularTriangulation, DEFAULT_MAX_TRIANGULATION_GENUS,
};
use crate::tropical::{bounded_edge_length_forms, dual_curve_unchecked, skeleton, Skeleton};

/// One linear form per skeleton edge in the heights of the triangulation's
/// points, together with the combinatorial skeleton it measures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthFunctionals {
    pub points: Vec<LatticePoint>,
    /// Skeleton with the lengths at the reference height.
    pub skeleton: Skeleton,
    pub forms: Vec<Vec<RationalCell>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalCell(#[serde(with = "serde_str")] pub Rational);

impl LengthFunctionals {
    pub fn evaluate(&self, h: &HeightVector) -> Vec<Rational> {
        self.forms.iter().map(|f| f.iter().zip(&h.heights).map(|(c, x)| &c.0 * x).sum()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.forms.iter().map(|f| f.iter().map(|c| c.0.clone()).collect()).collect()
    }
}

fn require_regular(polygon: &LatticePolygon, tri: &UnimodularTriangulation) -> Result<HeightVector> {
    let v = validate_triangulation(polygon, tri)?;
    if !v.valid {
        return Err(Error::NotTriangulation(v.diagnostic.unwrap_or_default()));
    }
    regular_height(tri)?.ok_or(Error::NoInteriorPoint)
}

/// Skeleton edge lengths as linear forms; errors for nonregular
/// triangulations and for genus below two.
pub fn length_functionals(polygon: &LatticePolygon, tri: &UnimodularTriangulation) -> Result<LengthFunctionals> {
    let h = require_regular(polygon, tri)?;
    functionals_at(tri, &h)
}

fn functionals_at(tri: &UnimodularTriangulation, h: &HeightVector) -> Result<LengthFunctionals> {
    let curve = dual_curve_unchecked(tri, h)?;
    let sk = skeleton(&curve)?;
    let edge_forms = bounded_edge_length_forms(tri);
    let n = tri.points.len();
    let forms = sk
        .structure
        .segments
        .iter()
        .map(|seg| {
            (0..n)
                .map(|p| RationalCell(seg.iter().map(|&e| edge_forms[e][p].clone()).sum()))
                .collect()
        })
        .collect();
    Ok(LengthFunctionals { points: tri.points.clone(), skeleton: sk, forms })
}

/// Exact rank over the rationals.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for k in c..cols {
                    let d = &f * &m[r][k];
                    m[i][k] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// Dimension of the cone of skeleton metrics of a regular triangulation.
/// Heights that are affine functions of the point change no length, so the
/// dimension is the rank of the forms restricted to a complement of that
/// three-dimensional space; both agree because the forms vanish on it.
pub fn cone_dim(polygon: &LatticePolygon, tri: &UnimodularTriangulation) -> Result<usize> {
    let f = length_functionals(polygon, tri)?;
    let rows = f.rows();
    let lineal: [Box<dyn Fn(&LatticePoint) -> i64>; 3] = [Box::new(|_| 1), Box::new(|p| p.x), Box::new(|p| p.y)];
    for l in &lineal {
        for row in &rows {
            let s: Rational = row.iter().zip(&f.points).map(|(c, p)| c * int(l(p))).sum();
            if !s.is_zero() {
                return Err(Error::StructuralAnomaly("a length form does not vanish on affine heights".into()));
            }
        }
    }
    Ok(rank(&rows))
}

/// `k` further heights in the open secondary cone: `h0 + t r` with `r`
/// uniform in `[-8, 8]^n` and `t` half the largest step keeping every fold
/// slack positive.
pub fn sample_heights(tri: &UnimodularTriangulation, h0: &HeightVector, k: usize, rng: &mut ChaCha8Rng) -> Vec<HeightVector> {
    let cone = tri.fold_inequalities();
    let rows = cone.rows();
    let smin = cone.slacks(h0).into_iter().min().unwrap_or_else(|| int(1));
    let n = h0.heights.len();
    (0..k)
        .map(|_| {
            let r: Vec<i64> = (0..n).map(|_| rng.gen_range(-8..=8)).collect();
            let worst = rows
                .iter()
                .map(|row| row.iter().zip(&r).map(|(c, &x)| c * int(x)).sum::<Rational>().abs())
                .max()
                .unwrap_or_else(Rational::zero);
            if worst.is_zero() {
                return h0.clone();
            }
            let t = &smin / (int(2) * worst);
            HeightVector::new(h0.heights.iter().zip(&r).map(|(h, &x)| h + &t * int(x)).collect())
        })
        .collect()
}

/// Short name of a skeleton's combinatorial type.
pub fn skeleton_type(g: &MetricGraph) -> String {
    match is_chain(g) {
        Some(c) => format!("chain:{}", bits_to_string(&c.bits)),
        None => {
            let f = canonical_form(g);
            let code: String = f.matrix.iter().map(|m| char::from(b'0' + *m)).collect();
            format!("graph:{}:{}", f.vertices, code)
        }
    }
}

/// A height in the open secondary cone where the skeleton metric is
/// hyperelliptic, if one exists. Exact: each involution pattern of the
/// skeleton type gives linear equalities, tested against the cone by LP.
pub fn hyperelliptic_height(tri: &UnimodularTriangulation, f: &LengthFunctionals) -> Result<Option<HeightVector>> {
    let strict = tri.fold_inequalities().rows();
    let rows = f.rows();
    for pattern in involution_patterns(&f.skeleton.graph)? {
        let equal: Vec<Vec<Rational>> = pattern
            .equal_pairs
            .iter()
            .map(|&(e, g)| rows[e].iter().zip(&rows[g]).map(|(a, b)| a - b).collect())
            .collect();
        if let Some(h) = open_cone_point(&strict, &equal, tri.points.len())? {
            return Ok(Some(HeightVector::new(h)));
        }
    }
    Ok(None)
}

/// The local data of a chain skeleton from a nonhyperelliptic polygon
/// around a noncollinear triple of consecutive cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    /// Position `i` of the triple `(p_i, p_{i+1}, p_{i+2})` in chain order.
    pub index: usize,
    /// Interior points in chain order.
    pub chain_points: Vec<LatticePoint>,
    /// Sends the triple to `(1,2), (1,1), (2,1)` and `q` to `(2,2)`.
    pub normalization: AffineMap,
    pub normalized: [LatticePoint; 4],
    pub q: LatticePoint,
    /// Skeleton edges shared with the neighbouring cycles; `None` where the
    /// neighbour hangs from a bridge.
    pub e_h: Option<usize>,
    pub e_v: Option<usize>,
    pub e_1: usize,
    pub e_2: usize,
    #[serde(with = "serde_str")]
    pub l_h: Rational,
    #[serde(with = "serde_str")]
    pub l_v: Rational,
    #[serde(with = "serde_str")]
    pub l_1: Rational,
    #[serde(with = "serde_str")]
    pub l_2: Rational,
}

impl ObstructionReport {
    /// `l_2 >= l_1 + l_h` and `l_1 != l_2`.
    pub fn inequality_holds(&self) -> bool {
        self.l_2 >= &self.l_1 + &self.l_h && self.l_1 != self.l_2
    }
}

/// Interior points ordered along the chain: the cycles form a path where
/// consecutive cycles share an edge or are joined by a bridge.
pub fn chain_point_order(sk: &Skeleton, points: &[LatticePoint]) -> Result<Vec<LatticePoint>> {
    let g = &sk.graph;
    let cycles = sk.cycle_map();
    let k = cycles.len();
    let verts: Vec<Vec<usize>> = cycles
        .iter()
        .map(|(_, es)| {
            let mut vs: Vec<usize> = es.iter().flat_map(|&e| [g.edges[e].u, g.edges[e].v]).collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        })
        .collect();
    let bridges = g.bridges();
    let mut adj = vec![Vec::new(); k];
    for a in 0..k {
        for b in a + 1..k {
            let share = cycles[a].1.iter().any(|e| cycles[b].1.contains(e));
            let bridged = bridges.iter().any(|&e| {
                let (u, v) = (g.edges[e].u, g.edges[e].v);
                (verts[a].contains(&u) && verts[b].contains(&v)) || (verts[a].contains(&v) && verts[b].contains(&u))
            });
            if share || bridged {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let ends: Vec<usize> = (0..k).filter(|&a| adj[a].len() == 1).collect();
    if k == 1 {
        return Ok(vec![points[cycles[0].0]]);
    }
    if ends.len() != 2 || adj.iter().any(|l| l.len() > 2) {
        return Err(Error::StructuralAnomaly("cycles of the chain skeleton do not form a path".into()));
    }
    let mut order = vec![ends[0].min(ends[1])];
    let mut prev = usize::MAX;
    while order.len() < k {
        let cur = *order.last().unwrap();
        let next = adj[cur].iter().copied().find(|&x| x != prev).ok_or_else(|| {
            Error::StructuralAnomaly("cycle path ends early".into())
        })?;
        prev = cur;
        order.push(next);
    }
    Ok(order.into_iter().map(|c| points[cycles[c].0]).collect())
}

/// Locates the two-cut that makes a chain skeleton from a nonhyperelliptic
/// polygon nonhyperelliptic. Errors with a structural anomaly when the
/// expected configuration is missing.
pub fn verify_metric_obstruction(
    polygon: &LatticePolygon,
    tri: &UnimodularTriangulation,
    h: &HeightVector,
) -> Result<ObstructionReport> {
    if polygon.is_hyperelliptic() {
        return Err(Error::Precondition("polygon is hyperelliptic".into()));
    }
    let curve = dual_curve_unchecked(tri, h)?;
    let sk = skeleton(&curve)?;
    if is_chain(&sk.graph).is_none() {
        return Err(Error::Precondition("skeleton is not combinatorially a chain".into()));
    }
    obstruction_for(polygon, tri, &curve.bounded_edges, &sk)
}

fn obstruction_for(
    polygon: &LatticePolygon,
    tri: &UnimodularTriangulation,
    bounded: &[crate::tropical::BoundedEdge],
    sk: &Skeleton,
) -> Result<ObstructionReport> {
    let anomaly = |m: String| Error::StructuralAnomaly(m);
    let order = chain_point_order(sk, &tri.points)?;
    let index_of = |p: LatticePoint| tri.points.iter().position(|&x| x == p).expect("point of the triangulation");
    let face_of = |p: LatticePoint| {
        let i = index_of(p);
        sk.cycle_map().iter().find(|(q, _)| *q == i).map(|(_, es)| es.clone()).expect("interior point has a cycle")
    };
    let i = (0..order.len().saturating_sub(2))
        .find(|&i| cross(order[i], order[i + 1], order[i + 2]) != 0)
        .ok_or_else(|| anomaly("interior points of a nonhyperelliptic polygon are collinear".into()))?;
    let (pi, pm, pk) = (order[i], order[i + 1], order[i + 2]);
    let u = (pk.x - pm.x, pk.y - pm.y);
    let w = (pi.x - pm.x, pi.y - pm.y);
    let normalization = AffineMap::from_frames(pm, u, w, LatticePoint::new(1, 1), (1, 0), (0, 1))
        .map_err(|_| anomaly(format!("triangle {pi}{pm}{pk} is not unimodular")))?;
    let q = normalization.inverse().apply(LatticePoint::new(2, 2));
    if !polygon.contains(q) || polygon.strictly_contains(q) {
        return Err(anomaly(format!("reflected point {q} is not a boundary point of the polygon")));
    }
    let (a, b) = (index_of(pm), index_of(q));
    let key = (a.min(b), a.max(b));
    let dual_pq = bounded
        .iter()
        .position(|e| e.dual == [key.0, key.1])
        .ok_or_else(|| anomaly(format!("segment {pm}{q} is not in the triangulation")))?;
    let mid = face_of(pm);
    let (prev_face, next_face) = (face_of(pi), face_of(pk));
    let others: Vec<Vec<usize>> =
        sk.cycle_map().iter().filter(|(p, _)| *p != a).map(|(_, es)| es.clone()).collect();
    let arcs: Vec<usize> = mid.iter().copied().filter(|e| !others.iter().any(|o| o.contains(e))).collect();
    if arcs.len() != 2 {
        return Err(anomaly(format!("middle cycle has {} free arcs instead of two", arcs.len())));
    }
    let seg = &sk.structure.segments;
    let (e_1, e_2) = if seg[arcs[0]].contains(&dual_pq) {
        (arcs[0], arcs[1])
    } else if seg[arcs[1]].contains(&dual_pq) {
        (arcs[1], arcs[0])
    } else {
        return Err(anomaly(format!("edge dual to {pm}{q} is not on a free arc of the middle cycle")));
    };
    let shared = |f: &[usize]| mid.iter().copied().find(|e| f.contains(e));
    let (e_h, e_v) = (shared(&prev_face), shared(&next_face));
    let len = |e: Option<usize>| e.map_or_else(Rational::zero, |e| sk.graph.edges[e].len.clone());
    if !sk.graph.two_cuts().contains(&(e_1.min(e_2), e_1.max(e_2))) {
        return Err(anomaly("free arcs of the middle cycle are not a two-cut".into()));
    }
    Ok(ObstructionReport {
        index: i,
        chain_points: order.clone(),
        normalization,
        normalized: [pi, pm, pk, q].map(|p| normalization.apply(p)),
        q,
        e_h,
        e_v,
        e_1,
        e_2,
        l_h: len(e_h),
        l_v: len(e_v),
        l_1: len(Some(e_1)),
        l_2: len(Some(e_2)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremOptions {
    pub samples: usize,
    pub seed: u64,
    pub modulo_symmetry: bool,
    /// Also decide exactly whether any height of each cone gives a
    /// hyperelliptic metric.
    pub symbolic: bool,
    pub max_genus: usize,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        TheoremOptions { samples: 3, seed: 7, modulo_symmetry: false, symbolic: true, max_genus: DEFAULT_MAX_TRIANGULATION_GENUS }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionSummary {
    pub reports: usize,
    pub with_shared_edges: usize,
    pub with_bridges: usize,
    /// Least `l_2 - (l_1 + l_h)` seen.
    pub min_margin: Option<RationalCell>,
    pub example: Option<ObstructionReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub polygon: LatticePolygon,
    pub genus: usize,
    pub hyperelliptic_polygon: bool,
    pub seed: u64,
    pub samples: usize,
    pub modulo_symmetry: bool,
    pub regular_triangulations: usize,
    pub instances: usize,
    pub skeleton_types: BTreeMap<String, usize>,
    /// Metric verdicts over all sampled heights.
    pub hyperelliptic_metrics: usize,
    pub nonhyperelliptic_metrics: usize,
    pub crowded_or_sprawling: usize,
    /// Triangulations whose cone contains a hyperelliptic metric, decided
    /// exactly; `None` when the symbolic mode is off.
    pub cones_with_hyperelliptic_metrics: Option<usize>,
    pub max_cone_dim: usize,
    pub obstructions: ObstructionSummary,
}

fn violation(what: &str, polygon: &LatticePolygon, tri: &UnimodularTriangulation, h: &HeightVector, sk: &Skeleton) -> Error {
    let witness = serde_json::json!({
        "failure": what,
        "polygon": polygon,
        "triangles": tri.triangles.iter().map(|t| tri.triangle_points(t)).collect::<Vec<_>>(),
        "heights": h,
        "skeleton": sk.graph,
    });
    Error::TheoremViolation(witness.to_string())
}

/// Runs every regular unimodular triangulation of `polygon` at the canonical
/// interior height and `samples` random interior heights. Fails on the first
/// counterexample with a JSON witness.
pub fn verify_theorem(polygon: &LatticePolygon, opts: &TheoremOptions) -> Result<TheoremReport> {
    let genus = polygon.genus();
    if !(2..=opts.max_genus).contains(&genus) {
        return Err(Error::Guard(format!("theorem verification needs genus 2..={}, got {genus}", opts.max_genus)));
    }
    let hyp_polygon = polygon.is_hyperelliptic();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut report = TheoremReport {
        polygon: polygon.clone(),
        genus,
        hyperelliptic_polygon: hyp_polygon,
        seed: opts.seed,
        samples: opts.samples,
        modulo_symmetry: opts.modulo_symmetry,
        regular_triangulations: 0,
        instances: 0,
        skeleton_types: BTreeMap::new(),
        hyperelliptic_metrics: 0,
        nonhyperelliptic_metrics: 0,
        crowded_or_sprawling: 0,
        cones_with_hyperelliptic_metrics: opts.symbolic.then_some(0),
        max_cone_dim: 0,
        obstructions: ObstructionSummary::default(),
    };
    let enum_opts =
        EnumerationOptions { regular_only: true, modulo_symmetry: opts.modulo_symmetry, max_genus: opts.max_genus };
    let mut type_cache: BTreeMap<String, (bool, bool)> = BTreeMap::new();
    report.regular_triangulations = for_each_triangulation(polygon, enum_opts, |tri| {
        let h0 = regular_height(tri)?.ok_or(Error::NoInteriorPoint)?;
        let f = functionals_at(tri, &h0)?;
        report.max_cone_dim = report.max_cone_dim.max(rank(&f.rows()));
        let kind = skeleton_type(&f.skeleton.graph);
        let (chain, obstructed_type) = match type_cache.get(&kind) {
            Some(&v) => v,
            None => {
                let g = &f.skeleton.graph;
                let bad = g.is_sprawling().is_some() || is_crowded(g)? == Crowdedness::Crowded;
                let v = (is_chain(g).is_some(), bad);
                type_cache.insert(kind.clone(), v);
                v
            }
        };
        if obstructed_type {
            report.crowded_or_sprawling += 1;
            return Err(violation("skeleton is sprawling or crowded", polygon, tri, &h0, &f.skeleton));
        }
        if opts.symbolic {
            let found = hyperelliptic_height(tri, &f)?;
            if let Some(h) = &found {
                if !hyp_polygon {
                    let sk = skeleton(&dual_curve_unchecked(tri, h)?)?;
                    return Err(violation("hyperelliptic metric in the cone of a nonhyperelliptic polygon", polygon, tri, h, &sk));
                }
                *report.cones_with_hyperelliptic_metrics.as_mut().unwrap() += 1;
            } else if hyp_polygon {
                return Err(violation("no hyperelliptic metric in the cone of a hyperelliptic polygon", polygon, tri, &h0, &f.skeleton));
            }
        }
        let mut heights = vec![h0.clone()];
        heights.extend(sample_heights(tri, &h0, opts.samples, &mut rng));
        for h in &heights {
            let curve = dual_curve_unchecked(tri, h)?;
            let sk = skeleton(&curve)?;
            let lengths = f.evaluate(h);
            if lengths != sk.graph.lengths() {
                return Err(Error::StructuralAnomaly("length forms disagree with the measured skeleton".into()));
            }
            report.instances += 1;
            *report.skeleton_types.entry(kind.clone()).or_default() += 1;
            let verdict = is_hyperelliptic(&sk.graph)?.verdict;
            if verdict {
                report.hyperelliptic_metrics += 1;
            } else {
                report.nonhyperelliptic_metrics += 1;
            }
            if verdict && !hyp_polygon {
                return Err(violation("hyperelliptic skeleton from a nonhyperelliptic polygon", polygon, tri, h, &sk));
            }
            if hyp_polygon && !(chain && verdict && is_hyperelliptic_chain(&sk.graph)?) {
                return Err(violation("hyperelliptic polygon gave a skeleton that is not a hyperelliptic chain", polygon, tri, h, &sk));
            }
            if !hyp_polygon && chain {
                let r = obstruction_for(polygon, tri, &curve.bounded_edges, &sk)?;
                if !r.inequality_holds() {
                    return Err(violation("obstruction inequality fails", polygon, tri, h, &sk));
                }
                let s = &mut report.obstructions;
                s.reports += 1;
                if r.e_h.is_some() && r.e_v.is_some() {
                    s.with_shared_edges += 1;
                } else {
                    s.with_bridges += 1;
                }
                let margin = &r.l_2 - &r.l_1 - &r.l_h;
                if s.min_margin.as_ref().is_none_or(|m| margin < m.0) {
                    s.min_margin = Some(RationalCell(margin));
                }
                if s.example.is_none() && r.e_h.is_some() && r.e_v.is_some() {
                    s.example = Some(r);
                }
            }
        }
        Ok(())
    })?;
    Ok(report)
}
