//! Unimodular triangulations of lattice polygons: validation, fold
//! inequalities, regularity, induced subdivisions and flip enumeration.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{cross, LatticePoint, LatticePolygon};
use crate::lp::open_cone_point;
use crate::rational::{lcm_of_denominators, serde_vec, Rational};

/// Triangles are sorted index triples over `points`; the list is sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnimodularTriangulation {
    pub points: Vec<LatticePoint>,
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightVector {
    #[serde(with = "serde_vec")]
    pub heights: Vec<Rational>,
}

impl HeightVector {
    pub fn new(heights: Vec<Rational>) -> Self {
        HeightVector { heights }
    }

    /// `h(p) = f(p)` over the given points.
    pub fn from_fn(points: &[LatticePoint], f: impl Fn(LatticePoint) -> Rational) -> Self {
        HeightVector { heights: points.iter().map(|&p| f(p)).collect() }
    }
}

/// Strict inequality `coefficients · h > 0` attached to an interior edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldInequality {
    pub edge: [usize; 2],
    pub coefficients: Vec<i64>,
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondaryCone {
    pub inequalities: Vec<FoldInequality>,
}

impl SecondaryCone {
    pub fn slacks(&self, h: &HeightVector) -> Vec<Rational> {
        self.inequalities
            .iter()
            .map(|f| {
                f.coefficients
                    .iter()
                    .zip(&h.heights)
                    .filter(|(c, _)| **c != 0)
                    .map(|(&c, v)| v * Rational::from_integer(c.into()))
                    .sum()
            })
            .collect()
    }

    pub fn contains_strictly(&self, h: &HeightVector) -> bool {
        self.slacks(h).iter().all(|s| s.is_positive())
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.inequalities
            .iter()
            .map(|f| f.coefficients.iter().map(|&c| Rational::from_integer(c.into())).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    pub diagnostic: Option<String>,
}

impl Validation {
    fn fail(msg: impl Into<String>) -> Self {
        Validation { valid: false, diagnostic: Some(msg.into()) }
    }
}

/// Projection of the lower hull of a lifted point configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subdivision {
    pub points: Vec<LatticePoint>,
    /// Each cell lists every point lying on its lower face, sorted.
    pub cells: Vec<Vec<usize>>,
}

impl Subdivision {
    pub fn is_unimodular_triangulation(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 3)
    }

    pub fn to_triangulation(&self) -> Option<UnimodularTriangulation> {
        if !self.is_unimodular_triangulation() {
            return None;
        }
        Some(UnimodularTriangulation::new(
            self.points.clone(),
            self.cells.iter().map(|c| [c[0], c[1], c[2]]).collect(),
        ))
    }
}

fn sorted3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl UnimodularTriangulation {
    pub fn new(points: Vec<LatticePoint>, triangles: Vec<[usize; 3]>) -> Self {
        let mut triangles: Vec<[usize; 3]> = triangles.into_iter().map(sorted3).collect();
        triangles.sort_unstable();
        UnimodularTriangulation { points, triangles }
    }

    /// Builds a triangulation of `P` from triangles given by their vertices.
    pub fn from_point_triangles(polygon: &LatticePolygon, tris: &[[LatticePoint; 3]]) -> Result<Self> {
        let points = polygon.lattice_points();
        let index: HashMap<LatticePoint, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut triangles = Vec::with_capacity(tris.len());
        for t in tris {
            let mut idx = [0; 3];
            for (k, p) in t.iter().enumerate() {
                idx[k] = *index
                    .get(p)
                    .ok_or_else(|| Error::Malformed(format!("{p} is not a lattice point of the polygon")))?;
            }
            triangles.push(idx);
        }
        Ok(Self::new(points, triangles))
    }

    pub fn triangle_points(&self, t: &[usize; 3]) -> [LatticePoint; 3] {
        [self.points[t[0]], self.points[t[1]], self.points[t[2]]]
    }

    /// Edge to incident triangle indices.
    pub fn edge_map(&self) -> HashMap<(usize, usize), Vec<usize>> {
        let mut map: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                map.entry(edge_key(a, b)).or_default().push(ti);
            }
        }
        map
    }

    /// Sorted list of all edges.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.edge_map().into_keys().collect();
        e.sort_unstable();
        e
    }

    /// Sorted interior edges with their two triangles.
    pub fn interior_edges(&self) -> Vec<((usize, usize), [usize; 2])> {
        let mut out: Vec<_> = self
            .edge_map()
            .into_iter()
            .filter(|(_, ts)| ts.len() == 2)
            .map(|(e, ts)| (e, [ts[0], ts[1]]))
            .collect();
        out.sort_unstable();
        out
    }

    fn opposite(&self, tri: usize, a: usize, b: usize) -> usize {
        *self.triangles[tri].iter().find(|&&v| v != a && v != b).expect("edge belongs to triangle")
    }

    /// Interior edges whose two triangles form a convex quadrilateral.
    pub fn flippable_edges(&self) -> Vec<(usize, usize)> {
        self.interior_edges()
            .into_iter()
            .filter(|&((a, b), [t1, t2])| {
                let c = self.opposite(t1, a, b);
                let d = self.opposite(t2, a, b);
                self.is_convex_quad(a, b, c, d)
            })
            .map(|(e, _)| e)
            .collect()
    }

    fn is_convex_quad(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let p = &self.points;
        let s1 = cross(p[c], p[d], p[a]);
        let s2 = cross(p[c], p[d], p[b]);
        s1 != 0 && s2 != 0 && (s1 > 0) != (s2 > 0)
    }

    /// Replaces the diagonal `{a, b}` of its quadrilateral by the other one.
    pub fn flip(&self, a: usize, b: usize) -> Result<Self> {
        let (a, b) = edge_key(a, b);
        let map = self.edge_map();
        let ts = map
            .get(&(a, b))
            .filter(|ts| ts.len() == 2)
            .ok_or_else(|| Error::Precondition(format!("edge ({a},{b}) is not an interior edge")))?;
        let c = self.opposite(ts[0], a, b);
        let d = self.opposite(ts[1], a, b);
        if !self.is_convex_quad(a, b, c, d) {
            return Err(Error::Precondition(format!("edge ({a},{b}) is not flippable")));
        }
        let mut triangles: Vec<[usize; 3]> = self
            .triangles
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != ts[0] && *i != ts[1])
            .map(|(_, t)| *t)
            .collect();
        triangles.push([a, c, d]);
        triangles.push([b, c, d]);
        Ok(Self::new(self.points.clone(), triangles))
    }

    /// Fold inequality of an interior edge `{a, b}` with apexes `c` and `d`:
    /// `h(d) - α h(a) - β h(b) - γ h(c) > 0` where `d = α a + β b + γ c`.
    fn fold_row(&self, a: usize, b: usize, c: usize, d: usize) -> Vec<i64> {
        let p = &self.points;
        let (ax, ay) = p[a].sub(p[c]);
        let (bx, by) = p[b].sub(p[c]);
        let (dx, dy) = p[d].sub(p[c]);
        let det = ax * by - ay * bx;
        debug_assert!(det.abs() == 1);
        let alpha = (dx * by - dy * bx) * det;
        let beta = (ax * dy - ay * dx) * det;
        let gamma = 1 - alpha - beta;
        let mut row = vec![0i64; p.len()];
        row[d] += 1;
        row[a] -= alpha;
        row[b] -= beta;
        row[c] -= gamma;
        row
    }

    /// The secondary cone without validation.
    pub fn fold_inequalities(&self) -> SecondaryCone {
        let inequalities = self
            .interior_edges()
            .into_iter()
            .map(|((a, b), [t1, t2])| {
                let c = self.opposite(t1, a, b);
                let d = self.opposite(t2, a, b);
                FoldInequality { edge: [a, b], coefficients: self.fold_row(a, b, c, d), strict: true }
            })
            .collect();
        SecondaryCone { inequalities }
    }

    /// Edge-set bitset over point pairs `i < j`, in row-major pair order.
    pub fn edge_bits(&self) -> Vec<u64> {
        edge_bits(self.points.len(), self.triangles.iter())
    }
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = edge_key(i, j);
    i * n + j
}

fn edge_bits<'a>(n: usize, tris: impl Iterator<Item = &'a [usize; 3]>) -> Vec<u64> {
    let mut bits = vec![0u64; (n * n).div_ceil(64)];
    for t in tris {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            let k = pair_index(n, a, b);
            bits[k / 64] |= 1 << (k % 64);
        }
    }
    bits
}

/// Checks every triangulation invariant, reporting the first violation.
pub fn validate_triangulation(polygon: &LatticePolygon, tri: &UnimodularTriangulation) -> Result<Validation> {
    let n = tri.points.len();
    for t in &tri.triangles {
        if t.iter().any(|&i| i >= n) {
            return Err(Error::Malformed(format!("triangle {t:?} indexes past {n} points")));
        }
    }
    let expected: HashSet<LatticePoint> = polygon.lattice_points().into_iter().collect();
    let given: HashSet<LatticePoint> = tri.points.iter().copied().collect();
    if given.len() != tri.points.len() {
        return Ok(Validation::fail("repeated point"));
    }
    if given != expected {
        return Ok(Validation::fail("points are not the lattice points of the polygon"));
    }
    for t in &tri.triangles {
        let [a, b, c] = tri.triangle_points(t);
        let area = cross(a, b, c).abs();
        if area != 1 {
            return Ok(Validation::fail(format!("triangle {a}{b}{c} has twice-area {area}, not 1")));
        }
    }
    if tri.triangles.len() as i64 != polygon.twice_area() {
        return Ok(Validation::fail(format!(
            "triangles cover twice-area {}, polygon has {}",
            tri.triangles.len(),
            polygon.twice_area()
        )));
    }
    let mut used = vec![false; n];
    for t in &tri.triangles {
        for &i in t {
            used[i] = true;
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Ok(Validation::fail(format!("point {} is not a vertex of any triangle", tri.points[i])));
    }
    for ((a, b), ts) in tri.edge_map() {
        let (pa, pb) = (tri.points[a], tri.points[b]);
        let on_boundary = polygon.edges().any(|(u, v)| cross(u, v, pa) == 0 && cross(u, v, pb) == 0);
        let ok = match ts.len() {
            1 => on_boundary,
            2 => {
                let c = tri.opposite(ts[0], a, b);
                let d = tri.opposite(ts[1], a, b);
                !on_boundary && cross(pa, pb, tri.points[c]).signum() == -cross(pa, pb, tri.points[d]).signum()
            }
            _ => false,
        };
        if !ok {
            return Ok(Validation::fail(format!("edge {pa}{pb} is used by {} triangles inconsistently", ts.len())));
        }
    }
    for i in 0..tri.triangles.len() {
        for j in i + 1..tri.triangles.len() {
            let s = tri.triangle_points(&tri.triangles[i]);
            let t = tri.triangle_points(&tri.triangles[j]);
            if interiors_overlap(&s, &t) {
                return Ok(Validation::fail(format!("triangles {s:?} and {t:?} overlap")));
            }
        }
    }
    Ok(Validation { valid: true, diagnostic: None })
}

/// Separating-axis test on triangle edges.
fn interiors_overlap(s: &[LatticePoint; 3], t: &[LatticePoint; 3]) -> bool {
    let separated_by = |u: &[LatticePoint; 3], v: &[LatticePoint; 3]| {
        (0..3).any(|k| {
            let (a, b, c) = (u[k], u[(k + 1) % 3], u[(k + 2) % 3]);
            let side = cross(a, b, c).signum();
            v.iter().all(|&q| cross(a, b, q).signum() * side <= 0)
        })
    };
    !separated_by(s, t) && !separated_by(t, s)
}

fn require_valid(polygon: &LatticePolygon, tri: &UnimodularTriangulation) -> Result<()> {
    let v = validate_triangulation(polygon, tri)?;
    if v.valid {
        Ok(())
    } else {
        Err(Error::NotTriangulation(v.diagnostic.unwrap_or_default()))
    }
}

pub fn secondary_cone(polygon: &LatticePolygon, tri: &UnimodularTriangulation) -> Result<SecondaryCone> {
    require_valid(polygon, tri)?;
    Ok(tri.fold_inequalities())
}

/// Deterministic interior point of the secondary cone with heights in
/// `[-1, 1]`, or `None` when the triangulation is not regular.
pub fn regular_height(tri: &UnimodularTriangulation) -> Result<Option<HeightVector>> {
    let rows = tri.fold_inequalities().rows();
    Ok(open_cone_point(&rows, &[], tri.points.len())?.map(HeightVector::new))
}

pub fn is_regular(polygon: &LatticePolygon, tri: &UnimodularTriangulation) -> Result<bool> {
    require_valid(polygon, tri)?;
    Ok(regular_height(tri)?.is_some())
}

pub fn interior_height(polygon: &LatticePolygon, tri: &UnimodularTriangulation) -> Result<HeightVector> {
    require_valid(polygon, tri)?;
    regular_height(tri)?.ok_or(Error::NoInteriorPoint)
}

/// Lower-hull cells of the lifted configuration, each with all lattice points
/// on its face; non-triangular cells are kept as they are.
pub fn induced_subdivision(polygon: &LatticePolygon, h: &HeightVector) -> Result<Subdivision> {
    let points = polygon.lattice_points();
    subdivision_of_points(&points, h)
}

pub fn subdivision_of_points(points: &[LatticePoint], h: &HeightVector) -> Result<Subdivision> {
    let n = points.len();
    if h.heights.len() != n {
        return Err(Error::Malformed(format!("{} heights for {n} points", h.heights.len())));
    }
    let l = lcm_of_denominators(h.heights.iter());
    let hs: Vec<BigInt> = h.heights.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let mut cells: HashSet<Vec<usize>> = HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (points[i], points[j], points[k]);
                let area = cross(a, b, c);
                if area == 0 {
                    continue;
                }
                let (j2, k2) = if area > 0 { (j, k) } else { (k, j) };
                let (b, c) = (points[j2], points[k2]);
                let area = area.abs();
                let mut on = Vec::new();
                let mut lower = true;
                for (p, &q) in points.iter().enumerate() {
                    let la = BigInt::from(cross(q, b, c));
                    let lb = BigInt::from(cross(a, q, c));
                    let lc = BigInt::from(cross(a, b, q));
                    let plane = la * &hs[i] + lb * &hs[j2] + lc * &hs[k2];
                    let lifted = &hs[p] * BigInt::from(area);
                    if lifted < plane {
                        lower = false;
                        break;
                    }
                    if lifted == plane {
                        on.push(p);
                    }
                }
                if lower {
                    cells.insert(on);
                }
            }
        }
    }
    let mut cells: Vec<Vec<usize>> = cells.into_iter().collect();
    cells.sort_unstable();
    Ok(Subdivision { points: points.to_vec(), cells })
}

/// Triangulation that adds points in lexicographic order, coning each new
/// point to the visible edges of the current hull.
pub fn placing_triangulation(polygon: &LatticePolygon) -> UnimodularTriangulation {
    let points = polygon.lattice_points();
    let n = points.len();
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    // boundary of the current hull as a ccw cycle of point indices
    let mut hull: Vec<usize> = Vec::new();
    let mut start = 0;
    while start < n {
        // collect a non-collinear seed
        if hull.is_empty() {
            let mut k = 2;
            while k < n && cross(points[0], points[1], points[k]) == 0 {
                k += 1;
            }
            // points[0..k] are collinear; cone them to points[k]
            for i in 0..k - 1 {
                triangles.push([i, i + 1, k]);
            }
            let mut cyc: Vec<usize> = (0..k).collect();
            cyc.push(k);
            if cross(points[0], points[1], points[k]) < 0 {
                cyc.reverse();
            }
            hull = cyc;
            start = k + 1;
            continue;
        }
        let p = points[start];
        let m = hull.len();
        let visible: Vec<bool> =
            (0..m).map(|e| cross(points[hull[e]], points[hull[(e + 1) % m]], p) < 0).collect();
        for e in 0..m {
            if visible[e] {
                triangles.push([hull[e], hull[(e + 1) % m], start]);
            }
        }
        // visible edges form one arc; replace its interior vertices with p
        let first = (0..m).find(|&e| visible[e] && !visible[(e + m - 1) % m]).expect("new point sees the hull");
        let mut last = first;
        while visible[(last + 1) % m] {
            last = (last + 1) % m;
        }
        let mut next = Vec::with_capacity(m + 1);
        let mut e = (last + 1) % m;
        loop {
            next.push(hull[e]);
            if e == first {
                break;
            }
            e = (e + 1) % m;
        }
        next.push(start);
        hull = next;
        start += 1;
    }
    UnimodularTriangulation::new(points, triangles)
}

/// Starting triangulation: the one induced by the strictly convex lift
/// `x² - xy + y²` when that lift is generic, otherwise the placing one.
pub fn initial_triangulation(polygon: &LatticePolygon) -> UnimodularTriangulation {
    let points = polygon.lattice_points();
    let h = HeightVector::from_fn(&points, |p| Rational::from_integer((p.x * p.x - p.x * p.y + p.y * p.y).into()));
    match subdivision_of_points(&points, &h).ok().and_then(|s| s.to_triangulation()) {
        Some(t) => t,
        None => placing_triangulation(polygon),
    }
}

pub const DEFAULT_MAX_TRIANGULATION_GENUS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationOptions {
    pub regular_only: bool,
    pub modulo_symmetry: bool,
    pub max_genus: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { regular_only: false, modulo_symmetry: false, max_genus: DEFAULT_MAX_TRIANGULATION_GENUS }
    }
}

/// Point permutations induced by the lattice symmetries of `P`.
pub fn symmetry_permutations(polygon: &LatticePolygon) -> Vec<Vec<usize>> {
    let points = polygon.lattice_points();
    let index: HashMap<LatticePoint, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    polygon
        .symmetries()
        .iter()
        .map(|m| points.iter().map(|&p| index[&m.apply(p)]).collect())
        .collect()
}

/// Compact flip-graph state.
type Tris = Vec<[u8; 3]>;

fn canonical(n: usize, tris: &Tris, perms: &[Vec<usize>]) -> (Vec<u64>, Tris) {
    let mut best: Option<(Vec<u64>, Tris)> = None;
    for perm in perms {
        let mapped: Tris = tris
            .iter()
            .map(|t| {
                let mut m = [perm[t[0] as usize] as u8, perm[t[1] as usize] as u8, perm[t[2] as usize] as u8];
                m.sort_unstable();
                m
            })
            .collect();
        let key = edge_bits(n, mapped.iter().map(|t| [t[0] as usize, t[1] as usize, t[2] as usize]).collect::<Vec<_>>().iter());
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, mapped));
        }
    }
    best.expect("identity is a symmetry")
}

/// Visits every unimodular triangulation of `P` (or one per symmetry class)
/// reachable by flips from [`initial_triangulation`]. The callback sees
/// triangulations in breadth-first order; regularity filtering is applied
/// before the call when requested.
pub fn for_each_triangulation(
    polygon: &LatticePolygon,
    opts: EnumerationOptions,
    mut visit: impl FnMut(&UnimodularTriangulation) -> Result<()>,
) -> Result<usize> {
    let genus = polygon.genus();
    if genus > opts.max_genus {
        return Err(Error::Guard(format!("genus {genus} exceeds the triangulation limit {}", opts.max_genus)));
    }
    let start = initial_triangulation(polygon);
    let n = start.points.len();
    if n > 255 {
        return Err(Error::Guard(format!("{n} lattice points exceed the enumeration limit 255")));
    }
    let perms: Vec<Vec<usize>> =
        if opts.modulo_symmetry { symmetry_permutations(polygon) } else { vec![(0..n).collect()] };
    let to_tris = |t: &UnimodularTriangulation| -> Tris {
        t.triangles.iter().map(|t| [t[0] as u8, t[1] as u8, t[2] as u8]).collect()
    };
    let (key0, tris0) = canonical(n, &to_tris(&start), &perms);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(key0);
    let mut queue: VecDeque<Tris> = VecDeque::new();
    queue.push_back(tris0);
    let mut count = 0;
    while let Some(tris) = queue.pop_front() {
        let tri = UnimodularTriangulation::new(
            start.points.clone(),
            tris.iter().map(|t| [t[0] as usize, t[1] as usize, t[2] as usize]).collect(),
        );
        for (a, b) in tri.flippable_edges() {
            let next = tri.flip(a, b)?;
            let (key, ntris) = canonical(n, &to_tris(&next), &perms);
            if seen.insert(key) {
                queue.push_back(ntris);
            }
        }
        if opts.regular_only && regular_height(&tri)?.is_none() {
            continue;
        }
        count += 1;
        visit(&tri)?;
    }
    Ok(count)
}

/// All unimodular triangulations of `P`, sorted by triangle list.
pub fn enumerate_triangulations(polygon: &LatticePolygon, opts: EnumerationOptions) -> Result<Vec<UnimodularTriangulation>> {
    let mut out = Vec::new();
    for_each_triangulation(polygon, opts, |t| {
        out.push(t.clone());
        Ok(())
    })?;
    out.sort_unstable_by(|a, b| a.triangles.cmp(&b.triangles));
    Ok(out)
}
