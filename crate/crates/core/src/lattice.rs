//! Lattice polygons: point enumeration, interior hulls, hyperelliptic
//! classification, unimodular normal forms, maximality and small catalogs.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn sub(self, o: LatticePoint) -> (i64, i64) {
        (self.x - o.x, self.y - o.y)
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from([x, y]: [i64; 2]) -> Self {
        LatticePoint { x, y }
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.x, p.y]
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        LatticePoint { x, y }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Twice the signed area of the triangle `o, a, b`.
pub fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

pub fn primitive(dx: i64, dy: i64) -> (i64, i64) {
    let g = dx.abs().gcd(&dy.abs());
    if g == 0 {
        (0, 0)
    } else {
        (dx / g, dy / g)
    }
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Convex hull (counterclockwise, collinear points dropped) by monotone chain.
pub fn convex_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts: Vec<LatticePoint> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// An affine unimodular map `p -> M p + t` with `det M = +-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    pub m: [[i64; 2]; 2],
    pub t: [i64; 2],
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap { m: [[1, 0], [0, 1]], t: [0, 0] };

    /// Fails unless `det m = +-1`.
    pub fn new(m: [[i64; 2]; 2], t: [i64; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() != 1 {
            return Err(Error::Domain(format!("matrix {m:?} is not unimodular")));
        }
        Ok(AffineMap { m, t })
    }

    pub fn det(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        LatticePoint {
            x: self.m[0][0] * p.x + self.m[0][1] * p.y + self.t[0],
            y: self.m[1][0] * p.x + self.m[1][1] * p.y + self.t[1],
        }
    }

    pub fn apply_vector(&self, (dx, dy): (i64, i64)) -> (i64, i64) {
        (self.m[0][0] * dx + self.m[0][1] * dy, self.m[1][0] * dx + self.m[1][1] * dy)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let a = &self.m;
        let b = &other.m;
        let m = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        let t = [
            a[0][0] * other.t[0] + a[0][1] * other.t[1] + self.t[0],
            a[1][0] * other.t[0] + a[1][1] * other.t[1] + self.t[1],
        ];
        AffineMap { m, t }
    }

    pub fn inverse(&self) -> AffineMap {
        let d = self.det();
        let a = &self.m;
        let m = [[d * a[1][1], -d * a[0][1]], [-d * a[1][0], d * a[0][0]]];
        let t = [
            -(m[0][0] * self.t[0] + m[0][1] * self.t[1]),
            -(m[1][0] * self.t[0] + m[1][1] * self.t[1]),
        ];
        AffineMap { m, t }
    }

    /// The unimodular map sending `o -> o'`, `o + e1 -> o' + f1`, `o + e2 -> o' + f2`
    /// where `(e1, e2)` and `(f1, f2)` are lattice bases.
    pub fn from_frames(
        o: LatticePoint,
        e1: (i64, i64),
        e2: (i64, i64),
        o2: LatticePoint,
        f1: (i64, i64),
        f2: (i64, i64),
    ) -> Result<AffineMap> {
        let de = e1.0 * e2.1 - e1.1 * e2.0;
        let df = f1.0 * f2.1 - f1.1 * f2.0;
        if de.abs() != 1 || df.abs() != 1 {
            return Err(Error::Domain("frames are not lattice bases".into()));
        }
        // E^{-1} for E = [e1 e2] (columns)
        let einv = [[de * e2.1, -de * e2.0], [-de * e1.1, de * e1.0]];
        let f = [[f1.0, f2.0], [f1.1, f2.1]];
        let m = [
            [f[0][0] * einv[0][0] + f[0][1] * einv[1][0], f[0][0] * einv[0][1] + f[0][1] * einv[1][1]],
            [f[1][0] * einv[0][0] + f[1][1] * einv[1][0], f[1][0] * einv[0][1] + f[1][1] * einv[1][1]],
        ];
        let lin = AffineMap { m, t: [0, 0] };
        let mo = lin.apply(o);
        Ok(AffineMap { m, t: [o2.x - mo.x, o2.y - mo.y] })
    }
}

/// Convex lattice polygon with vertices stored counterclockwise, starting at
/// the lexicographically smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PolygonDoc", into = "PolygonDoc")]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonDoc {
    pub vertices: Vec<LatticePoint>,
}

impl TryFrom<PolygonDoc> for LatticePolygon {
    type Error = Error;
    fn try_from(doc: PolygonDoc) -> Result<Self> {
        LatticePolygon::new(doc.vertices)
    }
}

impl From<LatticePolygon> for PolygonDoc {
    fn from(p: LatticePolygon) -> Self {
        PolygonDoc { vertices: p.vertices }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonData {
    pub lattice_points: Vec<LatticePoint>,
    pub interior_points: Vec<LatticePoint>,
    pub boundary_count: usize,
    pub twice_area: i64,
    pub genus: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HullKind {
    Empty,
    Point,
    Segment,
    Polygon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteriorHull {
    pub kind: HullKind,
    /// Vertices of the hull: none, the point, the two endpoints, or the
    /// counterclockwise polygon vertices.
    pub points: Vec<LatticePoint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonClass {
    pub genus: usize,
    pub hyperelliptic: bool,
    pub maximal: bool,
}

impl LatticePolygon {
    /// Builds a polygon from vertices in strictly convex position, in either
    /// orientation.
    pub fn new(vertices: Vec<LatticePoint>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!("{} vertices", vertices.len())));
        }
        let distinct: HashSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvalidPolygon("repeated vertex".into()));
        }
        let n = vertices.len();
        let signs: Vec<i64> = (0..n)
            .map(|i| cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]).signum())
            .collect();
        if signs.contains(&0) {
            return Err(Error::InvalidPolygon("three consecutive collinear vertices".into()));
        }
        if !(signs.iter().all(|&s| s > 0) || signs.iter().all(|&s| s < 0)) {
            return Err(Error::InvalidPolygon("vertices not in convex position".into()));
        }
        let hull = convex_hull(&vertices);
        if hull.len() != n {
            return Err(Error::InvalidPolygon("vertices not in convex position".into()));
        }
        Ok(LatticePolygon { vertices: hull })
    }

    /// Convex hull of arbitrary lattice points; fails if they are collinear.
    pub fn hull_of(points: &[LatticePoint]) -> Result<Self> {
        let hull = convex_hull(points);
        if hull.len() < 3 {
            return Err(Error::InvalidPolygon("points are collinear".into()));
        }
        Ok(LatticePolygon { vertices: hull })
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| c.into()).collect())
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (LatticePoint, LatticePoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn twice_area(&self) -> i64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                a.x * b.y - a.y * b.x
            })
            .sum()
    }

    pub fn boundary_count(&self) -> usize {
        self.edges()
            .map(|(a, b)| (b.x - a.x).abs().gcd(&(b.y - a.y).abs()) as usize)
            .sum()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.edges().all(|(a, b)| cross(a, b, p) >= 0)
    }

    pub fn strictly_contains(&self, p: LatticePoint) -> bool {
        self.edges().all(|(a, b)| cross(a, b, p) > 0)
    }

    pub fn on_boundary(&self, p: LatticePoint) -> bool {
        self.contains(p) && !self.strictly_contains(p)
    }

    fn bbox(&self) -> (i64, i64, i64, i64) {
        let xs = self.vertices.iter().map(|p| p.x);
        let ys = self.vertices.iter().map(|p| p.y);
        (xs.clone().min().unwrap(), xs.max().unwrap(), ys.clone().min().unwrap(), ys.max().unwrap())
    }

    /// All lattice points, sorted lexicographically.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (x0, x1, y0, y1) = self.bbox();
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                let p = LatticePoint::new(x, y);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn interior_points(&self) -> Vec<LatticePoint> {
        let (x0, x1, y0, y1) = self.bbox();
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                let p = LatticePoint::new(x, y);
                if self.strictly_contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn genus(&self) -> usize {
        self.interior_points().len()
    }

    pub fn data(&self) -> PolygonData {
        let lattice_points = self.lattice_points();
        let interior_points = self.interior_points();
        PolygonData {
            boundary_count: self.boundary_count(),
            twice_area: self.twice_area(),
            genus: interior_points.len(),
            lattice_points,
            interior_points,
        }
    }

    pub fn interior_hull(&self) -> InteriorHull {
        let pts = self.interior_points();
        match pts.len() {
            0 => InteriorHull { kind: HullKind::Empty, points: vec![] },
            1 => InteriorHull { kind: HullKind::Point, points: pts },
            _ => {
                let hull = convex_hull(&pts);
                if hull.len() == 2 {
                    InteriorHull { kind: HullKind::Segment, points: hull }
                } else {
                    InteriorHull { kind: HullKind::Polygon, points: hull }
                }
            }
        }
    }

    pub fn is_hyperelliptic(&self) -> bool {
        self.genus() >= 2 && self.interior_hull().kind == HullKind::Segment
    }

    pub fn classify(&self) -> PolygonClass {
        let genus = self.genus();
        PolygonClass {
            genus,
            hyperelliptic: genus >= 2 && self.interior_hull().kind == HullKind::Segment,
            maximal: self.is_maximal(),
        }
    }

    pub fn transform(&self, map: &AffineMap) -> LatticePolygon {
        let pts: Vec<LatticePoint> = self.vertices.iter().map(|&p| map.apply(p)).collect();
        LatticePolygon { vertices: convex_hull(&pts) }
    }

    /// Twice the area of `conv(P ∪ {q})`.
    fn twice_area_with(&self, q: LatticePoint) -> i64 {
        self.twice_area() + self.edges().map(|(a, b)| (-cross(a, b, q)).max(0)).sum::<i64>()
    }

    /// Lattice points at lattice distance one outside some edge whose
    /// addition keeps the interior lattice points unchanged.
    ///
    /// Any enlargement with the same interior points can be reached through
    /// such a point, so `P` is maximal iff this list is empty. The scan along
    /// each edge line stops at Scott's area bound `2A <= 4g + 5` for `g >= 1`.
    pub fn augmenting_points(&self) -> Vec<LatticePoint> {
        let genus = self.genus() as i64;
        assert!(genus >= 1, "augmentation search needs genus >= 1");
        let bound = 4 * genus + 5;
        let mut found = BTreeSet::new();
        for (a, b) in self.edges() {
            let (dx, dy) = primitive(b.x - a.x, b.y - a.y);
            // outward normal n with n·x <= c on P
            let (nx, ny) = (dy, -dx);
            let c = nx * a.x + ny * a.y;
            let (_, s, t) = ext_gcd(nx, ny);
            let base = LatticePoint::new(s * (c + 1), t * (c + 1));
            let mid = ((a.x + b.x) * dx + (a.y + b.y) * dy).div_euclid(2 * (dx * dx + dy * dy));
            let k0 = mid - (base.x * dx + base.y * dy).div_euclid(dx * dx + dy * dy);
            let at = |k: i64| LatticePoint::new(base.x + k * dx, base.y + k * dy);
            for dir in [1i64, -1] {
                let mut k = if dir == 1 { k0 } else { k0 - 1 };
                let mut prev = i64::MAX;
                loop {
                    let q = at(k);
                    let area = self.twice_area_with(q);
                    if area > bound && area >= prev {
                        break;
                    }
                    if area <= bound {
                        let mut pts = self.vertices.clone();
                        pts.push(q);
                        let bigger = LatticePolygon { vertices: convex_hull(&pts) };
                        if bigger.genus() as i64 == genus {
                            found.insert(q);
                        }
                    }
                    prev = area;
                    k += dir;
                }
            }
        }
        found.into_iter().collect()
    }

    /// Genus-0 polygons are never reported maximal; every other polygon is
    /// decided by [`augmenting_points`](Self::augmenting_points).
    pub fn is_maximal(&self) -> bool {
        self.genus() >= 1 && self.augmenting_points().is_empty()
    }

    fn normalizing_maps(&self) -> Vec<(AffineMap, Vec<LatticePoint>)> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(2 * n);
        for ccw in [true, false] {
            let verts: Vec<LatticePoint> = if ccw {
                self.vertices.clone()
            } else {
                self.vertices.iter().rev().copied().collect()
            };
            for i in 0..n {
                let v = verts[i];
                let w = verts[(i + 1) % n];
                let u = verts[(i + n - 1) % n];
                let (dx, dy) = primitive(w.x - v.x, w.y - v.y);
                let (_, s, t) = ext_gcd(dx, dy);
                let m = if ccw { [[s, t], [-dy, dx]] } else { [[s, t], [dy, -dx]] };
                let lin = AffineMap { m, t: [0, 0] };
                let (ux, uy) = lin.apply_vector(u.sub(v));
                debug_assert!(uy > 0);
                let k = -ux.div_euclid(uy);
                let shear = AffineMap { m: [[1, k], [0, 1]], t: [0, 0] };
                let lin = shear.compose(&lin);
                let mv = lin.apply(v);
                let mut map = AffineMap { m: lin.m, t: [-mv.x, -mv.y] };
                let minx = verts.iter().map(|&p| map.apply(p).x).min().unwrap();
                map.t[0] -= minx;
                let mut key: Vec<LatticePoint> = verts.iter().map(|&p| map.apply(p)).collect();
                key.sort();
                out.push((map, key));
            }
        }
        out
    }

    /// Canonical representative of the affine unimodular class.
    pub fn normal_form(&self) -> LatticePolygon {
        let key = self.normalizing_maps().into_iter().map(|(_, k)| k).min().unwrap();
        LatticePolygon { vertices: convex_hull(&key) }
    }

    /// A unimodular map sending `self` onto its normal form.
    pub fn normal_form_map(&self) -> AffineMap {
        self.normalizing_maps().into_iter().min_by(|a, b| a.1.cmp(&b.1)).unwrap().0
    }

    pub fn is_equivalent(&self, other: &LatticePolygon) -> bool {
        self.normal_form() == other.normal_form()
    }

    /// All affine unimodular maps sending the polygon onto itself.
    pub fn symmetries(&self) -> Vec<AffineMap> {
        let maps = self.normalizing_maps();
        let best = maps.iter().map(|(_, k)| k).min().unwrap().clone();
        let winners: Vec<AffineMap> = maps.into_iter().filter(|(_, k)| *k == best).map(|(m, _)| m).collect();
        let base = winners[0];
        let mut out: Vec<AffineMap> = winners.iter().map(|w| w.inverse().compose(&base)).collect();
        out.sort_by_key(|m| (m.m, m.t));
        out.dedup();
        out
    }

    /// Convex lattice subpolygons keeping exactly the same interior lattice
    /// points, including `self`. Reached by repeatedly dropping one vertex.
    pub fn subpolygons_with_same_interior(&self) -> Vec<LatticePolygon> {
        let interior = self.interior_points();
        let mut seen: HashSet<LatticePolygon> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.clone());
        queue.push_back(self.clone());
        while let Some(q) = queue.pop_front() {
            let pts = q.lattice_points();
            for v in q.vertices() {
                let rest: Vec<LatticePoint> = pts.iter().copied().filter(|p| p != v).collect();
                let Ok(sub) = LatticePolygon::hull_of(&rest) else { continue };
                if sub.interior_points() != interior {
                    continue;
                }
                if seen.insert(sub.clone()) {
                    queue.push_back(sub);
                }
            }
        }
        let mut out: Vec<LatticePolygon> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Relaxation of a two-dimensional polygon: every edge moved outward by
    /// lattice distance one. `None` if the result is not a lattice polygon.
    pub fn relaxation(&self) -> Option<LatticePolygon> {
        use crate::rational::{int, Rational};
        use num_traits::Zero;
        let lines: Vec<(i64, i64, i64)> = self
            .edges()
            .map(|(a, b)| {
                let (dx, dy) = primitive(b.x - a.x, b.y - a.y);
                let (nx, ny) = (dy, -dx);
                (nx, ny, nx * a.x + ny * a.y + 1)
            })
            .collect();
        let mut corners = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, c1) = lines[i];
                let (a2, b2, c2) = lines[j];
                let det = a1 * b2 - a2 * b1;
                if det == 0 {
                    continue;
                }
                let x = Rational::new((c1 * b2 - c2 * b1).into(), det.into());
                let y = Rational::new((a1 * c2 - a2 * c1).into(), det.into());
                let feasible = lines
                    .iter()
                    .all(|&(a, b, c)| int(a) * &x + int(b) * &y - int(c) <= Rational::zero());
                if feasible {
                    if !x.is_integer() || !y.is_integer() {
                        return None;
                    }
                    corners.push(LatticePoint::new(
                        x.to_integer().try_into().ok()?,
                        y.to_integer().try_into().ok()?,
                    ));
                }
            }
        }
        LatticePolygon::hull_of(&corners).ok()
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

fn dedup_by_normal_form(polys: impl IntoIterator<Item = LatticePolygon>) -> Vec<LatticePolygon> {
    let set: BTreeSet<LatticePolygon> = polys.into_iter().map(|p| p.normal_form()).collect();
    set.into_iter().collect()
}

/// Every polygon (not deduplicated) whose interior lattice points are exactly
/// `(1,1), ..., (g,1)`, with the lowest row starting at `x = 0`.
///
/// Such polygons lie in the strip `0 <= y <= 2`, so each is the hull of its
/// two outer row segments plus optional vertices `(0,1)` and `(g+1,1)`.
pub fn strip_polygons(g: usize) -> Vec<LatticePolygon> {
    let g = g as i64;
    let width = 2 * g + 2;
    let target: Vec<LatticePoint> = (1..=g).map(|x| LatticePoint::new(x, 1)).collect();
    let mut out = Vec::new();
    for b0 in 0..=width {
        for a2 in 0..=width {
            for b2 in a2..=width {
                for left in [false, true] {
                    for right in [false, true] {
                        let mut pts = vec![
                            LatticePoint::new(0, 0),
                            LatticePoint::new(b0, 0),
                            LatticePoint::new(a2, 2),
                            LatticePoint::new(b2, 2),
                        ];
                        if left {
                            pts.push(LatticePoint::new(0, 1));
                        }
                        if right {
                            pts.push(LatticePoint::new(g + 1, 1));
                        }
                        let Ok(p) = LatticePolygon::hull_of(&pts) else { continue };
                        if p.interior_points() == target {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Maximal hyperelliptic polygons of genus `g` up to unimodular equivalence,
/// sorted by normal form.
pub fn enumerate_maximal_hyperelliptic(g: usize) -> Result<Vec<LatticePolygon>> {
    if g < 2 {
        return Err(Error::Domain(format!("hyperelliptic polygons need genus >= 2, got {g}")));
    }
    Ok(dedup_by_normal_form(strip_polygons(g).into_iter().filter(|p| p.is_maximal())))
}

pub const DEFAULT_MAX_HYPERELLIPTIC_GENUS: usize = 4;

/// All hyperelliptic polygons of genus `g` up to unimodular equivalence, as
/// subpolygons of the maximal ones. Guarded to `g <= 4`.
pub fn enumerate_hyperelliptic_polygons(g: usize) -> Result<Vec<LatticePolygon>> {
    enumerate_hyperelliptic_polygons_up_to(g, DEFAULT_MAX_HYPERELLIPTIC_GENUS)
}

pub fn enumerate_hyperelliptic_polygons_up_to(g: usize, max_genus: usize) -> Result<Vec<LatticePolygon>> {
    if g < 2 {
        return Err(Error::Domain(format!("hyperelliptic polygons need genus >= 2, got {g}")));
    }
    if g > max_genus {
        return Err(Error::Domain(format!("genus {g} exceeds the enumeration limit {max_genus}")));
    }
    let maximal = enumerate_maximal_hyperelliptic(g)?;
    Ok(dedup_by_normal_form(maximal.iter().flat_map(|p| p.subpolygons_with_same_interior())))
}

/// Census count of hyperelliptic polygons of genus `g`: `(g+3)(2g²+15g+16)/6`.
pub fn hyperelliptic_census(g: usize) -> usize {
    (g + 3) * (2 * g * g + 15 * g + 16) / 6
}

/// Maximal nonhyperelliptic polygons of genus `g <= 3`, as relaxations of
/// every two-dimensional candidate interior hull with `g` lattice points.
pub fn enumerate_maximal_nonhyperelliptic(g: usize) -> Result<Vec<LatticePolygon>> {
    if g > 3 {
        return Err(Error::Unsupported(format!("nonhyperelliptic maximal polygons only for genus <= 3, got {g}")));
    }
    let side = g.max(1) as i64;
    let box_pts: Vec<LatticePoint> =
        (0..side).flat_map(|x| (0..side).map(move |y| LatticePoint::new(x, y))).collect();
    let mut hulls = BTreeSet::new();
    let n = box_pts.len();
    // g-subsets of a (g x g) box; enough for the unimodular triangle at g = 3
    let mut idx: Vec<usize> = (0..g).collect();
    if g >= 3 && g <= n {
        loop {
            let pts: Vec<LatticePoint> = idx.iter().map(|&i| box_pts[i]).collect();
            if let Ok(h) = LatticePolygon::hull_of(&pts) {
                if h.lattice_points().len() == g {
                    hulls.insert(h.normal_form());
                }
            }
            let mut k = g;
            while k > 0 && idx[k - 1] == n - g + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..g {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    let mut out = Vec::new();
    for h in hulls {
        if let Some(r) = h.relaxation() {
            if r.interior_points() == h.lattice_points() {
                out.push(r);
            }
        }
    }
    Ok(dedup_by_normal_form(out))
}

/// Maximal polygons of genus 2 or 3: the hyperelliptic catalog together with
/// the relaxations of two-dimensional interior hulls.
pub fn maximal_polygons(g: usize) -> Result<Vec<LatticePolygon>> {
    if !(2..=3).contains(&g) {
        return Err(Error::Unsupported(format!("maximal polygon corpus only for genus 2 and 3, got {g}")));
    }
    let mut out = enumerate_maximal_hyperelliptic(g)?;
    out.extend(enumerate_maximal_nonhyperelliptic(g)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(i64, i64)]) -> LatticePolygon {
        LatticePolygon::from_coords(c).unwrap()
    }

    fn scan_interior(p: &LatticePolygon) -> Vec<LatticePoint> {
        // direct scan with the winding test written out independently
        let mut out = vec![];
        for x in -20..=20 {
            for y in -20..=20 {
                let q = LatticePoint::new(x, y);
                let n = p.vertices().len();
                let inside = (0..n).all(|i| {
                    let a = p.vertices()[i];
                    let b = p.vertices()[(i + 1) % n];
                    (b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x) > 0
                });
                if inside {
                    out.push(q);
                }
            }
        }
        out
    }

    #[test]
    fn polygon_data_examples() {
        let t = poly(&[(0, 0), (1, 0), (0, 1)]);
        let d = t.data();
        assert_eq!((d.genus, d.boundary_count, d.twice_area), (0, 3, 1));

        let q = poly(&[(0, 0), (4, 0), (0, 4)]);
        let d = q.data();
        assert_eq!(d.genus, 3);
        assert_eq!(d.interior_points, scan_interior(&q));
        assert_eq!(d.interior_points, vec![(1, 1).into(), (1, 2).into(), (2, 1).into()]);

        let h = poly(&[(0, 0), (8, 0), (0, 2)]);
        let d = h.data();
        assert_eq!(d.genus, 3);
        assert_eq!(d.interior_points, scan_interior(&h));
        assert_eq!(d.interior_points, vec![(1, 1).into(), (2, 1).into(), (3, 1).into()]);
        for p in [&t, &q, &h] {
            let d = p.data();
            assert_eq!(d.twice_area, 2 * d.genus as i64 + d.boundary_count as i64 - 2);
        }
    }

    #[test]
    fn invalid_polygons() {
        assert!(LatticePolygon::from_coords(&[(0, 0), (1, 1)]).is_err());
        assert!(LatticePolygon::from_coords(&[(0, 0), (1, 1), (2, 2)]).is_err());
        assert!(LatticePolygon::from_coords(&[(0, 0), (2, 0), (1, 0), (0, 2)]).is_err());
        assert!(LatticePolygon::from_coords(&[(0, 0), (1, 0), (1, 0)]).is_err());
        // clockwise input is accepted and reoriented
        let cw = poly(&[(0, 0), (0, 1), (1, 0)]);
        assert_eq!(cw, poly(&[(0, 0), (1, 0), (0, 1)]));
    }

    #[test]
    fn interior_hull_examples() {
        let h = poly(&[(0, 0), (3, 0), (0, 3)]).interior_hull();
        assert_eq!(h.kind, HullKind::Point);
        assert_eq!(h.points, vec![LatticePoint::new(1, 1)]);
        let h = poly(&[(0, 0), (8, 0), (0, 2)]).interior_hull();
        assert_eq!(h.kind, HullKind::Segment);
        assert_eq!(h.points, vec![LatticePoint::new(1, 1), LatticePoint::new(3, 1)]);
        let h = poly(&[(0, 0), (4, 0), (0, 4)]).interior_hull();
        assert_eq!(h.kind, HullKind::Polygon);
        assert_eq!(h.points.len(), 3);
        assert_eq!(poly(&[(0, 0), (1, 0), (0, 1)]).interior_hull().kind, HullKind::Empty);
    }

    #[test]
    fn classify_examples() {
        let c = poly(&[(0, 0), (8, 0), (0, 2)]).classify();
        assert_eq!(c, PolygonClass { genus: 3, hyperelliptic: true, maximal: true });
        let c = poly(&[(0, 0), (4, 0), (0, 4)]).classify();
        assert_eq!(c, PolygonClass { genus: 3, hyperelliptic: false, maximal: true });
        let c = poly(&[(0, 0), (2, 0), (2, 2), (0, 2)]).classify();
        assert_eq!((c.genus, c.hyperelliptic), (1, false));
        assert!(c.maximal);
        assert!(poly(&[(0, 0), (4, 0), (4, 2), (0, 2)]).is_maximal());
    }

    #[test]
    fn non_maximal_detected() {
        let p = poly(&[(1, 0), (3, 0), (3, 2), (0, 2)]);
        assert_eq!(p.genus(), 2);
        assert!(p.augmenting_points().contains(&LatticePoint::new(0, 1)));
        assert!(!p.is_maximal());
        let aug = p.augmenting_points();
        assert!(!aug.is_empty());
        for q in aug {
            let mut pts = p.vertices().to_vec();
            pts.push(q);
            assert_eq!(LatticePolygon::hull_of(&pts).unwrap().interior_points(), p.interior_points());
        }
    }

    #[test]
    fn normal_form_examples() {
        let t = poly(&[(0, 0), (1, 0), (0, 1)]);
        let m = AffineMap::new([[1, 1], [0, 1]], [3, 5]).unwrap();
        assert_eq!(t.normal_form(), t.transform(&m).normal_form());

        let h = poly(&[(0, 0), (8, 0), (0, 2)]);
        let refl = AffineMap::new([[-1, 0], [0, 1]], [8, 0]).unwrap();
        assert_eq!(h.normal_form(), h.transform(&refl).normal_form());

        let q = poly(&[(0, 0), (4, 0), (0, 4)]);
        assert_ne!(q.normal_form(), h.normal_form());
        assert_eq!(q.normal_form().normal_form(), q.normal_form());
    }

    #[test]
    fn symmetries_of_quartic_and_square() {
        assert_eq!(poly(&[(0, 0), (4, 0), (0, 4)]).symmetries().len(), 6);
        assert_eq!(poly(&[(0, 0), (1, 0), (1, 1), (0, 1)]).symmetries().len(), 8);
        assert_eq!(poly(&[(0, 0), (8, 0), (0, 2)]).symmetries().len(), 2);
        for s in poly(&[(0, 0), (4, 0), (0, 4)]).symmetries() {
            assert_eq!(poly(&[(0, 0), (4, 0), (0, 4)]).transform(&s), poly(&[(0, 0), (4, 0), (0, 4)]));
        }
    }

    #[test]
    fn affine_map_algebra() {
        let a = AffineMap::new([[2, 1], [1, 1]], [1, -3]).unwrap();
        let b = AffineMap::new([[0, -1], [1, 0]], [4, 2]).unwrap();
        let p = LatticePoint::new(5, -7);
        assert_eq!(a.compose(&b).apply(p), a.apply(b.apply(p)));
        assert_eq!(a.inverse().apply(a.apply(p)), p);
        assert!(AffineMap::new([[2, 0], [0, 1]], [0, 0]).is_err());
        let f = AffineMap::from_frames(
            LatticePoint::new(1, 1),
            (0, 1),
            (1, 0),
            LatticePoint::new(3, 4),
            (1, 1),
            (1, 2),
        )
        .unwrap();
        assert_eq!(f.apply(LatticePoint::new(1, 1)), LatticePoint::new(3, 4));
        assert_eq!(f.apply(LatticePoint::new(1, 2)), LatticePoint::new(4, 5));
        assert_eq!(f.apply(LatticePoint::new(2, 1)), LatticePoint::new(4, 6));
    }

    #[test]
    fn maximal_hyperelliptic_counts() {
        assert_eq!(enumerate_maximal_hyperelliptic(2).unwrap().len(), 4);
        assert_eq!(enumerate_maximal_hyperelliptic(3).unwrap().len(), 5);
        assert_eq!(enumerate_maximal_hyperelliptic(4).unwrap().len(), 6);
        assert!(enumerate_maximal_hyperelliptic(1).is_err());
    }

    #[test]
    fn relaxation_of_unimodular_triangle() {
        let t = poly(&[(1, 1), (2, 1), (1, 2)]);
        let r = t.relaxation().unwrap();
        assert_eq!(r, poly(&[(0, 0), (4, 0), (0, 4)]));
        assert_eq!(enumerate_maximal_nonhyperelliptic(3).unwrap(), vec![r.normal_form()]);
        assert!(enumerate_maximal_nonhyperelliptic(2).unwrap().is_empty());
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(3, 5), (-4, 6), (0, 7), (7, 0), (-1, -1), (12, -18)] {
            let (g, s, t) = ext_gcd(a, b);
            assert_eq!(s * a + t * b, g);
            assert_eq!(g, a.abs().gcd(&b.abs()));
        }
    }
}
