//! Flip enumeration against an independent tiling search.

use std::collections::{BTreeSet, HashSet};

use hypertrop::lattice::{LatticePoint, LatticePolygon};
use hypertrop::triangulation::{
    enumerate_triangulations, induced_subdivision, interior_height, validate_triangulation, EnumerationOptions,
};

type P = (i64, i64);

fn cr(o: P, a: P, b: P) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn overlap(s: &[P; 3], t: &[P; 3]) -> bool {
    let sep = |u: &[P; 3], v: &[P; 3]| {
        (0..3).any(|k| {
            let (a, b, c) = (u[k], u[(k + 1) % 3], u[(k + 2) % 3]);
            let side = cr(a, b, c).signum();
            v.iter().all(|&q| cr(a, b, q).signum() * side <= 0)
        })
    };
    !sep(s, t) && !sep(t, s)
}

/// Every tiling of the polygon by area-1/2 lattice triangles, each as a sorted
/// list of sorted vertex triples.
fn tilings(vertices: &[P]) -> BTreeSet<Vec<[P; 3]>> {
    let n = vertices.len();
    let inside = |q: P| (0..n).all(|i| cr(vertices[i], vertices[(i + 1) % n], q) >= 0);
    let (x0, x1) = (vertices.iter().map(|v| v.0).min().unwrap(), vertices.iter().map(|v| v.0).max().unwrap());
    let (y0, y1) = (vertices.iter().map(|v| v.1).min().unwrap(), vertices.iter().map(|v| v.1).max().unwrap());
    let pts: Vec<P> = (x0..=x1).flat_map(|x| (y0..=y1).map(move |y| (x, y))).filter(|&q| inside(q)).collect();
    // open directed edges have uncovered area on their left
    let mut open: BTreeSet<(P, P)> = BTreeSet::new();
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        let mut on: Vec<P> = pts.iter().copied().filter(|&q| cr(a, b, q) == 0).collect();
        on.sort_by_key(|q| (q.0 - a.0) * (b.0 - a.0) + (q.1 - a.1) * (b.1 - a.1));
        for w in on.windows(2) {
            open.insert((w[0], w[1]));
        }
    }
    let mut out = BTreeSet::new();
    let mut placed: Vec<[P; 3]> = Vec::new();
    fn dfs(pts: &[P], open: &mut BTreeSet<(P, P)>, placed: &mut Vec<[P; 3]>, out: &mut BTreeSet<Vec<[P; 3]>>) {
        let Some(&(a, b)) = open.iter().next() else {
            let mut t: Vec<[P; 3]> = placed
                .iter()
                .map(|t| {
                    let mut s = *t;
                    s.sort();
                    s
                })
                .collect();
            t.sort();
            out.insert(t);
            return;
        };
        for &c in pts {
            if cr(a, b, c) != 1 {
                continue;
            }
            let tri = [a, b, c];
            if placed.iter().any(|t| overlap(t, &tri)) {
                continue;
            }
            let mut changes: Vec<((P, P), bool)> = vec![((a, b), false)];
            for (u, v) in [(b, c), (c, a)] {
                if open.contains(&(u, v)) {
                    changes.push(((u, v), false));
                } else {
                    changes.push(((v, u), true));
                }
            }
            for &(e, add) in &changes {
                if add {
                    open.insert(e);
                } else {
                    open.remove(&e);
                }
            }
            placed.push(tri);
            dfs(pts, open, placed, out);
            placed.pop();
            for &(e, add) in &changes {
                if add {
                    open.remove(&e);
                } else {
                    open.insert(e);
                }
            }
        }
    }
    dfs(&pts, &mut open, &mut placed, &mut out);
    out
}

fn flip_tilings(p: &LatticePolygon) -> BTreeSet<Vec<[P; 3]>> {
    enumerate_triangulations(p, EnumerationOptions { max_genus: usize::MAX, ..Default::default() })
        .unwrap()
        .into_iter()
        .map(|t| {
            let mut v: Vec<[P; 3]> = t
                .triangles
                .iter()
                .map(|tr| {
                    let mut s = tr.map(|i| (t.points[i].x, t.points[i].y));
                    s.sort();
                    s
                })
                .collect();
            v.sort();
            v
        })
        .collect()
}

fn coords(p: &LatticePolygon) -> Vec<P> {
    p.vertices().iter().map(|v| (v.x, v.y)).collect()
}

/// Every convex lattice polygon in the 4x4 grid, up to equivalence.
fn small_polygons() -> Vec<LatticePolygon> {
    let grid: Vec<LatticePoint> = (0..4).flat_map(|x| (0..4).map(move |y| LatticePoint::new(x, y))).collect();
    let start = LatticePolygon::hull_of(&grid).unwrap();
    let mut seen: HashSet<LatticePolygon> = HashSet::new();
    let mut stack = vec![start];
    let mut forms = BTreeSet::new();
    while let Some(p) = stack.pop() {
        if !seen.insert(p.clone()) {
            continue;
        }
        forms.insert(p.normal_form());
        let pts = p.lattice_points();
        for v in p.vertices() {
            let rest: Vec<LatticePoint> = pts.iter().copied().filter(|q| q != v).collect();
            if let Ok(q) = LatticePolygon::hull_of(&rest) {
                stack.push(q);
            }
        }
    }
    forms.into_iter().collect()
}

#[test]
fn flip_enumeration_matches_tiling_oracle_up_to_nine_points() {
    let polys: Vec<LatticePolygon> =
        small_polygons().into_iter().filter(|p| p.lattice_points().len() <= 9).collect();
    assert!(polys.len() > 20, "corpus too small: {}", polys.len());
    for p in &polys {
        let oracle = tilings(&coords(p));
        let flips = flip_tilings(p);
        assert_eq!(flips, oracle, "mismatch on {p}");
    }
}

#[test]
fn frozen_counts() {
    // values produced by the tiling oracle above
    let square = LatticePolygon::from_coords(&[(0, 0), (2, 0), (2, 2), (0, 2)]).unwrap();
    assert_eq!(tilings(&coords(&square)).len(), 64);
    assert_eq!(flip_tilings(&square).len(), 64);
    let tri2 = LatticePolygon::from_coords(&[(0, 0), (2, 0), (0, 2)]).unwrap();
    assert_eq!(flip_tilings(&tri2).len(), tilings(&coords(&tri2)).len());
    let unit = LatticePolygon::from_coords(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
    assert_eq!(flip_tilings(&unit).len(), 2);
}

#[test]
fn genus_two_polygon_matches_oracle_beyond_nine_points() {
    let p = LatticePolygon::from_coords(&[(0, 0), (6, 0), (0, 2)]).unwrap();
    assert_eq!(flip_tilings(&p), tilings(&coords(&p)));
}

#[test]
fn hyperelliptic_triangle_self_consistency() {
    let p = LatticePolygon::from_coords(&[(0, 0), (8, 0), (0, 2)]).unwrap();
    let regular = enumerate_triangulations(&p, EnumerationOptions { regular_only: true, ..Default::default() }).unwrap();
    assert!(!regular.is_empty());
    for t in regular.iter().step_by(7) {
        assert!(validate_triangulation(&p, t).unwrap().valid);
        let h = interior_height(&p, t).unwrap();
        assert_eq!(induced_subdivision(&p, &h).unwrap().to_triangulation().as_ref(), Some(t));
    }
}
