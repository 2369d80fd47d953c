//! Multigraph isomorphism by backtracking and canonical forms by
//! individualization-refinement.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::MetricGraph;
use crate::rational::Rational;

/// Edges grouped by unordered endpoint pair.
#[derive(Clone, Debug)]
pub struct Bundles {
    pub n: usize,
    /// `mult[u * n + v]` edges between `u` and `v`; loops on the diagonal.
    pub mult: Vec<usize>,
    /// Sorted lengths per pair; empty when comparing combinatorially.
    pub lens: Vec<Vec<Rational>>,
    /// Edge indices per pair.
    pub edges: Vec<Vec<usize>>,
}

impl Bundles {
    pub fn new(g: &MetricGraph, metric: bool) -> Self {
        let n = g.vertices;
        let mut mult = vec![0; n * n];
        let mut lens = vec![Vec::new(); n * n];
        let mut edges = vec![Vec::new(); n * n];
        for (i, e) in g.edges.iter().enumerate() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                mult[a * n + b] += 1;
                edges[a * n + b].push(i);
                if metric {
                    lens[a * n + b].push(e.len.clone());
                }
                if a == b {
                    break;
                }
            }
        }
        for l in &mut lens {
            l.sort();
        }
        Bundles { n, mult, lens, edges }
    }

    pub fn m(&self, u: usize, v: usize) -> usize {
        self.mult[u * self.n + v]
    }

    fn compatible(&self, u: usize, v: usize, other: &Bundles, x: usize, y: usize) -> bool {
        self.mult[u * self.n + v] == other.mult[x * other.n + y] && self.lens[u * self.n + v] == other.lens[x * other.n + y]
    }

    fn degree(&self, u: usize) -> usize {
        (0..self.n).map(|v| self.m(u, v) * if u == v { 2 } else { 1 }).sum()
    }
}

/// Calls `visit` with every vertex bijection `a -> b` preserving bundles;
/// stops early when `visit` returns false.
pub fn for_each_isomorphism(a: &Bundles, b: &Bundles, visit: &mut dyn FnMut(&[usize]) -> bool) {
    if a.n != b.n {
        return;
    }
    let n = a.n;
    // breadth-first order so each new vertex has assigned neighbours
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        order.push(s);
        let mut k = order.len() - 1;
        while k < order.len() {
            let x = order[k];
            for y in 0..n {
                if !seen[y] && a.m(x, y) > 0 {
                    seen[y] = true;
                    order.push(y);
                }
            }
            k += 1;
        }
    }
    let deg_a: Vec<usize> = (0..n).map(|u| a.degree(u)).collect();
    let deg_b: Vec<usize> = (0..n).map(|u| b.degree(u)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        k: usize,
        order: &[usize],
        a: &Bundles,
        b: &Bundles,
        deg: (&[usize], &[usize]),
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if k == order.len() {
            return visit(map);
        }
        let x = order[k];
        for y in 0..b.n {
            if used[y] || deg.0[x] != deg.1[y] || !a.compatible(x, x, b, y, y) {
                continue;
            }
            let ok = order[..k].iter().all(|&w| a.compatible(x, w, b, y, map[w]));
            if !ok {
                continue;
            }
            map[x] = y;
            used[y] = true;
            let go_on = rec(k + 1, order, a, b, deg, map, used, visit);
            used[y] = false;
            map[x] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(0, &order, a, b, (&deg_a, &deg_b), &mut map, &mut used, visit);
}

pub fn find_isomorphism(a: &MetricGraph, b: &MetricGraph, metric: bool) -> Option<Vec<usize>> {
    if a.vertices != b.vertices || a.edges.len() != b.edges.len() {
        return None;
    }
    let (ba, bb) = (Bundles::new(a, metric), Bundles::new(b, metric));
    let mut found = None;
    for_each_isomorphism(&ba, &bb, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

pub fn are_isomorphic(a: &MetricGraph, b: &MetricGraph, metric: bool) -> bool {
    find_isomorphism(a, b, metric).is_some()
}

/// Vertex automorphisms preserving bundles (and lengths when `metric`).
pub fn automorphisms(g: &MetricGraph, metric: bool) -> Vec<Vec<usize>> {
    let b = Bundles::new(g, metric);
    let mut out = Vec::new();
    for_each_isomorphism(&b, &b, &mut |m| {
        out.push(m.to_vec());
        true
    });
    out
}

/// Complete isomorphism invariant of the combinatorial multigraph: vertex
/// count and the upper-triangular multiplicity matrix under the
/// lexicographically least labelling found by the search.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub vertices: usize,
    pub matrix: Vec<u8>,
}

impl CanonicalForm {
    /// The multigraph with this form, unit lengths, labelled canonically.
    pub fn to_graph(&self) -> MetricGraph {
        let n = self.vertices;
        let mut pairs = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u..n {
                for _ in 0..self.matrix[k] {
                    pairs.push((u, v));
                }
                k += 1;
            }
        }
        MetricGraph::combinatorial(n, &pairs).expect("canonical form is well formed")
    }
}

fn refine(b: &Bundles, colors: &mut Vec<usize>) {
    let n = b.n;
    loop {
        let ncolors = colors.iter().max().map_or(0, |m| m + 1);
        let sigs: Vec<(usize, usize, Vec<usize>)> = (0..n)
            .map(|u| {
                let mut counts = vec![0usize; ncolors];
                for v in 0..n {
                    if v != u {
                        counts[colors[v]] += b.m(u, v);
                    }
                }
                (colors[u], b.m(u, u), counts)
            })
            .collect();
        let mut distinct: Vec<&(usize, usize, Vec<usize>)> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let rank: BTreeMap<&(usize, usize, Vec<usize>), usize> =
            distinct.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let next: Vec<usize> = sigs.iter().map(|s| rank[s]).collect();
        let stable = distinct.len() == ncolors;
        *colors = next;
        if stable {
            return;
        }
    }
}

fn leaf_matrix(b: &Bundles, colors: &[usize]) -> Vec<u8> {
    let n = b.n;
    let mut inv = vec![0; n];
    for (v, &c) in colors.iter().enumerate() {
        inv[c] = v;
    }
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push(b.m(inv[i], inv[j]) as u8);
        }
    }
    out
}

fn search(b: &Bundles, colors: Vec<usize>, best: &mut Option<Vec<u8>>) {
    let n = b.n;
    let mut sizes = vec![0usize; n];
    for &c in &colors {
        sizes[c] += 1;
    }
    let Some(cell) = (0..n).find(|&c| sizes[c] > 1) else {
        let m = leaf_matrix(b, &colors);
        if best.as_ref().is_none_or(|bm| m < *bm) {
            *best = Some(m);
        }
        return;
    };
    for v in (0..n).filter(|&v| colors[v] == cell) {
        // chosen vertex keeps rank `cell`; the rest of its cell move just after it
        let mut next: Vec<usize> = colors.iter().map(|&c| if c > cell { c + 1 } else { c }).collect();
        for (u, c) in next.iter_mut().enumerate() {
            if colors[u] == cell && u != v {
                *c = cell + 1;
            }
        }
        refine(b, &mut next);
        search(b, next, best);
    }
}

pub fn canonical_form(g: &MetricGraph) -> CanonicalForm {
    let b = Bundles::new(g, false);
    let mut colors = vec![0; g.vertices];
    refine(&b, &mut colors);
    let mut best = None;
    search(&b, colors, &mut best);
    CanonicalForm { vertices: g.vertices, matrix: best.unwrap_or_default() }
}
