//! Planar embeddings of trivalent graphs as rotation systems with a chosen
//! outer face, and the crowdedness test.
//!
//! Edge `e` has darts `2e` (leaving `e.u`) and `2e + 1` (leaving `e.v`);
//! the opposite dart is `d ^ 1`. Faces are orbits of `d -> rot(d ^ 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphEdge, MetricGraph};

pub const MAX_EMBEDDING_VERTICES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationEmbedding {
    /// Cyclic order of the three darts leaving each vertex.
    pub rotation: Vec<[usize; 3]>,
    pub faces: Vec<Vec<usize>>,
    pub outer_face: usize,
}

fn dart_tail(g: &MetricGraph, d: usize) -> usize {
    let e = &g.edges[d / 2];
    if d.is_multiple_of(2) {
        e.u
    } else {
        e.v
    }
}

fn darts_at(g: &MetricGraph) -> Vec<Vec<usize>> {
    let mut at = vec![Vec::new(); g.vertices];
    for d in 0..2 * g.edges.len() {
        at[dart_tail(g, d)].push(d);
    }
    at
}

/// Successor of each dart in its vertex rotation.
fn successor(rotation: &[[usize; 3]], darts: usize) -> Vec<usize> {
    let mut next = vec![usize::MAX; darts];
    for r in rotation {
        for i in 0..3 {
            next[r[i]] = r[(i + 1) % 3];
        }
    }
    next
}

fn trace_faces(next: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; next.len()];
    let mut faces = Vec::new();
    for s in 0..next.len() {
        if seen[s] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = s;
        while !seen[d] {
            seen[d] = true;
            face.push(d);
            d = next[d ^ 1];
        }
        faces.push(face);
    }
    faces
}

fn check_input(g: &MetricGraph) -> Result<()> {
    if g.vertices > MAX_EMBEDDING_VERTICES {
        return Err(Error::Guard(format!(
            "{} vertices exceed the embedding limit {MAX_EMBEDDING_VERTICES}",
            g.vertices
        )));
    }
    if !g.is_connected() || !g.is_trivalent() {
        return Err(Error::Graph("embeddings need a connected trivalent graph".into()));
    }
    Ok(())
}

/// Calls `visit` with each genus-zero rotation system and its faces.
fn for_each_planar_rotation(g: &MetricGraph, visit: &mut dyn FnMut(&[[usize; 3]], Vec<Vec<usize>>) -> bool) -> Result<()> {
    check_input(g)?;
    let at = darts_at(g);
    let n = g.vertices;
    let target = g.edges.len() + 2 - n;
    let darts = 2 * g.edges.len();
    for mask in 0u32..(1 << n) {
        let rotation: Vec<[usize; 3]> = (0..n)
            .map(|v| {
                let a = &at[v];
                if mask >> v & 1 == 0 {
                    [a[0], a[1], a[2]]
                } else {
                    [a[0], a[2], a[1]]
                }
            })
            .collect();
        let faces = trace_faces(&successor(&rotation, darts));
        if faces.len() == target && !visit(&rotation, faces) {
            break;
        }
    }
    Ok(())
}

/// Every planar rotation system paired with every outer face. Mirror images
/// appear separately. Nonplanar graphs give an empty list.
pub fn planar_embeddings(g: &MetricGraph) -> Result<Vec<RotationEmbedding>> {
    let mut out = Vec::new();
    for_each_planar_rotation(g, &mut |rotation, faces| {
        for outer in 0..faces.len() {
            out.push(RotationEmbedding { rotation: rotation.to_vec(), faces: faces.clone(), outer_face: outer });
        }
        true
    })?;
    Ok(out)
}

/// Witness of a crowded embedding: two bounded faces sharing at least two
/// edges, or one bounded face (`first == second`) meeting an edge twice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrowdedWitness {
    pub first: usize,
    pub second: usize,
    pub shared_edges: Vec<usize>,
}

fn crowded_faces(faces: &[Vec<usize>], outer: usize, edges: usize) -> Option<CrowdedWitness> {
    let mut owner = vec![[usize::MAX; 2]; edges];
    for (f, face) in faces.iter().enumerate() {
        for &d in face {
            owner[d / 2][d % 2] = f;
        }
    }
    let mut shared: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
    for (e, [a, b]) in owner.iter().enumerate() {
        if *a == outer || *b == outer {
            continue;
        }
        if a == b {
            return Some(CrowdedWitness { first: *a, second: *a, shared_edges: vec![e] });
        }
        shared.entry((*a.min(b), *a.max(b))).or_default().push(e);
    }
    shared
        .into_iter()
        .find(|(_, es)| es.len() >= 2)
        .map(|((first, second), shared_edges)| CrowdedWitness { first, second, shared_edges })
}

pub fn is_crowded_embedding(e: &RotationEmbedding) -> Option<CrowdedWitness> {
    let darts: usize = e.faces.iter().map(Vec::len).sum();
    crowded_faces(&e.faces, e.outer_face, darts / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Crowdedness {
    NotPlanar,
    Crowded,
    NotCrowded,
}

/// Crowded iff every planar embedding is crowded; stops at the first
/// uncrowded one.
pub fn is_crowded(g: &MetricGraph) -> Result<Crowdedness> {
    let mut planar = false;
    let mut uncrowded = false;
    let m = g.edges.len();
    for_each_planar_rotation(g, &mut |_, faces| {
        planar = true;
        uncrowded = (0..faces.len()).any(|outer| crowded_faces(&faces, outer, m).is_none());
        !uncrowded
    })?;
    Ok(match (planar, uncrowded) {
        (false, _) => Crowdedness::NotPlanar,
        (true, true) => Crowdedness::NotCrowded,
        (true, false) => Crowdedness::Crowded,
    })
}

/// Same verdict as [`is_crowded`] using one rotation system per mirror pair.
/// Reversing every rotation mirrors the embedding, so keeping vertex 0's
/// default order suffices.
pub fn is_crowded_modulo_reflection(g: &MetricGraph) -> Result<Crowdedness> {
    let mut planar = false;
    let mut uncrowded = false;
    let m = g.edges.len();
    let at = darts_at(g);
    for_each_planar_rotation(g, &mut |rotation, faces| {
        if rotation[0] != [at[0][0], at[0][1], at[0][2]] {
            return true;
        }
        planar = true;
        uncrowded = (0..faces.len()).any(|outer| crowded_faces(&faces, outer, m).is_none());
        !uncrowded
    })?;
    Ok(match (planar, uncrowded) {
        (false, _) => Crowdedness::NotPlanar,
        (true, true) => Crowdedness::NotCrowded,
        (true, false) => Crowdedness::Crowded,
    })
}

/// Invariant of an embedding up to graph automorphism and reflection: the
/// least breadth-first dart code over all start darts and both
/// orientations, with the outer face marked.
pub fn embedding_class_key(e: &RotationEmbedding) -> Vec<usize> {
    let darts: usize = e.faces.iter().map(Vec::len).sum();
    let next = successor(&e.rotation, darts);
    let mut prev = vec![0; darts];
    for (d, &n) in next.iter().enumerate() {
        prev[n] = d;
    }
    let outer = &e.faces[e.outer_face];
    let mut best: Option<Vec<usize>> = None;
    for (rot, outer_set) in [(&next, outer.clone()), (&prev, outer.iter().map(|d| d ^ 1).collect::<Vec<_>>())] {
        let mut in_outer = vec![false; darts];
        for &d in &outer_set {
            in_outer[d] = true;
        }
        for start in 0..darts {
            let mut label = vec![usize::MAX; darts];
            let mut order = vec![start];
            label[start] = 0;
            let mut k = 0;
            while k < order.len() {
                let d = order[k];
                for x in [rot[d], d ^ 1] {
                    if label[x] == usize::MAX {
                        label[x] = order.len();
                        order.push(x);
                    }
                }
                k += 1;
            }
            let mut code = Vec::with_capacity(3 * darts);
            for &d in &order {
                code.push(label[rot[d]]);
                code.push(label[d ^ 1]);
                code.push(in_outer[d] as usize);
            }
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
    }
    best.unwrap_or_default()
}

/// Planar embeddings up to graph automorphism and reflection.
pub fn embedding_classes(g: &MetricGraph) -> Result<Vec<RotationEmbedding>> {
    let mut seen = std::collections::BTreeMap::new();
    for e in planar_embeddings(g)? {
        seen.entry(embedding_class_key(&e)).or_insert(e);
    }
    Ok(seen.into_values().collect())
}

/// Replaces the side of the two-edge cut `{e, f}` not containing `keep` by
/// a biedge: two new vertices joined by two unit edges, attached to the cut
/// edges. Both sides must have genus at least one.
pub fn biedge_surgery(g: &MetricGraph, cut: (usize, usize), keep: usize) -> Result<MetricGraph> {
    let (e, f) = cut;
    let m = g.edges.len();
    if e >= m || f >= m || e == f || keep >= g.vertices {
        return Err(Error::Precondition("cut edges or kept vertex out of range".into()));
    }
    let (count, label) = g.components_filtered(|_| true, |k| k != e && k != f);
    if count != 2 {
        return Err(Error::Precondition("the two edges do not separate the graph into two parts".into()));
    }
    let side = label[keep];
    for &c in &[e, f] {
        let x = &g.edges[c];
        if label[x.u] == label[x.v] {
            return Err(Error::Precondition(format!("edge {c} does not cross the cut")));
        }
    }
    let genus_of = |s: usize| {
        let verts = label.iter().filter(|&&l| l == s).count();
        let inner = g.edges.iter().enumerate().filter(|(k, x)| *k != e && *k != f && label[x.u] == s && label[x.v] == s).count();
        (inner + 1) as isize - verts as isize
    };
    if genus_of(0) < 1 || genus_of(1) < 1 {
        return Err(Error::Precondition("each side of the cut needs genus at least one".into()));
    }
    let kept: Vec<usize> = (0..g.vertices).filter(|&v| label[v] == side).collect();
    let mut index = vec![usize::MAX; g.vertices];
    for (i, &v) in kept.iter().enumerate() {
        index[v] = i;
    }
    let (p, q) = (kept.len(), kept.len() + 1);
    let mut edges = Vec::new();
    for (k, x) in g.edges.iter().enumerate() {
        if k == e || k == f {
            let inside = if label[x.u] == side { x.u } else { x.v };
            edges.push(GraphEdge { u: index[inside], v: if k == e { p } else { q }, len: x.len.clone() });
        } else if label[x.u] == side {
            edges.push(GraphEdge { u: index[x.u], v: index[x.v], len: x.len.clone() });
        }
    }
    let one = crate::rational::int(1);
    edges.push(GraphEdge { u: p, v: q, len: one.clone() });
    edges.push(GraphEdge { u: p, v: q, len: one });
    MetricGraph::new(kept.len() + 2, edges)
}

/// Two-edge cuts with both sides of genus at least one, as accepted by
/// [`biedge_surgery`], each with one vertex from each side.
pub fn surgery_cuts(g: &MetricGraph) -> Vec<((usize, usize), [usize; 2])> {
    let mut out = Vec::new();
    for (e, f) in g.two_cuts() {
        let x = &g.edges[e];
        for keep in [x.u, x.v] {
            if biedge_surgery(g, (e, f), keep).is_ok() {
                let other = if keep == x.u { x.v } else { x.u };
                out.push(((e, f), [keep, other]));
                break;
            }
        }
    }
    out
}
