//! Chains and ladders: the two families of hyperelliptic trivalent graphs.

use std::collections::BTreeSet;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphEdge, MetricGraph};
use crate::hyperelliptic::is_hyperelliptic;
use crate::iso::{canonical_form, find_isomorphism, for_each_isomorphism, Bundles, CanonicalForm};
use crate::rational::{serde_str, serde_vec, Rational};

/// Edge lengths of a chain of genus `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLengths {
    #[serde(with = "serde_vec")]
    pub loops: Vec<Rational>,
    /// `g - 2` pairs.
    pub pairs: Vec<[ChainLength; 2]>,
    /// `g - 1` split edges.
    #[serde(with = "serde_vec")]
    pub splits: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChainLength(#[serde(with = "serde_str")] pub Rational);

impl ChainLengths {
    pub fn uniform(g: usize, len: Rational) -> Self {
        ChainLengths {
            loops: vec![len.clone(), len.clone()],
            pairs: (0..g.saturating_sub(2)).map(|_| [ChainLength(len.clone()), ChainLength(len.clone())]).collect(),
            splits: vec![len; g.saturating_sub(1)],
        }
    }
}

/// Edge roles of a chain inside a concrete graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStructure {
    pub genus: usize,
    /// Node splitting choices, `g - 1` bits, lexicographically least of the
    /// string and its reverse. `false` splits the node by a bridge.
    pub bits: Vec<bool>,
    /// Edge indices of the first and last loop (edges parallel to the end
    /// split edge when that node is split by a rung).
    pub loops: [usize; 2],
    pub pairs: Vec<[usize; 2]>,
    pub splits: Vec<usize>,
    /// Edge indices `e_0, ..., e_g` of the standard embedding: first loop,
    /// the split edges in order, last loop.
    pub vertical: Vec<usize>,
    pub lengths: ChainLengths,
}

fn parse_bits(g: usize, bits: &[bool]) -> Result<()> {
    if g < 2 {
        return Err(Error::Domain(format!("chains need genus >= 2, got {g}")));
    }
    if bits.len() != g - 1 {
        return Err(Error::Domain(format!("a genus-{g} chain needs {} bits, got {}", g - 1, bits.len())));
    }
    Ok(())
}

/// Edge order: first loop, then for each node its split edge followed by the
/// pair to the next node, then the last loop.
pub fn build_chain(g: usize, bits: &[bool], lengths: &ChainLengths) -> Result<MetricGraph> {
    parse_bits(g, bits)?;
    if lengths.loops.len() != 2 || lengths.pairs.len() != g - 2 || lengths.splits.len() != g - 1 {
        return Err(Error::Domain("chain lengths have the wrong shape".into()));
    }
    let all = lengths.loops.iter().chain(&lengths.splits).chain(lengths.pairs.iter().flat_map(|p| [&p[0].0, &p[1].0]));
    if let Some(l) = all.into_iter().find(|l| !l.is_positive()) {
        return Err(Error::Domain(format!("chain length {l} is not positive")));
    }
    let a = |i: usize| 2 * i;
    let b = |i: usize| 2 * i + 1;
    let mut edges = Vec::with_capacity(3 * g - 3);
    let first = if bits[0] { (a(0), b(0)) } else { (a(0), a(0)) };
    edges.push(GraphEdge { u: first.0, v: first.1, len: lengths.loops[0].clone() });
    for i in 0..g - 1 {
        edges.push(GraphEdge { u: a(i), v: b(i), len: lengths.splits[i].clone() });
        if i + 1 < g - 1 {
            let left = if bits[i] { [a(i), b(i)] } else { [b(i), b(i)] };
            let right = if bits[i + 1] { [a(i + 1), b(i + 1)] } else { [a(i + 1), a(i + 1)] };
            for k in 0..2 {
                edges.push(GraphEdge { u: left[k], v: right[k], len: lengths.pairs[i][k].0.clone() });
            }
        }
    }
    let l = g - 2;
    let last = if bits[l] { (a(l), b(l)) } else { (b(l), b(l)) };
    edges.push(GraphEdge { u: last.0, v: last.1, len: lengths.loops[1].clone() });
    MetricGraph::new(2 * g - 2, edges)
}

fn canonical_bits(bits: &[bool]) -> Vec<bool> {
    let rev: Vec<bool> = bits.iter().rev().copied().collect();
    if rev < bits.to_vec() {
        rev
    } else {
        bits.to_vec()
    }
}

/// Bit strings of length `g - 1` up to reversal, in increasing order.
pub fn chain_bit_strings(g: usize) -> Vec<Vec<bool>> {
    if g < 2 {
        return Vec::new();
    }
    let k = g - 1;
    let mut out = BTreeSet::new();
    for mask in 0u64..(1 << k) {
        let bits: Vec<bool> = (0..k).map(|i| mask >> (k - 1 - i) & 1 == 1).collect();
        out.insert(canonical_bits(&bits));
    }
    out.into_iter().collect()
}

/// One unit-length chain per combinatorial type.
pub fn enumerate_chains(g: usize) -> Result<Vec<(Vec<bool>, MetricGraph)>> {
    let unit = ChainLengths::uniform(g, Rational::from_integer(1.into()));
    chain_bit_strings(g).into_iter().map(|bits| build_chain(g, &bits, &unit).map(|c| (bits, c))).collect()
}

/// `2^(g-2) + 2^floor((g-2)/2)`.
pub fn chain_count(g: usize) -> u64 {
    assert!(g >= 2, "chains need genus >= 2");
    (1u64 << (g - 2)) + (1u64 << ((g - 2) / 2))
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bit_string(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse(format!("bit string {s:?} has a character other than 0 or 1"))),
        })
        .collect()
}

/// Recognises chains and recovers their edge roles and lengths.
pub fn is_chain(g: &MetricGraph) -> Option<ChainStructure> {
    let genus = g.genus();
    if genus < 2 || !g.is_connected() || !g.is_trivalent() || g.vertices != 2 * genus - 2 {
        return None;
    }
    let target = canonical_form(g);
    let unit = ChainLengths::uniform(genus, Rational::from_integer(1.into()));
    for bits in chain_bit_strings(genus) {
        let model = build_chain(genus, &bits, &unit).ok()?;
        if canonical_form(&model) != target {
            continue;
        }
        let phi = find_isomorphism(&model, g, false)?;
        return Some(structure_from_map(genus, bits, &model, g, &phi));
    }
    None
}

/// Transfers edge roles from the model chain along the vertex map `phi`.
fn structure_from_map(genus: usize, bits: Vec<bool>, model: &MetricGraph, g: &MetricGraph, phi: &[usize]) -> ChainStructure {
    let bundles = Bundles::new(g, false);
    let n = g.vertices;
    let mut taken = vec![false; g.edges.len()];
    let mut image = |e: usize| -> usize {
        let (u, v) = (phi[model.edges[e].u], phi[model.edges[e].v]);
        let k = bundles.edges[u * n + v].iter().copied().find(|&f| !taken[f]).expect("isomorphism maps bundles");
        taken[k] = true;
        k
    };
    let m = model.edges.len();
    let first = image(0);
    let mut splits = Vec::new();
    let mut pairs = Vec::new();
    let mut k = 1;
    for i in 0..genus - 1 {
        splits.push(image(k));
        k += 1;
        if i + 1 < genus - 1 {
            pairs.push([image(k), image(k + 1)]);
            k += 2;
        }
    }
    let last = image(m - 1);
    let len = |e: usize| g.edges[e].len.clone();
    let lengths = ChainLengths {
        loops: vec![len(first), len(last)],
        pairs: pairs.iter().map(|p| [ChainLength(len(p[0])), ChainLength(len(p[1]))]).collect(),
        splits: splits.iter().map(|&e| len(e)).collect(),
    };
    let mut vertical = vec![first];
    vertical.extend(&splits);
    vertical.push(last);
    ChainStructure { genus, bits, loops: [first, last], pairs, splits, vertical, lengths }
}

/// For a chain, hyperelliptic iff the two edges of every pair have equal
/// length; vertical edges are reversed by the involution and never constrain.
pub fn is_hyperelliptic_chain(g: &MetricGraph) -> Result<bool> {
    let s = is_chain(g).ok_or_else(|| Error::Graph("not a chain".into()))?;
    Ok(s.lengths.pairs.iter().all(|[x, y]| x == y))
}

/// A tree on `n` nodes with maximum degree three.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Tree {
    pub fn new(nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let t = Tree { nodes, edges };
        if nodes == 0 || t.edges.len() != nodes - 1 {
            return Err(Error::Domain("a tree on n nodes has n - 1 edges".into()));
        }
        let g = MetricGraph::combinatorial(nodes, &t.edges)?;
        if !g.is_connected() {
            return Err(Error::Domain("tree is not connected".into()));
        }
        if let Some(v) = g.degrees().iter().position(|&d| d > 3) {
            return Err(Error::Domain(format!("tree node {v} has degree above three")));
        }
        Ok(t)
    }

    pub fn path(nodes: usize) -> Self {
        Tree { nodes, edges: (1..nodes).map(|i| (i - 1, i)).collect() }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }
}

/// Tree nodes `v` and copies `v + n`; tree edges are doubled with the same
/// length; node `v` gets `3 - deg(v)` rungs. Rung lengths are consumed in
/// node order.
pub fn build_ladder(tree: &Tree, tree_lengths: &[Rational], rung_lengths: &[Rational]) -> Result<MetricGraph> {
    let tree = Tree::new(tree.nodes, tree.edges.clone())?;
    let n = tree.nodes;
    let deg = tree.degrees();
    let rungs: usize = deg.iter().map(|d| 3 - d).sum();
    if tree_lengths.len() != tree.edges.len() || rung_lengths.len() != rungs {
        return Err(Error::Domain(format!(
            "ladder needs {} tree lengths and {rungs} rung lengths",
            tree.edges.len()
        )));
    }
    let mut edges = Vec::new();
    for (&(u, v), l) in tree.edges.iter().zip(tree_lengths) {
        edges.push(GraphEdge { u, v, len: l.clone() });
        edges.push(GraphEdge { u: u + n, v: v + n, len: l.clone() });
    }
    let mut k = 0;
    for v in 0..n {
        for _ in 0..3 - deg[v] {
            edges.push(GraphEdge { u: v, v: v + n, len: rung_lengths[k].clone() });
            k += 1;
        }
    }
    MetricGraph::new(2 * n, edges)
}

/// Finds a fixed-point-free involution whose orbit edges are the rungs and
/// whose remaining edges form two trees swapped by it. Returns one tree.
pub fn is_ladder(g: &MetricGraph) -> Option<Tree> {
    if !g.is_connected() || !g.is_trivalent() || !g.vertices.is_multiple_of(2) {
        return None;
    }
    let b = Bundles::new(g, false);
    let mut found = None;
    for_each_isomorphism(&b, &b, &mut |sigma| {
        let n = sigma.len();
        if (0..n).any(|v| sigma[v] == v || sigma[sigma[v]] != v) {
            return true;
        }
        let rung = |e: &GraphEdge| sigma[e.u] == e.v;
        let (count, label) = g.components_filtered(|_| true, |k| !rung(&g.edges[k]));
        if count != 2 || (0..n).any(|v| label[v] == label[sigma[v]]) {
            return true;
        }
        let side: Vec<usize> = (0..n).filter(|&v| label[v] == 0).collect();
        let tree_edges: Vec<&GraphEdge> =
            g.edges.iter().filter(|e| !rung(e) && label[e.u] == 0 && label[e.v] == 0).collect();
        if tree_edges.len() + 1 != side.len() {
            return true;
        }
        let index = |v: usize| side.iter().position(|&s| s == v).unwrap();
        found = Some(Tree { nodes: side.len(), edges: tree_edges.iter().map(|e| (index(e.u), index(e.v))).collect() });
        false
    });
    found
}

/// Canonical forms of every chain type of genus `g`.
pub fn chain_forms(g: usize) -> Result<BTreeSet<CanonicalForm>> {
    Ok(enumerate_chains(g)?.iter().map(|(_, c)| canonical_form(c)).collect())
}

/// Cross-check used by tests and the CLI: the chain criterion and the
/// general involution search must agree.
pub fn chain_verdicts_agree(g: &MetricGraph) -> Result<bool> {
    Ok(is_hyperelliptic_chain(g)? == is_hyperelliptic(g)?.verdict)
}
