//! Metric multigraphs with loops and parallel edges.

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{serde_str, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    #[serde(with = "serde_str")]
    pub len: Rational,
}

impl GraphEdge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite `x`.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc")]
pub struct MetricGraph {
    pub vertices: usize,
    pub edges: Vec<GraphEdge>,
}

#[derive(Deserialize)]
struct GraphDoc {
    vertices: usize,
    edges: Vec<GraphEdge>,
}

impl TryFrom<GraphDoc> for MetricGraph {
    type Error = Error;
    fn try_from(d: GraphDoc) -> Result<Self> {
        MetricGraph::new(d.vertices, d.edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub genus: usize,
    pub trivalent: bool,
    /// Edge indices.
    pub bridges: Vec<usize>,
    /// Vertex sets of the components left after deleting every bridge.
    pub two_edge_connected_components: Vec<Vec<usize>>,
}

impl MetricGraph {
    /// Validates endpoints and positivity of lengths.
    pub fn new(vertices: usize, edges: Vec<GraphEdge>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertices || e.v >= vertices {
                return Err(Error::Malformed(format!("edge {i} has an endpoint outside 0..{vertices}")));
            }
            if !e.len.is_positive() {
                return Err(Error::Malformed(format!("edge {i} has nonpositive length {}", e.len)));
            }
        }
        Ok(MetricGraph { vertices, edges })
    }

    pub fn from_triples(vertices: usize, edges: &[(usize, usize, Rational)]) -> Result<Self> {
        Self::new(vertices, edges.iter().map(|(u, v, l)| GraphEdge { u: *u, v: *v, len: l.clone() }).collect())
    }

    /// Unit lengths on every edge.
    pub fn combinatorial(vertices: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(vertices, pairs.iter().map(|&(u, v)| GraphEdge { u, v, len: Rational::one() }).collect())
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    pub fn lengths(&self) -> Vec<Rational> {
        self.edges.iter().map(|e| e.len.clone()).collect()
    }

    /// Same combinatorics with every length set to one.
    pub fn with_unit_lengths(&self) -> MetricGraph {
        MetricGraph {
            vertices: self.vertices,
            edges: self.edges.iter().map(|e| GraphEdge { u: e.u, v: e.v, len: Rational::one() }).collect(),
        }
    }

    pub fn scaled(&self, factor: &Rational) -> MetricGraph {
        MetricGraph {
            vertices: self.vertices,
            edges: self.edges.iter().map(|e| GraphEdge { u: e.u, v: e.v, len: &e.len * factor }).collect(),
        }
    }

    /// Loops contribute two.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn is_trivalent(&self) -> bool {
        self.degrees().iter().all(|&d| d == 3)
    }

    /// Edge indices incident to each vertex; a loop appears twice.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.u].push(i);
            inc[e.v].push(i);
        }
        inc
    }

    /// First Betti number, assuming connectivity.
    pub fn genus(&self) -> usize {
        (self.edges.len() + 1).saturating_sub(self.vertices)
    }

    /// Component label per vertex using only edges allowed by `keep`,
    /// ignoring vertices rejected by `alive`. Dead vertices get `usize::MAX`.
    pub fn components_filtered(&self, alive: impl Fn(usize) -> bool, keep: impl Fn(usize) -> bool) -> (usize, Vec<usize>) {
        let inc = self.incidence();
        let mut label = vec![usize::MAX; self.vertices];
        let mut count = 0;
        for s in 0..self.vertices {
            if !alive(s) || label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &ei in &inc[x] {
                    if !keep(ei) {
                        continue;
                    }
                    let y = self.edges[ei].other(x);
                    if alive(y) && label[y] == usize::MAX {
                        label[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    pub fn is_connected(&self) -> bool {
        self.vertices > 0 && self.components_filtered(|_| true, |_| true).0 == 1
    }

    fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Graph("graph is not connected".into()))
        }
    }

    /// Bridge edge indices, sorted, by a lowlink depth-first search that
    /// tracks the entering edge so parallel edges are handled.
    pub fn bridges(&self) -> Vec<usize> {
        let inc = self.incidence();
        let n = self.vertices;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut out = Vec::new();
        let mut time = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (vertex, entering edge, next incidence position)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            while let Some(&mut (x, via, ref mut pos)) = stack.last_mut() {
                if *pos < inc[x].len() {
                    let ei = inc[x][*pos];
                    *pos += 1;
                    if ei == via || self.edges[ei].is_loop() {
                        continue;
                    }
                    let y = self.edges[ei].other(x);
                    if disc[y] == usize::MAX {
                        disc[y] = time;
                        low[y] = time;
                        time += 1;
                        stack.push((y, ei, 0));
                    } else {
                        low[x] = low[x].min(disc[y]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent] = low[parent].min(low[x]);
                        if low[x] > disc[parent] {
                            out.push(via);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn two_edge_connected_components(&self) -> Vec<Vec<usize>> {
        let bridges = self.bridges();
        let (count, label) = self.components_filtered(|_| true, |e| bridges.binary_search(&e).is_err());
        let mut comps = vec![Vec::new(); count];
        for (v, &l) in label.iter().enumerate() {
            comps[l].push(v);
        }
        comps.sort();
        comps
    }

    pub fn stats(&self) -> Result<GraphStats> {
        self.require_connected()?;
        Ok(GraphStats {
            genus: self.genus(),
            trivalent: self.is_trivalent(),
            bridges: self.bridges(),
            two_edge_connected_components: self.two_edge_connected_components(),
        })
    }

    /// Subgraph on `vertices` with the edges between them (bridges of the
    /// parent excluded when `skip` says so), vertices renumbered in order.
    pub fn induced(&self, vertices: &[usize], skip: impl Fn(usize) -> bool) -> MetricGraph {
        let index: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, e)| !skip(*i) && index.contains_key(&e.u) && index.contains_key(&e.v))
            .map(|(_, e)| GraphEdge { u: index[&e.u], v: index[&e.v], len: e.len.clone() })
            .collect();
        MetricGraph { vertices: vertices.len(), edges }
    }

    /// Removes every vertex of degree two that is not the base of a loop,
    /// joining its two edges and adding their lengths.
    pub fn smoothed(&self) -> MetricGraph {
        let mut edges: Vec<Option<GraphEdge>> = self.edges.iter().cloned().map(Some).collect();
        let mut alive = vec![true; self.vertices];
        loop {
            let mut inc: Vec<Vec<usize>> = vec![Vec::new(); self.vertices];
            for (i, e) in edges.iter().enumerate() {
                if let Some(e) = e {
                    inc[e.u].push(i);
                    inc[e.v].push(i);
                }
            }
            let Some(x) = (0..self.vertices).find(|&x| {
                alive[x] && inc[x].len() == 2 && inc[x][0] != inc[x][1]
            }) else {
                break;
            };
            let e1 = edges[inc[x][0]].take().unwrap();
            let e2 = edges[inc[x][1]].take().unwrap();
            let a = e1.other(x);
            let b = e2.other(x);
            edges[inc[x][0]] = Some(GraphEdge { u: a, v: b, len: &e1.len + &e2.len });
            alive[x] = false;
        }
        let keep: Vec<usize> = (0..self.vertices).filter(|&v| alive[v]).collect();
        let kept = MetricGraph { vertices: self.vertices, edges: edges.into_iter().flatten().collect() };
        kept.induced(&keep, |_| false)
    }

    /// Components of `G \ {s}` viewed as a topological space: components of
    /// the vertex-deleted graph plus one open arc per loop at `s`.
    pub fn components_after_removing(&self, s: usize) -> usize {
        let loops = self.edges.iter().filter(|e| e.u == s && e.v == s).count();
        self.components_filtered(|v| v != s, |_| true).0 + loops
    }

    /// A vertex whose removal leaves three components.
    pub fn is_sprawling(&self) -> Option<usize> {
        (0..self.vertices).find(|&s| self.components_after_removing(s) == 3)
    }

    /// A vertex incident to three distinct bridges.
    pub fn three_bridges_meet(&self) -> Option<usize> {
        let bridges = self.bridges();
        let mut count = vec![0; self.vertices];
        for &b in &bridges {
            count[self.edges[b].u] += 1;
            count[self.edges[b].v] += 1;
        }
        (0..self.vertices).find(|&v| count[v] >= 3)
    }

    /// Edge pairs `{e, f}`, neither a bridge, whose joint removal disconnects.
    pub fn two_cuts(&self) -> Vec<(usize, usize)> {
        let bridges = self.bridges();
        let m = self.edges.len();
        let mut out = Vec::new();
        for e in 0..m {
            if bridges.contains(&e) || self.edges[e].is_loop() {
                continue;
            }
            for f in e + 1..m {
                if bridges.contains(&f) || self.edges[f].is_loop() {
                    continue;
                }
                if self.components_filtered(|_| true, |k| k != e && k != f).0 > 1 {
                    out.push((e, f));
                }
            }
        }
        out
    }
}

pub fn theta(lengths: [Rational; 3]) -> MetricGraph {
    let [a, b, c] = lengths;
    MetricGraph::from_triples(2, &[(0, 1, a), (0, 1, b), (0, 1, c)]).expect("valid theta")
}

/// Two loops joined by a bridge.
pub fn dumbbell(loop0: Rational, bridge: Rational, loop1: Rational) -> MetricGraph {
    MetricGraph::from_triples(2, &[(0, 0, loop0), (0, 1, bridge), (1, 1, loop1)]).expect("valid dumbbell")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn comb(n: usize, p: &[(usize, usize)]) -> MetricGraph {
        MetricGraph::combinatorial(n, p).unwrap()
    }

    #[test]
    fn theta_and_dumbbell_stats() {
        let t = theta([int(1), int(1), int(1)]);
        let s = t.stats().unwrap();
        assert_eq!((s.genus, s.trivalent, s.bridges.len()), (2, true, 0));
        let d = dumbbell(int(1), int(2), int(3));
        let s = d.stats().unwrap();
        assert_eq!((s.genus, s.trivalent, s.bridges.clone()), (2, true, vec![1]));
        assert_eq!(s.two_edge_connected_components, vec![vec![0], vec![1]]);
    }

    #[test]
    fn disconnected_rejected() {
        let g = comb(4, &[(0, 1), (0, 1), (0, 1), (2, 3), (2, 3), (2, 3)]);
        assert!(g.stats().is_err());
        assert!(MetricGraph::from_triples(2, &[(0, 1, int(0))]).is_err());
        assert!(MetricGraph::from_triples(2, &[(0, 2, int(1))]).is_err());
    }

    #[test]
    fn sprawling_examples() {
        // three loops bridged to a center
        let g = comb(4, &[(1, 1), (2, 2), (3, 3), (0, 1), (0, 2), (0, 3)]);
        assert_eq!(g.genus(), 3);
        assert_eq!(g.is_sprawling(), Some(0));
        assert_eq!(g.three_bridges_meet(), Some(0));
        assert_eq!(theta([int(1), int(1), int(1)]).is_sprawling(), None);
        assert_eq!(dumbbell(int(1), int(1), int(1)).is_sprawling(), None);
    }

    #[test]
    fn smoothing_and_two_cuts() {
        // two thetas joined by a pair of edges: each theta has one edge subdivided
        let g = comb(
            4,
            &[(0, 1), (0, 1), (0, 2), (1, 2), (2, 3), (3, 3)],
        );
        assert_eq!(g.degrees(), vec![3, 3, 3, 3]);
        assert_eq!(g.bridges(), vec![4]);
        let comps = g.two_edge_connected_components();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3]]);
        let piece = g.induced(&comps[0], |e| e == 4).smoothed();
        assert_eq!((piece.vertices, piece.num_edges()), (2, 3));
        assert_eq!(piece.lengths().iter().filter(|l| **l == int(2)).count(), 1);
        let cuts = g.two_cuts();
        assert!(cuts.contains(&(2, 3)));
    }
}
