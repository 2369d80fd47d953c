//! Hyperellipticity of metric graphs via involutions with tree quotients.
//!
//! For a vertex involution σ preserving edge bundles, the edge action is
//! chosen to minimise the genus of the quotient:
//! - bundles between two swapped vertices have every edge inverted,
//! - loops at fixed vertices are reversed,
//! - edges between two fixed vertices are swapped in equal-length pairs.
//!
//! Inverted edges and reversed loops are subdivided at their midpoints, so
//! each contributes one quotient edge and one quotient vertex.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::iso::{for_each_isomorphism, Bundles};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperellipticityWitness {
    pub verdict: bool,
    /// Vertex involution attaining `quotient_genus`.
    pub involution: Option<Vec<usize>>,
    /// Edge permutation of that involution; inverted edges map to themselves.
    pub edge_involution: Option<Vec<usize>>,
    /// Edges inverted end to end or loops reversed.
    pub inverted: Vec<usize>,
    /// Smallest quotient genus over all involutions.
    pub quotient_genus: usize,
}

struct EdgeAction {
    perm: Vec<usize>,
    inverted: Vec<usize>,
    quotient_genus: usize,
}

fn best_edge_action(g: &MetricGraph, b: &Bundles, sigma: &[usize]) -> EdgeAction {
    let n = g.vertices;
    let m = g.edges.len();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut inverted = Vec::new();
    let mut q_edges = 0usize;
    let mut q_vertices = (0..n).filter(|&v| sigma[v] >= v).count();
    for u in 0..n {
        for v in u..n {
            let bundle = &b.edges[u * n + v];
            if bundle.is_empty() {
                continue;
            }
            let (su, sv) = (sigma[u], sigma[v]);
            let (lo, hi) = if su <= sv { (su, sv) } else { (sv, su) };
            if (lo, hi) != (u, v) {
                if (lo, hi) < (u, v) {
                    continue;
                }
                // pair bundle (u,v) with (lo,hi) by length
                let image = &b.edges[lo * n + hi];
                let mut by_len: BTreeMap<&Rational, Vec<usize>> = BTreeMap::new();
                for &f in image {
                    by_len.entry(&g.edges[f].len).or_default().push(f);
                }
                for &e in bundle {
                    let f = by_len.get_mut(&g.edges[e].len).and_then(|l| l.pop()).expect("bundles match");
                    perm[e] = f;
                    perm[f] = e;
                }
                q_edges += bundle.len();
            } else if u == v || su == u {
                // loops at a fixed vertex, or edges between fixed vertices
                if u == v {
                    inverted.extend(bundle.iter().copied());
                    q_edges += bundle.len();
                    q_vertices += bundle.len();
                } else {
                    let mut by_len: BTreeMap<&Rational, Vec<usize>> = BTreeMap::new();
                    for &e in bundle {
                        by_len.entry(&g.edges[e].len).or_default().push(e);
                    }
                    for (_, es) in by_len {
                        for pair in es.chunks(2) {
                            if let [e, f] = *pair {
                                perm[e] = f;
                                perm[f] = e;
                            }
                            q_edges += 1;
                        }
                    }
                }
            } else {
                // endpoints swapped: invert every edge
                inverted.extend(bundle.iter().copied());
                q_edges += bundle.len();
                q_vertices += bundle.len();
            }
        }
    }
    inverted.sort_unstable();
    EdgeAction { perm, inverted, quotient_genus: (q_edges + 1).saturating_sub(q_vertices) }
}

fn search(g: &MetricGraph, metric: bool) -> Result<HyperellipticityWitness> {
    if !g.is_connected() {
        return Err(Error::Graph("graph is not connected".into()));
    }
    if g.genus() < 2 {
        return Err(Error::Domain(format!("hyperellipticity needs genus >= 2, got {}", g.genus())));
    }
    let work = if metric { g.clone() } else { g.with_unit_lengths() };
    let b = Bundles::new(&work, true);
    let mut best: Option<(Vec<usize>, EdgeAction)> = None;
    for_each_isomorphism(&b, &b, &mut |sigma| {
        if (0..sigma.len()).any(|v| sigma[sigma[v]] != v) {
            return true;
        }
        let act = best_edge_action(&work, &b, sigma);
        let better = best.as_ref().is_none_or(|(_, a)| act.quotient_genus < a.quotient_genus);
        if better {
            best = Some((sigma.to_vec(), act));
        }
        best.as_ref().unwrap().1.quotient_genus > 0
    });
    let (sigma, act) = best.expect("identity is an involution");
    Ok(HyperellipticityWitness {
        verdict: act.quotient_genus == 0,
        involution: Some(sigma),
        edge_involution: Some(act.perm),
        inverted: act.inverted,
        quotient_genus: act.quotient_genus,
    })
}

/// Metric test: lengths must be preserved by the involution.
pub fn is_hyperelliptic(g: &MetricGraph) -> Result<HyperellipticityWitness> {
    search(g, true)
}

/// Whether some metric on the combinatorial type is hyperelliptic.
pub fn admits_hyperelliptic_metric(g: &MetricGraph) -> Result<bool> {
    Ok(search(g, false)?.verdict)
}

/// A combinatorial involution with tree quotient, together with the length
/// equalities a metric must satisfy for it to act isometrically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionPattern {
    pub involution: Vec<usize>,
    /// Edge pairs `(e, f)`, `e < f`, swapped by the involution.
    pub equal_pairs: Vec<(usize, usize)>,
}

/// Every way a combinatorial involution can act on edges with a tree
/// quotient. A metric is hyperelliptic iff it satisfies the equalities of
/// at least one pattern. Choices only arise between bundles swapped with
/// each other; elsewhere the genus-minimising action is forced.
pub fn involution_patterns(g: &MetricGraph) -> Result<Vec<InvolutionPattern>> {
    if !g.is_connected() {
        return Err(Error::Graph("graph is not connected".into()));
    }
    let unit = g.with_unit_lengths();
    let b = Bundles::new(&unit, false);
    let n = g.vertices;
    let mut out = Vec::new();
    for_each_isomorphism(&b, &b, &mut |sigma| {
        if (0..n).any(|v| sigma[sigma[v]] != v) || best_edge_action(&unit, &b, sigma).quotient_genus != 0 {
            return true;
        }
        let mut forced = Vec::new();
        let mut choices: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for u in 0..n {
            for v in u..n {
                let bundle = &b.edges[u * n + v];
                if bundle.is_empty() {
                    continue;
                }
                let (su, sv) = (sigma[u], sigma[v]);
                let (lo, hi) = if su <= sv { (su, sv) } else { (sv, su) };
                if (lo, hi) > (u, v) {
                    choices.push((bundle.clone(), b.edges[lo * n + hi].clone()));
                } else if (lo, hi) == (u, v) && u != v && su == u && bundle.len() == 2 {
                    forced.push((bundle[0].min(bundle[1]), bundle[0].max(bundle[1])));
                }
            }
        }
        let mut partial = vec![forced];
        for (from, to) in &choices {
            let mut next = Vec::new();
            for base in &partial {
                for perm in permutations(to) {
                    let mut pairs = base.clone();
                    pairs.extend(from.iter().zip(&perm).map(|(&e, &f)| (e.min(f), e.max(f))));
                    next.push(pairs);
                }
            }
            partial = next;
        }
        for mut equal_pairs in partial {
            equal_pairs.sort_unstable();
            out.push(InvolutionPattern { involution: sigma.to_vec(), equal_pairs });
        }
        true
    });
    Ok(out)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{dumbbell, theta};
    use crate::rational::int;

    #[test]
    fn theta_graphs() {
        let w = is_hyperelliptic(&theta([int(1), int(1), int(1)])).unwrap();
        assert!(w.verdict);
        assert_eq!(w.involution, Some(vec![1, 0]));
        // any theta is hyperelliptic: swap the two vertices, invert all edges
        assert!(is_hyperelliptic(&theta([int(1), int(2), int(5)])).unwrap().verdict);
        assert!(is_hyperelliptic(&dumbbell(int(1), int(4), int(2))).unwrap().verdict);
    }

    #[test]
    fn genus_checks() {
        let cycle = MetricGraph::from_triples(1, &[(0, 0, int(1))]).unwrap();
        assert!(is_hyperelliptic(&cycle).is_err());
    }

    #[test]
    fn k4_needs_no_metric_to_fail() {
        let k4 = MetricGraph::combinatorial(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        // K4 is a genus-3 ladder-free graph without hyperelliptic involution
        assert!(!is_hyperelliptic(&k4).unwrap().verdict);
        assert!(!admits_hyperelliptic_metric(&k4).unwrap());
        assert!(involution_patterns(&k4).unwrap().is_empty());
    }

    #[test]
    fn patterns_agree_with_metric_search() {
        use crate::chains::{build_chain, ChainLength, ChainLengths};
        let lengths = ChainLengths {
            loops: vec![int(1), int(2)],
            pairs: vec![[ChainLength(int(3)), ChainLength(int(4))]],
            splits: vec![int(5), int(6)],
        };
        let c = build_chain(3, &[true, true], &lengths).unwrap();
        let satisfied = |g: &MetricGraph| {
            involution_patterns(g).unwrap().iter().any(|p| p.equal_pairs.iter().all(|&(e, f)| g.edges[e].len == g.edges[f].len))
        };
        assert!(!satisfied(&c));
        assert!(!is_hyperelliptic(&c).unwrap().verdict);
        let mut fixed = c.clone();
        fixed.edges[3].len = fixed.edges[2].len.clone();
        assert_eq!(satisfied(&fixed), is_hyperelliptic(&fixed).unwrap().verdict);
        assert!(satisfied(&fixed));
    }
}
