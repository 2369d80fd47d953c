//! Connected trivalent multigraphs of small genus, up to isomorphism.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::iso::{canonical_form, CanonicalForm};

pub const MAX_CATALOG_GENUS: usize = 5;

/// Calls `visit` once per labelled trivalent multigraph on `n` vertices,
/// given as sorted `(u, v)` pairs. Edges are added at the lowest vertex with
/// free valence, to partners in nondecreasing order.
pub fn for_each_labelled_trivalent(n: usize, visit: &mut dyn FnMut(&[(usize, usize)])) {
    fn rec(rem: &mut [usize], floor: usize, edges: &mut Vec<(usize, usize)>, visit: &mut dyn FnMut(&[(usize, usize)])) {
        let Some(v) = rem.iter().position(|&r| r > 0) else {
            visit(edges);
            return;
        };
        // `floor` only applies while still filling the same vertex
        let start = match edges.last() {
            Some(&(u, _)) if u == v => floor,
            _ => v,
        };
        for w in start..rem.len() {
            let need_ok = if w == v { rem[v] >= 2 } else { rem[w] >= 1 };
            if !need_ok {
                continue;
            }
            if w == v {
                rem[v] -= 2;
            } else {
                rem[v] -= 1;
                rem[w] -= 1;
            }
            edges.push((v, w));
            rec(rem, w, edges, visit);
            edges.pop();
            if w == v {
                rem[v] += 2;
            } else {
                rem[v] += 1;
                rem[w] += 1;
            }
        }
    }
    let mut rem = vec![3; n];
    rec(&mut rem, 0, &mut Vec::new(), visit);
}

/// Canonical forms of all connected trivalent multigraphs of genus `g`.
pub fn trivalent_forms(g: usize) -> Result<BTreeSet<CanonicalForm>> {
    if !(2..=MAX_CATALOG_GENUS).contains(&g) {
        return Err(Error::Guard(format!("trivalent catalog supports genus 2..={MAX_CATALOG_GENUS}, got {g}")));
    }
    let n = 2 * g - 2;
    let mut forms = BTreeSet::new();
    for_each_labelled_trivalent(n, &mut |edges| {
        let graph = MetricGraph::combinatorial(n, edges).expect("generated pairs are in range");
        if graph.is_connected() {
            forms.insert(canonical_form(&graph));
        }
    });
    Ok(forms)
}

/// One unit-length representative per isomorphism class, sorted by
/// canonical form and labelled canonically.
pub fn enumerate_trivalent_graphs(g: usize) -> Result<Vec<MetricGraph>> {
    Ok(trivalent_forms(g)?.iter().map(CanonicalForm::to_graph).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard() {
        assert!(matches!(enumerate_trivalent_graphs(1), Err(Error::Guard(_))));
        assert!(matches!(enumerate_trivalent_graphs(6), Err(Error::Guard(_))));
    }

    #[test]
    fn small_catalogs() {
        let g2 = enumerate_trivalent_graphs(2).unwrap();
        assert_eq!(g2.len(), 2);
        assert_eq!(enumerate_trivalent_graphs(3).unwrap().len(), 5);
        for g in g2 {
            assert_eq!(g.genus(), 2);
            assert!(g.is_trivalent());
        }
    }

    #[test]
    fn labelled_generation_has_no_repeats() {
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for_each_labelled_trivalent(4, &mut |e| {
            count += 1;
            seen.insert(e.to_vec());
        });
        assert_eq!(seen.len(), count);
    }
}
