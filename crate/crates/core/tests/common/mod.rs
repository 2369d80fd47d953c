//! Independent oracles shared by integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

/// Symmetric multiplicity matrix; the diagonal counts loops.
pub type Matrix = Vec<Vec<u8>>;

/// Every labelled connected trivalent multigraph on `n` vertices, generated
/// row by row over the upper triangle of the multiplicity matrix.
pub fn labelled_trivalent(n: usize, visit: &mut dyn FnMut(&Matrix)) {
    fn degree(m: &Matrix, v: usize) -> usize {
        (0..m.len()).map(|w| m[v][w] as usize * if v == w { 2 } else { 1 }).sum()
    }
    fn fill(m: &mut Matrix, row: usize, col: usize, visit: &mut dyn FnMut(&Matrix)) {
        let n = m.len();
        if row == n {
            if connected(m) {
                visit(m);
            }
            return;
        }
        if col == n {
            if degree(m, row) == 3 {
                fill(m, row + 1, row + 1, visit);
            }
            return;
        }
        for k in 0..=3u8 {
            m[row][col] = k;
            m[col][row] = k;
            let ok = degree(m, row) <= 3 && (col == row || degree(m, col) <= 3);
            if ok {
                fill(m, row, col + 1, visit);
            }
        }
        m[row][col] = 0;
        m[col][row] = 0;
    }
    let mut m = vec![vec![0u8; n]; n];
    fill(&mut m, 0, 0, visit);
}

pub fn connected(m: &Matrix) -> bool {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if m[v][w] > 0 && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Cheap isomorphism invariant: per-vertex loop count, sorted neighbour
/// multiplicities and BFS distance profile, sorted.
fn invariant(m: &Matrix) -> Vec<Vec<u8>> {
    let n = m.len();
    let mut sig: Vec<Vec<u8>> = (0..n)
        .map(|v| {
            let mut row: Vec<u8> = (0..n).filter(|&w| w != v).map(|w| m[v][w]).collect();
            row.sort_unstable();
            let mut dist = vec![u8::MAX; n];
            dist[v] = 0;
            let mut queue = std::collections::VecDeque::from([v]);
            while let Some(x) = queue.pop_front() {
                for y in 0..n {
                    if m[x][y] > 0 && dist[y] == u8::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            dist.sort_unstable();
            let mut s = vec![m[v][v]];
            s.extend(row);
            s.extend(dist);
            s
        })
        .collect();
    sig.sort();
    sig
}

/// Plain backtracking over vertex bijections.
pub fn isomorphic(a: &Matrix, b: &Matrix) -> bool {
    let n = a.len();
    fn rec(k: usize, a: &Matrix, b: &Matrix, p: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let n = a.len();
        if k == n {
            return true;
        }
        for y in 0..n {
            if used[y] {
                continue;
            }
            if (0..k).all(|i| a[k][i] == b[y][p[i]]) && a[k][k] == b[y][y] {
                p.push(y);
                used[y] = true;
                if rec(k + 1, a, b, p, used) {
                    return true;
                }
                p.pop();
                used[y] = false;
            }
        }
        false
    }
    n == b.len() && rec(0, a, b, &mut Vec::new(), &mut vec![false; n])
}

/// Isomorphism classes of connected trivalent multigraphs of genus `g`.
pub fn trivalent_classes(g: usize) -> Vec<Matrix> {
    let n = 2 * g - 2;
    let mut buckets: HashMap<Vec<Vec<u8>>, Vec<Matrix>> = HashMap::new();
    labelled_trivalent(n, &mut |m| {
        let reps = buckets.entry(invariant(m)).or_default();
        if !reps.iter().any(|r| isomorphic(r, m)) {
            reps.push(m.clone());
        }
    });
    buckets.into_values().flatten().collect()
}

pub fn to_pairs(m: &Matrix) -> Vec<(usize, usize)> {
    let n = m.len();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u..n {
            for _ in 0..m[u][v] {
                out.push((u, v));
            }
        }
    }
    out
}
