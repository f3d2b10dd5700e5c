//! Average-linkage dendrogram rendered as Graphviz DOT, for reports.

use std::fmt::Write;

use super::DistanceMatrix;
use crate::scalar::Scalar;

/// One agglomeration step: nodes `left` and `right` join into `node` at
/// `height`. Leaves are `0..n`, internal nodes continue from `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub node: usize,
    pub height: f64,
}

/// UPGMA merge sequence. Infinite entries are treated as one more than the
/// largest finite distance; ties merge the lowest-indexed pair first.
pub fn average_linkage<T: Scalar>(matrix: &DistanceMatrix<T>) -> Vec<Merge> {
    let n = matrix.len();
    let cap = matrix.max_entry().and_then(|v| v.to_f64()).unwrap_or(0.0) + 1.0;
    let mut dist: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| matrix.get(i, j).and_then(|v| v.to_f64()).unwrap_or(cap))
                .collect()
        })
        .collect();
    // active clusters: (node id, size, row index in `dist`)
    let mut active: Vec<(usize, usize)> = (0..n).map(|i| (i, 1)).collect();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut merges = Vec::new();
    let mut next = n;
    while active.len() > 1 {
        let mut best = (f64::INFINITY, 0, 1);
        for a in 0..active.len() {
            for b in a + 1..active.len() {
                let d = dist[rows[a]][rows[b]];
                if d < best.0 {
                    best = (d, a, b);
                }
            }
        }
        let (height, a, b) = best;
        let (na, sa) = active[a];
        let (nb, sb) = active[b];
        let (ra, rb) = (rows[a], rows[b]);
        for &rk in &rows[..active.len()] {
            let merged = (dist[ra][rk] * sa as f64 + dist[rb][rk] * sb as f64) / (sa + sb) as f64;
            dist[ra][rk] = merged;
            dist[rk][ra] = merged;
        }
        merges.push(Merge {
            left: na,
            right: nb,
            node: next,
            height,
        });
        active[a] = (next, sa + sb);
        active.remove(b);
        rows.remove(b);
        next += 1;
    }
    merges
}

/// DOT digraph of the average-linkage dendrogram.
pub fn dendrogram_dot<T: Scalar>(matrix: &DistanceMatrix<T>) -> String {
    let mut out = String::from("digraph dendrogram {\n  rankdir=LR;\n  node [shape=box, fontsize=10];\n");
    for (i, id) in matrix.ids().iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", id.replace('\\', "\\\\").replace('"', "\\\""));
    }
    for m in average_linkage(matrix) {
        let _ = writeln!(out, "  n{} [label=\"{:.4}\", shape=ellipse];", m.node, m.height);
        let _ = writeln!(out, "  n{} -> n{};", m.node, m.left);
        let _ = writeln!(out, "  n{} -> n{};", m.node, m.right);
    }
    out.push_str("}\n");
    out
}
