//! Search for maximal `(m, l)`-clusters in a distance matrix.
//!
//! Feasible sets are exactly the cliques of the threshold graph (edge when the
//! distance is finite and at most `m`, vertices whose self-distance exceeds
//! `m` excluded) with at least `2^l` vertices, so the maximal feasible sets
//! are the maximal cliques of that size.

use super::{Cluster, DistanceMatrix};
use crate::error::Result;
use crate::scalar::Scalar;

/// Up to this many eligible items the search is exact (Bron–Kerbosch with
/// pivoting and a size bound); beyond it, greedy seeding and expansion.
pub const EXACT_MINING_LIMIT: usize = 24;

struct Graph {
    vertices: Vec<usize>,
    adj: Vec<u64>,
}

fn threshold_graph<T: Scalar>(matrix: &DistanceMatrix<T>, m: T) -> Graph {
    let within = |a: usize, b: usize| matches!(matrix.get(a, b), Some(v) if v <= m);
    let vertices: Vec<usize> = (0..matrix.len()).filter(|&i| within(i, i)).collect();
    let adj = if vertices.len() <= 64 {
        vertices
            .iter()
            .map(|&a| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|&(_, &b)| b != a && within(a, b))
                    .fold(0u64, |acc, (k, _)| acc | 1 << k)
            })
            .collect()
    } else {
        Vec::new()
    };
    Graph { vertices, adj }
}

pub fn mine_clusters<T: Scalar>(matrix: &DistanceMatrix<T>, m: T, l: u32) -> Result<Vec<Cluster<T>>> {
    if l >= 64 || (1u64 << l) > matrix.len() as u64 {
        return Ok(Vec::new());
    }
    let graph = threshold_graph(matrix, m);
    let min_size = 1usize << l;
    let mut found: Vec<Vec<usize>> = if graph.vertices.len() <= EXACT_MINING_LIMIT {
        exact(&graph, min_size)
    } else {
        greedy(matrix, m, &graph.vertices, min_size)
    };
    for set in &mut found {
        set.sort_unstable();
    }
    found.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    found.dedup();
    found
        .into_iter()
        .map(|members| Cluster::from_members(members, matrix))
        .collect()
}

fn exact(graph: &Graph, min_size: usize) -> Vec<Vec<usize>> {
    let n = graph.vertices.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    bron_kerbosch(graph, 0, all, 0, min_size, &mut out);
    out
}

fn bron_kerbosch(graph: &Graph, r: u64, p: u64, x: u64, min_size: usize, out: &mut Vec<Vec<usize>>) {
    if ((r.count_ones() + p.count_ones()) as usize) < min_size {
        return;
    }
    if p == 0 {
        if x == 0 {
            out.push(bits_to_vertices(graph, r));
        }
        return;
    }
    let px = p | x;
    let pivot = (0..graph.vertices.len())
        .filter(|&k| px >> k & 1 == 1)
        .max_by_key(|&k| ((p & graph.adj[k]).count_ones(), std::cmp::Reverse(k)))
        .expect("p is nonempty");
    let mut candidates = p & !graph.adj[pivot];
    let (mut p, mut x) = (p, x);
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        let bit = 1u64 << v;
        candidates &= !bit;
        bron_kerbosch(graph, r | bit, p & graph.adj[v], x & graph.adj[v], min_size, out);
        p &= !bit;
        x |= bit;
    }
}

fn bits_to_vertices(graph: &Graph, bits: u64) -> Vec<usize> {
    (0..graph.vertices.len())
        .filter(|&k| bits >> k & 1 == 1)
        .map(|k| graph.vertices[k])
        .collect()
}

fn greedy<T: Scalar>(matrix: &DistanceMatrix<T>, m: T, vertices: &[usize], min_size: usize) -> Vec<Vec<usize>> {
    let within = |a: usize, b: usize| matches!(matrix.get(a, b), Some(v) if v <= m);
    // ids sorted lexicographically fix the tie-breaking order
    let mut order: Vec<usize> = vertices.to_vec();
    order.sort_by(|&a, &b| matrix.ids()[a].cmp(&matrix.ids()[b]));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for &seed in &order {
        let mut clique = vec![seed];
        let mut cand: Vec<usize> = order.iter().copied().filter(|&v| v != seed && within(seed, v)).collect();
        while !cand.is_empty() {
            // most neighbours inside the candidate pool, first id on ties
            let (best_pos, _) = cand
                .iter()
                .enumerate()
                .map(|(pos, &v)| (pos, cand.iter().filter(|&&u| u != v && within(u, v)).count()))
                .fold((0, None), |acc: (usize, Option<usize>), (pos, deg)| match acc.1 {
                    Some(best) if best >= deg => acc,
                    _ => (pos, Some(deg)),
                });
            let v = cand.remove(best_pos);
            clique.push(v);
            cand.retain(|&u| within(u, v));
        }
        if clique.len() >= min_size {
            clique.sort_unstable();
            out.push(clique);
        }
    }
    out.sort();
    out.dedup();
    // keep only sets not strictly contained in another found set
    let keep: Vec<bool> = out
        .iter()
        .map(|s| {
            !out.iter()
                .any(|t| t.len() > s.len() && s.iter().all(|x| t.binary_search(x).is_ok()))
        })
        .collect();
    out.into_iter()
        .zip(keep)
        .filter_map(|(s, k)| k.then_some(s))
        .collect()
}
