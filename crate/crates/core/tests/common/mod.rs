//! Independent oracles shared by the integration suites. None of them call
//! into the code they check beyond plain data types.
#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spnet::netgen::LinkType;
use spnet::percolate::{EquivalentGraph, SuperEdge};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random multigraph with 1..=max_nodes super nodes, self-loops allowed.
pub fn random_equivalent<R: Rng>(rng: &mut R, max_nodes: usize) -> EquivalentGraph {
    let n = rng.random_range(1..=max_nodes);
    let m = rng.random_range(0..=2 * n);
    let clique_size = (0..n).map(|_| rng.random_range(1..=4)).collect();
    let edges = (0..m)
        .map(|_| SuperEdge {
            a: rng.random_range(0..n as u32),
            b: rng.random_range(0..n as u32),
            link: if rng.random::<bool>() {
                LinkType::Physical
            } else {
                LinkType::Online
            },
        })
        .collect();
    EquivalentGraph { clique_size, edges }
}

/// Component labels by depth-first search over an adjacency list, numbered
/// in order of first appearance.
pub fn dfs_labels(n: usize, edges: &[(u32, u32)]) -> Vec<u32> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a as usize].push(b as usize);
        adj[b as usize].push(a as usize);
    }
    let mut label = vec![u32::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != u32::MAX {
            continue;
        }
        let mut stack = vec![s];
        label[s] = next;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if label[w] == u32::MAX {
                    label[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    label
}

/// Largest component (cliques, nodes) under DFS, ties broken by node count.
pub fn dfs_largest(eq: &EquivalentGraph, kept: &[(u32, u32)]) -> (u32, u64) {
    let n = eq.clique_size.len();
    let labels = dfs_labels(n, kept);
    let mut cliques = vec![0u32; n];
    let mut nodes = vec![0u64; n];
    for (v, &l) in labels.iter().enumerate() {
        cliques[l as usize] += 1;
        nodes[l as usize] += eq.clique_size[v] as u64;
    }
    (0..n)
        .map(|l| (cliques[l], nodes[l]))
        .max()
        .unwrap_or((0, 0))
}

/// Exact expectation and variance of the largest component (in cliques),
/// summing over all 2^m occupation patterns.
pub fn enumerated_largest(eq: &EquivalentGraph, t_w: f64, t_f: f64) -> (f64, f64) {
    let m = eq.edges.len();
    assert!(m <= 20, "enumeration over {m} edges is too large");
    let (mut mean, mut second) = (0.0, 0.0);
    for mask in 0u32..(1 << m) {
        let mut p = 1.0;
        let mut kept = Vec::new();
        for (i, e) in eq.edges.iter().enumerate() {
            let t = if e.link == LinkType::Physical {
                t_w
            } else {
                t_f
            };
            if mask >> i & 1 == 1 {
                p *= t;
                kept.push((e.a, e.b));
            } else {
                p *= 1.0 - t;
            }
        }
        let size = dfs_largest(eq, &kept).0 as f64;
        mean += p * size;
        second += p * size * size;
    }
    (mean, second - mean * mean)
}

/// Giant-component fraction of a configuration-model graph with Poisson(c)
/// degrees: the root of S = 1 - exp(-c S) in (0, 1], by bisection.
pub fn poisson_giant(c: f64) -> f64 {
    if c <= 1.0 {
        return 0.0;
    }
    let f = |s: f64| -(-c * s).exp_m1() - s;
    // f > 0 just right of 0 when c > 1, f(1) < 0
    let (mut lo, mut hi) = (1e-9_f64, 1.0_f64);
    while f(lo) <= 0.0 {
        lo *= 0.5;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Sample mean and standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
