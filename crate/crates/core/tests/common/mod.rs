//! Independent oracles shared by the integration tests. Nothing here calls
//! into the solver or the enumeration code it checks.

#![allow(dead_code)]

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use specirr::graph::Graph;

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
/// Returns eigenvalues ascending with matching column eigenvectors.
pub fn jacobi_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (row_p, row_q) = (a[p].clone(), a[q].clone());
                for (k, (apk, aqk)) in row_p.into_iter().zip(row_q).enumerate() {
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..n).map(|k| v[k][i]).collect())
        .collect();
    (values, vectors)
}

pub fn adjacency_matrix(g: &Graph) -> Vec<Vec<f64>> {
    (0..g.n())
        .map(|i| {
            (0..g.n())
                .map(|j| if g.has_edge(i, j) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect()
}

/// `(λ_max, unit eigenvector with non-negative sum, λ_min)`.
pub fn oracle_extremes(g: &Graph) -> (f64, Vec<f64>, f64) {
    let (values, vectors) = jacobi_eigen(&adjacency_matrix(g));
    let mut top = vectors.last().unwrap().clone();
    if top.iter().sum::<f64>() < 0.0 {
        top.iter_mut().for_each(|x| *x = -*x);
    }
    (*values.last().unwrap(), top, values[0])
}

/// Erdős–Rényi graph on `n` vertices, resampled until connected.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Number of isomorphism classes of connected graphs on `n` vertices, by
/// canonizing every labelled connected graph over all `n!` relabellings.
pub fn brute_force_connected_classes(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let perms = permutations(n);
    let mut classes = HashSet::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut adj = vec![vec![false; n]; n];
        for (k, &(u, v)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                adj[u][v] = true;
                adj[v][u] = true;
            }
        }
        // connectivity by flood fill
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                if adj[x][y] && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|&(_, &(u, v))| adj[p[u]][p[v]])
                    .fold(0u64, |acc, (k, _)| acc | 1 << k)
            })
            .min()
            .unwrap();
        classes.insert(canon);
    }
    classes.len()
}

pub fn census(max_n: usize) -> Vec<Graph> {
    (1..=max_n)
        .flat_map(|n| specirr::graph::enumerate_connected(n, true).unwrap())
        .collect()
}
