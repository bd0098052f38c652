use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Edge, UGraph};

/// Raw edge betweenness over unordered node pairs (Brandes). Each pair
/// `{s, t}` in the same component spreads one unit over its shortest paths.
pub fn edge_betweenness(g: &UGraph) -> Result<BTreeMap<Edge, f64>> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let edges: Vec<Edge> = g.edges().collect();
    let index: BTreeMap<Edge, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let adj: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|u| g.neighbors(u).map(|v| (v, index[&Edge::new(u, v)])).collect())
        .collect();

    // One dependency vector per source, summed in source order so the
    // result does not depend on the thread schedule.
    let per_source: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| single_source(&adj, s, edges.len()))
        .collect();
    let mut total = vec![0.0; edges.len()];
    for contrib in &per_source {
        for (t, c) in total.iter_mut().zip(contrib) {
            *t += c;
        }
    }
    // every unordered pair was seen from both ends
    Ok(edges.into_iter().zip(total).map(|(e, b)| (e, b / 2.0)).collect())
}

fn single_source(adj: &[Vec<(usize, usize)>], s: usize, m: usize) -> Vec<f64> {
    let n = adj.len();
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    sigma[s] = 1.0;
    dist[s] = 0;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(w, eid) in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push((v, eid));
            }
        }
    }
    let mut delta = vec![0.0f64; n];
    let mut out = vec![0.0f64; m];
    for &w in order.iter().rev() {
        for &(v, eid) in &preds[w] {
            let c = sigma[v] / sigma[w] * (1.0 + delta[w]);
            out[eid] += c;
            delta[v] += c;
        }
    }
    out
}

/// Divides by the number of unordered pairs, `n(n-1)/2`.
pub fn normalize_bc(raw: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::param("n", format!("must be >= 2, got {n}")));
    }
    Ok(raw / (n * (n - 1) / 2) as f64)
}

/// `(deg u + deg v) / (2 d_max)`.
pub fn degree_penalty(g: &UGraph, e: Edge) -> Result<f64> {
    if e.v() >= g.node_count() || !g.has_edge(e.u(), e.v()) {
        return Err(Error::param("edge", format!("{e} is not in the graph")));
    }
    Ok((g.degree(e.u()) + g.degree(e.v())) as f64 / (2 * g.max_degree()) as f64)
}
