use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use super::UGraph;
use crate::error::{Error, Result};
use crate::rng;

/// Community label per node. Labels are compacted to `0..k` in order of first
/// appearance by node index.
pub type Partition = Vec<usize>;

const MAX_SWEEPS: usize = 100;

/// Asynchronous label propagation.
///
/// Each sweep visits nodes in a seeded random order; a node adopts the label
/// carried by most of its neighbors. Ties go to the label with the larger
/// current community, then to a seeded random choice; a node whose current
/// label is among the best keeps it. Stops at the first sweep without a
/// change or after 100 sweeps.
pub fn label_propagation_communities(g: &UGraph, seed: u64) -> Partition {
    let n = g.node_count();
    let mut rng = rng::seeded(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut sizes = vec![1usize; n];
    let mut order: Vec<usize> = (0..n).collect();

    for _ in 0..MAX_SWEEPS {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &u in &order {
            if g.degree(u) == 0 {
                continue;
            }
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for v in g.neighbors(u) {
                *counts.entry(labels[v]).or_default() += 1;
            }
            let key = |l: usize| (counts.get(&l).copied().unwrap_or(0), sizes[l]);
            let best_key = counts.keys().map(|&l| key(l)).max().unwrap_or((0, 0));
            if key(labels[u]) == best_key {
                continue;
            }
            let best: Vec<usize> = counts
                .keys()
                .copied()
                .filter(|&l| key(l) == best_key)
                .collect();
            let new = *best.choose(&mut rng).unwrap_or(&labels[u]);
            sizes[labels[u]] -= 1;
            sizes[new] += 1;
            labels[u] = new;
            changed = true;
        }
        if !changed {
            break;
        }
    }
    compact(&labels)
}

fn compact(labels: &[usize]) -> Partition {
    let mut remap = BTreeMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = remap.len();
            *remap.entry(l).or_insert(next)
        })
        .collect()
}

/// Newman modularity `Q = sum_c (e_cc / m - (d_c / 2m)^2)`; zero for an
/// edgeless graph.
pub fn modularity(g: &UGraph, partition: &[usize]) -> Result<f64> {
    check_cover(g, partition)?;
    let m = g.edge_count();
    if m == 0 {
        return Ok(0.0);
    }
    let mut intra: BTreeMap<usize, usize> = BTreeMap::new();
    let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
    for e in g.edges() {
        if partition[e.u()] == partition[e.v()] {
            *intra.entry(partition[e.u()]).or_default() += 1;
        }
    }
    for (u, &c) in partition.iter().enumerate() {
        *degree.entry(c).or_default() += g.degree(u);
    }
    let m = m as f64;
    Ok(degree
        .iter()
        .map(|(c, &d)| {
            let e_cc = intra.get(c).copied().unwrap_or(0) as f64;
            e_cc / m - (d as f64 / (2.0 * m)).powi(2)
        })
        .sum())
}

/// Fraction of edges whose endpoints lie in different communities.
pub fn inter_community_fraction(g: &UGraph, partition: &[usize]) -> Result<f64> {
    check_cover(g, partition)?;
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let crossing = g
        .edges()
        .filter(|e| partition[e.u()] != partition[e.v()])
        .count();
    Ok(crossing as f64 / g.edge_count() as f64)
}

fn check_cover(g: &UGraph, partition: &[usize]) -> Result<()> {
    if partition.len() != g.node_count() {
        return Err(Error::param(
            "partition",
            format!("covers {} nodes, graph has {}", partition.len(), g.node_count()),
        ));
    }
    Ok(())
}
