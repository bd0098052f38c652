//! Undirected simple graphs, benchmark generators and community diagnostics.
//!
//! Nodes are the integers `0..n`. Edges are stored as normalized pairs
//! `(u, v)` with `u < v`; self-loops and parallel edges are rejected at
//! insertion time, so every [`UGraph`] is simple by construction.

mod community;
mod generators;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use community::{
    inter_community_fraction, label_propagation_communities, modularity, Partition,
};
pub use generators::{generate, mixing_ratio, GraphFamily, GraphFamilySpec};

/// An unordered node pair, always stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", from = "[usize; 2]")]
pub struct Edge(usize, usize);

impl Edge {
    /// Normalizes `(a, b)` so that the smaller index comes first.
    ///
    /// Panics if `a == b`; callers validate operands before building edges.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop ({a}, {a}) is not an edge");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(&self) -> usize {
        self.0
    }

    pub fn v(&self) -> usize {
        self.1
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint opposite `x`, if `x` is an endpoint.
    pub fn other(&self, x: usize) -> Option<usize> {
        if self.0 == x {
            Some(self.1)
        } else if self.1 == x {
            Some(self.0)
        } else {
            None
        }
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

impl From<[usize; 2]> for Edge {
    fn from(p: [usize; 2]) -> Self {
        Edge::new(p[0], p[1])
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UGraph {
    adj: Vec<BTreeSet<usize>>,
    edge_count: usize,
}

impl UGraph {
    pub fn new(n: usize) -> Self {
        UGraph {
            adj: vec![BTreeSet::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, ignoring repeated pairs.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = UGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Inserts `{u, v}`. Returns `Ok(false)` when the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.node_count();
        if u >= n || v >= n {
            return Err(Error::OutOfRange {
                index: u.max(v),
                len: n,
            });
        }
        if u == v {
            return Err(Error::param("edge", format!("self-loop on node {u}")));
        }
        let inserted = self.adj[u].insert(v);
        if inserted {
            self.adj[v].insert(u);
            self.edge_count += 1;
        }
        Ok(inserted)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.node_count() || v >= self.node_count() {
            return false;
        }
        let removed = self.adj[u].remove(&v);
        if removed {
            self.adj[v].remove(&u);
            self.edge_count -= 1;
        }
        removed
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|s| s.contains(&v))
    }

    /// Neighbors of `u` in ascending order.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().copied()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.range(u + 1..).map(move |&v| Edge(u, v))
        })
    }

    /// Node sets of the connected components, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() <= 1 || self.components().len() == 1
    }

    /// Unweighted single-source distances; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = std::collections::VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Serializes to the line format: `n m` then one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.node_count(), self.edge_count());
        for e in self.edges() {
            s.push_str(&format!("{} {}\n", e.u(), e.v()));
        }
        s
    }

    /// Parses the line format written by [`UGraph::to_text`].
    ///
    /// Edge lines must list `u < v`; the declared edge count must match.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::format(1, "missing `n m` header"))?;
        let nums = parse_usizes(hline, header, 2)?;
        let (n, m) = (nums[0], nums[1]);
        let mut g = UGraph::new(n);
        let mut seen = 0;
        for (lineno, line) in lines {
            let uv = parse_usizes(lineno, line, 2)?;
            let (u, v) = (uv[0], uv[1]);
            if u >= v {
                return Err(Error::format(lineno, format!("expected u < v, got {u} {v}")));
            }
            if v >= n {
                return Err(Error::format(lineno, format!("node {v} out of range for n = {n}")));
            }
            if !g.add_edge(u, v).map_err(|e| Error::format(lineno, e.to_string()))? {
                return Err(Error::format(lineno, format!("duplicate edge {u} {v}")));
            }
            seen += 1;
        }
        if seen != m {
            return Err(Error::format(
                hline,
                format!("header declares {m} edges, found {seen}"),
            ));
        }
        Ok(g)
    }
}

fn parse_usizes(lineno: usize, line: &str, count: usize) -> Result<Vec<usize>> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != count {
        return Err(Error::format(
            lineno,
            format!("expected {count} integers, found {}", parts.len()),
        ));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| Error::format(lineno, format!("not a non-negative integer: {p:?}")))
        })
        .collect()
}
