use crate::error::{Error, Result};
use crate::graph::UGraph;

/// Device connectivity with an all-pairs hop-distance table.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMap {
    graph: UGraph,
    dist: Vec<u32>,
    diameter: usize,
}

impl CouplingMap {
    pub fn new(graph: UGraph) -> Result<Self> {
        let n = graph.node_count();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if !graph.is_connected() {
            return Err(Error::param("coupling", "coupling map must be connected"));
        }
        let mut dist = vec![0u32; n * n];
        for s in 0..n {
            for (t, d) in graph.bfs_distances(s).into_iter().enumerate() {
                dist[s * n + t] = d.expect("connected") as u32;
            }
        }
        let diameter = dist.iter().copied().max().unwrap_or(0) as usize;
        Ok(CouplingMap { graph, dist, diameter })
    }

    /// Heavy-hex lattice with `d` rows of `2d + 1` qubits. Neighboring rows
    /// are joined through bridge qubits every four columns, at columns
    /// `0 mod 4` below even rows and `2 mod 4` below odd rows; the unused
    /// end columns of the first and last row are dropped. Qubits are
    /// numbered row by row, each row's bridges following it, so
    /// `heavy_hex(7)` is the 127-qubit Eagle layout.
    pub fn heavy_hex(d: usize) -> Result<Self> {
        if d < 3 || d % 2 == 0 {
            return Err(Error::param("d", format!("must be odd and >= 3, got {d}")));
        }
        let width = 2 * d + 1;
        let mut edges = Vec::new();
        // id of (row, column) for every kept lattice site
        let mut site = vec![vec![None; width]; d];
        let mut next = 0usize;
        let mut prev_bridges: Vec<(usize, usize)> = Vec::new();
        for (row, sites) in site.iter_mut().enumerate() {
            let cols = if row == 0 {
                0..width - 1
            } else if row == d - 1 {
                1..width
            } else {
                0..width
            };
            for col in cols {
                sites[col] = Some(next);
                if col > 0 {
                    if let Some(left) = sites[col - 1] {
                        edges.push((left, next));
                    }
                }
                next += 1;
            }
            for &(col, bridge) in &prev_bridges {
                edges.push((bridge, sites[col].expect("bridge lands on a kept site")));
            }
            prev_bridges.clear();
            if row + 1 < d {
                let offset = if row % 2 == 0 { 0 } else { 2 };
                for col in (offset..width).step_by(4) {
                    edges.push((sites[col].expect("bridge leaves a kept site"), next));
                    prev_bridges.push((col, next));
                    next += 1;
                }
            }
        }
        CouplingMap::new(UGraph::from_edges(next, edges)?)
    }

    /// The 127-qubit heavy-hex device.
    pub fn eagle() -> Self {
        CouplingMap::heavy_hex(7).expect("valid parameter")
    }

    /// Smallest heavy-hex lattice with at least `n` qubits.
    pub fn heavy_hex_for(n: usize) -> Result<Self> {
        let mut d = 3;
        loop {
            let cm = CouplingMap::heavy_hex(d)?;
            if cm.node_count() >= n {
                return Ok(cm);
            }
            d += 2;
        }
    }

    pub fn graph(&self) -> &UGraph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.dist[a * self.node_count() + b] as usize
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    /// One shortest path from `a` to `b`, both ends included, preferring
    /// the smallest next hop.
    pub fn shortest_path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            cur = self
                .graph
                .neighbors(cur)
                .find(|&x| self.distance(x, b) + 1 == self.distance(cur, b))
                .expect("connected");
            path.push(cur);
        }
        path
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eagle_shape() {
        let cm = CouplingMap::eagle();
        assert_eq!(cm.node_count(), 127);
        assert_eq!(cm.graph().edge_count(), 144);
        assert!(cm.graph().is_connected());
        for u in 0..127 {
            assert!((1..=3).contains(&cm.graph().degree(u)));
            assert_eq!(cm.distance(u, u), 0);
        }
        for (a, b) in [
            (0, 14),
            (14, 18),
            (4, 15),
            (15, 22),
            (20, 33),
            (33, 39),
            (37, 52),
            (52, 56),
            (96, 109),
            (109, 114),
            (108, 112),
            (112, 126),
            (0, 1),
            (12, 13),
            (113, 114),
        ] {
            assert!(cm.graph().has_edge(a, b), "({a}, {b})");
        }
        assert!(!cm.graph().has_edge(13, 14));
    }

    #[test]
    fn family_sizes() {
        assert_eq!(CouplingMap::heavy_hex(3).unwrap().node_count(), 23);
        assert_eq!(CouplingMap::heavy_hex(5).unwrap().node_count(), 65);
        for d in [3, 5, 9] {
            let cm = CouplingMap::heavy_hex(d).unwrap();
            assert!(cm.graph().max_degree() <= 3);
        }
        assert!(CouplingMap::heavy_hex(4).is_err());
        assert!(CouplingMap::heavy_hex(1).is_err());
        assert_eq!(CouplingMap::heavy_hex_for(30).unwrap().node_count(), 65);
    }

    #[test]
    fn distances_are_a_metric() {
        let cm = CouplingMap::heavy_hex(5).unwrap();
        let n = cm.node_count();
        for a in 0..n {
            for b in 0..n {
                assert_eq!(cm.distance(a, b), cm.distance(b, a));
                for c in (0..n).step_by(7) {
                    assert!(cm.distance(a, c) <= cm.distance(a, b) + cm.distance(b, c));
                }
            }
        }
        let p = cm.shortest_path(0, n - 1);
        assert_eq!(p.len(), cm.distance(0, n - 1) + 1);
        assert!(p.windows(2).all(|w| cm.graph().has_edge(w[0], w[1])));
    }

    #[test]
    fn disconnected_map_is_rejected() {
        let g = UGraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(CouplingMap::new(g).is_err());
    }
}
