use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::UGraph;
use crate::error::{Error, Result};
use crate::rng;

/// Benchmark graph families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GraphFamily {
    Grid {
        rows: usize,
        cols: usize,
    },
    WattsStrogatz {
        n: usize,
        k: usize,
        p: f64,
    },
    /// Two `K_k` cliques joined by a path with `m` intermediate nodes.
    Barbell {
        k: usize,
        m: usize,
    },
    Sbm {
        n_per: usize,
        communities: usize,
        p_in: f64,
        p_out: f64,
    },
    ErdosRenyi {
        n: usize,
        p: f64,
    },
    /// Chain `{i, i+1}`, next-nearest `{i, i+2}` for `i + 2 < n`, and the
    /// closing edge `{0, n-1}`.
    J1J2Ring {
        n: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFamilySpec {
    #[serde(flatten)]
    pub family: GraphFamily,
    #[serde(default)]
    pub seed: u64,
}

impl GraphFamilySpec {
    pub fn new(family: GraphFamily, seed: u64) -> Self {
        GraphFamilySpec { family, seed }
    }

    pub fn validate(&self) -> Result<()> {
        fn size(field: &'static str, v: usize, min: usize) -> Result<()> {
            if v < min {
                return Err(Error::param(field, format!("must be >= {min}, got {v}")));
            }
            Ok(())
        }
        fn prob(field: &'static str, p: f64) -> Result<()> {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::param(field, format!("must lie in [0, 1], got {p}")));
            }
            Ok(())
        }
        match self.family {
            GraphFamily::Grid { rows, cols } => {
                size("rows", rows, 1)?;
                size("cols", cols, 1)
            }
            GraphFamily::WattsStrogatz { n, k, p } => {
                size("n", n, 1)?;
                prob("p", p)?;
                if k == 0 || k % 2 != 0 {
                    return Err(Error::param("k", format!("must be even and >= 2, got {k}")));
                }
                if k >= n {
                    return Err(Error::param("k", format!("must be < n = {n}, got {k}")));
                }
                Ok(())
            }
            GraphFamily::Barbell { k, .. } => size("k", k, 1),
            GraphFamily::Sbm {
                n_per,
                communities,
                p_in,
                p_out,
            } => {
                size("n_per", n_per, 1)?;
                size("communities", communities, 1)?;
                prob("p_in", p_in)?;
                prob("p_out", p_out)
            }
            GraphFamily::ErdosRenyi { n, p } => {
                size("n", n, 1)?;
                prob("p", p)
            }
            GraphFamily::J1J2Ring { n } => size("n", n, 3),
        }
    }

    /// Planted block of every node for SBM specs, `None` for other families.
    pub fn planted_partition(&self) -> Option<Vec<usize>> {
        match self.family {
            GraphFamily::Sbm {
                n_per, communities, ..
            } => Some((0..n_per * communities).map(|i| i / n_per).collect()),
            _ => None,
        }
    }
}

/// Mixing ratio `p_out / p_in` of a two-probability block model.
pub fn mixing_ratio(p_in: f64, p_out: f64) -> Result<f64> {
    if p_in == 0.0 {
        return Err(Error::DivisionDomain("mixing ratio requires p_in > 0"));
    }
    Ok(p_out / p_in)
}

/// Builds the graph described by `spec`. Identical specs give identical
/// graphs; Grid, Barbell and J1J2Ring ignore the seed.
pub fn generate(spec: &GraphFamilySpec) -> Result<UGraph> {
    spec.validate()?;
    let mut rng = rng::seeded(spec.seed);
    let g = match spec.family {
        GraphFamily::Grid { rows, cols } => {
            let mut g = UGraph::new(rows * cols);
            for r in 0..rows {
                for c in 0..cols {
                    let id = r * cols + c;
                    if c + 1 < cols {
                        g.add_edge(id, id + 1)?;
                    }
                    if r + 1 < rows {
                        g.add_edge(id, id + cols)?;
                    }
                }
            }
            g
        }
        GraphFamily::WattsStrogatz { n, k, p } => {
            let mut g = UGraph::new(n);
            for j in 1..=k / 2 {
                for u in 0..n {
                    g.add_edge(u, (u + j) % n)?;
                }
            }
            // Rewire each lattice edge (u, u+j) to (u, w) with probability p,
            // skipping the draw when u is already adjacent to everyone.
            for j in 1..=k / 2 {
                for u in 0..n {
                    let v = (u + j) % n;
                    if rng.gen::<f64>() >= p {
                        continue;
                    }
                    if g.degree(u) >= n - 1 {
                        continue;
                    }
                    let w = loop {
                        let w = rng.gen_range(0..n);
                        if w != u && !g.has_edge(u, w) {
                            break w;
                        }
                    };
                    if g.has_edge(u, v) {
                        g.remove_edge(u, v);
                        g.add_edge(u, w)?;
                    }
                }
            }
            g
        }
        GraphFamily::Barbell { k, m } => {
            let mut g = UGraph::new(2 * k + m);
            let right = k + m;
            for a in 0..k {
                for b in a + 1..k {
                    g.add_edge(a, b)?;
                    g.add_edge(right + a, right + b)?;
                }
            }
            let mut prev = k - 1;
            for node in k..right {
                g.add_edge(prev, node)?;
                prev = node;
            }
            g.add_edge(prev, right)?;
            g
        }
        GraphFamily::Sbm {
            n_per,
            communities,
            p_in,
            p_out,
        } => {
            let n = n_per * communities;
            let mut g = UGraph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    let p = if u / n_per == v / n_per { p_in } else { p_out };
                    if rng.gen::<f64>() < p {
                        g.add_edge(u, v)?;
                    }
                }
            }
            g
        }
        GraphFamily::ErdosRenyi { n, p } => {
            let mut g = UGraph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < p {
                        g.add_edge(u, v)?;
                    }
                }
            }
            g
        }
        GraphFamily::J1J2Ring { n } => {
            let mut g = UGraph::new(n);
            for i in 0..n - 1 {
                g.add_edge(i, i + 1)?;
            }
            for i in 0..n - 2 {
                g.add_edge(i, i + 2)?;
            }
            g.add_edge(0, n - 1)?;
            g
        }
    };
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn gen(family: GraphFamily, seed: u64) -> UGraph {
        generate(&GraphFamilySpec::new(family, seed)).unwrap()
    }

    #[test]
    fn grid_counts() {
        let g = gen(GraphFamily::Grid { rows: 3, cols: 3 }, 0);
        assert_eq!((g.node_count(), g.edge_count()), (9, 12));
        let g = gen(GraphFamily::Grid { rows: 4, cols: 6 }, 0);
        assert_eq!(g.edge_count(), 4 * 5 + 6 * 3);
    }

    #[test]
    fn barbell_shapes() {
        let g = gen(GraphFamily::Barbell { k: 3, m: 0 }, 0);
        assert_eq!((g.node_count(), g.edge_count()), (6, 7));
        assert!(g.has_edge(2, 3));
        let g = gen(GraphFamily::Barbell { k: 5, m: 2 }, 0);
        assert_eq!((g.node_count(), g.edge_count()), (12, 10 + 10 + 3));
        assert!(g.has_edge(4, 5) && g.has_edge(5, 6) && g.has_edge(6, 7));
    }

    #[test]
    fn j1j2_ring_has_single_long_range_edge() {
        let g = gen(GraphFamily::J1J2Ring { n: 8 }, 0);
        assert_eq!(g.edge_count(), 7 + 6 + 1);
        let long: Vec<Edge> = g.edges().filter(|e| e.v() - e.u() > 2).collect();
        assert_eq!(long, vec![Edge::new(0, 7)]);
    }

    #[test]
    fn ws_keeps_edge_count_and_is_simple() {
        for seed in 0..20 {
            let g = gen(GraphFamily::WattsStrogatz { n: 20, k: 4, p: 0.1 }, seed);
            assert_eq!(g.edge_count(), 40);
        }
        let ring = gen(GraphFamily::WattsStrogatz { n: 10, k: 2, p: 0.0 }, 3);
        assert!(ring.edges().all(|e| e.v() - e.u() == 1 || (e.u(), e.v()) == (0, 9)));
    }

    #[test]
    fn deterministic_under_seed() {
        let fam = GraphFamily::Sbm { n_per: 8, communities: 2, p_in: 0.5, p_out: 0.1 };
        assert_eq!(gen(fam.clone(), 42), gen(fam.clone(), 42));
        assert_ne!(gen(fam.clone(), 42), gen(fam, 43));
        let er = GraphFamily::ErdosRenyi { n: 16, p: 0.4 };
        assert_eq!(gen(er.clone(), 7), gen(er, 7));
    }

    #[test]
    fn invalid_parameters_name_the_field() {
        let bad = [
            (GraphFamily::Grid { rows: 0, cols: 3 }, "rows"),
            (GraphFamily::WattsStrogatz { n: 10, k: 3, p: 0.1 }, "k"),
            (GraphFamily::WattsStrogatz { n: 4, k: 4, p: 0.1 }, "k"),
            (GraphFamily::Sbm { n_per: 4, communities: 2, p_in: 1.5, p_out: 0.0 }, "p_in"),
            (GraphFamily::ErdosRenyi { n: 5, p: -0.1 }, "p"),
            (GraphFamily::Barbell { k: 0, m: 1 }, "k"),
        ];
        for (fam, field) in bad {
            match generate(&GraphFamilySpec::new(fam, 0)) {
                Err(Error::Param { field: f, .. }) => assert_eq!(f, field),
                other => panic!("expected param error for {field}, got {other:?}"),
            }
        }
    }

    #[test]
    fn mixing_ratio_values() {
        assert!((mixing_ratio(0.5, 0.05).unwrap() - 0.10).abs() < 1e-15);
        assert_eq!(mixing_ratio(0.5, 0.5).unwrap(), 1.0);
        assert_eq!(mixing_ratio(0.4, 0.1).unwrap(), 0.25);
        assert!(matches!(mixing_ratio(0.0, 0.1), Err(Error::DivisionDomain(_))));
    }
}
