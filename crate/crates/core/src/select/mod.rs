//! Two-stage cut selection and the baselines it is compared against.

mod betweenness;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::interaction::InteractionGraph;
use crate::rng;
use crate::treewidth::{min_fill_trace, shortlist, stage1_scores, EliminationTrace};

pub use betweenness::{degree_penalty, edge_betweenness, normalize_bc};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectParams {
    /// Shortlist size.
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub alpha2: f64,
    pub beta2: f64,
}

impl Default for SelectParams {
    fn default() -> Self {
        SelectParams {
            k: 3,
            alpha: 1.0,
            beta: 1.0,
            alpha2: 1.0,
            beta2: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Tw2s,
    Stage1Only,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub edge: Edge,
    pub score1: f64,
    pub bc: f64,
    pub dp: f64,
    pub score2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutSelection {
    pub method: Method,
    pub edge: Edge,
    pub gate_index: usize,
    pub shortlist: Vec<Candidate>,
}

/// Selection together with the intermediate data, for `--explain`.
#[derive(Debug, Clone)]
pub struct Explained {
    pub selection: CutSelection,
    pub trace: EliminationTrace,
}

pub fn select_cut(c: &Circuit, params: &SelectParams) -> Result<CutSelection> {
    Ok(select_cut_explained(c, params, Method::Tw2s)?.selection)
}

/// First stage alone: the top shortlist entry.
pub fn select_stage1_only(c: &Circuit, params: &SelectParams) -> Result<CutSelection> {
    Ok(select_cut_explained(c, params, Method::Stage1Only)?.selection)
}

pub fn select_cut_explained(c: &Circuit, params: &SelectParams, method: Method) -> Result<Explained> {
    if method == Method::Random {
        return Err(Error::Unsupported("random selection takes a seed; use random_cut".into()));
    }
    let ig = InteractionGraph::extract(c);
    if ig.edge_count() == 0 {
        return Err(Error::NoTwoQubitGates);
    }
    let trace = min_fill_trace(ig.base())?;
    let s1 = stage1_scores(&ig, &trace, params.alpha, params.beta);
    let cand = shortlist(&s1, &ig, params.k)?;

    let n = ig.base().node_count();
    let raw = edge_betweenness(ig.base())?;
    let mut rows = Vec::with_capacity(cand.len());
    for e in cand {
        let bc = normalize_bc(raw[&e], n)?;
        let dp = degree_penalty(ig.base(), e)?;
        rows.push(Candidate {
            edge: e,
            score1: s1.get(e),
            bc,
            dp,
            score2: params.alpha2 * bc - params.beta2 * dp,
        });
    }
    let chosen = match method {
        Method::Stage1Only => rows[0].edge,
        _ => {
            // max score2, ties to the smallest edge
            let mut best = &rows[0];
            for r in &rows[1..] {
                if r.score2 > best.score2 || (r.score2 == best.score2 && r.edge < best.edge) {
                    best = r;
                }
            }
            best.edge
        }
    };
    let gate_index = ig.first_occurrence(chosen).expect("shortlisted edges occur");
    Ok(Explained {
        selection: CutSelection {
            method,
            edge: chosen,
            gate_index,
            shortlist: rows,
        },
        trace,
    })
}

/// Uniform choice over two-qubit gate positions.
pub fn random_cut(c: &Circuit, seed: u64) -> Result<CutSelection> {
    let positions = c.two_qubit_positions();
    if positions.is_empty() {
        return Err(Error::NoTwoQubitGates);
    }
    let pos = positions[rng::seeded(seed).gen_range(0..positions.len())];
    let edge = c.gates()[pos].edge().expect("two-qubit gate");
    let ig = InteractionGraph::extract(c);
    let p = SelectParams::default();
    let s1 = stage1_scores(&ig, &min_fill_trace(ig.base())?, p.alpha, p.beta);
    let n = ig.base().node_count();
    let bc = normalize_bc(edge_betweenness(ig.base())?[&edge], n)?;
    let dp = degree_penalty(ig.base(), edge)?;
    Ok(CutSelection {
        method: Method::Random,
        edge,
        gate_index: pos,
        shortlist: vec![Candidate {
            edge,
            score1: s1.get(edge),
            bc,
            dp,
            score2: p.alpha2 * bc - p.beta2 * dp,
        }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_tfim, circuit_from_graph, Gate, TfimSpec};
    use crate::graph::{generate, GraphFamily, GraphFamilySpec};

    fn graph_circuit(f: GraphFamily, seed: u64) -> Circuit {
        circuit_from_graph(&generate(&GraphFamilySpec::new(f, seed)).unwrap()).unwrap()
    }

    #[test]
    fn barbell_picks_bridge() {
        let c = graph_circuit(GraphFamily::Barbell { k: 3, m: 0 }, 0);
        let sel = select_cut(&c, &SelectParams::default()).unwrap();
        assert_eq!(sel.edge, Edge::new(2, 3));
        assert_eq!(c.gates()[sel.gate_index], Gate::Cx { control: 2, target: 3 });
        let bridge = sel.shortlist.iter().find(|r| r.edge == sel.edge).unwrap();
        assert!((bridge.bc - 0.6).abs() < 1e-12 && bridge.dp == 1.0);
        assert!((bridge.score2 - 0.3).abs() < 1e-12);

        // every other edge of the graph scores lower
        let ig = InteractionGraph::extract(&c);
        let raw = edge_betweenness(ig.base()).unwrap();
        for (e, _) in ig.weighted_edges().filter(|(e, _)| *e != sel.edge) {
            let s2 = normalize_bc(raw[&e], 6).unwrap() - 0.3 * degree_penalty(ig.base(), e).unwrap();
            assert!(s2 < 0.3 - 1e-9);
        }
    }

    #[test]
    fn j1j2_ring_picks_long_edge() {
        for n in [6, 8, 10, 12] {
            for t in 1..=4 {
                let c = build_tfim(&TfimSpec::j1j2_ring(n, t)).unwrap();
                let sel = select_cut(&c, &SelectParams::default()).unwrap();
                assert_eq!(sel.edge, Edge::new(0, n - 1), "n={n} T={t}");
                assert_eq!(c.gates()[sel.gate_index].edge(), Some(sel.edge));
            }
        }
    }

    #[test]
    fn single_gate_and_errors() {
        let mut c = Circuit::new(3);
        c.push(Gate::H { q: 0 }).unwrap();
        c.push(Gate::Cz { a: 2, b: 1 }).unwrap();
        assert_eq!(select_cut(&c, &SelectParams::default()).unwrap().gate_index, 1);
        assert_eq!(random_cut(&c, 9).unwrap().gate_index, 1);
        let empty = Circuit::new(2);
        assert!(matches!(select_cut(&empty, &SelectParams::default()), Err(Error::NoTwoQubitGates)));
        assert!(matches!(random_cut(&empty, 1), Err(Error::NoTwoQubitGates)));
    }

    #[test]
    fn first_occurrence_is_selected() {
        let mut c = Circuit::new(2);
        for _ in 0..3 {
            c.push(Gate::H { q: 0 }).unwrap();
            c.push(Gate::Cx { control: 1, target: 0 }).unwrap();
        }
        let sel = select_cut(&c, &SelectParams::default()).unwrap();
        assert_eq!(sel.gate_index, 1);
    }

    #[test]
    fn one_qubit_gates_do_not_change_selection() {
        let g = generate(&GraphFamilySpec::new(GraphFamily::ErdosRenyi { n: 10, p: 0.4 }, 4)).unwrap();
        let bare = circuit_from_graph(&g).unwrap();
        let mut padded = Circuit::new(10);
        for (i, gate) in bare.gates().iter().enumerate() {
            padded.push(Gate::Rx { q: i % 10, theta: 0.3 }).unwrap();
            padded.push(*gate).unwrap();
        }
        let a = select_cut(&bare, &SelectParams::default()).unwrap();
        let b = select_cut(&padded, &SelectParams::default()).unwrap();
        assert_eq!(a.edge, b.edge);
        assert_eq!(padded.gates()[b.gate_index], bare.gates()[a.gate_index]);
    }

    #[test]
    fn random_is_seeded_and_uniform() {
        let c = graph_circuit(GraphFamily::Barbell { k: 3, m: 0 }, 0);
        assert_eq!(random_cut(&c, 42).unwrap(), random_cut(&c, 42).unwrap());
        let draws = 10_000;
        let mut counts = [0usize; 7];
        for seed in 0..draws {
            counts[random_cut(&c, seed as u64).unwrap().gate_index] += 1;
        }
        let p = 1.0 / 7.0;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        for k in counts {
            assert!((k as f64 - draws as f64 * p).abs() < 3.0 * sd, "{counts:?}");
        }
    }

    #[test]
    fn json_shape() {
        let c = graph_circuit(GraphFamily::Barbell { k: 3, m: 0 }, 0);
        let v = serde_json::to_value(select_cut(&c, &SelectParams::default()).unwrap()).unwrap();
        assert_eq!(v["edge"], serde_json::json!([2, 3]));
        assert_eq!(v["gate_index"], 3);
        assert_eq!(v["method"], "tw2s");
        assert!(v["shortlist"][0]["score2"].is_number());
    }

    #[test]
    fn stage1_only_takes_top_score() {
        let c = graph_circuit(GraphFamily::Grid { rows: 3, cols: 4 }, 0);
        let sel = select_stage1_only(&c, &SelectParams::default()).unwrap();
        assert_eq!(sel.edge, sel.shortlist[0].edge);
        assert!(sel.shortlist.windows(2).all(|w| w[0].score1 >= w[1].score1));
    }
}
