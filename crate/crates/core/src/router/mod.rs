//! SABRE-style routing onto a coupling map and native two-qubit cost
//! accounting.
//!
//! Native costs: CX and CZ are one ECR, RZZ two, SWAP three.

mod coupling;

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::interaction::InteractionGraph;
use crate::rng;

pub use coupling::CouplingMap;

/// Lookahead window of pending two-qubit gates scored with each SWAP.
pub const LOOKAHEAD: usize = 20;
/// Weight of the lookahead term. Both the front and the lookahead
/// distance sums are averaged over their gate counts, as in SABRE.
pub const LOOKAHEAD_WEIGHT: f64 = 0.5;
const DECAY_STEP: f64 = 0.001;
const DECAY_RESET: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct RoutedResult {
    /// Circuit on physical qubits with SWAPs inserted.
    pub circuit: Circuit,
    pub ecr_count: usize,
    pub swaps: usize,
    /// Physical qubit of each logical qubit before the first gate.
    pub initial_layout: Vec<usize>,
    /// Physical qubit of each logical qubit after the last gate.
    pub final_layout: Vec<usize>,
    pub seed: u64,
}

/// Seeded greedy placement. The logical qubit with most interaction
/// partners goes on a random degree-3 node; the rest follow in BFS order
/// over the interaction graph, each on the free node with the smallest
/// weighted distance to its placed partners. Further components and idle
/// qubits go next to what is already placed.
pub fn initial_layout(c: &Circuit, cm: &CouplingMap, seed: u64) -> Result<Vec<usize>> {
    let n = c.n_qubits();
    let big_n = cm.node_count();
    if n > big_n {
        return Err(Error::DeviceTooSmall {
            needed: n,
            available: big_n,
        });
    }
    let ig = InteractionGraph::extract(c);
    let g = ig.base();
    let mut rng = rng::seeded(seed);
    let mut layout = vec![usize::MAX; n];
    let mut free = vec![true; big_n];
    let mut placed: Vec<usize> = Vec::new();

    let max_deg = cm.graph().max_degree();
    let hubs: Vec<usize> = (0..big_n).filter(|&p| cm.graph().degree(p) == max_deg).collect();

    let mut todo: Vec<usize> = (0..n).collect();
    // most partners first, then most gates, then smallest id
    todo.sort_by_key(|&q| {
        let w: usize = g.neighbors(q).map(|x| ig.weight(Edge::new(q, x))).sum();
        (std::cmp::Reverse(g.degree(q)), std::cmp::Reverse(w), q)
    });

    for &root in &todo {
        if layout[root] != usize::MAX {
            continue;
        }
        let spot = if placed.is_empty() {
            *hubs.choose(&mut rng).expect("nonempty map")
        } else {
            best_free(cm, &free, |p| placed.iter().map(|&x| cm.distance(x, p)).sum::<usize>() as f64)
        };
        layout[root] = spot;
        free[spot] = false;
        placed.push(spot);

        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let mut nbrs: Vec<usize> = g.neighbors(u).filter(|&v| layout[v] == usize::MAX).collect();
            nbrs.sort_by_key(|&v| (std::cmp::Reverse(ig.weight(Edge::new(u, v))), v));
            for v in nbrs {
                if layout[v] != usize::MAX {
                    continue;
                }
                let spot = best_free(cm, &free, |p| {
                    g.neighbors(v)
                        .filter(|&x| layout[x] != usize::MAX)
                        .map(|x| ig.weight(Edge::new(v, x)) as f64 * cm.distance(layout[x], p) as f64)
                        .sum()
                });
                layout[v] = spot;
                free[spot] = false;
                placed.push(spot);
                queue.push_back(v);
            }
        }
    }
    Ok(layout)
}

fn best_free(cm: &CouplingMap, free: &[bool], cost: impl Fn(usize) -> f64) -> usize {
    let mut best = (f64::INFINITY, usize::MAX);
    for p in 0..cm.node_count() {
        if free[p] {
            let c = cost(p);
            if c < best.0 {
                best = (c, p);
            }
        }
    }
    best.1
}

/// Dependency graph over qubits and classical bits.
struct Dag {
    succ: Vec<Vec<usize>>,
    indeg: Vec<usize>,
}

impl Dag {
    fn new(c: &Circuit) -> Dag {
        let m = c.len();
        let mut succ = vec![Vec::new(); m];
        let mut indeg = vec![0; m];
        let mut last_q: Vec<Option<usize>> = vec![None; c.n_qubits()];
        let mut last_c: Vec<Option<usize>> = vec![None; c.n_clbits()];
        for (i, g) in c.gates().iter().enumerate() {
            let mut preds: Vec<usize> = g.qubits().iter().filter_map(|&q| last_q[q]).collect();
            if let Some(b) = g.clbit() {
                preds.extend(last_c[b]);
                last_c[b] = Some(i);
            }
            preds.sort_unstable();
            preds.dedup();
            for p in preds {
                succ[p].push(i);
                indeg[i] += 1;
            }
            for q in g.qubits() {
                last_q[q] = Some(i);
            }
        }
        Dag { succ, indeg }
    }
}

struct Router<'a> {
    cm: &'a CouplingMap,
    l2p: Vec<usize>,
    p2l: Vec<Option<usize>>,
    out: Circuit,
    swaps: usize,
    decay: Vec<f64>,
}

impl Router<'_> {
    fn dist(&self, a: usize, b: usize) -> usize {
        self.cm.distance(self.l2p[a], self.l2p[b])
    }

    fn apply_swap(&mut self, e: Edge) {
        let (a, b) = (e.u(), e.v());
        self.out.push_unchecked(Gate::Swap { a, b });
        let (la, lb) = (self.p2l[a], self.p2l[b]);
        self.p2l[a] = lb;
        self.p2l[b] = la;
        if let Some(l) = la {
            self.l2p[l] = b;
        }
        if let Some(l) = lb {
            self.l2p[l] = a;
        }
        self.swaps += 1;
        self.decay[a] += DECAY_STEP;
        self.decay[b] += DECAY_STEP;
    }
}

/// Routes `c` onto `cm`. Deterministic for a given seed; single-qubit
/// gates, measurements and classically controlled gates never affect the
/// SWAP choices.
pub fn route(c: &Circuit, cm: &CouplingMap, seed: u64) -> Result<RoutedResult> {
    let layout = initial_layout(c, cm, seed)?;
    let big_n = cm.node_count();
    let mut p2l = vec![None; big_n];
    for (l, &p) in layout.iter().enumerate() {
        p2l[p] = Some(l);
    }
    let mut out = Circuit::with_clbits(big_n, c.n_clbits());
    out.name = c.name.clone();
    let mut r = Router {
        cm,
        l2p: layout.clone(),
        p2l,
        out,
        swaps: 0,
        decay: vec![1.0; big_n],
    };

    let gates = c.gates();
    let Dag { succ, mut indeg } = Dag::new(c);
    let mut ready: Vec<usize> = (0..gates.len()).filter(|&i| indeg[i] == 0).collect();
    // two-qubit gates not yet executed, in program order
    let mut pending: VecDeque<usize> = c.two_qubit_positions().into();
    let mut done = vec![false; gates.len()];
    let mut last_swap: Option<Edge> = None;
    let mut stall = 0usize;
    let mut swaps_since_reset = 0usize;
    let stall_limit = 2 * cm.diameter() + 10;

    while !ready.is_empty() {
        // execute everything executable
        let mut progressed = true;
        while progressed {
            progressed = false;
            let mut next_ready = Vec::with_capacity(ready.len());
            ready.sort_unstable();
            for &i in &ready {
                let g = &gates[i];
                let ok = !g.is_two_qubit() || {
                    let q = g.qubits();
                    r.dist(q[0], q[1]) == 1
                };
                if ok {
                    r.out.push_unchecked(g.map_qubits(|q| r.l2p[q]));
                    done[i] = true;
                    progressed = true;
                    if g.is_two_qubit() {
                        stall = 0;
                        last_swap = None;
                        r.decay.iter_mut().for_each(|d| *d = 1.0);
                        swaps_since_reset = 0;
                    }
                    for &s in &succ[i] {
                        indeg[s] -= 1;
                        if indeg[s] == 0 {
                            next_ready.push(s);
                        }
                    }
                } else {
                    next_ready.push(i);
                }
            }
            ready = next_ready;
        }
        if ready.is_empty() {
            break;
        }
        while pending.front().is_some_and(|&i| done[i]) {
            pending.pop_front();
        }

        // every ready gate is a blocked two-qubit gate
        let front: Vec<(usize, usize)> = ready
            .iter()
            .map(|&i| {
                let q = gates[i].qubits();
                (q[0], q[1])
            })
            .collect();

        if stall >= stall_limit {
            // release valve: walk the earliest blocked gate together
            let (a, b) = front[0];
            let path = cm.shortest_path(r.l2p[a], r.l2p[b]);
            for w in path[..path.len() - 1].windows(2) {
                r.apply_swap(Edge::new(w[0], w[1]));
            }
            stall = 0;
            last_swap = None;
            continue;
        }

        let lookahead: Vec<(usize, usize)> = pending
            .iter()
            .filter(|&&i| !done[i] && !ready.contains(&i))
            .take(LOOKAHEAD)
            .map(|&i| {
                let q = gates[i].qubits();
                (q[0], q[1])
            })
            .collect();

        let mut candidates: Vec<Edge> = Vec::new();
        for &(a, b) in &front {
            for l in [a, b] {
                let p = r.l2p[l];
                for nb in cm.graph().neighbors(p) {
                    candidates.push(Edge::new(p, nb));
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();

        let mut best: Option<(f64, Edge)> = None;
        for &e in &candidates {
            if Some(e) == last_swap {
                continue;
            }
            let moved = |p: usize| {
                if p == e.u() {
                    e.v()
                } else if p == e.v() {
                    e.u()
                } else {
                    p
                }
            };
            let d = |a: usize, b: usize| cm.distance(moved(r.l2p[a]), moved(r.l2p[b])) as f64;
            let f: f64 = front.iter().map(|&(a, b)| d(a, b)).sum();
            let la: f64 = lookahead.iter().map(|&(a, b)| d(a, b)).sum();
            let la = if lookahead.is_empty() {
                0.0
            } else {
                la / lookahead.len() as f64
            };
            let cost = r.decay[e.u()].max(r.decay[e.v()]) * (f / front.len() as f64 + LOOKAHEAD_WEIGHT * la);
            if best.map_or(true, |(bc, _)| cost < bc) {
                best = Some((cost, e));
            }
        }
        let (_, e) = best.expect("a blocked gate has a neighboring edge");
        r.apply_swap(e);
        last_swap = Some(e);
        stall += 1;
        swaps_since_reset += 1;
        if swaps_since_reset >= DECAY_RESET {
            r.decay.iter_mut().for_each(|d| *d = 1.0);
            swaps_since_reset = 0;
        }
    }

    let ecr_count = r.out.native_cost();
    Ok(RoutedResult {
        circuit: r.out,
        ecr_count,
        swaps: r.swaps,
        initial_layout: layout,
        final_layout: r.l2p,
        seed,
    })
}

/// Mean routed native two-qubit count over `seeds`.
pub fn ecr_count(c: &Circuit, cm: &CouplingMap, seeds: &[u64]) -> Result<f64> {
    if seeds.is_empty() {
        return Err(Error::param("seeds", "need at least one routing seed"));
    }
    let counts: Vec<usize> = seeds
        .par_iter()
        .map(|&s| route(c, cm, s).map(|r| r.ecr_count))
        .collect::<Result<_>>()?;
    Ok(counts.iter().sum::<usize>() as f64 / seeds.len() as f64)
}

/// `ECR(c) - ECR(c without the gate at position)`, both averaged over
/// `seeds`. Positive means cutting saves gates.
pub fn delta_ecr(c: &Circuit, position: usize, cm: &CouplingMap, seeds: &[u64]) -> Result<f64> {
    let cut = c.without_gate(position)?;
    Ok(ecr_count(c, cm, seeds)? - ecr_count(&cut, cm, seeds)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub edge: Edge,
    pub gate_index: usize,
    pub delta_ecr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleTable {
    pub rows: Vec<OracleRow>,
    pub max_delta: f64,
}

impl OracleTable {
    /// `delta / max_delta`; `None` when the best cut saves nothing.
    pub fn efficiency(&self, delta: f64) -> Option<f64> {
        (self.max_delta != 0.0).then(|| delta / self.max_delta)
    }

    pub fn row(&self, e: Edge) -> Option<&OracleRow> {
        self.rows.iter().find(|r| r.edge == e)
    }
}

/// ΔECR of cutting the first occurrence of every interaction edge.
pub fn oracle_eval(c: &Circuit, cm: &CouplingMap, seeds: &[u64]) -> Result<OracleTable> {
    let ig = InteractionGraph::extract(c);
    if ig.edge_count() == 0 {
        return Err(Error::NoTwoQubitGates);
    }
    let base = ecr_count(c, cm, seeds)?;
    let edges: Vec<(Edge, usize)> = ig
        .weighted_edges()
        .map(|(e, _)| (e, ig.first_occurrence(e).expect("occurs")))
        .collect();
    let rows: Vec<OracleRow> = edges
        .par_iter()
        .map(|&(edge, gate_index)| {
            let cut = ecr_count(&c.without_gate(gate_index)?, cm, seeds)?;
            Ok(OracleRow {
                edge,
                gate_index,
                delta_ecr: base - cut,
            })
        })
        .collect::<Result<_>>()?;
    let max_delta = rows.iter().map(|r| r.delta_ecr).fold(f64::NEG_INFINITY, f64::max);
    Ok(OracleTable { rows, max_delta })
}
