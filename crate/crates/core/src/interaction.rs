//! Weighted interaction graph of a circuit.

use std::collections::BTreeMap;

use crate::circuit::Circuit;
use crate::graph::{Edge, UGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionGraph {
    base: UGraph,
    occurrences: BTreeMap<Edge, Vec<usize>>,
}

impl InteractionGraph {
    /// Every two-qubit gate (CX, CZ, RZZ, SWAP) contributes to the
    /// undirected edge on its operands.
    pub fn extract(c: &Circuit) -> Self {
        let mut base = UGraph::new(c.n_qubits());
        let mut occurrences: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        for (pos, g) in c.gates().iter().enumerate() {
            if let Some(e) = g.edge() {
                // operands were range-checked on push
                base.add_edge(e.u(), e.v()).expect("valid operands");
                occurrences.entry(e).or_default().push(pos);
            }
        }
        InteractionGraph { base, occurrences }
    }

    pub fn base(&self) -> &UGraph {
        &self.base
    }

    pub fn weight(&self, e: Edge) -> usize {
        self.occurrences.get(&e).map_or(0, Vec::len)
    }

    /// Ascending gate positions realizing `e`.
    pub fn occurrences(&self, e: Edge) -> &[usize] {
        self.occurrences.get(&e).map_or(&[], Vec::as_slice)
    }

    pub fn first_occurrence(&self, e: Edge) -> Option<usize> {
        self.occurrences(e).first().copied()
    }

    /// Edges in ascending order with their weights.
    pub fn weighted_edges(&self) -> impl Iterator<Item = (Edge, usize)> + '_ {
        self.occurrences.iter().map(|(e, occ)| (*e, occ.len()))
    }

    pub fn total_weight(&self) -> usize {
        self.occurrences.values().map(Vec::len).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.occurrences.len()
    }

    /// Graph text format with a third weight column.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.base.node_count(), self.edge_count());
        for (e, w) in self.weighted_edges() {
            out.push_str(&format!("{} {} {}\n", e.u(), e.v(), w));
        }
        out
    }
}
