//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered gate list over `n_qubits` logical qubits and
//! `n_clbits` classical bits. Program order is the only ordering; layer
//! indices are derived by as-soon-as-possible scheduling.

mod builders;
mod text;

use arrayvec::ArrayVec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Edge;

pub use builders::{build_tfim, circuit_from_graph, tfim_hamiltonian, TfimSpec, TfimTopology};
pub use text::{emit_circuit, parse_circuit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Gate {
    Rx { q: usize, theta: f64 },
    Rz { q: usize, theta: f64 },
    H { q: usize },
    X { q: usize },
    Sx { q: usize },
    Rzz { a: usize, b: usize, theta: f64 },
    Cx { control: usize, target: usize },
    Cz { a: usize, b: usize },
    Swap { a: usize, b: usize },
    Measure { q: usize, clbit: usize },
    /// X applied when classical bit `clbit` reads 1.
    CondX { q: usize, clbit: usize },
}

impl Gate {
    pub fn mnemonic(&self) -> &'static str {
        match self {
            Gate::Rx { .. } => "rx",
            Gate::Rz { .. } => "rz",
            Gate::H { .. } => "h",
            Gate::X { .. } => "x",
            Gate::Sx { .. } => "sx",
            Gate::Rzz { .. } => "rzz",
            Gate::Cx { .. } => "cx",
            Gate::Cz { .. } => "cz",
            Gate::Swap { .. } => "swap",
            Gate::Measure { .. } => "measure",
            Gate::CondX { .. } => "condx",
        }
    }

    /// Qubit operands in declaration order (control before target).
    pub fn qubits(&self) -> ArrayVec<usize, 2> {
        let mut out = ArrayVec::new();
        match *self {
            Gate::Rx { q, .. }
            | Gate::Rz { q, .. }
            | Gate::H { q }
            | Gate::X { q }
            | Gate::Sx { q }
            | Gate::Measure { q, .. }
            | Gate::CondX { q, .. } => out.push(q),
            Gate::Rzz { a, b, .. } | Gate::Cz { a, b } | Gate::Swap { a, b } => {
                out.push(a);
                out.push(b);
            }
            Gate::Cx { control, target } => {
                out.push(control);
                out.push(target);
            }
        }
        out
    }

    pub fn clbit(&self) -> Option<usize> {
        match *self {
            Gate::Measure { clbit, .. } | Gate::CondX { clbit, .. } => Some(clbit),
            _ => None,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx { theta, .. } | Gate::Rz { theta, .. } | Gate::Rzz { theta, .. } => Some(theta),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(
            self,
            Gate::Rzz { .. } | Gate::Cx { .. } | Gate::Cz { .. } | Gate::Swap { .. }
        )
    }

    /// The interaction edge of a two-qubit gate.
    pub fn edge(&self) -> Option<Edge> {
        if self.is_two_qubit() {
            let q = self.qubits();
            Some(Edge::new(q[0], q[1]))
        } else {
            None
        }
    }

    /// Native two-qubit (ECR-equivalent) cost: CX/CZ 1, RZZ 2, SWAP 3.
    pub fn native_cost(&self) -> usize {
        match self {
            Gate::Cx { .. } | Gate::Cz { .. } => 1,
            Gate::Rzz { .. } => 2,
            Gate::Swap { .. } => 3,
            _ => 0,
        }
    }

    /// Same gate with every qubit operand passed through `f`.
    pub fn map_qubits(&self, mut f: impl FnMut(usize) -> usize) -> Gate {
        match *self {
            Gate::Rx { q, theta } => Gate::Rx { q: f(q), theta },
            Gate::Rz { q, theta } => Gate::Rz { q: f(q), theta },
            Gate::H { q } => Gate::H { q: f(q) },
            Gate::X { q } => Gate::X { q: f(q) },
            Gate::Sx { q } => Gate::Sx { q: f(q) },
            Gate::Rzz { a, b, theta } => Gate::Rzz { a: f(a), b: f(b), theta },
            Gate::Cx { control, target } => Gate::Cx {
                control: f(control),
                target: f(target),
            },
            Gate::Cz { a, b } => Gate::Cz { a: f(a), b: f(b) },
            Gate::Swap { a, b } => Gate::Swap { a: f(a), b: f(b) },
            Gate::Measure { q, clbit } => Gate::Measure { q: f(q), clbit },
            Gate::CondX { q, clbit } => Gate::CondX { q: f(q), clbit },
        }
    }

    pub(crate) fn with_clbit_offset(&self, offset: usize) -> Gate {
        match *self {
            Gate::Measure { q, clbit } => Gate::Measure { q, clbit: clbit + offset },
            Gate::CondX { q, clbit } => Gate::CondX { q, clbit: clbit + offset },
            g => g,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n_qubits: usize,
    n_clbits: usize,
    gates: Vec<Gate>,
    pub name: Option<String>,
    /// Classical bits written by a measurement so far.
    written: Vec<bool>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit::with_clbits(n_qubits, 0)
    }

    pub fn with_clbits(n_qubits: usize, n_clbits: usize) -> Self {
        Circuit {
            n_qubits,
            n_clbits,
            gates: Vec::new(),
            name: None,
            written: vec![false; n_clbits],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_clbits(&self) -> usize {
        self.n_clbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends `gate` after checking operand ranges, distinct two-qubit
    /// operands, and that a conditional X reads an already written bit.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        for &q in &qs {
            if q >= self.n_qubits {
                return Err(Error::OutOfRange {
                    index: q,
                    len: self.n_qubits,
                });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::param(
                "qubits",
                format!("{} needs distinct operands, got {} twice", gate.mnemonic(), qs[0]),
            ));
        }
        if let Some(c) = gate.clbit() {
            if c >= self.n_clbits {
                return Err(Error::OutOfRange {
                    index: c,
                    len: self.n_clbits,
                });
            }
            match gate {
                Gate::Measure { .. } => self.written[c] = true,
                Gate::CondX { .. } if !self.written[c] => {
                    return Err(Error::param(
                        "clbit",
                        format!("condx reads classical bit {c} before any measurement writes it"),
                    ))
                }
                _ => {}
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Positions of all two-qubit gates in program order.
    pub fn two_qubit_positions(&self) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| g.is_two_qubit())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Sum of native two-qubit costs over all gates.
    pub fn native_cost(&self) -> usize {
        self.gates.iter().map(Gate::native_cost).sum()
    }

    /// ASAP layer of every gate: one more than the latest earlier gate that
    /// shares a qubit, starting from layer 0.
    pub fn layers(&self) -> Vec<usize> {
        let mut frontier = vec![0usize; self.n_qubits];
        let mut clbit_ready = vec![0usize; self.n_clbits];
        self.gates
            .iter()
            .map(|g| {
                let qs = g.qubits();
                let mut layer = qs.iter().map(|&q| frontier[q]).max().unwrap_or(0);
                if let Gate::CondX { clbit, .. } = g {
                    layer = layer.max(clbit_ready[*clbit]);
                }
                for &q in &qs {
                    frontier[q] = layer + 1;
                }
                if let Gate::Measure { clbit, .. } = g {
                    clbit_ready[*clbit] = layer + 1;
                }
                layer
            })
            .collect()
    }

    pub fn layer_index(&self, position: usize) -> Result<usize> {
        if position >= self.gates.len() {
            return Err(Error::OutOfRange {
                index: position,
                len: self.gates.len(),
            });
        }
        Ok(self.layers()[position])
    }

    /// Copy of the circuit with the gate at `position` deleted.
    pub fn without_gate(&self, position: usize) -> Result<Circuit> {
        if position >= self.gates.len() {
            return Err(Error::OutOfRange {
                index: position,
                len: self.gates.len(),
            });
        }
        let mut out = self.clone();
        out.gates.remove(position);
        Ok(out)
    }

    /// Copy with the gate at `position` replaced by `replacement`, adding
    /// `extra_clbits` fresh classical bits whose indices start at the
    /// current `n_clbits`.
    pub fn splice(&self, position: usize, replacement: &[Gate], extra_clbits: usize) -> Result<Circuit> {
        if position >= self.gates.len() {
            return Err(Error::OutOfRange {
                index: position,
                len: self.gates.len(),
            });
        }
        let mut out = Circuit::with_clbits(self.n_qubits, self.n_clbits + extra_clbits);
        out.name = self.name.clone();
        for (i, g) in self.gates.iter().enumerate() {
            if i == position {
                for r in replacement {
                    out.push(r.with_clbit_offset(self.n_clbits))?;
                }
            } else {
                out.push(*g)?;
            }
        }
        Ok(out)
    }

    pub(crate) fn push_unchecked(&mut self, gate: Gate) {
        if let Gate::Measure { clbit, .. } = gate {
            self.written[clbit] = true;
        }
        self.gates.push(gate);
    }
}
