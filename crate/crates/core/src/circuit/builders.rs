use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::graph::{Edge, UGraph};
use crate::sim::{Observable, Pauli};

/// One CX per edge of `g`, edges in sorted order, control on the smaller
/// endpoint.
pub fn circuit_from_graph(g: &UGraph) -> Result<Circuit> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut c = Circuit::new(g.node_count());
    for e in g.edges() {
        c.push(Gate::Cx {
            control: e.u(),
            target: e.v(),
        })?;
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TfimTopology {
    Chain,
    /// Nearest-neighbor ring plus open next-nearest-neighbor couplings, the
    /// same edge set as `GraphFamily::J1J2Ring`.
    J1j2Ring,
}

/// Fixed-angle Trotterised transverse-field Ising circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfimSpec {
    pub n: usize,
    pub trotter_steps: usize,
    pub j1: f64,
    pub j2: f64,
    pub h: f64,
    pub rzz_angle: f64,
    pub dt_x: f64,
    pub topology: TfimTopology,
}

impl TfimSpec {
    /// 1D chain with J1 = 1, h = 0.7, φ = π/2, dt_x = 0.1.
    pub fn chain(n: usize, trotter_steps: usize) -> Self {
        TfimSpec {
            n,
            trotter_steps,
            j1: 1.0,
            j2: 0.0,
            h: 0.7,
            rzz_angle: FRAC_PI_2,
            dt_x: 0.1,
            topology: TfimTopology::Chain,
        }
    }

    /// J1-J2 ring with J1 = 1, J2 = 0.9, h = 1.5, φ = π/2, dt_x = 0.1.
    pub fn j1j2_ring(n: usize, trotter_steps: usize) -> Self {
        TfimSpec {
            n,
            trotter_steps,
            j1: 1.0,
            j2: 0.9,
            h: 1.5,
            rzz_angle: FRAC_PI_2,
            dt_x: 0.1,
            topology: TfimTopology::J1j2Ring,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::param("n", format!("must be >= 2, got {}", self.n)));
        }
        if self.trotter_steps < 1 {
            return Err(Error::param("trotter_steps", "must be >= 1"));
        }
        if self.topology == TfimTopology::J1j2Ring {
            if self.n < 5 {
                return Err(Error::param(
                    "n",
                    format!("j1j2_ring needs n >= 5, got {}", self.n),
                ));
            }
            if self.j1 == 0.0 && self.j2 != 0.0 {
                return Err(Error::param("j1", "J2 angle is scaled by J2/J1, so J1 must be nonzero"));
            }
        }
        for (field, v) in [
            ("j1", self.j1),
            ("j2", self.j2),
            ("h", self.h),
            ("rzz_angle", self.rzz_angle),
            ("dt_x", self.dt_x),
        ] {
            if !v.is_finite() {
                return Err(Error::param(field, "must be finite"));
            }
        }
        Ok(())
    }

    /// Nearest-neighbor couplings in emission order.
    pub fn j1_edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = (0..self.n - 1).map(|i| Edge::new(i, i + 1)).collect();
        if self.topology == TfimTopology::J1j2Ring {
            edges.push(Edge::new(0, self.n - 1));
            edges.sort();
        }
        edges
    }

    /// Next-nearest-neighbor couplings in emission order; empty for a chain
    /// or when J2 is zero.
    pub fn j2_edges(&self) -> Vec<Edge> {
        if self.topology == TfimTopology::Chain || self.j2 == 0.0 {
            return Vec::new();
        }
        (0..self.n - 2).map(|i| Edge::new(i, i + 2)).collect()
    }
}

/// `H` on every qubit, then `T` layers of RZZ(φ) on J1 edges, RZZ(φ·J2/J1)
/// on J2 edges and RX(2·h·dt_x) on every qubit.
pub fn build_tfim(spec: &TfimSpec) -> Result<Circuit> {
    spec.validate()?;
    let n = spec.n;
    let mut c = Circuit::new(n);
    c.name = Some(format!(
        "tfim-{}-n{}-t{}",
        match spec.topology {
            TfimTopology::Chain => "chain",
            TfimTopology::J1j2Ring => "j1j2",
        },
        n,
        spec.trotter_steps
    ));
    for q in 0..n {
        c.push(Gate::H { q })?;
    }
    let j1 = spec.j1_edges();
    let j2 = spec.j2_edges();
    let phi2 = if j2.is_empty() {
        0.0
    } else {
        spec.rzz_angle * spec.j2 / spec.j1
    };
    for _ in 0..spec.trotter_steps {
        for e in &j1 {
            c.push(Gate::Rzz {
                a: e.u(),
                b: e.v(),
                theta: spec.rzz_angle,
            })?;
        }
        for e in &j2 {
            c.push(Gate::Rzz {
                a: e.u(),
                b: e.v(),
                theta: phi2,
            })?;
        }
        for q in 0..n {
            c.push(Gate::Rx {
                q,
                theta: 2.0 * spec.h * spec.dt_x,
            })?;
        }
    }
    Ok(c)
}

/// `J1 Σ Z_i Z_j + J2 Σ Z_i Z_k + h Σ X_i` over the spec's couplings.
pub fn tfim_hamiltonian(spec: &TfimSpec) -> Result<Observable> {
    spec.validate()?;
    let n = spec.n;
    let mut obs = Observable::new(n);
    let zz = |e: &Edge| {
        let mut p = vec![Pauli::I; n];
        p[e.u()] = Pauli::Z;
        p[e.v()] = Pauli::Z;
        p
    };
    for e in spec.j1_edges() {
        obs.push(spec.j1, zz(&e))?;
    }
    for e in spec.j2_edges() {
        obs.push(spec.j2, zz(&e))?;
    }
    for q in 0..n {
        let mut p = vec![Pauli::I; n];
        p[q] = Pauli::X;
        obs.push(spec.h, p)?;
    }
    Ok(obs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily, GraphFamilySpec};

    fn gen(f: GraphFamily) -> UGraph {
        generate(&GraphFamilySpec::new(f, 0)).unwrap()
    }

    #[test]
    fn graph_circuits() {
        let c = circuit_from_graph(&gen(GraphFamily::Barbell { k: 3, m: 0 })).unwrap();
        assert_eq!((c.n_qubits(), c.len()), (6, 7));
        assert!(c.gates().iter().all(|g| matches!(g, Gate::Cx { control, target } if control < target)));
        let c = circuit_from_graph(&gen(GraphFamily::Grid { rows: 3, cols: 3 })).unwrap();
        assert_eq!((c.n_qubits(), c.len()), (9, 12));
        let k4 = UGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(circuit_from_graph(&k4).unwrap().len(), 6);
        assert!(circuit_from_graph(&UGraph::new(0)).is_err());
    }

    #[test]
    fn chain_gate_count() {
        let c = build_tfim(&TfimSpec::chain(4, 1)).unwrap();
        assert_eq!(c.len(), 11);
        for t in 1..=4 {
            for n in 2..7 {
                let c = build_tfim(&TfimSpec::chain(n, t)).unwrap();
                assert_eq!(c.len(), n + t * ((n - 1) + n));
            }
        }
    }

    #[test]
    fn ring_edges_match_graph_family() {
        for n in [5, 6, 8, 10, 12] {
            let spec = TfimSpec::j1j2_ring(n, 2);
            let c = build_tfim(&spec).unwrap();
            let mut edges: Vec<Edge> = spec.j1_edges();
            edges.extend(spec.j2_edges());
            edges.sort();
            let family: Vec<Edge> = gen(GraphFamily::J1J2Ring { n }).edges().collect();
            assert_eq!(edges, family);
            assert_eq!(c.len(), n + 2 * (edges.len() + n));
        }
        assert!(build_tfim(&TfimSpec::j1j2_ring(4, 1)).is_err());
    }

    #[test]
    fn j2_angle_is_scaled() {
        let c = build_tfim(&TfimSpec::j1j2_ring(6, 1)).unwrap();
        let nnn: Vec<f64> = c
            .gates()
            .iter()
            .filter_map(|g| match *g {
                Gate::Rzz { a, b, theta } if b - a == 2 => Some(theta),
                _ => None,
            })
            .collect();
        assert_eq!(nnn.len(), 4);
        assert!(nnn.iter().all(|&t| (t - FRAC_PI_2 * 0.9).abs() < 1e-15));
    }

    #[test]
    fn hamiltonian_terms() {
        let h = tfim_hamiltonian(&TfimSpec::chain(4, 1)).unwrap();
        assert_eq!(h.terms().len(), 3 + 4);
        let h = tfim_hamiltonian(&TfimSpec::j1j2_ring(8, 1)).unwrap();
        assert_eq!(h.terms().len(), 8 + 6 + 8);
    }
}
