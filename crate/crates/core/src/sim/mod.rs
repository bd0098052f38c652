//! Exact simulation, shot sampling and gate-cut reconstruction.
//!
//! Noiseless runs use a statevector; noisy runs use a density matrix with a
//! two-qubit depolarizing channel after every native two-qubit gate and a
//! classical bit flip on every recorded measurement. With a [`Routing`]
//! the circuit is first routed onto the device and compressed to the
//! physical qubits it touches, so the noise follows the routed gate count.

mod engine;
mod observable;
mod qpd;
mod register;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::rng;
use crate::router::{route, CouplingMap};
use engine::{group_distributions, run, GroupDist};
use register::{DensityMatrix, StateVector};

pub use observable::{Observable, Pauli, PauliTerm};
pub use qpd::{choi_matrix, qpd_branches, qpd_estimate, qpd_estimate_at, QpdBranch, Strategy};

/// Largest statevector and density-matrix widths accepted.
pub const STATEVECTOR_LIMIT: usize = 12;
pub const DENSITY_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p_ecr: f64,
    pub p_meas: f64,
}

impl NoiseModel {
    pub fn new(p_ecr: f64, p_meas: f64) -> Result<Self> {
        let m = NoiseModel { p_ecr, p_meas };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, p) in [("p_ecr", self.p_ecr), ("p_meas", self.p_meas)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::param(field, format!("must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

/// Route onto `coupling` with `seed` before simulating.
#[derive(Debug, Clone)]
pub struct Routing {
    pub coupling: Arc<CouplingMap>,
    pub seed: u64,
}

#[derive(Debug, Clone, Default)]
pub struct Backend {
    pub noise: Option<NoiseModel>,
    pub routing: Option<Routing>,
}

impl Backend {
    pub fn ideal() -> Self {
        Backend::default()
    }

    pub fn noisy(noise: NoiseModel) -> Self {
        Backend {
            noise: Some(noise),
            routing: None,
        }
    }

    pub fn routed(mut self, coupling: Arc<CouplingMap>, seed: u64) -> Self {
        self.routing = Some(Routing { coupling, seed });
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shots {
    /// Exact branch expectations, no sampling.
    Exact,
    Finite(u64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub value: f64,
    /// One entry per branch; a single entry for direct estimation.
    pub per_branch: Vec<f64>,
    /// Shots drawn per measurement group in each branch; `None` in exact
    /// mode.
    pub shots: Vec<Option<u64>>,
    pub strategy: Option<Strategy>,
    pub seed: u64,
}

/// Circuit and observable as they will be simulated.
pub(crate) struct Prepared {
    pub circuit: Circuit,
    pub observable: Observable,
    pub noise: NoiseModel,
    pub mixed: bool,
}

pub(crate) fn prepare(c: &Circuit, obs: &Observable, backend: &Backend) -> Result<Prepared> {
    if obs.n_qubits() != c.n_qubits() {
        return Err(Error::param(
            "observable",
            format!("acts on {} qubits, circuit has {}", obs.n_qubits(), c.n_qubits()),
        ));
    }
    if let Some(n) = &backend.noise {
        n.validate()?;
    }
    let (circuit, observable) = match &backend.routing {
        None => (c.clone(), obs.clone()),
        Some(r) => {
            let routed = route(c, &r.coupling, r.seed)?;
            compress(&routed.circuit, &routed.final_layout, obs)?
        }
    };
    Ok(Prepared {
        circuit,
        observable,
        noise: backend.noise.unwrap_or_default(),
        mixed: backend.noise.is_some(),
    })
}

/// Renumbers a physical-qubit circuit onto the qubits it touches plus the
/// final positions of the logical qubits, in ascending physical order.
fn compress(physical: &Circuit, final_layout: &[usize], obs: &Observable) -> Result<(Circuit, Observable)> {
    let mut used = vec![false; physical.n_qubits()];
    for g in physical.gates() {
        for q in g.qubits() {
            used[q] = true;
        }
    }
    for &p in final_layout {
        used[p] = true;
    }
    let mut index = vec![usize::MAX; physical.n_qubits()];
    let mut k = 0;
    for (p, &u) in used.iter().enumerate() {
        if u {
            index[p] = k;
            k += 1;
        }
    }
    let mut out = Circuit::with_clbits(k, physical.n_clbits());
    out.name = physical.name.clone();
    for g in physical.gates() {
        out.push(g.map_qubits(|q| index[q]))?;
    }
    let map: Vec<usize> = final_layout.iter().map(|&p| index[p]).collect();
    Ok((out, obs.remap(&map, k)?))
}

pub(crate) fn distributions(p: &Prepared, sign_mask: u64) -> Result<Vec<GroupDist>> {
    let n = p.circuit.n_qubits();
    if p.mixed {
        if n > DENSITY_LIMIT {
            return Err(Error::SimulationLimit(format!(
                "density matrix on {n} qubits exceeds {DENSITY_LIMIT}"
            )));
        }
        let branches = run::<DensityMatrix>(&p.circuit, &p.noise)?;
        Ok(group_distributions(&branches, &p.observable, sign_mask, p.noise.p_meas))
    } else {
        if n > STATEVECTOR_LIMIT {
            return Err(Error::SimulationLimit(format!(
                "statevector on {n} qubits exceeds {STATEVECTOR_LIMIT}"
            )));
        }
        let branches = run::<StateVector>(&p.circuit, &p.noise)?;
        Ok(group_distributions(&branches, &p.observable, sign_mask, 0.0))
    }
}

/// Exact `<O>` under the backend's model.
pub fn exact_expectation(c: &Circuit, obs: &Observable, backend: &Backend) -> Result<f64> {
    let p = prepare(c, obs, backend)?;
    Ok(distributions(&p, 0)?.iter().map(GroupDist::mean).sum())
}

/// Single-shot variance of the estimator, summed over measurement groups.
/// With `M` shots per group the estimator variance is this over `M`.
pub fn shot_variance(c: &Circuit, obs: &Observable, backend: &Backend) -> Result<f64> {
    let p = prepare(c, obs, backend)?;
    Ok(distributions(&p, 0)?.iter().map(GroupDist::variance).sum())
}

/// `shots` samples per measurement group from the exact outcome
/// distribution.
pub fn sample_expectation(
    c: &Circuit,
    obs: &Observable,
    shots: u64,
    backend: &Backend,
    seed: u64,
) -> Result<EstimateResult> {
    if shots == 0 {
        return Err(Error::param("shots", "must be >= 1"));
    }
    let p = prepare(c, obs, backend)?;
    let mut r = rng::seeded(seed);
    let value = distributions(&p, 0)?
        .iter()
        .map(|d| d.sample_mean(shots, &mut r))
        .sum();
    Ok(EstimateResult {
        value,
        per_branch: vec![value],
        shots: vec![Some(shots)],
        strategy: None,
        seed,
    })
}
