//! Quasi-probability decomposition of a single two-qubit gate.
//!
//! For `U = exp(iθ A⊗A)` with `A² = I`,
//!
//! ```text
//! U ρ U† = cos²θ ρ + sin²θ (A⊗A) ρ (A⊗A)
//!        + cosθ sinθ [M⊗R⁺ − M⊗R⁻ + R⁺⊗M − R⁻⊗M](ρ)
//! ```
//!
//! where `R^±` conjugates by `exp(±iπ/4 A)` and `M` is the signed
//! measurement `Π₊ρΠ₊ − Π₋ρΠ₋`. CZ and RZZ use `A = Z` directly; CX is CZ
//! conjugated by Hadamards on the target. The sign is read from a fresh
//! classical bit, so a flipped record flips the branch value.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::engine::{run, GroupDist};
use super::register::DensityMatrix;
use super::{distributions, prepare, Backend, EstimateResult, NoiseModel, Observable, Shots};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::rng;
use crate::select::CutSelection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// All six branches share the budget: `⌊M/6⌋` shots each, remainder
    /// to the leading branches.
    #[serde(rename = "shared")]
    Shared,
    /// `⌊1.5 M⌋` shots per branch, `9M` in total.
    #[serde(rename = "per_subcircuit_1_5x")]
    PerSubcircuit,
}

impl Strategy {
    pub fn allocation(self, budget: u64, branches: usize) -> Vec<u64> {
        match self {
            Strategy::Shared => {
                let b = branches as u64;
                (0..b).map(|k| budget / b + u64::from(k < budget % b)).collect()
            }
            Strategy::PerSubcircuit => vec![budget * 3 / 2; branches],
        }
    }
}

/// One term of the decomposition on local qubits 0 (first operand) and 1.
/// A signed branch measures into local classical bit 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QpdBranch {
    pub coeff: f64,
    pub gates: Vec<Gate>,
    pub signed: bool,
}

/// Branches for `exp(iθ Z⊗Z)` followed by `Rz(φ)⊗Rz(φ)`.
fn zz_branches(theta: f64, phi: f64) -> Vec<QpdBranch> {
    let (c, s) = (theta.cos(), theta.sin());
    // (coefficient, measured qubit, Z angle on qubit 0, Z angle on qubit 1);
    // exp(±iπ/4 Z) is Rz(∓π/2) up to phase
    let table = [
        (c * c, None, phi, phi),
        (s * s, None, PI + phi, PI + phi),
        (c * s, Some(0), 0.0, -FRAC_PI_2 + phi),
        (-c * s, Some(0), 0.0, FRAC_PI_2 + phi),
        (c * s, Some(1), -FRAC_PI_2 + phi, 0.0),
        (-c * s, Some(1), FRAC_PI_2 + phi, 0.0),
    ];
    table
        .into_iter()
        .map(|(coeff, meas, a0, a1)| {
            let mut gates = Vec::new();
            if let Some(q) = meas {
                // a Z rotation after the projection only adds a phase
                gates.push(Gate::Measure { q, clbit: 0 });
            }
            for (q, angle) in [(0, a0), (1, a1)] {
                let angle = (angle + PI).rem_euclid(2.0 * PI) - PI;
                if meas != Some(q) && angle.abs() > 1e-15 {
                    gates.push(Gate::Rz { q, theta: angle });
                }
            }
            QpdBranch {
                coeff,
                gates,
                signed: meas.is_some(),
            }
        })
        .collect()
}

/// The six-branch decomposition of a CX, CZ or RZZ gate, checked against
/// the gate's Choi matrix before it is returned.
pub fn qpd_branches(gate: &Gate) -> Result<Vec<QpdBranch>> {
    let branches = match *gate {
        // CZ = Rz(π/2)⊗Rz(π/2) · exp(iπ/4 Z⊗Z) up to phase
        Gate::Cz { .. } => zz_branches(FRAC_PI_4, FRAC_PI_2),
        Gate::Cx { .. } => zz_branches(FRAC_PI_4, FRAC_PI_2)
            .into_iter()
            .map(|mut b| {
                b.gates.insert(0, Gate::H { q: 1 });
                b.gates.push(Gate::H { q: 1 });
                b
            })
            .collect(),
        Gate::Rzz { theta, .. } => zz_branches(-theta / 2.0, 0.0),
        _ => {
            return Err(Error::Unsupported(format!(
                "no decomposition for {}",
                gate.mnemonic()
            )))
        }
    };
    let local = gate.map_qubits(|q| if q == gate.qubits()[0] { 0 } else { 1 });
    let target = choi_matrix(&[local], false)?;
    let mut sum = vec![C::new(0.0, 0.0); 256];
    for b in &branches {
        for (s, x) in sum.iter_mut().zip(choi_matrix(&b.gates, b.signed)?) {
            *s += x * b.coeff;
        }
    }
    let err: f64 = sum
        .iter()
        .zip(&target)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if err > 1e-12 {
        return Err(Error::Unsupported(format!(
            "decomposition of {} misses its Choi matrix by {err:e}",
            gate.mnemonic()
        )));
    }
    Ok(branches)
}

/// Choi matrix `Σ_ij |i><j| ⊗ E(|i><j|)` of a two-qubit gate sequence on
/// local qubits 0 and 1, flattened row-major over 4-bit indices whose low
/// two bits are the output and high two bits the input. A signed sequence
/// subtracts the branch where classical bit 0 reads 1.
pub fn choi_matrix(gates: &[Gate], signed: bool) -> Result<Vec<C>> {
    let mut c = Circuit::with_clbits(4, 1);
    c.extend([
        Gate::H { q: 2 },
        Gate::H { q: 3 },
        Gate::Cx { control: 2, target: 0 },
        Gate::Cx { control: 3, target: 1 },
    ])?;
    c.extend(gates.iter().copied())?;
    let branches = run::<DensityMatrix>(&c, &NoiseModel::default())?;
    let mut out = vec![C::new(0.0, 0.0); 256];
    for br in &branches {
        let sign = if signed && br.record & 1 == 1 { -4.0 } else { 4.0 };
        for r in 0..16 {
            for col in 0..16 {
                out[r * 16 + col] += br.reg.get(r, col) * sign;
            }
        }
    }
    Ok(out)
}

/// Cut the two-qubit gate chosen by `cut` and reconstruct `<O>` from the
/// six branches.
pub fn qpd_estimate(
    c: &Circuit,
    cut: &CutSelection,
    obs: &Observable,
    shots: Shots,
    strategy: Strategy,
    backend: &Backend,
    seed: u64,
) -> Result<EstimateResult> {
    qpd_estimate_at(c, cut.gate_index, obs, shots, strategy, backend, seed)
}

pub fn qpd_estimate_at(
    c: &Circuit,
    position: usize,
    obs: &Observable,
    shots: Shots,
    strategy: Strategy,
    backend: &Backend,
    seed: u64,
) -> Result<EstimateResult> {
    let gate = *c.gates().get(position).ok_or(Error::OutOfRange {
        index: position,
        len: c.len(),
    })?;
    let branches = qpd_branches(&gate)?;
    let ops = gate.qubits();
    let alloc: Vec<Option<u64>> = match shots {
        Shots::Exact => vec![None; branches.len()],
        Shots::Finite(0) => return Err(Error::param("shots", "must be >= 1")),
        Shots::Finite(m) => strategy.allocation(m, branches.len()).into_iter().map(Some).collect(),
    };
    let per_branch: Vec<f64> = branches
        .par_iter()
        .zip(&alloc)
        .enumerate()
        .map(|(k, (b, &m))| -> Result<f64> {
            let replacement: Vec<Gate> = b.gates.iter().map(|g| g.map_qubits(|q| ops[q])).collect();
            let extra = usize::from(b.signed);
            let bc = c.splice(position, &replacement, extra)?;
            let sign_mask = if b.signed { 1u64 << c.n_clbits() } else { 0 };
            let p = prepare(&bc, obs, backend)?;
            let dists = distributions(&p, sign_mask)?;
            Ok(match m {
                None => dists.iter().map(GroupDist::mean).sum(),
                Some(m) => {
                    let mut r = rng::substream(seed, k as u64 + 1);
                    dists.iter().map(|d| d.sample_mean(m, &mut r)).sum()
                }
            })
        })
        .collect::<Result<_>>()?;
    let value = branches.iter().zip(&per_branch).map(|(b, e)| b.coeff * e).sum();
    Ok(EstimateResult {
        value,
        per_branch,
        shots: alloc,
        strategy: Some(strategy),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::exact_expectation;

    #[test]
    fn gamma_is_three_for_cx_cz() {
        for g in [Gate::Cx { control: 0, target: 1 }, Gate::Cz { a: 0, b: 1 }] {
            let b = qpd_branches(&g).unwrap();
            assert_eq!(b.len(), 6);
            assert!((b.iter().map(|x| x.coeff.abs()).sum::<f64>() - 3.0).abs() < 1e-15);
            assert!(b.iter().all(|x| (x.coeff.abs() - 0.5).abs() < 1e-15));
        }
    }

    #[test]
    fn rzz_decomposes() {
        for theta in [0.3, FRAC_PI_2, -1.1, 2.9] {
            let b = qpd_branches(&Gate::Rzz { a: 0, b: 1, theta }).unwrap();
            let gamma: f64 = b.iter().map(|x| x.coeff.abs()).sum();
            assert!((gamma - (1.0 + 2.0 * theta.sin().abs())).abs() < 1e-12);
        }
        assert!(qpd_branches(&Gate::Swap { a: 0, b: 1 }).is_err());
    }

    #[test]
    fn reversed_operands() {
        // control above target and the other way round
        for g in [Gate::Cx { control: 1, target: 0 }, Gate::Cx { control: 0, target: 1 }] {
            let mut c = Circuit::new(2);
            c.extend([Gate::H { q: 0 }, Gate::Rx { q: 1, theta: 0.4 }, g, Gate::Sx { q: 0 }]).unwrap();
            let o = Observable::parse("1 ZX\n0.5 YY\n-1 ZI\n").unwrap();
            let exact = exact_expectation(&c, &o, &Backend::ideal()).unwrap();
            let q = qpd_estimate_at(&c, 2, &o, Shots::Exact, Strategy::Shared, &Backend::ideal(), 0).unwrap();
            assert!((q.value - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn allocation() {
        assert_eq!(Strategy::Shared.allocation(1000, 6), vec![167, 167, 167, 167, 166, 166]);
        assert_eq!(Strategy::Shared.allocation(5, 6), vec![1, 1, 1, 1, 1, 0]);
        assert_eq!(Strategy::PerSubcircuit.allocation(1001, 6), vec![1501; 6]);
    }

    #[test]
    fn strategy_serde_names() {
        assert_eq!(serde_json::to_string(&Strategy::PerSubcircuit).unwrap(), "\"per_subcircuit_1_5x\"");
        assert_eq!(serde_json::from_str::<Strategy>("\"shared\"").unwrap(), Strategy::Shared);
    }
}
