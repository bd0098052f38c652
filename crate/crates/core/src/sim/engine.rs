//! Runs a circuit over classical-record branches and turns the final
//! mixture into per-group outcome distributions.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C;
use rand_distr::{Binomial, Distribution};

use super::observable::{Observable, Pauli};
use super::register::{Mat2, Register};
use super::NoiseModel;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

pub(crate) struct Branch<R> {
    pub record: u64,
    pub reg: R,
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub(crate) fn gate_matrix(g: &Gate) -> Option<Mat2> {
    let s = FRAC_1_SQRT_2;
    Some(match *g {
        Gate::Rx { theta, .. } => {
            let (co, si) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            [[c(co, 0.0), c(0.0, -si)], [c(0.0, -si), c(co, 0.0)]]
        }
        Gate::Rz { theta, .. } => [
            [C::from_polar(1.0, -theta / 2.0), c(0.0, 0.0)],
            [c(0.0, 0.0), C::from_polar(1.0, theta / 2.0)],
        ],
        Gate::H { .. } => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        Gate::X { .. } | Gate::CondX { .. } => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        Gate::Sx { .. } => [
            [c(0.5, 0.5), c(0.5, -0.5)],
            [c(0.5, -0.5), c(0.5, 0.5)],
        ],
        _ => return None,
    })
}

fn rzz_diag(theta: f64) -> [C; 4] {
    let (m, p) = (C::from_polar(1.0, -theta / 2.0), C::from_polar(1.0, theta / 2.0));
    [m, p, p, m]
}

/// Evolves `|0...0>` through `c`. Measurements split every branch by
/// outcome and, with `p_meas > 0`, by whether the recorded bit flipped.
pub(crate) fn run<R: Register>(c: &Circuit, noise: &NoiseModel) -> Result<Vec<Branch<R>>> {
    if c.n_clbits() > 64 {
        return Err(Error::SimulationLimit(format!(
            "{} classical bits, at most 64 supported",
            c.n_clbits()
        )));
    }
    let mut branches = vec![Branch {
        record: 0,
        reg: R::zero(c.n_qubits()),
    }];
    let depol = |branches: &mut Vec<Branch<R>>, a: usize, b: usize, times: usize| -> Result<()> {
        for br in branches.iter_mut() {
            for _ in 0..times {
                if !br.reg.depolarize2(a, b, noise.p_ecr) {
                    return Err(Error::Unsupported(
                        "two-qubit depolarizing noise needs the density-matrix backend".into(),
                    ));
                }
            }
        }
        Ok(())
    };
    for g in c.gates() {
        match *g {
            Gate::Rzz { a, b, theta } => {
                let d = rzz_diag(theta);
                branches.iter_mut().for_each(|br| br.reg.diag2(a, b, &d));
                depol(&mut branches, a, b, 2)?;
            }
            Gate::Cx { control, target } => {
                branches.iter_mut().for_each(|br| br.reg.cx(control, target));
                depol(&mut branches, control, target, 1)?;
            }
            Gate::Cz { a, b } => {
                let one = C::new(1.0, 0.0);
                let d = [one, one, one, -one];
                branches.iter_mut().for_each(|br| br.reg.diag2(a, b, &d));
                depol(&mut branches, a, b, 1)?;
            }
            Gate::Swap { a, b } => {
                branches.iter_mut().for_each(|br| br.reg.swap(a, b));
                depol(&mut branches, a, b, 3)?;
            }
            Gate::Measure { q, clbit } => {
                branches = measure(branches, q, clbit, noise.p_meas);
            }
            Gate::CondX { q, clbit } => {
                let m = gate_matrix(g).expect("1q");
                for br in branches.iter_mut().filter(|br| br.record >> clbit & 1 == 1) {
                    br.reg.gate1(q, &m);
                }
            }
            _ => {
                let m = gate_matrix(g).expect("1q");
                let q = g.qubits()[0];
                branches.iter_mut().for_each(|br| br.reg.gate1(q, &m));
            }
        }
    }
    Ok(branches)
}

fn measure<R: Register>(branches: Vec<Branch<R>>, q: usize, clbit: usize, p_flip: f64) -> Vec<Branch<R>> {
    let mut out: Vec<Branch<R>> = Vec::with_capacity(branches.len() * 2);
    let push = |out: &mut Vec<Branch<R>>, record: u64, reg: R| {
        if let Some(existing) = out.iter_mut().find(|b| b.record == record) {
            if existing.reg.try_merge(&reg) {
                return;
            }
        }
        out.push(Branch { record, reg });
    };
    for br in branches {
        for outcome in 0..2u64 {
            let mut reg = br.reg.clone();
            reg.project(q, outcome as usize);
            if reg.weight() <= 0.0 {
                continue;
            }
            let kept = (br.record & !(1 << clbit)) | outcome << clbit;
            if p_flip > 0.0 {
                let mut flipped = reg.clone();
                flipped.scale(p_flip);
                reg.scale(1.0 - p_flip);
                push(&mut out, kept ^ 1 << clbit, flipped);
            }
            push(&mut out, kept, reg);
        }
    }
    out.sort_by_key(|b| b.record);
    out
}

/// Discrete distribution of one group's per-shot value.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct GroupDist {
    pub probs: Vec<f64>,
    pub values: Vec<f64>,
}

impl GroupDist {
    pub fn mean(&self) -> f64 {
        self.probs.iter().zip(&self.values).map(|(p, v)| p * v).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let sq: f64 = self.probs.iter().zip(&self.values).map(|(p, v)| p * v * v).sum();
        (sq - m * m).max(0.0)
    }

    /// Mean of `shots` draws, via sequential binomial splitting.
    pub fn sample_mean(&self, shots: u64, rng: &mut crate::rng::Rng) -> f64 {
        if shots == 0 {
            return 0.0;
        }
        let mut left = shots;
        let mut mass = 1.0f64;
        let mut acc = 0.0;
        let last = self.probs.len().saturating_sub(1);
        for (i, (&p, &v)) in self.probs.iter().zip(&self.values).enumerate() {
            if left == 0 {
                break;
            }
            let k = if i == last || mass <= p {
                left
            } else {
                let q = (p / mass).clamp(0.0, 1.0);
                if q == 0.0 {
                    0
                } else {
                    Binomial::new(left, q).expect("valid binomial").sample(rng)
                }
            };
            acc += k as f64 * v;
            left -= k;
            mass -= p;
        }
        acc / shots as f64
    }
}

/// Per-group outcome distributions of `obs` on the final mixture. Each
/// branch's value is multiplied by `(-1)^{popcount(record & sign_mask)}`
/// and terminal readout on measured qubits flips with `p_meas`.
pub(crate) fn group_distributions<R: Register>(
    branches: &[Branch<R>],
    obs: &Observable,
    sign_mask: u64,
    p_meas: f64,
) -> Vec<GroupDist> {
    let n = obs.n_qubits();
    let s = FRAC_1_SQRT_2;
    let h: Mat2 = [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]];
    let sdg: Mat2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]];
    obs.groups()
        .into_iter()
        .map(|group| {
            let support: usize = group.terms.iter().map(|&t| obs.terms()[t].support()).fold(0, |a, b| a | b);
            let mut probs = Vec::new();
            let mut values = Vec::new();
            for br in branches {
                let mut reg = br.reg.clone();
                for (q, p) in group.basis.iter().enumerate() {
                    match p {
                        Pauli::X => reg.gate1(q, &h),
                        Pauli::Y => {
                            reg.gate1(q, &sdg);
                            reg.gate1(q, &h);
                        }
                        _ => {}
                    }
                }
                let mut dist = reg.probabilities();
                if p_meas > 0.0 {
                    for q in (0..n).filter(|q| support >> q & 1 == 1) {
                        let bit = 1usize << q;
                        for x in 0..dist.len() {
                            if x & bit == 0 {
                                let (a, b) = (dist[x], dist[x | bit]);
                                dist[x] = (1.0 - p_meas) * a + p_meas * b;
                                dist[x | bit] = (1.0 - p_meas) * b + p_meas * a;
                            }
                        }
                    }
                }
                let sign = if (br.record & sign_mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                for (x, &p) in dist.iter().enumerate() {
                    if p <= 0.0 {
                        continue;
                    }
                    let v: f64 = group
                        .terms
                        .iter()
                        .map(|&t| {
                            let term = &obs.terms()[t];
                            let parity = (x & term.support()).count_ones() % 2;
                            term.coeff * if parity == 1 { -1.0 } else { 1.0 }
                        })
                        .sum();
                    probs.push(p);
                    values.push(sign * v);
                }
            }
            GroupDist { probs, values }
        })
        .collect()
}

/// `Σ_branches sign · Tr(O ρ_branch)`, evaluated directly from the Pauli
/// strings without basis rotation. Noiseless readout only. Kept as an
/// oracle for the measured path.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn direct_expectation<R: Register>(branches: &[Branch<R>], obs: &Observable, sign_mask: u64) -> C {
    let mut total = C::new(0.0, 0.0);
    for br in branches {
        let sign = if (br.record & sign_mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        for t in obs.terms() {
            let (x, z, ny) = t.masks();
            total += br.reg.pauli(x, z, ny) * (sign * t.coeff);
        }
    }
    total
}
