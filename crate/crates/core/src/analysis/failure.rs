//! Noisy TFIM sweeps: where QPD beats the uncut circuit and where it does
//! not.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{build_tfim, tfim_hamiltonian, Circuit, TfimSpec};
use crate::error::{Error, Result};
use crate::interaction::InteractionGraph;
use crate::router::{ecr_count, CouplingMap};
use crate::select::SelectParams;
use crate::sim::{
    exact_expectation, qpd_estimate_at, sample_expectation, Backend, NoiseModel, Observable, Shots, Strategy,
};
use crate::treewidth::{min_fill_trace, shortlist, stage1_scores};
use crate::rng;

#[derive(Debug, Clone)]
pub struct FailureSettings {
    pub ns: Vec<usize>,
    pub trotter_steps: Vec<usize>,
    pub budgets: Vec<u64>,
    pub strategies: Vec<Strategy>,
    pub reps: usize,
    pub noise: NoiseModel,
    pub coupling: Arc<CouplingMap>,
    pub routing_seed: u64,
    pub select: SelectParams,
    pub seed: u64,
}

impl FailureSettings {
    /// n ∈ {4, 6}, T ∈ {1..4}, M ∈ {1K, 10K, 100K}, both strategies, R = 5,
    /// p_ecr = 0.005, p_meas = 0.01.
    pub fn desk(coupling: Arc<CouplingMap>) -> Self {
        FailureSettings {
            ns: vec![4, 6],
            trotter_steps: vec![1, 2, 3, 4],
            budgets: vec![1_000, 10_000, 100_000],
            strategies: vec![Strategy::Shared, Strategy::PerSubcircuit],
            reps: 5,
            noise: NoiseModel {
                p_ecr: 0.005,
                p_meas: 0.01,
            },
            coupling,
            routing_seed: 42,
            select: SelectParams::default(),
            seed: 0,
        }
    }
}

/// A TFIM chain with its cut chosen for the sweep.
#[derive(Debug, Clone)]
pub struct Testbed {
    pub spec: TfimSpec,
    pub circuit: Circuit,
    pub hamiltonian: Observable,
    pub h_ideal: f64,
    pub cut_position: usize,
    pub delta_ecr: f64,
}

/// Builds the chain and picks, among the stage-1 shortlist, the candidate
/// whose first occurrence saves the most routed native gates.
pub fn testbed(n: usize, t: usize, s: &FailureSettings) -> Result<Testbed> {
    let spec = TfimSpec::chain(n, t);
    let circuit = build_tfim(&spec)?;
    let hamiltonian = tfim_hamiltonian(&spec)?;
    let h_ideal = exact_expectation(&circuit, &hamiltonian, &Backend::ideal())?;
    let ig = InteractionGraph::extract(&circuit);
    let trace = min_fill_trace(ig.base())?;
    let scores = stage1_scores(&ig, &trace, s.select.alpha, s.select.beta);
    let seeds = [s.routing_seed];
    let base = ecr_count(&circuit, &s.coupling, &seeds)?;
    let mut best: Option<(f64, usize)> = None;
    for e in shortlist(&scores, &ig, s.select.k)? {
        let pos = ig.first_occurrence(e).expect("shortlisted edges occur");
        let d = base - ecr_count(&circuit.without_gate(pos)?, &s.coupling, &seeds)?;
        if best.map_or(true, |(bd, _)| d > bd) {
            best = Some((d, pos));
        }
    }
    let (delta_ecr, cut_position) = best.expect("shortlist is nonempty");
    Ok(Testbed {
        spec,
        circuit,
        hamiltonian,
        h_ideal,
        cut_position,
        delta_ecr,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinCell {
    pub n: usize,
    pub trotter_steps: usize,
    pub budget: u64,
    pub strategy: Strategy,
    pub h_ideal: f64,
    pub delta_ecr: f64,
    pub reps: usize,
    pub wins: usize,
    pub win_rate: f64,
    pub mean_err_base: f64,
    pub mean_err_qpd: f64,
}

/// One repetition: absolute errors of the uncut and the cut estimate.
pub fn trial(tb: &Testbed, budget: u64, strategy: Strategy, backend: &Backend, seed: u64) -> Result<(f64, f64)> {
    let base = sample_expectation(&tb.circuit, &tb.hamiltonian, budget, backend, rng::derive(seed, 0))?;
    let qpd = qpd_estimate_at(
        &tb.circuit,
        tb.cut_position,
        &tb.hamiltonian,
        Shots::Finite(budget),
        strategy,
        backend,
        rng::derive(seed, 1),
    )?;
    Ok(((base.value - tb.h_ideal).abs(), (qpd.value - tb.h_ideal).abs()))
}

/// Win-rate grid; cells ordered by n, T, budget, strategy.
pub fn failure_sweep(s: &FailureSettings) -> Result<Vec<WinCell>> {
    if s.reps == 0 {
        return Err(Error::param("reps", "must be >= 1"));
    }
    s.noise.validate()?;
    let backend = Backend::noisy(s.noise).routed(s.coupling.clone(), s.routing_seed);
    let mut cells = Vec::new();
    for &n in &s.ns {
        for &t in &s.trotter_steps {
            let tb = testbed(n, t, s)?;
            for &budget in &s.budgets {
                for &strategy in &s.strategies {
                    cells.push((tb.clone(), budget, strategy));
                }
            }
        }
    }
    cells
        .par_iter()
        .enumerate()
        .map(|(i, (tb, budget, strategy))| {
            let errs: Vec<(f64, f64)> = (0..s.reps)
                .map(|r| trial(tb, *budget, *strategy, &backend, rng::derive(s.seed, (i * 1_000_003 + r) as u64)))
                .collect::<Result<_>>()?;
            let wins = errs.iter().filter(|(b, q)| q < b).count();
            let k = s.reps as f64;
            Ok(WinCell {
                n: tb.spec.n,
                trotter_steps: tb.spec.trotter_steps,
                budget: *budget,
                strategy: *strategy,
                h_ideal: tb.h_ideal,
                delta_ecr: tb.delta_ecr,
                reps: s.reps,
                wins,
                win_rate: wins as f64 / k,
                mean_err_base: errs.iter().map(|e| e.0).sum::<f64>() / k,
                mean_err_qpd: errs.iter().map(|e| e.1).sum::<f64>() / k,
            })
        })
        .collect()
}

/// Pooled win rate over the cells selected by `keep`.
pub fn pooled_win_rate(cells: &[WinCell], keep: impl Fn(&WinCell) -> bool) -> Option<f64> {
    let (w, r) = cells
        .iter()
        .filter(|c| keep(c))
        .fold((0, 0), |(w, r), c| (w + c.wins, r + c.reps));
    (r > 0).then(|| w as f64 / r as f64)
}

pub fn write_winrate_csv<W: Write>(cells: &[WinCell], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n", "trotter_steps", "budget", "strategy", "h_ideal", "delta_ecr", "reps", "wins", "win_rate",
        "mean_err_base", "mean_err_qpd",
    ])?;
    for c in cells {
        w.serialize((
            c.n,
            c.trotter_steps,
            c.budget,
            c.strategy,
            c.h_ideal,
            c.delta_ecr,
            c.reps,
            c.wins,
            c.win_rate,
            c.mean_err_base,
            c.mean_err_qpd,
        ))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasPoint {
    pub p_meas: f64,
    pub err_base: f64,
    pub err_qpd: f64,
    /// `err_base - err_qpd`; positive means cutting helps.
    pub advantage: f64,
}

/// Exact-expectation errors of the uncut and cut circuits as the
/// mid-circuit measurement error rate varies at fixed `p_ecr`. No routing,
/// so the cut saves exactly the native cost of the removed gate.
pub fn p_meas_sweep(
    c: &Circuit,
    position: usize,
    obs: &Observable,
    p_ecr: f64,
    p_meas: &[f64],
) -> Result<Vec<MeasPoint>> {
    let ideal = exact_expectation(c, obs, &Backend::ideal())?;
    p_meas
        .iter()
        .map(|&pm| {
            let b = Backend::noisy(NoiseModel::new(p_ecr, pm)?);
            let err_base = (exact_expectation(c, obs, &b)? - ideal).abs();
            let q = qpd_estimate_at(c, position, obs, Shots::Exact, Strategy::Shared, &b, 0)?;
            let err_qpd = (q.value - ideal).abs();
            Ok(MeasPoint {
                p_meas: pm,
                err_base,
                err_qpd,
                advantage: err_base - err_qpd,
            })
        })
        .collect()
}

/// `p_meas` where the advantage first turns from positive to non-positive,
/// by linear interpolation between grid points.
pub fn crossover(points: &[MeasPoint]) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let (a, b) = (w[0], w[1]);
        (a.advantage > 0.0 && b.advantage <= 0.0)
            .then(|| a.p_meas + (b.p_meas - a.p_meas) * a.advantage / (a.advantage - b.advantage))
    })
}
